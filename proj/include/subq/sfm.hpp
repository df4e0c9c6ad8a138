// Submodular function minimization: exact and approximate solvers with
// primal/dual certificates, restriction preprocessing and level-set
// extraction.
#pragma once

#include <iosfwd>
#include <limits>

#include "subq/core.hpp"

namespace subq {

struct TraceRow {
  int iter = 0;
  std::uint64_t oracle_calls = 0;
  double wall_ms = 0;
  double primal_best = 0;
  double dual_best = 0;
  double gap = 0;
};

// Best-so-far trace: primal non-increasing, dual non-decreasing,
// gap = primal_best - dual_best.
struct SolveTrace {
  std::vector<TraceRow> rows;

  void record(int iter, std::uint64_t oracle_calls, double wall_ms,
              double primal, double dual);
  bool monotone() const;
  static const char* csv_header();  // "iter,oracle_calls,wall_ms,..."
  void write_csv(std::ostream& out, bool zero_wall = false) const;
};

enum class SolveStatus { Converged, BudgetExhausted, IterationCap, Numerical };

struct SfmResult {
  Subset minimizer;
  double min_value = 0;
  std::optional<BaseVector> dual;  // omitted by brute force / fast paths
  double gap = 0;                  // F(minimizer) - dual.s_-(V); 0 if exact
  SolveTrace trace;
  SolveStatus status = SolveStatus::Converged;
  // lattice extremes when the solver certifies them (MNP); else == minimizer
  Subset minimal_minimizer;
  Subset maximal_minimizer;
  std::string algorithm;
};

struct Budget {
  std::uint64_t max_oracle_calls = std::numeric_limits<std::uint64_t>::max();
  double max_wall_ms = std::numeric_limits<double>::infinity();
};

// Sandwich A_min <= argmin <= A_max plus the reduced problem, iterated to a
// fixpoint.  The block orderings make every A_min chain marginal <= 0 and
// every tail marginal >= 0, so certificates lift at no gap cost.
struct Reduction {
  Subset a_min;
  Subset a_max;
  std::vector<int> mid;          // A_max \ A_min, ascending
  SetFunctionOracle reduced;     // valid iff !mid.empty()
  std::vector<int> fixed_order;  // A_min by fixing round
  std::vector<int> tail_order;   // V \ A_max, latest round first
  double f_amin = 0;             // F(A_min)
  double fixed_neg_sum = 0;      // sum of negative chain marginals on A_min
  double tail_neg_sum = 0;

  bool solved() const { return mid.empty(); }
  // lift a reduced subset / dual value / base to the original ground set
  Subset lift_set(const Subset& b) const;
  double lift_dual_value(double reduced_neg_part) const;
  BaseVector lift_base(const SetFunctionOracle& F, const BaseVector& b) const;
};

Reduction restrict_search(const SetFunctionOracle& F);

// Result for a problem fully solved by preprocessing, with the certificate
// read off the fixed+tail ordering chain.
SfmResult solved_by_reduction(const SetFunctionOracle& F, const Reduction& red,
                              const char* algo);

// Exact reference: smallest-mask minimizer, p <= 22.
SfmResult brute_force(const SetFunctionOracle& F);
// Maximal minimizer by brute force (union of the minimizer lattice), p <= 22.
std::pair<Subset, double> brute_force_min_maximal(const SetFunctionOracle& F,
                                                  const std::vector<double>& addend);

enum class StepRule { FixedSqrt, Polyak };
SfmResult subgradient(const SetFunctionOracle& F, int steps,
                      StepRule rule = StepRule::FixedSqrt, Budget budget = {});

enum class CgRule { LineSearch, FixedTwoOverT };
SfmResult conditional_gradient(const SetFunctionOracle& F, int steps,
                               CgRule rule = CgRule::LineSearch,
                               Budget budget = {});

struct MnpOptions {
  double tol = 1e-10;       // on the quadratic gap |s|^2 - min_B s's'
  int max_major_cycles = 0;  // 0: default 50 + 20 p
  Budget budget;
};
SfmResult min_norm_point(const SetFunctionOracle& F, MnpOptions opt = {});

struct EllipsoidDiag {
  std::vector<double> half_logdet;  // log volume (up to a constant) per iter
};
SfmResult ellipsoid(const SetFunctionOracle& F, int steps, Budget budget = {},
                    EllipsoidDiag* diag = nullptr);

enum class SfmAlgo {
  Auto,
  BruteForce,
  Subgradient,
  SubgradientPolyak,
  CondGrad,
  CondGradFixed,
  MinNormPoint,
  Ellipsoid,
};

const char* to_string(SfmAlgo a);
std::optional<SfmAlgo> sfm_algo_from_string(const std::string& name);

struct MinimizeOptions {
  SfmAlgo algo = SfmAlgo::Auto;
  int steps = 2000;
  double mnp_tol = 1e-10;
  Budget budget;
};

// Facade: applies restrict_search, dispatches, lifts certificates back.
SfmResult minimize(const SetFunctionOracle& F, MinimizeOptions opt = {});

// Hyper-rectangle widths alpha_k = F({k}) + F(V\{k}) - F(V) (>= 0).
std::vector<double> base_widths(const SetFunctionOracle& F);

}  // namespace subq
