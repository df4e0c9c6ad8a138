// Concrete submodular functions and the submodularity-preserving
// combinators, all exposed as SetFunctionOracle values.
#pragma once

#include <optional>

#include "subq/core.hpp"

namespace subq {

// Concave g: R+ -> R, non-decreasing, g(0) = 0.
class ConcaveSpec {
 public:
  enum class Kind { Sqrt, Log1p, MinWithOne, PiecewiseLinear, Identity };

  static ConcaveSpec sqrt();
  static ConcaveSpec log1p();
  static ConcaveSpec min_with_one();
  static ConcaveSpec identity();
  // knots (x_i, y_i) with x_0 = 0, y_0 = 0; linear between knots, last slope
  // extended to +inf.  Slopes must be non-negative and non-increasing.
  static ConcaveSpec piecewise_linear(std::vector<std::pair<double, double>> knots);

  double operator()(double x) const;
  Kind kind() const { return kind_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  Kind kind_ = Kind::Identity;
  std::vector<std::pair<double, double>> knots_;
  void check_concave_grid(double xmax) const;
};

// F(A) = g(s(A)) for non-negative weights s (Prop. 6.1).
SetFunctionOracle cardinality_based(const std::vector<double>& s_weights,
                                    const ConcaveSpec& g);

struct CoverSpec {
  struct Group {
    Subset members;
    double weight = 1.0;
  };
  int p = 0;
  std::vector<Group> groups;
  void validate() const;
};

// F(A) = sum_G D(G) 1_{G cap A != empty}  (Eq. 6.1 form).
SetFunctionOracle set_cover(const CoverSpec& spec);

// Symmetric PSD matrix with a diagonal jitter; jitter < 0 means the default
// 1e-9 tr(Q)/p.
struct PsdMatrix {
  std::vector<double> q;  // row-major p x p, symmetric
  int p = 0;
  double jitter = -1.0;

  double effective_jitter() const;
  double at(int i, int j) const { return q[std::size_t(i) * p + j]; }
};

// F(A) = log det (Q + jitter I)_{AA}.
SetFunctionOracle log_det(const PsdMatrix& Q);
// G(A) = F(A) + F(V \ A) - F(V): Gaussian mutual information, symmetric >= 0.
SetFunctionOracle gaussian_mutual_information(const PsdMatrix& Q);

// Graphic matroid rank over the edge set: rank(A) = n - #components(V, A).
SetFunctionOracle graphic_matroid_rank(
    int n_vertices, const std::vector<std::pair<int, int>>& edges);

// --- Combinators --------------------------------------------------------
// Each returns a normalized oracle on its own ground set.  Operations that
// need an inner minimization (partial_min, convolve_modular, monotonize)
// brute-force it when the inner set has <= 16 elements and otherwise require
// a caller-supplied exact solver for min F(A) + addend(A).

using InnerMinFn =
    std::function<std::pair<Subset, double>(const SetFunctionOracle&,
                                            const std::vector<double>&)>;

// Exact brute force inner solver, usable whenever p <= 22.
InnerMinFn brute_force_inner_min();

SetFunctionOracle restrict_to(const SetFunctionOracle& F, const Subset& a);
SetFunctionOracle contract_on(const SetFunctionOracle& F, const Subset& a);
SetFunctionOracle sum(const SetFunctionOracle& F, const SetFunctionOracle& G);
SetFunctionOracle scale(const SetFunctionOracle& F, double lambda);
SetFunctionOracle add_modular(const SetFunctionOracle& F,
                              const std::vector<double>& z);
SetFunctionOracle symmetrize(const SetFunctionOracle& F);

// G(A) = min_{B subseteq A} F(B) + z(A \ B)  (Prop. B.4).
SetFunctionOracle convolve_modular(const SetFunctionOracle& F,
                                   const std::vector<double>& z,
                                   InnerMinFn inner = {});
// G(A) = min_{B supseteq A} F(B) - min_B F(B)  (Prop. B.5).
SetFunctionOracle monotonize(const SetFunctionOracle& F, InnerMinFn inner = {});
// phi(F(A)) for non-decreasing F (Prop. B.6).  Monotonicity of F is checked
// by brute force for p <= 12; for larger p set trust_monotone.
SetFunctionOracle concave_compose(const SetFunctionOracle& F,
                                  const ConcaveSpec& phi,
                                  bool trust_monotone = false);
// F(A) = min_{B subseteq W} G(A cup B) - min_{B subseteq W} G(B), where G
// lives on V cup W and `w_set` identifies W (Prop. B.3).
SetFunctionOracle partial_min(const SetFunctionOracle& G, const Subset& w_set,
                              InnerMinFn inner = {});

// true iff F(A) <= F(B) for all A subseteq B; exhaustive, p <= 20.
bool is_nondecreasing_bruteforce(const SetFunctionOracle& F);

}  // namespace subq
