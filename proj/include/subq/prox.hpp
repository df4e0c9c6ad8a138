// Separable optimization on submodular polyhedra: quadratic and generic
// proximal problems, divide-and-conquer, PAVA, transfers to the other
// polyhedra, and the Omega_inf / Omega_2 norm machinery.
#pragma once

#include "subq/core.hpp"
#include "subq/sfm.hpp"

namespace subq {

// Exact solver for min_A F(A) + addend(A); ties resolved toward the maximal
// minimizer where the backend certifies one.
using SfmHandle = std::function<std::pair<Subset, double>(
    const SetFunctionOracle&, const std::vector<double>&)>;

SfmHandle sfm_handle_brute();             // p <= 22, maximal minimizer
SfmHandle sfm_handle_mnp(double tol = 1e-11);
SfmHandle sfm_handle_auto(double mnp_tol = 1e-11);  // fast_min / brute / mnp

// Per-coordinate strictly convex terms psi_k with derivative and conjugate
// access.  The quadratic specialization psi_k(w) = tau_k/2 (w - z_k)^2 is
// built in.
class SeparableProblem {
 public:
  static SeparableProblem quadratic(std::vector<double> z,
                                    std::vector<double> weights = {});
  // scalar = f(k, x); all four callables must be consistent
  using Scalar = std::function<double(int, double)>;
  static SeparableProblem custom(int p, Scalar psi, Scalar psi_prime,
                                 Scalar psi_conj, Scalar psi_conj_prime);

  int p() const { return p_; }
  bool is_quadratic() const { return quadratic_; }
  const std::vector<double>& z() const { return z_; }
  const std::vector<double>& tau() const { return tau_; }

  double psi(int k, double w) const;
  double psi_prime(int k, double w) const;
  double psi_conj(int k, double s) const;
  double psi_conj_prime(int k, double s) const;

  SeparableProblem slice(const std::vector<int>& idx) const;

 private:
  int p_ = 0;
  bool quadratic_ = false;
  std::vector<double> z_, tau_;
  Scalar psi_, dpsi_, conj_, dconj_;
};

struct ProxResult {
  std::vector<double> w;
  std::vector<double> s;  // dual, in B(F)
  double gap = 0;
  int recursion_depth = 0;  // 0 for non-recursive solvers
  SolveStatus status = SolveStatus::Converged;
};

// Duality gap of Eq-(8.3) form: f(w) - w's + sum_k [psi(w_k) + psi*(-s_k)
// + w_k s_k].
double prox_gap(const SetFunctionOracle& F, const SeparableProblem& prob,
                const std::vector<double>& w, const std::vector<double>& s);
// Same gap as the exact piecewise integral of the per-level SFM gaps
// (quadratic psi only).
double prox_gap_integral_quadratic(const SetFunctionOracle& F,
                                   const SeparableProblem& prob,
                                   const std::vector<double>& w,
                                   const std::vector<double>& s);

// min_w 1/2 |w - z|^2 + f(w) through the minimum-norm point of B(F - z).
ProxResult prox_quadratic_mnp(const SetFunctionOracle& F,
                              const std::vector<double>& z,
                              double tol = 1e-10);

// Exact recursive solver; needs an exact SFM handle for min F(A) - t(A).
ProxResult divide_and_conquer(const SetFunctionOracle& F,
                              const SeparableProblem& prob,
                              SfmHandle sfm = {});

// Minimal/maximal minimizers of A -> F(A) + alpha |A| from the solution of
// min_w 1/2 |w|^2 + f(w): ({w > alpha}, {w >= alpha}).
std::pair<Subset, Subset> threshold_minimizers(const ProxResult& prox,
                                               double alpha);

// Isotonic regression with the chain constraint w_1 >= w_2 >= ... >= w_p.
std::vector<double> pava(const std::vector<double>& z,
                         const std::vector<double>& weights = {});

struct IsotonicImprovement {
  std::vector<double> w;
  double improved_gap = 0;
  double naive_gap = 0;  // gap of the candidate w = -s
};
// Primal correction for min_w 1/2 |w|^2 + f(w) from a dual candidate
// s in B(F): isotonic regression along the increasing order of s.
IsotonicImprovement improve_primal_isotonic(const SetFunctionOracle& F,
                                            const std::vector<double>& s);

// Transfers of an optimal B(F) pair to the other polyhedra.
ProxResult transfer_to_P(const SetFunctionOracle& F, const ProxResult& prox_b,
                         const SeparableProblem& prob);
ProxResult transfer_to_Pplus(const SetFunctionOracle& F,
                             const ProxResult& prox_b,
                             const SeparableProblem& prob,
                             bool trust_monotone = false);
using ProxSolver = std::function<ProxResult(const SetFunctionOracle&,
                                            const SeparableProblem&)>;
ProxResult transfer_to_absP(const SetFunctionOracle& F,
                            const SeparableProblem& prob,
                            const ProxSolver& solve_on_base = {},
                            bool trust_monotone = false);

// Largest alpha >= 0 with s_base + alpha t in P(F), by Newton steps on the
// piecewise-linear g(alpha) = min_A F(A) - s_base(A) - alpha t(A).
double dual_norm_newton(const SetFunctionOracle& F,
                        const std::vector<double>& s_base,
                        const std::vector<double>& t, SfmHandle sfm = {});
// Omega_inf^*(s) = max_A |s|(A) / F(A); +inf when unbounded.
double omega_inf_dual(const SetFunctionOracle& F, const std::vector<double>& s,
                      SfmHandle sfm = {});

struct Omega2Result {
  double norm = 0;
  std::vector<double> prox;  // argmin 1/2 |w - z|^2 + Omega_2(w)
};
// q = 2 relaxation for non-decreasing F with F({k}) > 0.
Omega2Result omega_q_norm_and_prox(const SetFunctionOracle& F,
                                   const std::vector<double>& z, int q = 2,
                                   SfmHandle sfm = {},
                                   bool trust_monotone = false);

// Euclidean projection onto { w : w_i >= w_j for all (i,j) in constraints }.
std::vector<double> isotonic_general(
    const std::vector<double>& z,
    const std::vector<std::pair<int, int>>& constraints, SfmHandle sfm = {});

}  // namespace subq
