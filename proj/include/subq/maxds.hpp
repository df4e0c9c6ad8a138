// Submodular maximization heuristics with guarantee checks, and
// difference-of-submodular minimization.
#pragma once

#include "subq/prox.hpp"

namespace subq {

struct MaxResult {
  Subset chosen;
  double value = 0;
  std::vector<std::pair<int, double>> trace;  // (element added, marginal gain)
  SolveStatus status = SolveStatus::Converged;
};

// Greedy maximization under |A| <= k for non-decreasing F.  Lazy evaluation
// by default; `lazy = false` forces the eager sweep (both must agree
// bit-for-bit).  Stops early once the best marginal gain is <= 0.
MaxResult greedy_max_cardinality(const SetFunctionOracle& F, int k,
                                 bool lazy = true, bool trust_monotone = false);

// Single-element add/remove local search; at termination the returned set
// dominates all its subsets and supersets (Prop.-style local maximality).
MaxResult local_search_max(const SetFunctionOracle& F, const Subset& start,
                           int max_moves = 1 << 20);

struct DsRound {
  Subset a;
  double objective;  // F(A) - G(A)
};

struct DsResult {
  Subset minimizer;
  double value = 0;
  std::vector<DsRound> trace;
  SolveStatus status = SolveStatus::Converged;
};

// Iterative difference-of-submodular minimization of F - G: modular lower
// bound of G tight at A (greedy with A-elements first), then one SFM solve.
// `ordering_rule` 0 puts A first (default); 1 puts A last (alternative
// ordering, exposed as an option).
DsResult ds_minimize(const SetFunctionOracle& F, const SetFunctionOracle& G,
                     const Subset& start, SfmHandle sfm = {},
                     int max_rounds = 100, int ordering_rule = 0);

}  // namespace subq
