// Wolfe's minimum-norm-point algorithm over a base polyhedron, driven by the
// greedy algorithm as its linear oracle.  Shared by the SFM and prox solvers.
#pragma once

#include "subq/sfm.hpp"

namespace subq {

struct WolfeResult {
  std::vector<double> y;  // the (near-)minimum-norm base
  BaseVector base;        // y with its convex-combination certificate
  double quad_gap = 0;    // |y|^2 - min_{s in B(F)} y's at exit
  int major_cycles = 0;
  SolveStatus status = SolveStatus::Converged;
};

struct WolfeOptions {
  double tol = 1e-10;  // relative: stop when quad_gap <= tol * (1 + |y|^2)
  int max_major_cycles = 0;  // 0: 50 + 20 p
  Budget budget;
};

// Hook runs once per major cycle with the current iterate and the greedy
// result at -y (whose prefixes are the sub-level sets of y).
using WolfeHook =
    std::function<void(int major, const std::vector<double>& y,
                       const GreedyResult& gr)>;

WolfeResult wolfe_min_norm(const SetFunctionOracle& G, WolfeOptions opt = {},
                           const WolfeHook& hook = {});

}  // namespace subq
