// Max-flow/min-cut engine, cut-function oracles with a fast
// "minimize F - z" specialization, and instance generators.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>

#include "subq/core.hpp"
#include "subq/zoo.hpp"

namespace subq {

struct Arc {
  int from = 0;
  int to = 0;
  double capacity = 0;
};

struct WeightedDigraph {
  int n = 0;
  std::vector<Arc> arcs;
  bool symmetric = false;  // set by generators that emit both directions

  void validate() const;
  // adds (u,v,c) and (v,u,c)
  void add_undirected(int u, int v, double c);
  void add_arc(int u, int v, double c) { arcs.push_back({u, v, c}); }
};

struct StNetwork {
  WeightedDigraph base;  // vertices 0..n-1 plus source/sink among them
  int source = 0;
  int sink = 0;

  void validate() const;
};

struct MaxFlowResult {
  double flow_value = 0;
  Subset min_cut;  // source-side vertices (includes the source)
};

// Shortest-augmenting-path max flow; the returned cut capacity equals the
// flow value within 1e-9 and the flow is checked feasible post hoc.
MaxFlowResult max_flow(const StNetwork& net);

// F(A) = d(A, V\A); O(m) per evaluation, O(m + p log p) per greedy sweep.
SetFunctionOracle cut_function(const WeightedDigraph& g);

// argmin / min of A -> cut(A) - z(A) via one max-flow solve.  Returns the
// minimal minimizer; `maximal` selects the maximal one instead.
std::pair<Subset, double> min_cut_minus_modular(const WeightedDigraph& g,
                                                const std::vector<double>& z,
                                                bool maximal = false);

// --- generators -----------------------------------------------------------

WeightedDigraph chain_graph(int p, double weight = 1.0);
WeightedDigraph grid2d(int rows, int cols, double weight = 1.0);

// Layered look-alike of the DIMACS GENRMF generator: b frames of a x a
// grid vertices, in-frame arcs of capacity c2 * a * a, one random arc per
// vertex to the next frame with capacity uniform in [c1, c2].  Returns the
// cut graph over the p = a*a*b inner vertices plus the modular term coming
// from the source/sink attachments, so that SFM on cut - z solves the
// original min-cut problem.
struct CutInstance {
  WeightedDigraph graph;
  std::vector<double> z;  // minimize cut(A) - z(A)
};
CutInstance genrmf_like(int a, int b, double c1, double c2, std::uint64_t seed);

// Two-moons points with a Gaussian RBF kernel; returns the kernel matrix and
// the label-prior modular term of the clustering instance (+/-`hard_weight`
// on the `labeled` first points of each moon, 0 elsewhere).
struct TwoMoonsInstance {
  std::vector<double> kernel;  // row-major n x n
  int n = 0;
  std::vector<double> z;      // modular prior; minimize MI(A) - z(A)
  std::vector<int> label_of;  // ground-truth moon of each point (0/1)
};
TwoMoonsInstance two_moons_logdet(int n, double noise, double bandwidth,
                                  int labeled, std::uint64_t seed);

// Random cover instance: `groups` groups of random size in [2, p/2] with
// uniform weights in (0, 1].
CoverSpec random_cover(int p, int groups, std::uint64_t seed);

// Edge-list file: first line "n m", then one "u v cap" per arc (1-based).
WeightedDigraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const WeightedDigraph& g);

}  // namespace subq
