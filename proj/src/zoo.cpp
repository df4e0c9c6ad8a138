#include "subq/zoo.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace subq {

ConcaveSpec ConcaveSpec::sqrt() {
  ConcaveSpec g;
  g.kind_ = Kind::Sqrt;
  return g;
}
ConcaveSpec ConcaveSpec::log1p() {
  ConcaveSpec g;
  g.kind_ = Kind::Log1p;
  return g;
}
ConcaveSpec ConcaveSpec::min_with_one() {
  ConcaveSpec g;
  g.kind_ = Kind::MinWithOne;
  return g;
}
ConcaveSpec ConcaveSpec::identity() {
  ConcaveSpec g;
  g.kind_ = Kind::Identity;
  return g;
}

ConcaveSpec ConcaveSpec::piecewise_linear(
    std::vector<std::pair<double, double>> knots) {
  ConcaveSpec g;
  g.kind_ = Kind::PiecewiseLinear;
  std::sort(knots.begin(), knots.end());
  if (knots.empty() || knots.front().first != 0.0 || knots.front().second != 0.0)
    throw std::invalid_argument("piecewise_linear: first knot must be (0,0)");
  double prev_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < knots.size(); ++i) {
    double dx = knots[i].first - knots[i - 1].first;
    double dy = knots[i].second - knots[i - 1].second;
    if (dx <= 0) throw std::invalid_argument("piecewise_linear: duplicate x");
    double slope = dy / dx;
    if (slope < -1e-12 || slope > prev_slope + 1e-12)
      throw std::invalid_argument(
          "piecewise_linear: slopes must be non-negative and non-increasing");
    prev_slope = slope;
  }
  g.knots_ = std::move(knots);
  return g;
}

double ConcaveSpec::operator()(double x) const {
  switch (kind_) {
    case Kind::Sqrt:
      return std::sqrt(std::max(0.0, x));
    case Kind::Log1p:
      return std::log1p(std::max(0.0, x));
    case Kind::MinWithOne:
      return std::min(x, 1.0);
    case Kind::Identity:
      return x;
    case Kind::PiecewiseLinear: {
      // binary search for the segment holding x
      auto it = std::upper_bound(
          knots_.begin(), knots_.end(), std::make_pair(x, 0.0),
          [](const auto& a, const auto& b) { return a.first < b.first; });
      if (it == knots_.begin()) return 0.0;
      if (it == knots_.end()) {
        const auto& [x1, y1] = knots_.back();
        double slope = 0.0;
        if (knots_.size() >= 2) {
          const auto& [x0, y0] = knots_[knots_.size() - 2];
          slope = (y1 - y0) / (x1 - x0);
        }
        return y1 + slope * (x - x1);
      }
      const auto& [x1, y1] = *it;
      const auto& [x0, y0] = *(it - 1);
      double t = (x - x0) / (x1 - x0);
      return y0 + t * (y1 - y0);
    }
  }
  return 0.0;
}

SetFunctionOracle cardinality_based(const std::vector<double>& s_weights,
                                    const ConcaveSpec& g) {
  for (double w : s_weights)
    if (w < 0 || !std::isfinite(w))
      throw std::invalid_argument("cardinality_based: weights must be >= 0");
  const int p = int(s_weights.size());
  std::vector<double> weights = s_weights;
  SetFunctionOracle F(GroundSet(p), [weights, g](const Subset& a) {
    return g(modular_sum(weights, a));
  });
  F.set_chain_evaluator([weights, g](const std::vector<int>& order) {
    std::vector<double> out(order.size());
    double acc = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      acc += weights[order[k]];
      out[k] = g(acc);
    }
    return out;
  });
  return F;
}

void CoverSpec::validate() const {
  if (p < 1) throw std::invalid_argument("cover: p >= 1 required");
  for (const auto& grp : groups) {
    if (grp.weight < 0) throw std::invalid_argument("cover: negative weight");
    if (grp.members.empty()) throw std::invalid_argument("cover: empty group");
    if (grp.members.universe() != p)
      throw std::invalid_argument("cover: group universe mismatch");
  }
}

SetFunctionOracle set_cover(const CoverSpec& spec) {
  spec.validate();
  CoverSpec cp = spec;
  SetFunctionOracle F(GroundSet(cp.p), [cp](const Subset& a) {
    double v = 0;
    for (const auto& grp : cp.groups)
      if (!grp.members.intersected(a).empty()) v += grp.weight;
    return v;
  });
  // incremental sweep: each element activates the groups containing it
  std::vector<std::vector<int>> by_elem(cp.p);
  for (int gi = 0; gi < int(cp.groups.size()); ++gi)
    cp.groups[gi].members.for_each([&](int k) { by_elem[k].push_back(gi); });
  F.set_chain_evaluator([cp, by_elem](const std::vector<int>& order) {
    std::vector<char> hit(cp.groups.size(), 0);
    std::vector<double> out(order.size());
    double acc = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      for (int gi : by_elem[order[k]])
        if (!hit[gi]) {
          hit[gi] = 1;
          acc += cp.groups[gi].weight;
        }
      out[k] = acc;
    }
    return out;
  });
  return F;
}

double PsdMatrix::effective_jitter() const {
  if (jitter >= 0) return jitter;
  double tr = 0;
  for (int i = 0; i < p; ++i) tr += at(i, i);
  return 1e-9 * tr / p;
}

namespace {

Eigen::MatrixXd jittered(const PsdMatrix& Q) {
  Eigen::MatrixXd M(Q.p, Q.p);
  for (int i = 0; i < Q.p; ++i)
    for (int j = 0; j < Q.p; ++j) M(i, j) = Q.at(i, j);
  M.diagonal().array() += Q.effective_jitter();
  return M;
}

double logdet_submatrix(const Eigen::MatrixXd& M, const Subset& a) {
  const auto idx = a.elements();
  const int k = int(idx.size());
  if (k == 0) return 0.0;
  Eigen::MatrixXd sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub(i, j) = M(idx[i], idx[j]);
  Eigen::LLT<Eigen::MatrixXd> llt(sub);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("log_det: Cholesky failed on a " +
                             std::to_string(k) + "x" + std::to_string(k) +
                             " principal submatrix");
  double ld = 0;
  for (int i = 0; i < k; ++i) ld += std::log(llt.matrixL()(i, i));
  return 2.0 * ld;
}

// log det of every leading principal submatrix along `order`, by growing a
// Cholesky factor one row at a time (O(p^3) total for the whole chain).
std::vector<double> logdet_chain(const Eigen::MatrixXd& M,
                                 const std::vector<int>& order) {
  const int p = int(order.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(p, p);
  std::vector<double> out(p);
  double acc = 0;
  for (int k = 0; k < p; ++k) {
    // new row: solve L(0..k-1) x = M(order_k, order_0..k-1)
    for (int j = 0; j < k; ++j) {
      double s = M(order[k], order[j]);
      for (int i = 0; i < j; ++i) s -= L(k, i) * L(j, i);
      L(k, j) = s / L(j, j);
    }
    double d = M(order[k], order[k]);
    for (int i = 0; i < k; ++i) d -= L(k, i) * L(k, i);
    if (d <= 0)
      throw std::runtime_error("log_det: Cholesky failed on a " +
                               std::to_string(k + 1) + "x" +
                               std::to_string(k + 1) + " principal submatrix");
    L(k, k) = std::sqrt(d);
    acc += std::log(d);
    out[k] = acc;
  }
  return out;
}

}  // namespace

SetFunctionOracle log_det(const PsdMatrix& Q) {
  auto M = std::make_shared<Eigen::MatrixXd>(jittered(Q));
  {
    Eigen::LLT<Eigen::MatrixXd> llt(*M);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("log_det: Q + jitter*I is not positive definite");
  }
  SetFunctionOracle F(GroundSet(Q.p), [M](const Subset& a) {
    return logdet_submatrix(*M, a);
  });
  F.set_chain_evaluator(
      [M](const std::vector<int>& order) { return logdet_chain(*M, order); });
  return F;
}

SetFunctionOracle gaussian_mutual_information(const PsdMatrix& Q) {
  auto M = std::make_shared<Eigen::MatrixXd>(jittered(Q));
  const int p = Q.p;
  double full = logdet_submatrix(*M, Subset::full_set(p));
  SetFunctionOracle F(GroundSet(p), [M, full](const Subset& a) {
    return logdet_submatrix(*M, a) + logdet_submatrix(*M, a.complement()) - full;
  });
  // the complement of the k-prefix of seq is (V \ seq) followed by the
  // reversed tail of seq, so one forward and one backward chain suffice
  F.set_chain_evaluator([M, full, p](const std::vector<int>& seq) {
    const int m = int(seq.size());
    std::vector<double> fwd = logdet_chain(*M, seq);
    std::vector<char> used(p, 0);
    for (int k : seq) used[k] = 1;
    std::vector<int> rev;
    rev.reserve(p);
    for (int k = 0; k < p; ++k)
      if (!used[k]) rev.push_back(k);
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) rev.push_back(*it);
    std::vector<double> bwd = logdet_chain(*M, rev);
    std::vector<double> out(m);
    for (int k = 0; k < m; ++k) {
      double comp = (k + 1 == p) ? 0.0 : bwd[p - k - 2];
      out[k] = fwd[k] + comp - full;
    }
    return out;
  });
  return F;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // returns true if the edge merged two components
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

SetFunctionOracle graphic_matroid_rank(
    int n_vertices, const std::vector<std::pair<int, int>>& edges) {
  if (n_vertices < 1) throw std::invalid_argument("matroid: n >= 1 required");
  for (auto [u, v] : edges)
    if (u < 0 || v < 0 || u >= n_vertices || v >= n_vertices)
      throw std::invalid_argument("matroid: vertex index out of range");
  const int p = int(edges.size());
  auto es = edges;
  SetFunctionOracle F(GroundSet(p), [n_vertices, es](const Subset& a) {
    UnionFind uf(n_vertices);
    int rank = 0;
    a.for_each([&](int e) {
      if (uf.unite(es[e].first, es[e].second)) ++rank;
    });
    return double(rank);
  });
  F.set_chain_evaluator([n_vertices, es](const std::vector<int>& order) {
    UnionFind uf(n_vertices);
    std::vector<double> out(order.size());
    int rank = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (uf.unite(es[order[k]].first, es[order[k]].second)) ++rank;
      out[k] = rank;
    }
    return out;
  });
  return F;
}

// --- combinators ---------------------------------------------------------

InnerMinFn brute_force_inner_min() {
  return [](const SetFunctionOracle& F, const std::vector<double>& addend) {
    const int p = F.p();
    if (p > 22) throw std::invalid_argument("brute force inner min: p > 22");
    Subset best(p);
    double bestv = 0.0;  // empty set value
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << p); ++mask) {
      Subset a = Subset::from_mask(p, mask);
      double v = F.eval_nocache(a) + modular_sum(addend, a);
      if (v < bestv) {
        bestv = v;
        best = a;
      }
    }
    return std::make_pair(best, bestv);
  };
}

namespace {

std::pair<Subset, double> inner_minimize(const SetFunctionOracle& F,
                                         const std::vector<double>& addend,
                                         const InnerMinFn& inner) {
  if (F.p() <= 16) return brute_force_inner_min()(F, addend);
  if (!inner)
    throw std::invalid_argument(
        "combinator needs an inner SFM solver for ground sets above 16 "
        "elements");
  return inner(F, addend);
}

}  // namespace

SetFunctionOracle restrict_to(const SetFunctionOracle& F, const Subset& a) {
  auto elems = a.elements();
  if (elems.empty()) throw std::invalid_argument("restrict_to: empty set");
  const int fp = F.p();
  SetFunctionOracle R(GroundSet(int(elems.size())),
                      [F, elems, fp](const Subset& b) {
                        Subset mapped(fp);
                        b.for_each([&](int k) { mapped.add(elems[k]); });
                        return F(mapped);
                      });
  R.set_chain_evaluator([F, elems](const std::vector<int>& seq) {
    std::vector<int> mapped(seq.size());
    for (std::size_t k = 0; k < seq.size(); ++k) mapped[k] = elems[seq[k]];
    return F.chain_values(mapped);
  });
  if (F.has_fast_min()) {
    Subset outside = a.complement();
    R.set_fast_min([F, elems, outside](const std::vector<double>& addend) {
      std::vector<double> padded(F.p(), 0.0);
      for (std::size_t k = 0; k < elems.size(); ++k) padded[elems[k]] = addend[k];
      auto [arg, val] = F.fast_min_boxed(padded, Subset(F.p()), outside);
      Subset mapped_back(int(elems.size()));
      for (std::size_t k = 0; k < elems.size(); ++k)
        if (arg.contains(elems[k])) mapped_back.add(int(k));
      return std::make_pair(mapped_back, val);
    });
  }
  return R;
}

SetFunctionOracle contract_on(const SetFunctionOracle& F, const Subset& a) {
  auto rest = a.complement().elements();
  if (rest.empty()) throw std::invalid_argument("contract_on: set is full");
  const int fp = F.p();
  Subset base = a;
  SetFunctionOracle C(GroundSet(int(rest.size())),
                      [F, rest, base, fp](const Subset& b) {
                        Subset mapped = base;
                        b.for_each([&](int k) { mapped.add(rest[k]); });
                        return F(mapped) - F(base);
                      });
  C.set_chain_evaluator([F, rest, base](const std::vector<int>& seq) {
    std::vector<int> full = base.elements();
    const std::size_t skip = full.size();
    for (int k : seq) full.push_back(rest[k]);
    std::vector<double> vals = F.chain_values(full);
    double fa = skip == 0 ? 0.0 : vals[skip - 1];
    std::vector<double> out(seq.size());
    for (std::size_t k = 0; k < seq.size(); ++k) out[k] = vals[skip + k] - fa;
    return out;
  });
  if (F.has_fast_min()) {
    Subset forced = a;
    C.set_fast_min([F, rest, forced](const std::vector<double>& addend) {
      std::vector<double> padded(F.p(), 0.0);
      for (std::size_t k = 0; k < rest.size(); ++k) padded[rest[k]] = addend[k];
      auto [arg, val] = F.fast_min_boxed(padded, forced, Subset(F.p()));
      Subset mapped_back(int(rest.size()));
      for (std::size_t k = 0; k < rest.size(); ++k)
        if (arg.contains(rest[k])) mapped_back.add(int(k));
      return std::make_pair(mapped_back, val - F(forced));
    });
  }
  return C;
}

SetFunctionOracle sum(const SetFunctionOracle& F, const SetFunctionOracle& G) {
  if (F.p() != G.p()) throw std::invalid_argument("sum: ground sets differ");
  SetFunctionOracle S(GroundSet(F.p()),
                      [F, G](const Subset& a) { return F(a) + G(a); });
  S.set_chain_evaluator([F, G](const std::vector<int>& order) {
    std::vector<double> a = F.chain_values(order);
    std::vector<double> b = G.chain_values(order);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    return a;
  });
  return S;
}

SetFunctionOracle scale(const SetFunctionOracle& F, double lambda) {
  if (lambda < 0) throw std::invalid_argument("scale: lambda must be >= 0");
  SetFunctionOracle S(GroundSet(F.p()),
                      [F, lambda](const Subset& a) { return lambda * F(a); });
  S.set_chain_evaluator([F, lambda](const std::vector<int>& order) {
    std::vector<double> a = F.chain_values(order);
    for (double& x : a) x *= lambda;
    return a;
  });
  return S;
}

SetFunctionOracle add_modular(const SetFunctionOracle& F,
                              const std::vector<double>& z) {
  if (int(z.size()) != F.p()) throw std::invalid_argument("add_modular: bad z");
  std::vector<double> zz = z;
  SetFunctionOracle S(GroundSet(F.p()), [F, zz](const Subset& a) {
    return F(a) + modular_sum(zz, a);
  });
  S.set_chain_evaluator([F, zz](const std::vector<int>& order) {
    std::vector<double> a = F.chain_values(order);
    double acc = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      acc += zz[order[k]];
      a[k] += acc;
    }
    return a;
  });
  if (F.has_fast_min()) {
    S.set_fast_min([F, zz](const std::vector<double>& addend) {
      std::vector<double> shifted = zz;
      for (std::size_t k = 0; k < shifted.size(); ++k) shifted[k] += addend[k];
      return F.fast_min(shifted);
    });
  }
  return S;
}

SetFunctionOracle symmetrize(const SetFunctionOracle& F) {
  const int p = F.p();
  double fv = F(Subset::full_set(p));
  return SetFunctionOracle(GroundSet(p), [F, fv](const Subset& a) {
    return F(a) + F(a.complement()) - fv;
  });
}

SetFunctionOracle convolve_modular(const SetFunctionOracle& F,
                                   const std::vector<double>& z,
                                   InnerMinFn inner) {
  if (int(z.size()) != F.p())
    throw std::invalid_argument("convolve_modular: bad z");
  std::vector<double> zz = z;
  return SetFunctionOracle(GroundSet(F.p()), [F, zz, inner](const Subset& a) {
    // min_{B subseteq A} F(B) + z(A\B) = z(A) + min_{B subseteq A} F(B) - z(B)
    if (a.empty()) return 0.0;
    SetFunctionOracle R = restrict_to(F, a);
    auto elems = a.elements();
    std::vector<double> addend(elems.size());
    for (std::size_t k = 0; k < elems.size(); ++k) addend[k] = -zz[elems[k]];
    auto [arg, val] = inner_minimize(R, addend, inner);
    (void)arg;
    return modular_sum(zz, a) + val;
  });
}

SetFunctionOracle monotonize(const SetFunctionOracle& F, InnerMinFn inner) {
  const int p = F.p();
  auto oracle = [F, inner, p](const Subset& a) {
    // min_{B supseteq A} F(B) = F(A) + min over the contraction on V\A
    if (a.is_full()) return F(a);
    SetFunctionOracle C = contract_on(F, a);
    std::vector<double> zero(C.p(), 0.0);
    auto [arg, val] = inner_minimize(C, zero, inner);
    (void)arg;
    return F(a) + std::min(0.0, val);
  };
  double fmin = oracle(Subset::empty_set(p));
  return SetFunctionOracle(GroundSet(p), [oracle, fmin](const Subset& a) {
    return oracle(a) - fmin;
  });
}

bool is_nondecreasing_bruteforce(const SetFunctionOracle& F) {
  const int p = F.p();
  if (p > 20) throw std::invalid_argument("is_nondecreasing_bruteforce: p > 20");
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << p); ++mask) {
    Subset a = Subset::from_mask(p, mask);
    double fa = F(a);
    for (int k = 0; k < p; ++k) {
      if (a.contains(k)) continue;
      Subset ak = a;
      ak.add(k);
      if (F(ak) < fa - 1e-10) return false;
    }
  }
  return true;
}

SetFunctionOracle concave_compose(const SetFunctionOracle& F,
                                  const ConcaveSpec& phi, bool trust_monotone) {
  if (F.p() <= 12) {
    if (!is_nondecreasing_bruteforce(F))
      throw std::invalid_argument("concave_compose: F is not non-decreasing");
  } else if (!trust_monotone) {
    throw std::invalid_argument(
        "concave_compose: p > 12, set trust_monotone to skip the check");
  }
  SetFunctionOracle S(GroundSet(F.p()),
                      [F, phi](const Subset& a) { return phi(F(a)); });
  S.set_chain_evaluator([F, phi](const std::vector<int>& order) {
    std::vector<double> vals = F.chain_values(order);
    for (double& v : vals) v = phi(v);
    return vals;
  });
  return S;
}

SetFunctionOracle partial_min(const SetFunctionOracle& G, const Subset& w_set,
                              InnerMinFn inner) {
  if (w_set.universe() != G.p())
    throw std::invalid_argument("partial_min: W universe mismatch");
  if (w_set.empty() || w_set.is_full())
    throw std::invalid_argument("partial_min: W must be a non-trivial subset");
  auto v_elems = w_set.complement().elements();
  const int p = int(v_elems.size());
  const int gp = G.p();

  auto min_over_w = [G, w_set, inner](const Subset& fixed) {
    // min over B subseteq W of G(fixed cup B)
    SetFunctionOracle H = fixed.empty() ? restrict_to(G, w_set)
                                        : [&] {
                                            SetFunctionOracle C =
                                                contract_on(G, fixed);
                                            // C lives on V\fixed; restrict to W
                                            auto rest =
                                                fixed.complement().elements();
                                            Subset w_in_rest(int(rest.size()));
                                            for (int k = 0;
                                                 k < int(rest.size()); ++k)
                                              if (w_set.contains(rest[k]))
                                                w_in_rest.add(k);
                                            return restrict_to(C, w_in_rest);
                                          }();
    std::vector<double> zero(H.p(), 0.0);
    auto [arg, val] = inner_minimize(H, zero, inner);
    (void)arg;
    return G(fixed) + std::min(0.0, val);
  };

  double base = min_over_w(Subset::empty_set(gp));
  return SetFunctionOracle(GroundSet(p),
                           [min_over_w, v_elems, gp, base](const Subset& a) {
                             Subset fixed(gp);
                             a.for_each([&](int k) { fixed.add(v_elems[k]); });
                             return min_over_w(fixed) - base;
                           });
}

}  // namespace subq
