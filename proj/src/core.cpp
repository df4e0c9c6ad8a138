#include "subq/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace subq {

void GroundSet::validate() const {
  if (p < 1) throw std::invalid_argument("ground set must have p >= 1");
  if (!labels.empty()) {
    if (int(labels.size()) != p)
      throw std::invalid_argument("labels must have one entry per element");
    std::set<std::string> seen(labels.begin(), labels.end());
    if (int(seen.size()) != p)
      throw std::invalid_argument("labels must be distinct");
  }
}

int Subset::count() const {
  int c = 0;
  for (auto w : bits_) c += __builtin_popcountll(w);
  return c;
}

bool Subset::empty() const {
  for (auto w : bits_)
    if (w) return false;
  return true;
}

Subset Subset::united(const Subset& o) const {
  Subset r = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] |= o.bits_[i];
  return r;
}

Subset Subset::intersected(const Subset& o) const {
  Subset r = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] &= o.bits_[i];
  return r;
}

Subset Subset::minus(const Subset& o) const {
  Subset r = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] &= ~o.bits_[i];
  return r;
}

Subset Subset::complement() const {
  Subset r(p_);
  for (int k = 0; k < p_; ++k)
    if (!contains(k)) r.add(k);
  return r;
}

bool Subset::subset_of(const Subset& o) const {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & ~o.bits_[i]) return false;
  return true;
}

std::vector<int> Subset::elements() const {
  std::vector<int> out;
  out.reserve(count());
  for_each([&](int k) { out.push_back(k); });
  return out;
}

bool Subset::mask_less(const Subset& o) const {
  for (std::size_t i = bits_.size(); i-- > 0;) {
    if (bits_[i] != o.bits_[i]) return bits_[i] < o.bits_[i];
  }
  return false;
}

std::uint64_t Subset::hash() const {
  std::uint64_t h = 1469598103934665603ull ^ std::uint64_t(p_);
  for (auto w : bits_) {
    h ^= w;
    h *= 1099511628211ull;
  }
  return h;
}

std::string Subset::to_string() const {
  std::string out;
  bool first = true;
  for_each([&](int k) {
    if (!first) out += ',';
    out += std::to_string(k + 1);
    first = false;
  });
  return out;
}

double modular_sum(const std::vector<double>& z, const Subset& a) {
  double v = 0;
  a.for_each([&](int k) { v += z[k]; });
  return v;
}

Subset indicator_support(const std::vector<double>& w) {
  Subset s(int(w.size()));
  for (int k = 0; k < int(w.size()); ++k)
    if (w[k] > 0.5) s.add(k);
  return s;
}

bool Ordering::valid(int p) const {
  if (int(perm.size()) != p) return false;
  std::vector<char> seen(p, 0);
  for (int k : perm) {
    if (k < 0 || k >= p || seen[k]) return false;
    seen[k] = 1;
  }
  return true;
}

Ordering decreasing_order(const std::vector<double>& w) {
  Ordering o;
  o.perm.resize(w.size());
  std::iota(o.perm.begin(), o.perm.end(), 0);
  std::stable_sort(o.perm.begin(), o.perm.end(),
                   [&](int a, int b) { return w[a] > w[b]; });
  return o;
}

SetFunctionOracle::SetFunctionOracle(GroundSet ground, EvalFn fn)
    : st_(std::make_shared<State>()) {
  ground.validate();
  st_->ground = std::move(ground);
  st_->fn = std::move(fn);
  Subset empty(st_->ground.p);
  st_->offset = st_->fn(empty);
  st_->cache.emplace(empty, 0.0);  // normalization: F(empty) = 0
}

double SetFunctionOracle::eval(const Subset& a) const {
  if (a.universe() != st_->ground.p)
    throw std::invalid_argument("subset universe mismatch");
  {
    std::lock_guard<std::mutex> lk(st_->mu);
    auto it = st_->cache.find(a);
    if (it != st_->cache.end()) return it->second;
  }
  double v = st_->fn(a) - st_->offset;
  if (!std::isfinite(v))
    throw std::runtime_error("oracle produced a non-finite value");
  std::lock_guard<std::mutex> lk(st_->mu);
  auto [it, inserted] = st_->cache.emplace(a, v);
  if (inserted) ++st_->calls;
  return it->second;
}

double SetFunctionOracle::eval_nocache(const Subset& a) const {
  {
    std::lock_guard<std::mutex> lk(st_->mu);
    auto it = st_->cache.find(a);
    if (it != st_->cache.end()) return it->second;
  }
  return st_->fn(a) - st_->offset;
}

std::vector<double> SetFunctionOracle::chain_values(
    const std::vector<int>& seq) const {
  const int p = st_->ground.p;
  const int m = int(seq.size());
  if (m > p) throw std::invalid_argument("chain_values: sequence too long");
  if (st_->chain) {
    std::vector<double> vals = st_->chain(seq);
    Subset prefix(p);
    std::lock_guard<std::mutex> lk(st_->mu);
    for (int k = 0; k < m; ++k) {
      prefix.add(seq[k]);
      auto [it, inserted] = st_->cache.emplace(prefix, vals[k]);
      if (inserted)
        ++st_->calls;
      else
        vals[k] = it->second;  // first cached value stays authoritative
    }
    return vals;
  }
  std::vector<double> vals(m);
  Subset prefix(p);
  for (int k = 0; k < m; ++k) {
    prefix.add(seq[k]);
    vals[k] = eval(prefix);
  }
  return vals;
}

std::pair<Subset, double> SetFunctionOracle::fast_min_boxed(
    const std::vector<double>& addend, const Subset& forced_in,
    const Subset& forced_out) const {
  const int p = this->p();
  double pad = 1.0;
  for (double x : addend) pad += std::abs(x);
  for (int attempt = 0; attempt < 60; ++attempt) {
    std::vector<double> padded = addend;
    forced_in.for_each([&](int k) { padded[k] -= pad; });
    forced_out.for_each([&](int k) { padded[k] += pad; });
    auto [arg, val] = fast_min(padded);
    (void)val;
    if (forced_in.subset_of(arg) && arg.intersected(forced_out).empty()) {
      return {arg, eval(arg) + modular_sum(addend, arg)};
    }
    pad *= 8.0;
  }
  throw std::runtime_error("fast_min_boxed: forcing pad did not converge");
}

std::uint64_t SetFunctionOracle::calls() const {
  std::lock_guard<std::mutex> lk(st_->mu);
  return st_->calls;
}

void SetFunctionOracle::reset_calls() {
  std::lock_guard<std::mutex> lk(st_->mu);
  st_->calls = 0;
}

std::pair<Subset, double> SetFunctionOracle::fast_min(
    const std::vector<double>& addend) const {
  if (!st_->fast_min) throw std::logic_error("oracle has no fast_min handle");
  return st_->fast_min(addend);
}

double SetFunctionOracle::tol() const {
  double fv = eval(Subset::full_set(p()));
  return kSlack * (1.0 + std::abs(fv));
}

GreedyResult greedy(const SetFunctionOracle& F, const std::vector<double>& w) {
  const int p = F.p();
  if (int(w.size()) != p) throw std::invalid_argument("greedy: w has wrong size");
  for (double x : w)
    if (!std::isfinite(x)) throw std::invalid_argument("greedy: non-finite w");

  Ordering ord = decreasing_order(w);
  std::vector<double> prefix = F.chain_values(ord.perm);

  BaseVector b;
  b.s.assign(p, 0.0);
  double prev = 0.0, value = 0.0;
  for (int k = 0; k < p; ++k) {
    double gain = prefix[k] - prev;
    b.s[ord.perm[k]] = gain;
    value += w[ord.perm[k]] * gain;
    prev = prefix[k];
  }
  b.support.emplace_back(std::move(ord), 1.0);
  return {std::move(b), value};
}

double lovasz(const SetFunctionOracle& F, const std::vector<double>& w) {
  const int p = F.p();
  if (int(w.size()) != p) throw std::invalid_argument("lovasz: w has wrong size");
  for (double x : w)
    if (!std::isfinite(x)) throw std::invalid_argument("lovasz: non-finite w");

  Ordering ord = decreasing_order(w);
  std::vector<double> prefix = F.chain_values(ord.perm);
  double v = 0.0;
  for (int k = 0; k + 1 < p; ++k)
    v += prefix[k] * (w[ord.perm[k]] - w[ord.perm[k + 1]]);
  v += prefix[p - 1] * w[ord.perm[p - 1]];
  return v;
}

SubmodularityWitness is_submodular_bruteforce(const SetFunctionOracle& F) {
  const int p = F.p();
  if (p > 20)
    throw std::invalid_argument("is_submodular_bruteforce: p > 20");
  const double tol = 1e-10;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << p); ++mask) {
    Subset a = Subset::from_mask(p, mask);
    for (int j = 0; j < p; ++j) {
      if (a.contains(j)) continue;
      Subset aj = a;
      aj.add(j);
      for (int k = j + 1; k < p; ++k) {
        if (a.contains(k)) continue;
        Subset ak = a, ajk = aj;
        ak.add(k);
        ajk.add(k);
        double lhs = F(ak) - F(a);
        double rhs = F(ajk) - F(aj);
        if (lhs < rhs - tol) {
          return {false, a, j, k, lhs, rhs};
        }
      }
    }
  }
  return {};
}

namespace {

bool in_P_exhaustive(const SetFunctionOracle& F, const std::vector<double>& s,
                     double tol) {
  const int p = F.p();
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << p); ++mask) {
    Subset a = Subset::from_mask(p, mask);
    if (modular_sum(s, a) > F(a) + tol) return false;
  }
  return true;
}

bool in_P(const SetFunctionOracle& F, const std::vector<double>& s, double tol) {
  if (F.p() <= 20) return in_P_exhaustive(F, s, tol);
  if (!F.has_fast_min())
    throw std::invalid_argument(
        "in_polyhedron: p > 20 requires a fast_min handle on the oracle");
  std::vector<double> neg(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) neg[k] = -s[k];
  auto [arg, val] = F.fast_min(neg);
  (void)arg;
  return val >= -tol;  // min_A F(A) - s(A) >= 0  iff  s in P(F)
}

}  // namespace

bool in_polyhedron(const SetFunctionOracle& F, const std::vector<double>& s,
                   Polyhedron which) {
  const int p = F.p();
  if (int(s.size()) != p) throw std::invalid_argument("in_polyhedron: bad s");
  const double tol = F.tol();
  switch (which) {
    case Polyhedron::P:
      return in_P(F, s, tol);
    case Polyhedron::B: {
      double sv = 0;
      for (double x : s) sv += x;
      if (std::abs(sv - F(Subset::full_set(p))) > tol) return false;
      return in_P(F, s, tol);
    }
    case Polyhedron::Pplus: {
      for (double x : s)
        if (x < -tol) return false;
      return in_P(F, s, tol);
    }
    case Polyhedron::AbsP: {
      std::vector<double> abs_s(s.size());
      for (std::size_t k = 0; k < s.size(); ++k) abs_s[k] = std::abs(s[k]);
      return in_P(F, abs_s, tol);
    }
  }
  return false;
}

std::vector<Subset> sup_level_sets(const std::vector<double>& w,
                                   double value_tol) {
  Ordering ord = decreasing_order(w);
  const int p = int(w.size());
  std::vector<Subset> out;
  Subset prefix(p);
  double leader = p > 0 ? w[ord.perm[0]] : 0.0;
  for (int k = 0; k < p; ++k) {
    prefix.add(ord.perm[k]);
    bool boundary =
        (k + 1 == p) || (w[ord.perm[k + 1]] < leader - value_tol);
    if (boundary) {
      out.push_back(prefix);
      if (k + 1 < p) leader = w[ord.perm[k + 1]];
    }
  }
  return out;
}

bool maximizer_optimality(const SetFunctionOracle& F,
                          const std::vector<double>& w,
                          const std::vector<double>& s, double tol) {
  double wmax = 0;
  for (double x : w) wmax = std::max(wmax, std::abs(x));
  // near-equal components count as one level, so block-constant solutions
  // with roundoff noise are not split into spurious level sets
  for (const Subset& a : sup_level_sets(w, 1e-9 * (1.0 + wmax))) {
    if (std::abs(modular_sum(s, a) - F(a)) > tol) return false;
  }
  return true;
}

std::vector<BaseVector> extreme_points(const SetFunctionOracle& F) {
  const int p = F.p();
  if (p > 8) throw std::invalid_argument("extreme_points: p > 8");
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<BaseVector> out;
  do {
    std::vector<double> prefix = F.chain_values(perm);
    BaseVector b;
    b.s.assign(p, 0.0);
    double prev = 0.0;
    for (int k = 0; k < p; ++k) {
      b.s[perm[k]] = prefix[k] - prev;
      prev = prefix[k];
    }
    bool dup = false;
    for (const auto& e : out) {
      double d = 0;
      for (int k = 0; k < p; ++k) d = std::max(d, std::abs(e.s[k] - b.s[k]));
      if (d <= kDedupeTol) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      b.support.emplace_back(Ordering{perm}, 1.0);
      out.push_back(std::move(b));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool is_valid_base(const SetFunctionOracle& F, const BaseVector& b) {
  const int p = F.p();
  if (b.p() != p) return false;
  double sv = 0;
  for (double x : b.s) sv += x;
  double fv = F(Subset::full_set(p));
  if (std::abs(sv - fv) > kSlack * (1.0 + std::abs(fv))) return false;
  if (b.support.empty()) return false;
  double wsum = 0;
  std::vector<double> rebuilt(p, 0.0);
  for (const auto& [ord, wt] : b.support) {
    if (wt < -1e-12 || !ord.valid(p)) return false;
    wsum += wt;
    std::vector<double> prefix = F.chain_values(ord.perm);
    double prev = 0;
    for (int k = 0; k < p; ++k) {
      rebuilt[ord.perm[k]] += wt * (prefix[k] - prev);
      prev = prefix[k];
    }
  }
  if (std::abs(wsum - 1.0) > 1e-9) return false;
  double scale = 1.0 + std::abs(fv);
  for (int k = 0; k < p; ++k)
    if (std::abs(rebuilt[k] - b.s[k]) > 1e-7 * scale) return false;
  return true;
}

double neg_part_sum(const std::vector<double>& s) {
  double v = 0;
  for (double x : s)
    if (x < 0) v += x;
  return v;
}

}  // namespace subq
