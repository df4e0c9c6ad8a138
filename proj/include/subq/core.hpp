// Ground-set and oracle abstractions, the greedy algorithm / Lovasz
// extension, polyhedron membership tests and small brute-force references.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace subq {

// Single knob for floating comparisons against function values.  Membership
// and tightness tests use kSlack scaled by (1 + |F(V)|).
inline constexpr double kSlack = 1e-9;
inline constexpr double kTightTol = 1e-8;
inline constexpr double kDedupeTol = 1e-10;

struct GroundSet {
  int p = 0;
  std::vector<std::string> labels;  // empty or size p, distinct

  GroundSet() = default;
  explicit GroundSet(int p_) : p(p_) { validate(); }
  GroundSet(int p_, std::vector<std::string> labels_)
      : p(p_), labels(std::move(labels_)) {
    validate();
  }
  void validate() const;
};

// Subset of {0,...,p-1} as a packed bitset.  Comparison orders subsets by
// their mask value (lowest-index elements weigh least), which is the
// deterministic tie-break used by the brute-force solvers.
class Subset {
 public:
  Subset() : p_(0) {}
  explicit Subset(int p) : p_(p), bits_((p + 63) / 64, 0) {}

  static Subset empty_set(int p) { return Subset(p); }
  static Subset full_set(int p) {
    Subset s(p);
    for (int k = 0; k < p; ++k) s.add(k);
    return s;
  }
  static Subset of(int p, std::initializer_list<int> elems) {
    Subset s(p);
    for (int k : elems) s.add(k);
    return s;
  }
  static Subset from_mask(int p, std::uint64_t mask) {
    Subset s(p);
    for (int k = 0; k < p; ++k)
      if (mask >> k & 1u) s.add(k);
    return s;
  }

  int universe() const { return p_; }
  bool contains(int k) const { return bits_[k >> 6] >> (k & 63) & 1u; }
  void add(int k) { bits_[k >> 6] |= std::uint64_t(1) << (k & 63); }
  void remove(int k) { bits_[k >> 6] &= ~(std::uint64_t(1) << (k & 63)); }
  int count() const;
  bool empty() const;
  bool is_full() const { return count() == p_; }

  Subset united(const Subset& o) const;
  Subset intersected(const Subset& o) const;
  Subset minus(const Subset& o) const;
  Subset complement() const;
  bool subset_of(const Subset& o) const;

  std::vector<int> elements() const;
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t b = 0; b < bits_.size(); ++b) {
      std::uint64_t w = bits_[b];
      while (w) {
        int k = int(b << 6) + __builtin_ctzll(w);
        fn(k);
        w &= w - 1;
      }
    }
  }

  bool operator==(const Subset& o) const {
    return p_ == o.p_ && bits_ == o.bits_;
  }
  bool operator!=(const Subset& o) const { return !(*this == o); }
  // mask order: compares as a p-bit little-endian integer
  bool mask_less(const Subset& o) const;

  std::uint64_t hash() const;
  // 1-based comma separated indices, e.g. "1,3,4"; "" for the empty set
  std::string to_string() const;

 private:
  int p_;
  std::vector<std::uint64_t> bits_;
};

struct SubsetHash {
  std::size_t operator()(const Subset& s) const { return std::size_t(s.hash()); }
};

double modular_sum(const std::vector<double>& z, const Subset& a);
Subset indicator_support(const std::vector<double>& w);  // {k : w_k > 0.5}

// Ordering of the ground set; drives the greedy algorithm.
struct Ordering {
  std::vector<int> perm;  // permutation of 0..p-1
  bool valid(int p) const;
};

// Decreasing order of w, ties broken by ascending element index.
Ordering decreasing_order(const std::vector<double>& w);

// A normalized set function F with F(empty)=0, evaluated through a callback,
// memoized, with an evaluation counter (distinct subsets) as the cost unit.
// Copies share state; the cache is synchronized so one oracle may be
// evaluated from several threads.
class SetFunctionOracle {
 public:
  using EvalFn = std::function<double(const Subset&)>;
  // Given a duplicate-free element sequence, return F of all its prefixes
  // (normalized values).  Sequences may be shorter than p.
  using ChainFn = std::function<std::vector<double>(const std::vector<int>&)>;
  // Solve min_A F(A) + addend(A) exactly; returns (argmin, min value).
  using FastMinFn =
      std::function<std::pair<Subset, double>(const std::vector<double>&)>;

  SetFunctionOracle() = default;
  SetFunctionOracle(GroundSet ground, EvalFn fn);

  bool valid() const { return st_ != nullptr; }
  int p() const { return st_->ground.p; }
  const GroundSet& ground() const { return st_->ground; }

  double operator()(const Subset& a) const { return eval(a); }
  double eval(const Subset& a) const;
  // Evaluate without memoizing (single sweeps over many subsets).
  double eval_nocache(const Subset& a) const;
  // F of the k-prefixes of `seq`, k = 1..seq.size().
  std::vector<double> chain_values(const std::vector<int>& seq) const;

  std::uint64_t calls() const;
  void reset_calls();

  void set_chain_evaluator(ChainFn fn) { st_->chain = std::move(fn); }
  bool has_fast_min() const { return bool(st_->fast_min); }
  void set_fast_min(FastMinFn fn) { st_->fast_min = std::move(fn); }
  std::pair<Subset, double> fast_min(const std::vector<double>& addend) const;
  // fast_min with forced in/out elements (implemented by padding the
  // modular term and retrying with a larger pad if the forcing failed).
  std::pair<Subset, double> fast_min_boxed(const std::vector<double>& addend,
                                           const Subset& forced_in,
                                           const Subset& forced_out) const;

  // Slack for membership/tightness tests: kSlack * (1 + |F(V)|).
  double tol() const;

 private:
  struct State {
    GroundSet ground;
    EvalFn fn;
    double offset = 0.0;  // raw F(empty), subtracted from every value
    ChainFn chain;
    FastMinFn fast_min;
    mutable std::mutex mu;
    mutable std::unordered_map<Subset, double, SubsetHash> cache;
    mutable std::uint64_t calls = 0;
  };
  std::shared_ptr<State> st_;
};

// Element of B(F) together with the convex combination of greedy vertices
// that certifies membership.
struct BaseVector {
  std::vector<double> s;
  std::vector<std::pair<Ordering, double>> support;  // weights >= 0, sum 1

  int p() const { return int(s.size()); }
};

struct GreedyResult {
  BaseVector base;
  double value;  // f(w) = w' s
};

// Prop. 3.2: marginal gains along the decreasing order of w.  Exactly p
// (new) oracle evaluations on nested sets; maximizes w's over B(F).
GreedyResult greedy(const SetFunctionOracle& F, const std::vector<double>& w);

// Lovasz extension by the telescoped formula; equals greedy(F,w).value.
double lovasz(const SetFunctionOracle& F, const std::vector<double>& w);

struct SubmodularityWitness {
  bool submodular = true;
  Subset a;  // violating (A, j, k) when submodular == false
  int j = -1, k = -1;
  double lhs = 0, rhs = 0;
};

// Second-order difference test over all (A, j, k); p <= 20.
SubmodularityWitness is_submodular_bruteforce(const SetFunctionOracle& F);

enum class Polyhedron { P, B, Pplus, AbsP };

// Membership test: exhaustive for p <= 20, otherwise via one SFM solve of
// min_A F(A) - s(A) (requires a fast_min handle on the oracle).
bool in_polyhedron(const SetFunctionOracle& F, const std::vector<double>& s,
                   Polyhedron which);

// Prop. 4.2(c): s maximizes w's over B(F) iff every weak sup-level set of w
// is tight for s.
bool maximizer_optimality(const SetFunctionOracle& F,
                          const std::vector<double>& w,
                          const std::vector<double>& s,
                          double tol = kTightTol);

// All extreme points of B(F) by running the p! orderings; p <= 8.
std::vector<BaseVector> extreme_points(const SetFunctionOracle& F);

// s(V) = F(V) within kSlack * (1 + |F(V)|), plus the support certificate.
bool is_valid_base(const SetFunctionOracle& F, const BaseVector& b);

// sum of negative components
double neg_part_sum(const std::vector<double>& s);

// Weak sup-level sets {w >= v} for the distinct values v of w, largest
// first; values closer than value_tol to the level leader count as equal.
std::vector<Subset> sup_level_sets(const std::vector<double>& w,
                                   double value_tol = 0.0);

}  // namespace subq
