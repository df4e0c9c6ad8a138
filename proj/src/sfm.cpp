#include "subq/sfm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "subq/zoo.hpp"

namespace subq {

void SolveTrace::record(int iter, std::uint64_t oracle_calls, double wall_ms,
                        double primal, double dual) {
  if (!rows.empty()) {
    primal = std::min(primal, rows.back().primal_best);
    dual = std::max(dual, rows.back().dual_best);
  }
  rows.push_back({iter, oracle_calls, wall_ms, primal, dual, primal - dual});
}

bool SolveTrace::monotone() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].primal_best > rows[i - 1].primal_best) return false;
    if (rows[i].dual_best < rows[i - 1].dual_best) return false;
  }
  for (const TraceRow& r : rows)
    if (r.gap != r.primal_best - r.dual_best) return false;
  return true;
}

const char* SolveTrace::csv_header() {
  return "iter,oracle_calls,wall_ms,primal_best,dual_best,gap";
}

void SolveTrace::write_csv(std::ostream& out, bool zero_wall) const {
  out << csv_header() << '\n';
  std::ostringstream line;
  line.precision(17);
  for (const TraceRow& r : rows) {
    line.str("");
    line << r.iter << ',' << r.oracle_calls << ','
         << (zero_wall ? 0.0 : r.wall_ms) << ',' << r.primal_best << ','
         << r.dual_best << ',' << r.gap << '\n';
    out << line.str();
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Best primal set seen so far; exact-value ties keep the smaller set.
struct PrimalBest {
  Subset set;
  double value = 0;
  explicit PrimalBest(int p) : set(p) {}  // empty set, F = 0
  void offer(const Subset& a, double v) {
    if (v < value || (v == value && a.count() < set.count())) {
      value = v;
      set = a;
    }
  }
};

// Greedy-prefix level sets come for free: prefix values are partial sums of
// the greedy base.
void offer_prefixes(PrimalBest& best, const std::vector<int>& order,
                    const std::vector<double>& prefix_values) {
  Subset acc(int(order.size()));
  for (std::size_t k = 0; k < order.size(); ++k) {
    acc.add(order[k]);
    best.offer(acc, prefix_values[k]);
  }
}

std::vector<double> prefix_values_of(const GreedyResult& gr) {
  const auto& ord = gr.base.support.front().first.perm;
  std::vector<double> vals(ord.size());
  double acc = 0;
  for (std::size_t k = 0; k < ord.size(); ++k) {
    acc += gr.base.s[ord[k]];
    vals[k] = acc;
  }
  return vals;
}

// Best dual certificate: either one greedy vertex or the running average of
// all vertices seen; the support is reconstructed at the end from the
// ordering history to avoid repeated deep copies.
struct DualBest {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> s;
  bool from_average = false;
  int upto = 0;  // history prefix length when the average won

  void offer_vertex(const std::vector<double>& v, int index) {
    double nv = neg_part_sum(v);
    if (nv > value) {
      value = nv;
      s = v;
      from_average = false;
      upto = index;
    }
  }
  void offer_average(const std::vector<double>& avg, int count) {
    double nv = neg_part_sum(avg);
    if (nv > value) {
      value = nv;
      s = avg;
      from_average = true;
      upto = count;
    }
  }
  BaseVector to_base(const std::vector<Ordering>& history) const {
    BaseVector b;
    b.s = s;
    if (from_average) {
      for (int i = 0; i < upto; ++i)
        b.support.emplace_back(history[i], 1.0 / upto);
    } else {
      b.support.emplace_back(history[upto], 1.0);
    }
    return b;
  }
};

bool budget_hit(const Budget& b, const SetFunctionOracle& F,
                std::uint64_t calls0, Clock::time_point t0) {
  if (F.calls() - calls0 >= b.max_oracle_calls) return true;
  if (ms_since(t0) >= b.max_wall_ms) return true;
  return false;
}

}  // namespace

SfmResult solved_by_reduction(const SetFunctionOracle& F, const Reduction& red,
                              const char* algo) {
  SfmResult res;
  res.minimizer = red.a_min;
  res.min_value = F(red.a_min);
  res.minimal_minimizer = red.a_min;
  res.maximal_minimizer = red.a_max;
  res.algorithm = algo;
  BaseVector trivial;  // mid is empty: the lift spans the whole ground set
  trivial.support.emplace_back(Ordering{}, 1.0);
  res.dual = red.lift_base(F, trivial);
  res.gap = res.min_value - neg_part_sum(res.dual->s);
  res.trace.record(0, F.calls(), 0, res.min_value, res.min_value - res.gap);
  return res;
}

std::vector<double> base_widths(const SetFunctionOracle& F) {
  const int p = F.p();
  Subset full = Subset::full_set(p);
  double fv = F(full);
  std::vector<double> alpha(p);
  for (int k = 0; k < p; ++k) {
    Subset sk(p);
    sk.add(k);
    Subset rest = full;
    rest.remove(k);
    alpha[k] = std::max(F(sk) + F(rest) - fv, 0.0);
  }
  return alpha;
}

Reduction restrict_search(const SetFunctionOracle& F) {
  const int p = F.p();
  Reduction red;
  red.a_min = Subset(p);
  red.a_max = Subset::full_set(p);
  std::vector<std::vector<int>> removal_rounds;

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> window = red.a_max.minus(red.a_min).elements();
    if (window.empty()) break;
    double f_amin = F(red.a_min);
    double f_amax = F(red.a_max);
    std::vector<int> fixed_now, removed_now;
    for (int k : window) {
      Subset s = red.a_min;
      s.add(k);
      if (F(s) - f_amin < 0) fixed_now.push_back(k);
    }
    for (int k : window) {
      Subset s = red.a_max;
      s.remove(k);
      if (f_amax - F(s) > 0) removed_now.push_back(k);
    }
    for (int k : fixed_now) {
      red.a_min.add(k);
      red.fixed_order.push_back(k);
      changed = true;
    }
    std::vector<int> actually_removed;
    for (int k : removed_now) {
      if (red.a_min.contains(k)) continue;  // only on non-submodular input
      red.a_max.remove(k);
      actually_removed.push_back(k);
      changed = true;
    }
    if (!actually_removed.empty())
      removal_rounds.push_back(std::move(actually_removed));
  }
  // latest removal round first, so tail chain marginals stay non-negative
  for (auto it = removal_rounds.rbegin(); it != removal_rounds.rend(); ++it)
    for (int k : *it) red.tail_order.push_back(k);

  red.mid = red.a_max.minus(red.a_min).elements();
  red.f_amin = F(red.a_min);
  if (!red.fixed_order.empty()) {
    std::vector<double> chain = F.chain_values(red.fixed_order);
    double prev = 0;
    for (double v : chain) {
      red.fixed_neg_sum += std::min(v - prev, 0.0);
      prev = v;
    }
  }
  if (!red.tail_order.empty()) {
    std::vector<int> seq = red.a_max.elements();
    const std::size_t skip = seq.size();
    seq.insert(seq.end(), red.tail_order.begin(), red.tail_order.end());
    std::vector<double> chain = F.chain_values(seq);
    double prev = skip == 0 ? 0.0 : chain[skip - 1];
    for (std::size_t i = skip; i < chain.size(); ++i) {
      red.tail_neg_sum += std::min(chain[i] - prev, 0.0);
      prev = chain[i];
    }
  }
  if (!red.mid.empty()) {
    if (red.a_min.empty() && int(red.mid.size()) == p) {
      red.reduced = F;
    } else {
      SetFunctionOracle base =
          red.a_min.empty() ? F : contract_on(F, red.a_min);
      std::vector<int> rest;
      for (int k = 0; k < p; ++k)
        if (!red.a_min.contains(k)) rest.push_back(k);
      Subset mid_in_rest(int(rest.size()));
      for (int i = 0; i < int(rest.size()); ++i)
        if (red.a_max.contains(rest[i])) mid_in_rest.add(i);
      red.reduced = restrict_to(base, mid_in_rest);
    }
  }
  return red;
}

Subset Reduction::lift_set(const Subset& b) const {
  Subset out = a_min;
  b.for_each([&](int k) { out.add(mid[k]); });
  return out;
}

double Reduction::lift_dual_value(double reduced_neg_part) const {
  return fixed_neg_sum + reduced_neg_part + tail_neg_sum;
}

BaseVector Reduction::lift_base(const SetFunctionOracle& F,
                                const BaseVector& b) const {
  const int p = F.p();
  BaseVector out;
  out.s.assign(p, 0.0);
  for (const auto& [ord, wt] : b.support) {
    std::vector<int> full = fixed_order;
    full.reserve(p);
    for (int k : ord.perm) full.push_back(mid[k]);
    for (int k : tail_order) full.push_back(k);
    std::vector<double> chain = F.chain_values(full);
    double prev = 0;
    for (std::size_t i = 0; i < full.size(); ++i) {
      out.s[full[i]] += wt * (chain[i] - prev);
      prev = chain[i];
    }
    out.support.emplace_back(Ordering{std::move(full)}, wt);
  }
  return out;
}

SfmResult brute_force(const SetFunctionOracle& F) {
  const int p = F.p();
  if (p > 22) throw std::invalid_argument("brute_force: p > 22");
  Subset best(p);
  double bestv = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << p); ++mask) {
    Subset a = Subset::from_mask(p, mask);
    double v = F.eval_nocache(a);
    if (v < bestv) {
      bestv = v;
      best = a;
    }
  }
  SfmResult res;
  res.minimizer = best;
  res.min_value = F(best);
  res.gap = 0;  // exact by definition
  res.minimal_minimizer = best;
  res.maximal_minimizer = best;
  res.algorithm = "brute";
  res.trace.record(0, F.calls(), 0, res.min_value, res.min_value);
  return res;
}

std::pair<Subset, double> brute_force_min_maximal(
    const SetFunctionOracle& F, const std::vector<double>& addend) {
  const int p = F.p();
  if (p > 22) throw std::invalid_argument("brute_force_min_maximal: p > 22");
  Subset best(p);
  double bestv = 0.0;
  // the union of all minimizers is itself a minimizer (lattice), and the
  // scan visits it, so keeping "equal value and superset" finds the maximum
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << p); ++mask) {
    Subset a = Subset::from_mask(p, mask);
    double v = F.eval_nocache(a) + modular_sum(addend, a);
    if (v < bestv - 1e-12) {
      bestv = v;
      best = a;
    } else if (v <= bestv + 1e-12 && best.subset_of(a)) {
      bestv = std::min(bestv, v);
      best = a;
    }
  }
  return {best, bestv};
}

SfmResult subgradient(const SetFunctionOracle& F, int steps, StepRule rule,
                      Budget budget) {
  const char* name = rule == StepRule::Polyak ? "sg-polyak" : "sg";
  auto t0 = Clock::now();
  std::uint64_t calls0 = F.calls();
  Reduction red = restrict_search(F);
  if (red.solved()) return solved_by_reduction(F, red, name);
  const SetFunctionOracle& G = red.reduced;
  const int m = G.p();
  std::vector<double> alpha = base_widths(G);
  double dsq = 0;
  for (double a : alpha) dsq += a * a;
  const double dlip = std::sqrt(dsq);

  PrimalBest best(m);
  DualBest dual;
  std::vector<double> w(m, 0.5), sbar(m, 0.0);
  std::vector<Ordering> history;
  history.reserve(std::min(steps, 4096));
  SfmResult res;
  res.algorithm = name;
  res.status = SolveStatus::IterationCap;

  // row k certifies the pair after k completed steps (s_bar over k+1 vertices)
  for (int k = 0; k < steps; ++k) {
    GreedyResult gr = greedy(G, w);
    const Ordering& ord = gr.base.support.front().first;
    offer_prefixes(best, ord.perm, prefix_values_of(gr));
    history.push_back(ord);
    for (int i = 0; i < m; ++i)
      sbar[i] += (gr.base.s[i] - sbar[i]) / double(k + 1);
    dual.offer_vertex(gr.base.s, k);
    dual.offer_average(sbar, k + 1);

    res.trace.record(k, F.calls() - calls0, ms_since(t0),
                     red.f_amin + best.value, red.lift_dual_value(dual.value));

    double gamma;
    if (rule == StepRule::Polyak) {
      double ns2 = 0;
      for (double x : gr.base.s) ns2 += x * x;
      if (ns2 <= 1e-30) {
        res.status = SolveStatus::Converged;
        break;
      }
      gamma = std::max(gr.value - dual.value, 0.0) / ns2;
      if (gamma <= 0)
        gamma = dlip * std::sqrt(2.0) / std::sqrt(double(m) * (k + 1));
    } else {
      gamma = dlip * std::sqrt(2.0) / std::sqrt(double(m) * (k + 1));
    }
    for (int i = 0; i < m; ++i)
      w[i] = std::clamp(w[i] - gamma * gr.base.s[i], 0.0, 1.0);

    if (budget_hit(budget, F, calls0, t0)) {
      res.status = SolveStatus::BudgetExhausted;
      break;
    }
  }

  res.minimizer = red.lift_set(best.set);
  res.min_value = F(res.minimizer);
  res.minimal_minimizer = res.minimizer;
  res.maximal_minimizer = res.minimizer;
  res.dual = red.lift_base(F, dual.to_base(history));
  res.gap = res.min_value - red.lift_dual_value(dual.value);
  return res;
}

SfmResult conditional_gradient(const SetFunctionOracle& F, int steps,
                               CgRule rule, Budget budget) {
  const char* name = rule == CgRule::LineSearch ? "cg-ls" : "cg-2t";
  auto t0 = Clock::now();
  std::uint64_t calls0 = F.calls();
  Reduction red = restrict_search(F);
  if (red.solved()) return solved_by_reduction(F, red, name);
  const SetFunctionOracle& G = red.reduced;
  const int m = G.p();

  // start from the ascending-index ordering's vertex
  std::vector<int> id(m);
  std::iota(id.begin(), id.end(), 0);
  std::vector<double> prefix = G.chain_values(id);
  std::vector<double> s(m);
  {
    double prev = 0;
    for (int k = 0; k < m; ++k) {
      s[k] = prefix[k] - prev;
      prev = prefix[k];
    }
  }
  std::vector<std::pair<Ordering, double>> combo{{Ordering{id}, 1.0}};
  auto snapshot = combo;  // support of the best dual iterate

  PrimalBest best(m);
  offer_prefixes(best, id, prefix);
  double dual_best = neg_part_sum(s);
  std::vector<double> dual_s = s;
  SfmResult res;
  res.algorithm = name;
  res.status = SolveStatus::IterationCap;
  res.trace.record(0, F.calls() - calls0, ms_since(t0),
                   red.f_amin + best.value, red.lift_dual_value(dual_best));

  int last_recorded = 0;
  for (int t = 1; t <= steps; ++t) {
    std::vector<double> negs(m);
    for (int k = 0; k < m; ++k) negs[k] = -s[k];
    GreedyResult gr = greedy(G, negs);
    const Ordering& ord = gr.base.support.front().first;
    // the prefixes of the decreasing order of -s are the sub-level sets of
    // s_{t-1}: they complete the row for step t-1
    offer_prefixes(best, ord.perm, prefix_values_of(gr));
    if (t > 1) {
      res.trace.record(t - 1, F.calls() - calls0, ms_since(t0),
                       red.f_amin + best.value, red.lift_dual_value(dual_best));
      last_recorded = t - 1;
    }

    double rho;
    if (rule == CgRule::FixedTwoOverT) {
      rho = 2.0 / double(t + 1);
    } else {
      double num = 0, den = 0;
      for (int k = 0; k < m; ++k) {
        double d = gr.base.s[k] - s[k];
        num += -s[k] * d;
        den += d * d;
      }
      if (den <= 1e-30) {
        res.status = SolveStatus::Converged;
        break;
      }
      rho = std::clamp(num / den, 0.0, 1.0);
    }
    for (auto& [o, wt] : combo) wt *= (1.0 - rho);
    combo.emplace_back(ord, rho);
    std::erase_if(combo, [](const auto& e) { return e.second < 1e-15; });
    for (int k = 0; k < m; ++k)
      s[k] = (1.0 - rho) * s[k] + rho * gr.base.s[k];

    double nv = neg_part_sum(s);
    if (nv > dual_best) {
      dual_best = nv;
      dual_s = s;
      snapshot = combo;
    }
    if (budget_hit(budget, F, calls0, t0)) {
      res.status = SolveStatus::BudgetExhausted;
      break;
    }
  }
  {  // close the last pair with one more level-set extraction
    std::vector<double> negs(m);
    for (int k = 0; k < m; ++k) negs[k] = -s[k];
    GreedyResult gr = greedy(G, negs);
    offer_prefixes(best, gr.base.support.front().first.perm,
                   prefix_values_of(gr));
    res.trace.record(last_recorded + 1, F.calls() - calls0, ms_since(t0),
                     red.f_amin + best.value, red.lift_dual_value(dual_best));
  }

  res.minimizer = red.lift_set(best.set);
  res.min_value = F(res.minimizer);
  res.minimal_minimizer = res.minimizer;
  res.maximal_minimizer = res.minimizer;
  double wsum = 0;
  for (auto& [o, wt] : snapshot) wsum += wt;
  BaseVector bv;
  bv.s = dual_s;
  for (auto& [o, wt] : snapshot) bv.support.emplace_back(o, wt / wsum);
  res.dual = red.lift_base(F, bv);
  res.gap = res.min_value - red.lift_dual_value(dual_best);
  if (res.status == SolveStatus::IterationCap && res.gap <= 1e-12)
    res.status = SolveStatus::Converged;
  return res;
}

SfmResult ellipsoid(const SetFunctionOracle& F, int steps, Budget budget,
                    EllipsoidDiag* diag) {
  auto t0 = Clock::now();
  std::uint64_t calls0 = F.calls();
  Reduction red = restrict_search(F);
  if (red.solved()) return solved_by_reduction(F, red, "ellipsoid");
  const SetFunctionOracle& G = red.reduced;
  const int m = G.p();
  if (m > 200)
    throw std::invalid_argument("ellipsoid: p > 200 after reduction");

  // E = { c + L u, |u| <= 1 } tracked via P = L L'; E_0 is the ball with
  // center (1/2)1 and radius sqrt(m)/2, the smallest ball around [0,1]^m
  std::vector<std::vector<double>> P(m, std::vector<double>(m, 0.0));
  for (int k = 0; k < m; ++k) P[k][k] = double(m) / 4.0;
  std::vector<double> c(m, 0.5);
  double half_logdet = 0.5 * m * std::log(double(m) / 4.0);

  PrimalBest best(m);
  DualBest dual;
  std::vector<double> sbar(m, 0.0);
  std::vector<Ordering> history;
  int n_sub = 0;
  SfmResult res;
  res.algorithm = "ellipsoid";
  res.status = SolveStatus::IterationCap;

  for (int t = 1; t <= steps; ++t) {
    std::vector<double> z(m, 0.0);
    bool feasible = true;
    for (int k = 0; k < m; ++k) {
      if (c[k] > 1.0) {
        z[k] = 1.0;
        feasible = false;
      } else if (c[k] < 0.0) {
        z[k] = -1.0;
        feasible = false;
      }
    }
    if (feasible) {
      GreedyResult gr = greedy(G, c);
      const Ordering& ord = gr.base.support.front().first;
      offer_prefixes(best, ord.perm, prefix_values_of(gr));
      history.push_back(ord);
      z = gr.base.s;
      ++n_sub;
      for (int k = 0; k < m; ++k) sbar[k] += (z[k] - sbar[k]) / double(n_sub);
      dual.offer_vertex(z, n_sub - 1);
      dual.offer_average(sbar, n_sub);
    }

    if (m == 1) {  // the general update degenerates at m = 1: halve
      double r = std::sqrt(P[0][0]);
      c[0] += (z[0] > 0 ? -1.0 : 1.0) * r / 2;
      P[0][0] = r * r / 4;
      half_logdet = 0.5 * std::log(P[0][0]);
    } else {
      std::vector<double> pz(m, 0.0);
      double zpz = 0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) pz[i] += P[i][j] * z[j];
      for (int i = 0; i < m; ++i) zpz += z[i] * pz[i];
      if (zpz <= 0) {
        res.status = SolveStatus::Numerical;
        break;
      }
      double inv = 1.0 / std::sqrt(zpz);
      for (int i = 0; i < m; ++i) c[i] -= pz[i] * inv / double(m + 1);
      double scale = double(m) * m / (double(m) * m - 1.0);
      double corr = 2.0 / (m + 1.0);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          P[i][j] = scale * (P[i][j] - corr * pz[i] * pz[j] / zpz);
      half_logdet += 0.5 * (m * std::log(scale) + std::log1p(-corr));
    }
    if (diag) diag->half_logdet.push_back(half_logdet);

    res.trace.record(t, F.calls() - calls0, ms_since(t0),
                     red.f_amin + best.value,
                     n_sub > 0 ? red.lift_dual_value(dual.value)
                               : -std::numeric_limits<double>::infinity());
    if (budget_hit(budget, F, calls0, t0)) {
      res.status = SolveStatus::BudgetExhausted;
      break;
    }
  }

  res.minimizer = red.lift_set(best.set);
  res.min_value = F(res.minimizer);
  res.minimal_minimizer = res.minimizer;
  res.maximal_minimizer = res.minimizer;
  if (n_sub > 0) {
    res.dual = red.lift_base(F, dual.to_base(history));
    res.gap = res.min_value - red.lift_dual_value(dual.value);
  } else {
    res.gap = std::numeric_limits<double>::infinity();
  }
  return res;
}

const char* to_string(SfmAlgo a) {
  switch (a) {
    case SfmAlgo::Auto: return "auto";
    case SfmAlgo::BruteForce: return "brute";
    case SfmAlgo::Subgradient: return "sg";
    case SfmAlgo::SubgradientPolyak: return "sg-polyak";
    case SfmAlgo::CondGrad: return "cg-ls";
    case SfmAlgo::CondGradFixed: return "cg-2t";
    case SfmAlgo::MinNormPoint: return "mnp";
    case SfmAlgo::Ellipsoid: return "ellipsoid";
  }
  return "?";
}

std::optional<SfmAlgo> sfm_algo_from_string(const std::string& name) {
  for (SfmAlgo a :
       {SfmAlgo::Auto, SfmAlgo::BruteForce, SfmAlgo::Subgradient,
        SfmAlgo::SubgradientPolyak, SfmAlgo::CondGrad, SfmAlgo::CondGradFixed,
        SfmAlgo::MinNormPoint, SfmAlgo::Ellipsoid})
    if (name == to_string(a)) return a;
  if (name == "cg") return SfmAlgo::CondGrad;
  return std::nullopt;
}

SfmResult minimize(const SetFunctionOracle& F, MinimizeOptions opt) {
  if (opt.algo == SfmAlgo::Auto) {
    if (F.has_fast_min()) {
      std::vector<double> zero(F.p(), 0.0);
      auto [minimal, v] = F.fast_min(zero);
      (void)v;
      SfmResult res;
      res.minimizer = minimal;
      res.min_value = F(minimal);
      res.gap = 0;
      res.minimal_minimizer = minimal;
      res.maximal_minimizer = minimal;
      res.algorithm = "fast-path";
      res.trace.record(0, F.calls(), 0, res.min_value, res.min_value);
      return res;
    }
    if (F.p() <= 14) return brute_force(F);
    MnpOptions mo;
    mo.tol = opt.mnp_tol;
    mo.budget = opt.budget;
    return min_norm_point(F, mo);
  }
  switch (opt.algo) {
    case SfmAlgo::BruteForce:
      return brute_force(F);
    case SfmAlgo::Subgradient:
      return subgradient(F, opt.steps, StepRule::FixedSqrt, opt.budget);
    case SfmAlgo::SubgradientPolyak:
      return subgradient(F, opt.steps, StepRule::Polyak, opt.budget);
    case SfmAlgo::CondGrad:
      return conditional_gradient(F, opt.steps, CgRule::LineSearch, opt.budget);
    case SfmAlgo::CondGradFixed:
      return conditional_gradient(F, opt.steps, CgRule::FixedTwoOverT,
                                  opt.budget);
    case SfmAlgo::MinNormPoint: {
      MnpOptions mo;
      mo.tol = opt.mnp_tol;
      mo.budget = opt.budget;
      return min_norm_point(F, mo);
    }
    case SfmAlgo::Ellipsoid:
      return ellipsoid(F, opt.steps, opt.budget);
    case SfmAlgo::Auto:
      break;
  }
  throw std::logic_error("minimize: unreachable");
}

}  // namespace subq
