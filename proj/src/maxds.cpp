#include "subq/maxds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "subq/zoo.hpp"

namespace subq {

namespace {

void check_monotone(const SetFunctionOracle& F, bool trust, const char* who) {
  if (F.p() <= 12) {
    if (!is_nondecreasing_bruteforce(F))
      throw std::invalid_argument(std::string(who) +
                                  ": F must be non-decreasing");
  } else if (!trust) {
    throw std::invalid_argument(std::string(who) +
                                ": p > 12, pass trust_monotone to skip check");
  }
}

MaxResult greedy_eager(const SetFunctionOracle& F, int k) {
  const int p = F.p();
  MaxResult res;
  res.chosen = Subset(p);
  double cur = 0;
  for (int round = 0; round < k; ++round) {
    int best = -1;
    double best_gain = 0;
    for (int e = 0; e < p; ++e) {
      if (res.chosen.contains(e)) continue;
      Subset cand = res.chosen;
      cand.add(e);
      double gain = F(cand) - cur;
      if (best < 0 || gain > best_gain) {
        best = e;
        best_gain = gain;
      }
    }
    if (best < 0 || best_gain <= 0) break;
    res.chosen.add(best);
    cur += best_gain;
    res.trace.emplace_back(best, best_gain);
  }
  res.value = F(res.chosen);
  return res;
}

MaxResult greedy_lazy(const SetFunctionOracle& F, int k) {
  const int p = F.p();
  MaxResult res;
  res.chosen = Subset(p);
  double cur = 0;
  // (gain, element, stamp): stale entries are re-evaluated on pop; ties on
  // gain prefer the smallest index, matching the eager sweep
  struct Entry {
    double gain;
    int elem;
    int stamp;
  };
  auto cmp = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.elem > b.elem;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  for (int e = 0; e < p; ++e) {
    Subset cand = res.chosen;
    cand.add(e);
    heap.push({F(cand) - cur, e, 0});
  }
  int stamp = 0;
  while (int(res.trace.size()) < k && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (top.stamp != stamp) {
      Subset cand = res.chosen;
      cand.add(top.elem);
      heap.push({F(cand) - cur, top.elem, stamp});
      continue;
    }
    if (top.gain <= 0) break;
    res.chosen.add(top.elem);
    cur += top.gain;
    res.trace.emplace_back(top.elem, top.gain);
    ++stamp;  // remaining entries go stale and refresh as they surface
  }
  res.value = F(res.chosen);
  return res;
}

}  // namespace

MaxResult greedy_max_cardinality(const SetFunctionOracle& F, int k, bool lazy,
                                 bool trust_monotone) {
  if (k < 1 || k > F.p())
    throw std::invalid_argument("greedy_max_cardinality: k out of range");
  check_monotone(F, trust_monotone, "greedy_max_cardinality");
  return lazy ? greedy_lazy(F, k) : greedy_eager(F, k);
}

MaxResult local_search_max(const SetFunctionOracle& F, const Subset& start,
                           int max_moves) {
  const int p = F.p();
  MaxResult res;
  res.chosen = start;
  double cur = F(start);
  const double improve_tol = 1e-12;
  for (int moves = 0; moves < max_moves; ++moves) {
    int best = -1;
    double best_val = cur;
    for (int e = 0; e < p; ++e) {
      Subset cand = res.chosen;
      if (cand.contains(e))
        cand.remove(e);
      else
        cand.add(e);
      double v = F(cand);
      if (v > best_val + improve_tol) {
        best = e;
        best_val = v;
      }
    }
    if (best < 0) {
      res.value = cur;
      return res;
    }
    double gain = best_val - cur;
    if (res.chosen.contains(best))
      res.chosen.remove(best);
    else
      res.chosen.add(best);
    cur = best_val;
    res.trace.emplace_back(best, gain);
  }
  res.value = cur;
  res.status = SolveStatus::BudgetExhausted;
  return res;
}

DsResult ds_minimize(const SetFunctionOracle& F, const SetFunctionOracle& G,
                     const Subset& start, SfmHandle sfm, int max_rounds,
                     int ordering_rule) {
  const int p = F.p();
  if (G.p() != p) throw std::invalid_argument("ds_minimize: ground sets differ");
  if (!sfm) sfm = sfm_handle_auto();

  DsResult res;
  Subset a = start;
  double obj = F(a) - G(a);
  res.trace.push_back({a, obj});
  const double improve_tol = 1e-12;

  for (int round = 0; round < max_rounds; ++round) {
    // modular lower bound of G, tight at A: marginals along an ordering that
    // lists A first; the alternative rule reverses the order inside blocks
    std::vector<int> order = a.elements();
    std::vector<int> rest = a.complement().elements();
    if (ordering_rule != 0) {
      std::reverse(order.begin(), order.end());
      std::reverse(rest.begin(), rest.end());
    }
    order.insert(order.end(), rest.begin(), rest.end());
    std::vector<double> chain = G.chain_values(order);
    std::vector<double> s(p);
    double prev = 0;
    for (int k = 0; k < p; ++k) {
      s[order[k]] = chain[k] - prev;
      prev = chain[k];
    }

    std::vector<double> negs(p);
    for (int k = 0; k < p; ++k) negs[k] = -s[k];
    auto [cand, minval] = sfm(F, negs);
    (void)minval;
    double cand_obj = F(cand) - G(cand);

    bool moved = false;
    if (cand != a && cand_obj < obj - improve_tol) {
      a = cand;
      obj = cand_obj;
      res.trace.push_back({a, obj});
      moved = true;
    }
    if (!moved) {
      // single-flip polish: the modular-bound iteration alone does not
      // certify flip-stability, so scan for an improving flip before stopping
      int best = -1;
      double best_obj = obj;
      for (int e = 0; e < p; ++e) {
        Subset flip = a;
        if (flip.contains(e))
          flip.remove(e);
        else
          flip.add(e);
        double v = F(flip) - G(flip);
        if (v < best_obj - improve_tol) {
          best = e;
          best_obj = v;
        }
      }
      if (best < 0) {
        res.minimizer = a;
        res.value = obj;
        return res;
      }
      if (a.contains(best))
        a.remove(best);
      else
        a.add(best);
      obj = best_obj;
      res.trace.push_back({a, obj});
    }
  }
  res.minimizer = a;
  res.value = obj;
  res.status = SolveStatus::BudgetExhausted;
  return res;
}

}  // namespace subq
