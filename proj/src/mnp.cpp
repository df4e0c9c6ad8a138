#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "subq/wolfe.hpp"

namespace subq {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Upper-triangular factor R with R'R = X'X + 1 over the active columns.
// Adding the rank-one 1 1' keeps the system nonsingular for affinely
// independent columns and leaves the affine projection unchanged.
class TriFactor {
 public:
  explicit TriFactor(int cap) : r_(Eigen::MatrixXd::Zero(cap, cap)) {}

  int size() const { return n_; }

  // gram[i] = x_i' x_new + 1 for active i, diag = x_new' x_new + 1
  bool add(const std::vector<double>& gram, double diag) {
    Eigen::VectorXd r(n_);
    for (int i = 0; i < n_; ++i) {
      double s = gram[i];
      for (int k = 0; k < i; ++k) s -= r_(k, i) * r(k);
      r(i) = s / r_(i, i);
    }
    double rho2 = diag - r.squaredNorm();
    if (!(rho2 > 1e-12 * diag)) return false;
    for (int i = 0; i < n_; ++i) r_(i, n_) = r(i);
    r_(n_, n_) = std::sqrt(rho2);
    ++n_;
    return true;
  }

  void remove(int idx) {
    // drop column idx, then restore triangularity with Givens rotations
    for (int j = idx; j + 1 < n_; ++j) r_.col(j).head(n_) = r_.col(j + 1).head(n_);
    --n_;
    for (int i = idx; i < n_; ++i) {
      double a = r_(i, i), b = r_(i + 1, i);
      double hyp = std::hypot(a, b);
      if (hyp == 0) continue;
      double c = a / hyp, s = b / hyp;
      for (int j = i; j < n_; ++j) {
        double u = r_(i, j), v = r_(i + 1, j);
        r_(i, j) = c * u + s * v;
        r_(i + 1, j) = -s * u + c * v;
      }
      r_(i + 1, i) = 0;
    }
  }

  // zeta proportional to (R'R)^{-1} 1, normalized to sum one
  bool solve_weights(std::vector<double>& zeta) const {
    Eigen::VectorXd u(n_), v(n_);
    for (int i = 0; i < n_; ++i) {
      double s = 1.0;
      for (int k = 0; k < i; ++k) s -= r_(k, i) * u(k);
      u(i) = s / r_(i, i);
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double s = u(i);
      for (int k = i + 1; k < n_; ++k) s -= r_(i, k) * v(k);
      v(i) = s / r_(i, i);
    }
    double total = v.sum();
    if (!std::isfinite(total) || std::abs(total) < 1e-300) return false;
    zeta.resize(n_);
    for (int i = 0; i < n_; ++i) {
      zeta[i] = v(i) / total;
      if (!std::isfinite(zeta[i])) return false;
    }
    return true;
  }

  // rebuild from scratch (used after numerical trouble)
  bool rebuild(const Eigen::MatrixXd& m) {
    int k = int(m.rows());
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) return false;
    r_.topLeftCorner(k, k) = llt.matrixU();
    n_ = k;
    return true;
  }

 private:
  int n_ = 0;
  Eigen::MatrixXd r_;
};

}  // namespace

WolfeResult wolfe_min_norm(const SetFunctionOracle& G, WolfeOptions opt,
                           const WolfeHook& hook) {
  const int m = G.p();
  const int max_major =
      opt.max_major_cycles > 0 ? opt.max_major_cycles : 50 + 20 * m;
  auto t0 = Clock::now();
  std::uint64_t calls0 = G.calls();

  Eigen::MatrixXd X(m, 16);  // vertex columns, grown on demand
  std::vector<Ordering> orderings;
  std::vector<int> active;
  std::vector<double> eta;
  TriFactor fac(m + 2);

  auto push_vertex = [&](const BaseVector& b) {
    if (int(orderings.size()) == X.cols())
      X.conservativeResize(Eigen::NoChange, X.cols() * 2);
    for (int i = 0; i < m; ++i) X(i, orderings.size()) = b.s[i];
    orderings.push_back(b.support.front().first);
    return int(orderings.size()) - 1;
  };

  // start from the ascending-index ordering's vertex
  {
    std::vector<int> id(m);
    std::iota(id.begin(), id.end(), 0);
    std::vector<double> prefix = G.chain_values(id);
    BaseVector b;
    b.s.resize(m);
    double prev = 0;
    for (int k = 0; k < m; ++k) {
      b.s[k] = prefix[k] - prev;
      prev = prefix[k];
    }
    b.support.emplace_back(Ordering{id}, 1.0);
    int idx = push_vertex(b);
    active.push_back(idx);
    eta.assign(1, 1.0);
    std::vector<double> g0;
    fac.add(g0, X.col(idx).squaredNorm() + 1.0);
  }

  Eigen::VectorXd y = X.col(active[0]);
  WolfeResult res;
  res.status = SolveStatus::IterationCap;

  auto add_to_active = [&](int idx) -> bool {
    std::vector<double> gram(active.size());
    for (std::size_t i = 0; i < active.size(); ++i)
      gram[i] = X.col(active[i]).dot(X.col(idx)) + 1.0;
    if (fac.add(gram, X.col(idx).squaredNorm() + 1.0)) return true;
    // refactorize once and retry before giving up
    Eigen::MatrixXd mm(active.size(), active.size());
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t j = 0; j < active.size(); ++j)
        mm(i, j) = X.col(active[i]).dot(X.col(active[j])) + 1.0;
    if (!fac.rebuild(mm)) return false;
    return fac.add(gram, X.col(idx).squaredNorm() + 1.0);
  };

  int major = 0;
  for (major = 1; major <= max_major; ++major) {
    std::vector<double> negy(m);
    for (int k = 0; k < m; ++k) negy[k] = -y(k);
    GreedyResult gr = greedy(G, negy);
    if (hook) hook(major, std::vector<double>(y.data(), y.data() + m), gr);

    Eigen::Map<const Eigen::VectorXd> shat(gr.base.s.data(), m);
    double ynorm2 = y.squaredNorm();
    double quad_gap = ynorm2 - y.dot(shat);
    res.quad_gap = quad_gap;
    if (quad_gap <= opt.tol * (1.0 + ynorm2)) {
      res.status = SolveStatus::Converged;
      break;
    }
    if (quad_gap <= 1e-14 * (1.0 + ynorm2)) {  // numeric floor reached
      res.status = SolveStatus::Converged;
      break;
    }
    if (G.calls() - calls0 >= opt.budget.max_oracle_calls ||
        ms_since(t0) >= opt.budget.max_wall_ms) {
      res.status = SolveStatus::BudgetExhausted;
      break;
    }

    int idx = push_vertex(gr.base);
    if (!add_to_active(idx)) {
      // dependent vertex: drop it and stop, keeping the current certificate
      orderings.pop_back();
      res.status = SolveStatus::Numerical;
      break;
    }
    active.push_back(idx);
    eta.push_back(0.0);

    // minor cycles: affine projection, then walk back into the convex hull
    bool trouble = true;
    for (int minor = 0; minor < 3 * m + 30; ++minor) {
      std::vector<double> zeta;
      if (!fac.solve_weights(zeta)) {
        Eigen::MatrixXd mm(active.size(), active.size());
        for (std::size_t i = 0; i < active.size(); ++i)
          for (std::size_t j = 0; j < active.size(); ++j)
            mm(i, j) = X.col(active[i]).dot(X.col(active[j])) + 1.0;
        if (!fac.rebuild(mm) || !fac.solve_weights(zeta)) {
          trouble = true;
          break;
        }
      }
      double zmin = *std::min_element(zeta.begin(), zeta.end());
      if (zmin >= -1e-12) {
        eta = zeta;
        trouble = false;
        break;
      }
      // largest step alpha in [0,1) keeping eta + alpha (zeta - eta) >= 0;
      // the blocking vertex is removed explicitly so roundoff cannot stall
      double alpha = 1.0;
      int blocking = -1;
      for (std::size_t j = 0; j < eta.size(); ++j)
        if (zeta[j] < eta[j]) {
          double a = eta[j] / (eta[j] - zeta[j]);
          if (a < alpha || blocking < 0) {
            alpha = std::min(alpha, a);
            blocking = int(j);
          }
        }
      alpha = std::clamp(alpha, 0.0, 1.0);
      for (std::size_t j = 0; j < eta.size(); ++j)
        eta[j] += alpha * (zeta[j] - eta[j]);
      if (blocking >= 0) eta[blocking] = 0.0;
      for (int j = int(eta.size()) - 1; j >= 0; --j) {
        if (eta[j] <= 1e-14 && eta.size() > 1) {
          fac.remove(j);
          active.erase(active.begin() + j);
          eta.erase(eta.begin() + j);
        }
      }
    }
    if (trouble) {
      // drop the most recent vertex and finish with the previous iterate
      int j = int(active.size()) - 1;
      fac.remove(j);
      active.erase(active.begin() + j);
      eta.erase(eta.begin() + j);
      double total = std::accumulate(eta.begin(), eta.end(), 0.0);
      if (total <= 0) {
        eta.assign(eta.size(), 1.0 / double(eta.size()));
      } else {
        for (double& e : eta) e /= total;
      }
      res.status = SolveStatus::Numerical;
      y.setZero();
      for (std::size_t j2 = 0; j2 < active.size(); ++j2)
        y += eta[j2] * X.col(active[j2]);
      break;
    }
    y.setZero();
    for (std::size_t j = 0; j < active.size(); ++j)
      y += eta[j] * X.col(active[j]);
  }
  res.major_cycles = std::min(major, max_major);

  res.y.assign(y.data(), y.data() + m);
  res.base.s = res.y;
  double total = std::accumulate(eta.begin(), eta.end(), 0.0);
  for (std::size_t j = 0; j < active.size(); ++j)
    res.base.support.emplace_back(orderings[active[j]],
                                  total > 0 ? eta[j] / total : 0.0);
  return res;
}

SfmResult min_norm_point(const SetFunctionOracle& F, MnpOptions opt) {
  auto t0 = Clock::now();
  std::uint64_t calls0 = F.calls();
  Reduction red = restrict_search(F);
  SfmResult res;
  res.algorithm = "mnp";
  if (red.solved()) return solved_by_reduction(F, red, "mnp");
  const SetFunctionOracle& G = red.reduced;
  const int m = G.p();

  struct Tracker {
    Subset best_set;
    double best_value = 0;
    double dual_best = -std::numeric_limits<double>::infinity();
    explicit Tracker(int p) : best_set(p) {}
  } track(m);

  WolfeOptions wopt;
  wopt.tol = opt.tol;
  wopt.max_major_cycles = opt.max_major_cycles;
  wopt.budget = opt.budget;
  WolfeHook hook = [&](int major, const std::vector<double>& y,
                       const GreedyResult& gr) {
    const auto& ord = gr.base.support.front().first.perm;
    Subset acc(m);
    double val = 0;
    for (std::size_t k = 0; k < ord.size(); ++k) {
      acc.add(ord[k]);
      val += gr.base.s[ord[k]];
      if (val < track.best_value ||
          (val == track.best_value && acc.count() < track.best_set.count())) {
        track.best_value = val;
        track.best_set = acc;
      }
    }
    track.dual_best = std::max(track.dual_best, neg_part_sum(y));
    res.trace.record(major - 1, F.calls() - calls0, ms_since(t0),
                     red.f_amin + track.best_value,
                     red.lift_dual_value(track.dual_best));
  };

  WolfeResult wr = wolfe_min_norm(G, wopt, hook);
  res.status = wr.status;

  // lattice extremes from thresholding the minimum-norm base (Prop. 8.7)
  Subset minimal(m), maximal(m);
  for (int k = 0; k < m; ++k) {
    if (wr.y[k] < 0) minimal.add(k);
    if (wr.y[k] <= 0) maximal.add(k);
  }
  double v_min = G(minimal), v_max = G(maximal);
  Subset arg = track.best_set;
  double val = track.best_value;
  auto offer = [&](const Subset& a, double v) {
    if (v < val || (v == val && a.count() < arg.count())) {
      val = v;
      arg = a;
    }
  };
  offer(minimal, v_min);
  offer(maximal, v_max);
  track.dual_best = std::max(track.dual_best, neg_part_sum(wr.y));
  res.trace.record(wr.major_cycles, F.calls() - calls0, ms_since(t0),
                   red.f_amin + val, red.lift_dual_value(track.dual_best));

  res.minimizer = red.lift_set(arg);
  res.min_value = F(res.minimizer);
  res.minimal_minimizer = red.lift_set(minimal);
  res.maximal_minimizer = red.lift_set(maximal);
  res.dual = red.lift_base(F, wr.base);
  res.gap = res.min_value - red.lift_dual_value(track.dual_best);
  return res;
}

}  // namespace subq
