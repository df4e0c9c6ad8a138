#include "subq/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "subq/graph.hpp"
#include "subq/wolfe.hpp"
#include "subq/zoo.hpp"

namespace subq {

SfmHandle sfm_handle_brute() {
  return [](const SetFunctionOracle& F, const std::vector<double>& addend) {
    return brute_force_min_maximal(F, addend);
  };
}

SfmHandle sfm_handle_mnp(double tol) {
  return [tol](const SetFunctionOracle& F, const std::vector<double>& addend) {
    SetFunctionOracle G = add_modular(F, addend);
    MnpOptions opt;
    opt.tol = tol;
    SfmResult r = min_norm_point(G, opt);
    double v =
        F(r.maximal_minimizer) + modular_sum(addend, r.maximal_minimizer);
    return std::make_pair(r.maximal_minimizer, v);
  };
}

SfmHandle sfm_handle_auto(double mnp_tol) {
  return [mnp_tol](const SetFunctionOracle& F,
                   const std::vector<double>& addend) {
    if (F.has_fast_min()) return F.fast_min(addend);
    if (F.p() <= 20) return brute_force_min_maximal(F, addend);
    return sfm_handle_mnp(mnp_tol)(F, addend);
  };
}

SeparableProblem SeparableProblem::quadratic(std::vector<double> z,
                                             std::vector<double> weights) {
  SeparableProblem p;
  p.p_ = int(z.size());
  p.quadratic_ = true;
  p.z_ = std::move(z);
  if (weights.empty()) {
    p.tau_.assign(p.p_, 1.0);
  } else {
    if (int(weights.size()) != p.p_)
      throw std::invalid_argument("quadratic: weights size mismatch");
    for (double t : weights)
      if (!(t > 0)) throw std::invalid_argument("quadratic: weights must be > 0");
    p.tau_ = std::move(weights);
  }
  return p;
}

SeparableProblem SeparableProblem::custom(int p, Scalar psi, Scalar psi_prime,
                                          Scalar psi_conj,
                                          Scalar psi_conj_prime) {
  SeparableProblem out;
  out.p_ = p;
  out.quadratic_ = false;
  out.psi_ = std::move(psi);
  out.dpsi_ = std::move(psi_prime);
  out.conj_ = std::move(psi_conj);
  out.dconj_ = std::move(psi_conj_prime);
  return out;
}

double SeparableProblem::psi(int k, double w) const {
  if (quadratic_) return 0.5 * tau_[k] * (w - z_[k]) * (w - z_[k]);
  return psi_(k, w);
}
double SeparableProblem::psi_prime(int k, double w) const {
  if (quadratic_) return tau_[k] * (w - z_[k]);
  return dpsi_(k, w);
}
double SeparableProblem::psi_conj(int k, double s) const {
  if (quadratic_) return s * z_[k] + 0.5 * s * s / tau_[k];
  return conj_(k, s);
}
double SeparableProblem::psi_conj_prime(int k, double s) const {
  if (quadratic_) return z_[k] + s / tau_[k];
  return dconj_(k, s);
}

SeparableProblem SeparableProblem::slice(const std::vector<int>& idx) const {
  if (quadratic_) {
    std::vector<double> z(idx.size()), tau(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      z[i] = z_[idx[i]];
      tau[i] = tau_[idx[i]];
    }
    return quadratic(std::move(z), std::move(tau));
  }
  auto map = std::make_shared<std::vector<int>>(idx);
  auto wrap = [map](const Scalar& fn) {
    return [map, fn](int k, double x) { return fn((*map)[k], x); };
  };
  return custom(int(idx.size()), wrap(psi_), wrap(dpsi_), wrap(conj_),
                wrap(dconj_));
}

// f(w) - w's + sum_k [psi(w_k) + psi*(-s_k) + w_k s_k]; the dot products
// cancel, leaving primal objective minus dual objective.
double prox_gap(const SetFunctionOracle& F, const SeparableProblem& prob,
                const std::vector<double>& w, const std::vector<double>& s) {
  double g = lovasz(F, w);
  for (int k = 0; k < prob.p(); ++k)
    g += prob.psi(k, w[k]) + prob.psi_conj(k, -s[k]);
  return g;
}

double prox_gap_integral_quadratic(const SetFunctionOracle& F,
                                   const SeparableProblem& prob,
                                   const std::vector<double>& w,
                                   const std::vector<double>& s) {
  if (!prob.is_quadratic())
    throw std::invalid_argument("gap integral: quadratic psi only");
  const int p = prob.p();
  // integrand(alpha) = (F + psi'(alpha))({w >= alpha}) - (s + psi'(alpha))_-(V)
  // is piecewise linear between the breakpoints of {w} and the sign changes
  // of s_k + tau_k (alpha - z_k)
  std::set<double> cuts;
  for (int k = 0; k < p; ++k) {
    cuts.insert(w[k]);
    cuts.insert(prob.z()[k] - s[k] / prob.tau()[k]);
  }
  double lo = *cuts.begin() - 1.0, hi = *cuts.rbegin() + 1.0;
  cuts.insert(lo);
  cuts.insert(hi);

  auto integrand = [&](double a) {
    Subset lvl(p);
    for (int k = 0; k < p; ++k)
      if (w[k] >= a) lvl.add(k);
    double v = F(lvl);
    lvl.for_each([&](int k) { v += prob.psi_prime(k, a); });
    for (int k = 0; k < p; ++k)
      v -= std::min(s[k] + prob.psi_prime(k, a), 0.0);
    return v;
  };

  double total = 0;
  double prev = lo;
  for (double c : cuts) {
    if (c <= prev) continue;
    double mid_lo = integrand(std::nextafter(prev, c));
    double mid_hi = integrand(std::nextafter(c, prev));
    total += 0.5 * (mid_lo + mid_hi) * (c - prev);  // exact for linear pieces
    prev = c;
  }
  return total;
}

ProxResult prox_quadratic_mnp(const SetFunctionOracle& F,
                              const std::vector<double>& z, double tol) {
  const int p = F.p();
  if (int(z.size()) != p) throw std::invalid_argument("prox: bad z");
  std::vector<double> negz(p);
  for (int k = 0; k < p; ++k) negz[k] = -z[k];
  SetFunctionOracle G = add_modular(F, negz);  // B(G) = B(F) - z
  WolfeOptions opt;
  opt.tol = tol;
  WolfeResult wr = wolfe_min_norm(G, opt);
  ProxResult res;
  res.w.resize(p);
  res.s.resize(p);
  for (int k = 0; k < p; ++k) {
    res.w[k] = -wr.y[k];
    res.s[k] = wr.y[k] + z[k];
  }
  res.status = wr.status;
  res.gap = prox_gap(F, SeparableProblem::quadratic(z), res.w, res.s);
  return res;
}

namespace {

// step (1) of the divide-and-conquer scheme: the unique t with t(V) = F(V)
// minimizing sum_j psi*_j(-t_j); t_j = -psi'_j(alpha) for the alpha solving
// sum_j psi'_j(alpha) = -F(V)
std::vector<double> dc_first_step(const SeparableProblem& prob, double fv,
                                  double* alpha_out) {
  const int p = prob.p();
  if (prob.is_quadratic()) {
    double tausum = 0, tz = 0;
    for (int k = 0; k < p; ++k) {
      tausum += prob.tau()[k];
      tz += prob.tau()[k] * prob.z()[k];
    }
    double lambda = (tz - fv) / tausum;  // alpha in the generic notation
    std::vector<double> t(p);
    for (int k = 0; k < p; ++k)
      t[k] = -prob.tau()[k] * (lambda - prob.z()[k]);
    if (alpha_out) *alpha_out = lambda;
    return t;
  }
  auto h = [&](double a) {
    double v = 0;
    for (int k = 0; k < p; ++k) v += prob.psi_prime(k, a);
    return v + fv;  // root of sum psi' = -F(V)
  };
  double lo = -1, hi = 1;
  for (int it = 0; it < 200 && h(lo) > 0; ++it) lo *= 2;
  for (int it = 0; it < 200 && h(hi) < 0; ++it) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (h(mid) <= 0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * (1 + std::abs(lo))) break;
  }
  double alpha = 0.5 * (lo + hi);
  std::vector<double> t(p);
  for (int k = 0; k < p; ++k) t[k] = -prob.psi_prime(k, alpha);
  if (alpha_out) *alpha_out = alpha;
  return t;
}

struct DcState {
  std::vector<double> w, s;
  const SfmHandle* sfm;
};

int dc_recurse(const SetFunctionOracle& H, const SeparableProblem& prob,
               const std::vector<int>& global, DcState& st) {
  const int p = H.p();
  Subset full = Subset::full_set(p);
  double fv = H(full);
  double alpha = 0;
  std::vector<double> t = dc_first_step(prob, fv, &alpha);

  std::vector<double> negt(p);
  for (int k = 0; k < p; ++k) negt[k] = -t[k];
  auto [a, minval] = (*st.sfm)(H, negt);

  double tight_tol = 1e-11 * (1.0 + std::abs(fv));
  if (minval >= -tight_tol || a.empty() || a.is_full()) {
    for (int k = 0; k < p; ++k) {
      st.s[global[k]] = t[k];
      st.w[global[k]] = prob.psi_conj_prime(k, -t[k]);
    }
    return 1;
  }

  auto a_elems = a.elements();
  auto rest_elems = a.complement().elements();
  std::vector<int> ga(a_elems.size()), gr(rest_elems.size());
  for (std::size_t i = 0; i < a_elems.size(); ++i) ga[i] = global[a_elems[i]];
  for (std::size_t i = 0; i < rest_elems.size(); ++i)
    gr[i] = global[rest_elems[i]];

  SetFunctionOracle restr = restrict_to(H, a);
  SetFunctionOracle contr = contract_on(H, a);
  int d1 = dc_recurse(restr, prob.slice(a_elems), ga, st);
  int d2 = dc_recurse(contr, prob.slice(rest_elems), gr, st);
  return 1 + std::max(d1, d2);
}

}  // namespace

ProxResult divide_and_conquer(const SetFunctionOracle& F,
                              const SeparableProblem& prob, SfmHandle sfm) {
  const int p = F.p();
  if (prob.p() != p) throw std::invalid_argument("divide_and_conquer: size");
  if (!sfm) sfm = sfm_handle_auto();
  ProxResult res;
  res.w.assign(p, 0.0);
  res.s.assign(p, 0.0);
  DcState st{res.w, res.s, &sfm};
  std::vector<int> global(p);
  std::iota(global.begin(), global.end(), 0);
  res.recursion_depth = dc_recurse(F, prob, global, st);
  res.w = st.w;
  res.s = st.s;
  res.gap = prox_gap(F, prob, res.w, res.s);
  return res;
}

std::pair<Subset, Subset> threshold_minimizers(const ProxResult& prox,
                                               double alpha) {
  const int p = int(prox.w.size());
  if (!(prox.gap <= kTightTol))
    throw std::invalid_argument("threshold_minimizers: prox gap too large");
  Subset minimal(p), maximal(p);
  for (int k = 0; k < p; ++k) {
    if (prox.w[k] > alpha) minimal.add(k);
    if (prox.w[k] >= alpha) maximal.add(k);
  }
  return {minimal, maximal};
}

std::vector<double> pava(const std::vector<double>& z,
                         const std::vector<double>& weights) {
  const int p = int(z.size());
  if (!weights.empty() && int(weights.size()) != p)
    throw std::invalid_argument("pava: weights size mismatch");
  struct Block {
    double wsum, wz;
    int len;
  };
  std::vector<Block> stack;
  stack.reserve(p);
  for (int k = 0; k < p; ++k) {
    double wk = weights.empty() ? 1.0 : weights[k];
    stack.push_back({wk, wk * z[k], 1});
    // pool while the non-increasing constraint is violated
    while (stack.size() > 1) {
      auto& b = stack[stack.size() - 2];
      auto& t = stack.back();
      if (b.wz / b.wsum >= t.wz / t.wsum) break;
      b.wsum += t.wsum;
      b.wz += t.wz;
      b.len += t.len;
      stack.pop_back();
    }
  }
  std::vector<double> out(p);
  int pos = 0;
  for (const Block& b : stack) {
    double v = b.wz / b.wsum;
    for (int i = 0; i < b.len; ++i) out[pos++] = v;
  }
  return out;
}

IsotonicImprovement improve_primal_isotonic(const SetFunctionOracle& F,
                                            const std::vector<double>& s) {
  const int p = F.p();
  if (int(s.size()) != p) throw std::invalid_argument("isotonic: bad s");
  // increasing order of s; the greedy base for that ordering supports both
  // the naive candidate -s and the corrected one
  std::vector<int> ord(p);
  std::iota(ord.begin(), ord.end(), 0);
  std::stable_sort(ord.begin(), ord.end(),
                   [&](int a, int b) { return s[a] < s[b]; });
  std::vector<double> prefix = F.chain_values(ord);
  std::vector<double> t(p);
  {
    double prev = 0;
    for (int k = 0; k < p; ++k) {
      t[k] = prefix[k] - prev;  // t in ordering coordinates
      prev = prefix[k];
    }
  }
  // minimize sum_i [ u_i t_i + 1/2 u_i^2 ] with u non-increasing
  std::vector<double> target(p);
  for (int k = 0; k < p; ++k) target[k] = -t[k];
  std::vector<double> u = pava(target);

  IsotonicImprovement out;
  out.w.assign(p, 0.0);
  double fw = 0, wn2 = 0, naive_f = 0, sn2 = 0;
  for (int k = 0; k < p; ++k) {
    out.w[ord[k]] = u[k];
    fw += u[k] * t[k];
    wn2 += u[k] * u[k];
    naive_f += -s[ord[k]] * t[k];
    sn2 += s[k] * s[k];
  }
  out.improved_gap = fw + 0.5 * wn2 + 0.5 * sn2;
  out.naive_gap = naive_f + sn2;  // f(-s) + 1/2|s|^2 + 1/2|s|^2
  return out;
}

ProxResult transfer_to_P(const SetFunctionOracle& F, const ProxResult& prox_b,
                         const SeparableProblem& prob) {
  (void)F;
  const int p = prob.p();
  ProxResult out;
  out.w.resize(p);
  out.s.resize(p);
  for (int k = 0; k < p; ++k) {
    out.w[k] = std::max(prox_b.w[k], 0.0);
    double unconstrained = -prob.psi_prime(k, 0.0);
    out.s[k] = std::min(prox_b.s[k], unconstrained);
  }
  out.gap = 0;
  return out;
}

namespace {

void require_nondecreasing(const SetFunctionOracle& F, bool trust,
                           const char* who) {
  if (F.p() <= 12) {
    if (!is_nondecreasing_bruteforce(F))
      throw std::invalid_argument(std::string(who) +
                                  ": F must be non-decreasing");
  } else if (!trust) {
    throw std::invalid_argument(std::string(who) +
                                ": p > 12, pass trust_monotone to skip check");
  }
}

}  // namespace

ProxResult transfer_to_Pplus(const SetFunctionOracle& F,
                             const ProxResult& prox_b,
                             const SeparableProblem& prob,
                             bool trust_monotone) {
  require_nondecreasing(F, trust_monotone, "transfer_to_Pplus");
  const int p = prob.p();
  ProxResult out;
  out.w.resize(p);
  out.s.resize(p);
  for (int k = 0; k < p; ++k) {
    double w_unc = prob.psi_conj_prime(k, 0.0);  // argmin psi_k
    out.w[k] = std::min(std::max(prox_b.w[k], 0.0), w_unc);
    double s_unc = -prob.psi_prime(k, 0.0);
    out.s[k] = std::max(std::min(prox_b.s[k], s_unc), 0.0);
  }
  out.gap = 0;
  return out;
}

ProxResult transfer_to_absP(const SetFunctionOracle& F,
                            const SeparableProblem& prob,
                            const ProxSolver& solve_on_base,
                            bool trust_monotone) {
  require_nondecreasing(F, trust_monotone, "transfer_to_absP");
  const int p = prob.p();
  std::vector<double> eps(p);
  for (int k = 0; k < p; ++k) {
    double d = prob.psi_conj_prime(k, 0.0);  // argmax of -psi*(-s) location
    eps[k] = d < 0 ? -1.0 : 1.0;
  }
  // adjusted problem psi~_k(v) = psi_k(eps_k v)
  SeparableProblem adj = SeparableProblem::custom(
      p,
      [&prob, eps](int k, double v) { return prob.psi(k, eps[k] * v); },
      [&prob, eps](int k, double v) {
        return eps[k] * prob.psi_prime(k, eps[k] * v);
      },
      [&prob, eps](int k, double s) { return prob.psi_conj(k, eps[k] * s); },
      [&prob, eps](int k, double s) {
        return eps[k] * prob.psi_conj_prime(k, eps[k] * s);
      });

  ProxResult base = solve_on_base
                        ? solve_on_base(F, adj)
                        : divide_and_conquer(F, adj, sfm_handle_auto());
  ProxResult out;
  out.w.resize(p);
  out.s.resize(p);
  for (int k = 0; k < p; ++k) {
    out.w[k] = eps[k] * std::max(base.w[k], 0.0);
    double s_unc = -eps[k] * prob.psi_prime(k, 0.0);  // -psi~'_k(0)
    double sk = std::min(base.s[k], s_unc);
    out.s[k] = eps[k] * sk;
  }
  out.recursion_depth = base.recursion_depth;
  out.gap = 0;
  return out;
}

double dual_norm_newton(const SetFunctionOracle& F,
                        const std::vector<double>& s_base,
                        const std::vector<double>& t, SfmHandle sfm) {
  const int p = F.p();
  if (int(t.size()) != p || int(s_base.size()) != p)
    throw std::invalid_argument("dual_norm_newton: sizes");
  double tv = 0;
  for (double x : t) {
    if (x < 0) throw std::invalid_argument("dual_norm_newton: t must be >= 0");
    tv += x;
  }
  if (tv <= 0) throw std::invalid_argument("dual_norm_newton: t must be non-zero");
  if (!sfm) sfm = sfm_handle_auto();

  // G = F - s_base is non-negative on subsets because s_base in P(F)
  std::vector<double> neg_sb(p);
  for (int k = 0; k < p; ++k) neg_sb[k] = -s_base[k];
  SetFunctionOracle G = add_modular(F, neg_sb);

  Subset b = Subset::full_set(p);
  double gv = G(b);
  if (gv < -G.tol()) throw std::invalid_argument("dual_norm_newton: s_base not in P(F)");
  double beta = gv / tv;
  const double tol = 1e-12 * (1.0 + std::abs(gv));
  for (int it = 0; it < 2 * p + 10; ++it) {
    // minimize G - beta t over subsets of b
    SetFunctionOracle H =
        int(b.count()) == p ? G : restrict_to(G, b);
    auto be = b.elements();
    std::vector<double> addend(be.size());
    for (std::size_t i = 0; i < be.size(); ++i) addend[i] = -beta * t[be[i]];
    auto [a_local, minval] = sfm(H, addend);
    if (minval >= -tol) return beta;
    Subset a(p);
    a_local.for_each([&](int k) { a.add(be[k]); });
    double ga = G(a);
    double ta = modular_sum(t, a);
    if (ta <= 0)
      throw std::runtime_error("dual_norm_newton: degenerate Newton step");
    beta = ga / ta;
    b = a;
  }
  throw std::runtime_error("dual_norm_newton: did not converge in 2p steps");
}

double omega_inf_dual(const SetFunctionOracle& F, const std::vector<double>& s,
                      SfmHandle sfm) {
  const int p = F.p();
  std::vector<double> abs_s(p);
  bool zero = true;
  for (int k = 0; k < p; ++k) {
    abs_s[k] = std::abs(s[k]);
    if (abs_s[k] > 0) zero = false;
  }
  if (zero) return 0.0;
  std::vector<double> origin(p, 0.0);
  double alpha = dual_norm_newton(F, origin, abs_s, std::move(sfm));
  if (alpha <= 0) return std::numeric_limits<double>::infinity();
  return 1.0 / alpha;
}

namespace {

// divide-and-conquer on P_+(F) for the Omega_2 machinery; mode selects the
// norm computation (u_k = z_k^2 F(V)/|z|^2) or the prox computation
// (u_k = z_k^2 min{1, F(V)/|z|^2})
void omega2_recurse(const SetFunctionOracle& H, const std::vector<double>& z,
                    const std::vector<int>& global, bool prox_mode,
                    const SfmHandle& sfm, std::vector<double>& u_out) {
  const int p = H.p();
  double zn2 = 0;
  for (double x : z) zn2 += x * x;
  double fv = H(Subset::full_set(p));
  std::vector<double> u(p, 0.0);
  if (zn2 > 0) {
    double ratio = fv / zn2;
    if (prox_mode) ratio = std::min(1.0, ratio);
    for (int k = 0; k < p; ++k) u[k] = z[k] * z[k] * ratio;
  }
  std::vector<double> negu(p);
  for (int k = 0; k < p; ++k) negu[k] = -u[k];
  auto [a, minval] = sfm(H, negu);
  double tight_tol = 1e-11 * (1.0 + std::abs(fv));
  if (minval >= -tight_tol || a.empty() || a.is_full()) {
    for (int k = 0; k < p; ++k) u_out[global[k]] = u[k];
    return;
  }
  auto ae = a.elements();
  auto re = a.complement().elements();
  std::vector<int> ga(ae.size()), gr(re.size());
  std::vector<double> za(ae.size()), zr(re.size());
  for (std::size_t i = 0; i < ae.size(); ++i) {
    ga[i] = global[ae[i]];
    za[i] = z[ae[i]];
  }
  for (std::size_t i = 0; i < re.size(); ++i) {
    gr[i] = global[re[i]];
    zr[i] = z[re[i]];
  }
  omega2_recurse(restrict_to(H, a), za, ga, prox_mode, sfm, u_out);
  omega2_recurse(contract_on(H, a), zr, gr, prox_mode, sfm, u_out);
}

}  // namespace

Omega2Result omega_q_norm_and_prox(const SetFunctionOracle& F,
                                   const std::vector<double>& z, int q,
                                   SfmHandle sfm, bool trust_monotone) {
  if (q != 2)
    throw std::invalid_argument("omega_q: only q = 2 is implemented");
  require_nondecreasing(F, trust_monotone, "omega_q");
  const int p = F.p();
  for (int k = 0; k < p; ++k) {
    Subset sk(p);
    sk.add(k);
    if (!(F(sk) > 0))
      throw std::invalid_argument("omega_q: F({k}) > 0 required");
  }
  if (!sfm) sfm = sfm_handle_auto();
  std::vector<double> abs_z(p);
  for (int k = 0; k < p; ++k) abs_z[k] = std::abs(z[k]);
  std::vector<int> global(p);
  std::iota(global.begin(), global.end(), 0);

  Omega2Result out;
  std::vector<double> u_norm(p, 0.0), u_prox(p, 0.0);
  omega2_recurse(F, abs_z, global, false, sfm, u_norm);
  omega2_recurse(F, abs_z, global, true, sfm, u_prox);
  for (int k = 0; k < p; ++k)
    out.norm += abs_z[k] * std::sqrt(std::max(u_norm[k], 0.0));
  out.prox.resize(p);
  for (int k = 0; k < p; ++k) {
    double sk = std::sqrt(std::max(u_prox[k], 0.0));
    double mag = std::max(abs_z[k] - sk, 0.0);  // shrink toward zero
    out.prox[k] = (z[k] < 0 ? -1.0 : 1.0) * mag;
  }
  return out;
}

std::vector<double> isotonic_general(
    const std::vector<double>& z,
    const std::vector<std::pair<int, int>>& constraints, SfmHandle sfm) {
  const int p = int(z.size());
  if (constraints.empty()) return z;
  double zmax = *std::max_element(z.begin(), z.end());
  double zmin = *std::min_element(z.begin(), z.end());
  double lambda = double(p) * (zmax - zmin) + 1.0;

  WeightedDigraph g;
  g.n = p;
  for (auto [i, j] : constraints) {
    if (i < 0 || j < 0 || i >= p || j >= p || i == j)
      throw std::invalid_argument("isotonic_general: bad constraint");
    // w_i >= w_j is violated by the directed cut arc j -> i
    g.add_arc(j, i, lambda);
  }
  SetFunctionOracle F = cut_function(g);
  ProxResult pr = divide_and_conquer(F, SeparableProblem::quadratic(z),
                                     sfm ? std::move(sfm) : sfm_handle_auto());
  return pr.w;
}

}  // namespace subq
