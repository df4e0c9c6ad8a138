#include "subq/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>

namespace subq {

void WeightedDigraph::validate() const {
  if (n < 1) throw std::invalid_argument("graph: n >= 1 required");
  for (const Arc& a : arcs) {
    if (a.from < 0 || a.from >= n || a.to < 0 || a.to >= n)
      throw std::invalid_argument("graph: vertex out of range");
    if (a.from == a.to) throw std::invalid_argument("graph: self-loop");
    if (!(a.capacity >= 0) || !std::isfinite(a.capacity))
      throw std::invalid_argument("graph: capacity must be finite and >= 0");
  }
}

void WeightedDigraph::add_undirected(int u, int v, double c) {
  arcs.push_back({u, v, c});
  arcs.push_back({v, u, c});
}

void StNetwork::validate() const {
  base.validate();
  if (source == sink) throw std::invalid_argument("network: source == sink");
  if (source < 0 || source >= base.n || sink < 0 || sink >= base.n)
    throw std::invalid_argument("network: bad source/sink");
}

namespace {

constexpr double kResidualEps = 1e-12;

struct FlowEdge {
  int to;
  double cap;   // residual capacity
  int rev;      // index of the reverse edge in adj[to]
  double orig;  // original capacity (0 for the artificial reverse edge)
};

struct FlowGraph {
  std::vector<std::vector<FlowEdge>> adj;

  explicit FlowGraph(int n) : adj(n) {}

  void add(int u, int v, double c) {
    adj[u].push_back({v, c, int(adj[v].size()), c});
    adj[v].push_back({u, 0.0, int(adj[u].size()) - 1, 0.0});
  }

  double edmonds_karp(int s, int t) {
    double total = 0;
    const int n = int(adj.size());
    std::vector<int> pv(n), pe(n);
    for (;;) {
      std::fill(pv.begin(), pv.end(), -1);
      pv[s] = s;
      std::deque<int> q{s};
      while (!q.empty() && pv[t] < 0) {
        int u = q.front();
        q.pop_front();
        for (int i = 0; i < int(adj[u].size()); ++i) {
          const FlowEdge& e = adj[u][i];
          if (e.cap > kResidualEps && pv[e.to] < 0) {
            pv[e.to] = u;
            pe[e.to] = i;
            q.push_back(e.to);
          }
        }
      }
      if (pv[t] < 0) break;
      double push = std::numeric_limits<double>::infinity();
      for (int v = t; v != s; v = pv[v])
        push = std::min(push, adj[pv[v]][pe[v]].cap);
      for (int v = t; v != s; v = pv[v]) {
        FlowEdge& e = adj[pv[v]][pe[v]];
        e.cap -= push;
        adj[v][e.rev].cap += push;
      }
      total += push;
    }
    return total;
  }

  Subset source_side(int s) const {
    const int n = int(adj.size());
    Subset side(n);
    std::vector<char> seen(n, 0);
    std::deque<int> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      side.add(u);
      for (const FlowEdge& e : adj[u])
        if (e.cap > kResidualEps && !seen[e.to]) {
          seen[e.to] = 1;
          q.push_back(e.to);
        }
    }
    return side;
  }

  // vertices from which the sink is residually reachable
  Subset sink_side(int t) const {
    const int n = int(adj.size());
    std::vector<char> seen(n, 0);
    std::deque<int> q{t};
    seen[t] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      // traverse residual arcs backwards: v -> u with residual left
      for (const FlowEdge& e : adj[u]) {
        const FlowEdge& back = adj[e.to][e.rev];  // e.to -> u
        if (back.cap > kResidualEps && !seen[e.to]) {
          seen[e.to] = 1;
          q.push_back(e.to);
        }
      }
    }
    Subset side(n);
    for (int v = 0; v < n; ++v)
      if (seen[v]) side.add(v);
    return side;
  }

  void check_feasible(int s, int t, double value) const {
    const int n = int(adj.size());
    std::vector<double> net(n, 0.0);
    for (int u = 0; u < n; ++u)
      for (const FlowEdge& e : adj[u]) {
        if (e.orig <= 0) continue;
        double flow = e.orig - e.cap;
        if (flow < -1e-9 || flow > e.orig + 1e-9)
          throw std::runtime_error("max_flow: capacity constraint violated");
        net[u] -= flow;
        net[e.to] += flow;
      }
    for (int v = 0; v < n; ++v) {
      if (v == s || v == t) continue;
      if (std::abs(net[v]) > 1e-9 * (1 + std::abs(value)))
        throw std::runtime_error("max_flow: conservation violated");
    }
  }
};

double cut_capacity(const WeightedDigraph& g, const Subset& a) {
  double v = 0;
  for (const Arc& e : g.arcs)
    if (a.contains(e.from) && !a.contains(e.to)) v += e.capacity;
  return v;
}

}  // namespace

MaxFlowResult max_flow(const StNetwork& net) {
  net.validate();
  FlowGraph fg(net.base.n);
  for (const Arc& a : net.base.arcs)
    if (a.capacity > 0) fg.add(a.from, a.to, a.capacity);
  double value = fg.edmonds_karp(net.source, net.sink);
  fg.check_feasible(net.source, net.sink, value);
  Subset cut = fg.source_side(net.source);
  double cap = cut_capacity(net.base, cut);
  if (std::abs(cap - value) > 1e-9 * (1 + std::abs(value)))
    throw std::runtime_error("max_flow: cut capacity does not match flow");
  return {value, cut};
}

SetFunctionOracle cut_function(const WeightedDigraph& g) {
  g.validate();
  auto gp = std::make_shared<WeightedDigraph>(g);
  SetFunctionOracle F(GroundSet(g.n), [gp](const Subset& a) {
    return cut_capacity(*gp, a);
  });
  // incremental sweep: adding v changes the cut by out(v, outside) - in(inside, v)
  auto out_arcs = std::make_shared<std::vector<std::vector<std::pair<int, double>>>>(g.n);
  auto in_arcs = std::make_shared<std::vector<std::vector<std::pair<int, double>>>>(g.n);
  for (const Arc& a : g.arcs) {
    (*out_arcs)[a.from].push_back({a.to, a.capacity});
    (*in_arcs)[a.to].push_back({a.from, a.capacity});
  }
  const int n = g.n;
  F.set_chain_evaluator([out_arcs, in_arcs, n](const std::vector<int>& order) {
    std::vector<char> inside(n, 0);
    std::vector<double> out(order.size());
    double acc = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      int v = order[k];
      for (auto [to, c] : (*out_arcs)[v])
        if (!inside[to]) acc += c;
      for (auto [from, c] : (*in_arcs)[v])
        if (inside[from]) acc -= c;
      inside[v] = 1;
      out[k] = acc;
    }
    return out;
  });
  F.set_fast_min([gp](const std::vector<double>& addend) {
    // min cut(A) + addend(A) = min cut(A) - z(A) with z = -addend;
    // the maximal minimizer keeps downstream tie-breaking reproducible
    std::vector<double> z(addend.size());
    for (std::size_t k = 0; k < addend.size(); ++k) z[k] = -addend[k];
    return min_cut_minus_modular(*gp, z, /*maximal=*/true);
  });
  return F;
}

std::pair<Subset, double> min_cut_minus_modular(const WeightedDigraph& g,
                                                const std::vector<double>& z,
                                                bool maximal) {
  g.validate();
  if (int(z.size()) != g.n)
    throw std::invalid_argument("min_cut_minus_modular: bad z");
  const int p = g.n;
  StNetwork net;
  net.base.n = p + 2;
  net.source = p;
  net.sink = p + 1;
  for (const Arc& a : g.arcs) net.base.add_arc(a.from, a.to, a.capacity);
  double zplus_total = 0;
  for (int k = 0; k < p; ++k) {
    if (z[k] > 0) {
      net.base.add_arc(net.source, k, z[k]);
      zplus_total += z[k];
    } else if (z[k] < 0) {
      net.base.add_arc(k, net.sink, -z[k]);
    }
  }
  // cut({s} u A) = zplus_total - z(A) + cut_g(A); minimize over A
  FlowGraph fg(net.base.n);
  for (const Arc& a : net.base.arcs)
    if (a.capacity > 0) fg.add(a.from, a.to, a.capacity);
  double value = fg.edmonds_karp(net.source, net.sink);
  Subset side = maximal ? fg.sink_side(net.sink).complement()
                        : fg.source_side(net.source);
  Subset a(p);
  for (int k = 0; k < p; ++k)
    if (side.contains(k)) a.add(k);
  double exact = cut_capacity(g, a) - modular_sum(z, a);
  double certified = value - zplus_total;
  if (std::abs(exact - certified) > 1e-7 * (1 + std::abs(certified)))
    throw std::runtime_error("min_cut_minus_modular: certificate mismatch");
  return {a, exact};
}

WeightedDigraph chain_graph(int p, double weight) {
  if (p < 1) throw std::invalid_argument("chain: p >= 1");
  WeightedDigraph g;
  g.n = p;
  g.symmetric = true;
  for (int i = 0; i + 1 < p; ++i) g.add_undirected(i, i + 1, weight);
  return g;
}

WeightedDigraph grid2d(int rows, int cols, double weight) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid2d: bad size");
  WeightedDigraph g;
  g.n = rows * cols;
  g.symmetric = true;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.add_undirected(id(r, c), id(r, c + 1), weight);
      if (r + 1 < rows) g.add_undirected(id(r, c), id(r + 1, c), weight);
    }
  return g;
}

CutInstance genrmf_like(int a, int b, double c1, double c2,
                        std::uint64_t seed) {
  if (a < 2 || b < 2) throw std::invalid_argument("genrmf_like: a,b >= 2");
  if (!(0 <= c1 && c1 <= c2)) throw std::invalid_argument("genrmf_like: bad caps");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> cap(c1, c2);

  const int frame = a * a;
  const int p = frame * b;
  auto id = [&](int f, int r, int c) { return f * frame + r * a + c; };

  CutInstance inst;
  inst.graph.n = p;
  inst.z.assign(p, 0.0);
  const double in_frame = c2 * a * a;
  for (int f = 0; f < b; ++f) {
    for (int r = 0; r < a; ++r)
      for (int c = 0; c < a; ++c) {
        if (c + 1 < a) inst.graph.add_undirected(id(f, r, c), id(f, r, c + 1), in_frame);
        if (r + 1 < a) inst.graph.add_undirected(id(f, r, c), id(f, r + 1, c), in_frame);
      }
    if (f + 1 < b) {
      // random one-to-one wiring between consecutive frames
      std::vector<int> perm(frame);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int v = 0; v < frame; ++v)
        inst.graph.add_arc(f * frame + v, (f + 1) * frame + perm[v], cap(rng));
    }
  }
  // source feeds the first frame corner, sink drains the last frame corner:
  // the modular term encodes those attachments (z_k = d(s,k) - d(k,t))
  inst.z[id(0, 0, 0)] = in_frame * a;
  inst.z[id(b - 1, a - 1, a - 1)] = -in_frame * a;
  return inst;
}

TwoMoonsInstance two_moons_logdet(int n, double noise, double bandwidth,
                                  int labeled, std::uint64_t seed) {
  if (n < 4 || labeled < 0 || labeled > n)
    throw std::invalid_argument("two_moons_logdet: bad sizes");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, noise);
  std::uniform_real_distribution<double> uang(0.0, M_PI);

  TwoMoonsInstance inst;
  inst.n = n;
  std::vector<double> xs(n), ys(n);
  inst.label_of.resize(n);
  for (int i = 0; i < n; ++i) {
    int moon = i % 2;
    double t = uang(rng);
    inst.label_of[i] = moon;
    if (moon == 0) {
      xs[i] = std::cos(t) + gauss(rng);
      ys[i] = std::sin(t) + gauss(rng);
    } else {
      xs[i] = 1.0 - std::cos(t) + gauss(rng);
      ys[i] = 0.5 - std::sin(t) + gauss(rng);
    }
  }
  if (bandwidth <= 0) {
    // default: median pairwise kernel value 0.5
    std::vector<double> d2s;
    d2s.reserve(std::size_t(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        d2s.push_back((xs[i] - xs[j]) * (xs[i] - xs[j]) +
                      (ys[i] - ys[j]) * (ys[i] - ys[j]));
    std::nth_element(d2s.begin(), d2s.begin() + d2s.size() / 2, d2s.end());
    bandwidth = std::sqrt(d2s[d2s.size() / 2] / std::log(2.0));
  }
  inst.kernel.assign(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double d2 = (xs[i] - xs[j]) * (xs[i] - xs[j]) +
                  (ys[i] - ys[j]) * (ys[i] - ys[j]);
      inst.kernel[std::size_t(i) * n + j] = std::exp(-d2 / (bandwidth * bandwidth));
    }
  inst.z.assign(n, 0.0);
  const double hard = 1e3;
  for (int i = 0; i < labeled; ++i) {
    // alternate points are on alternate moons; label the first `labeled`
    inst.z[i] = inst.label_of[i] == 0 ? hard : -hard;
  }
  return inst;
}

CoverSpec random_cover(int p, int groups, std::uint64_t seed) {
  if (p < 2 || groups < 1) throw std::invalid_argument("random_cover: bad sizes");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> usize(2, std::max(2, p / 2));
  std::uniform_int_distribution<int> uelem(0, p - 1);
  std::uniform_real_distribution<double> uw(0.05, 1.0);
  CoverSpec spec;
  spec.p = p;
  for (int gi = 0; gi < groups; ++gi) {
    int size = usize(rng);
    Subset members(p);
    while (members.count() < size) members.add(uelem(rng));
    spec.groups.push_back({members, uw(rng)});
  }
  return spec;
}

WeightedDigraph read_edge_list(std::istream& in) {
  int n = 0;
  std::size_t m = 0;
  if (!(in >> n >> m)) throw std::runtime_error("edge list: bad header");
  WeightedDigraph g;
  g.n = n;
  for (std::size_t i = 0; i < m; ++i) {
    int u, v;
    double c;
    if (!(in >> u >> v >> c)) throw std::runtime_error("edge list: bad arc line");
    g.add_arc(u - 1, v - 1, c);
  }
  g.validate();
  return g;
}

void write_edge_list(std::ostream& out, const WeightedDigraph& g) {
  out << g.n << ' ' << g.arcs.size() << '\n';
  std::ostringstream line;
  for (const Arc& a : g.arcs) {
    line.str("");
    line << a.from + 1 << ' ' << a.to + 1 << ' ' << a.capacity << '\n';
    out << line.str();
  }
}

}  // namespace subq
