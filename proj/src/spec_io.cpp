#include "subq/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "subq/graph.hpp"

namespace subq {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

Subset subset_from_json(int p, const json& arr) {
  Subset s(p);
  for (const auto& v : arr) {
    int k = v.get<int>();
    if (k < 1 || k > p) throw std::invalid_argument("spec: index out of range");
    s.add(k - 1);
  }
  return s;
}

ConcaveSpec concave_from_json(const json& g) {
  std::string kind = g.value("kind", "identity");
  if (kind == "sqrt") return ConcaveSpec::sqrt();
  if (kind == "log1p") return ConcaveSpec::log1p();
  if (kind == "min-with-one") return ConcaveSpec::min_with_one();
  if (kind == "identity") return ConcaveSpec::identity();
  if (kind == "piecewise") {
    std::vector<std::pair<double, double>> knots;
    for (const auto& kv : g.at("knots"))
      knots.emplace_back(kv.at(0).get<double>(), kv.at(1).get<double>());
    return ConcaveSpec::piecewise_linear(std::move(knots));
  }
  throw std::invalid_argument("spec: unknown concave kind '" + kind + "'");
}

WeightedDigraph graph_from_json(const json& spec, const fs::path& base_dir) {
  if (spec.contains("file")) {
    fs::path path = base_dir / spec.at("file").get<std::string>();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("spec: cannot open " + path.string());
    return read_edge_list(in);
  }
  WeightedDigraph g;
  g.n = spec.at("n").get<int>();
  bool undirected = spec.value("undirected", false);
  for (const auto& e : spec.at("edges")) {
    int u = e.at(0).get<int>() - 1, v = e.at(1).get<int>() - 1;
    double c = e.size() > 2 ? e.at(2).get<double>() : 1.0;
    if (undirected)
      g.add_undirected(u, v, c);
    else
      g.add_arc(u, v, c);
  }
  g.validate();
  return g;
}

PsdMatrix matrix_from_json(const json& spec, const fs::path& base_dir) {
  PsdMatrix m;
  std::vector<std::vector<double>> rows;
  if (spec.contains("file")) {
    fs::path path = base_dir / spec.at("file").get<std::string>();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("spec: cannot open " + path.string());
    rows = read_matrix_csv(in);
  } else {
    for (const auto& r : spec.at("matrix")) {
      std::vector<double> row;
      for (const auto& v : r) row.push_back(v.get<double>());
      rows.push_back(std::move(row));
    }
  }
  m.p = int(rows.size());
  m.q.resize(std::size_t(m.p) * m.p);
  for (int i = 0; i < m.p; ++i) {
    if (int(rows[i].size()) != m.p)
      throw std::invalid_argument("spec: kernel matrix is not square");
    for (int j = 0; j < m.p; ++j) m.q[std::size_t(i) * m.p + j] = rows[i][j];
  }
  m.jitter = spec.value("jitter", -1.0);
  return m;
}

}  // namespace

SetFunctionOracle oracle_from_spec(const nlohmann::json& spec,
                                   const fs::path& base_dir) {
  std::string type = spec.at("type").get<std::string>();
  if (type == "cardinality") {
    std::vector<double> weights;
    if (spec.contains("weights")) {
      for (const auto& v : spec.at("weights")) weights.push_back(v.get<double>());
    } else {
      weights.assign(spec.at("p").get<int>(), 1.0);
    }
    ConcaveSpec g = spec.contains("g") ? concave_from_json(spec.at("g"))
                                       : ConcaveSpec::identity();
    return cardinality_based(weights, g);
  }
  if (type == "cover") {
    CoverSpec cs;
    cs.p = spec.at("p").get<int>();
    for (const auto& grp : spec.at("groups"))
      cs.groups.push_back({subset_from_json(cs.p, grp.at("set")),
                           grp.value("weight", 1.0)});
    return set_cover(cs);
  }
  if (type == "cut") return cut_function(graph_from_json(spec, base_dir));
  if (type == "logdet") return log_det(matrix_from_json(spec, base_dir));
  if (type == "logdet-mi")
    return gaussian_mutual_information(matrix_from_json(spec, base_dir));
  if (type == "matroid") {
    int n = spec.at("vertices").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : spec.at("edges"))
      edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
    return graphic_matroid_rank(n, edges);
  }
  if (type == "modular") {
    std::vector<double> z;
    for (const auto& v : spec.at("z")) z.push_back(v.get<double>());
    return add_modular(
        SetFunctionOracle(GroundSet(int(z.size())),
                          [](const Subset&) { return 0.0; }),
        z);
  }
  if (type == "sum") {
    const auto& terms = spec.at("terms");
    if (terms.empty()) throw std::invalid_argument("spec: empty sum");
    SetFunctionOracle acc = oracle_from_spec(terms[0], base_dir);
    for (std::size_t i = 1; i < terms.size(); ++i)
      acc = sum(acc, oracle_from_spec(terms[i], base_dir));
    return acc;
  }
  if (type == "scale")
    return scale(oracle_from_spec(spec.at("of"), base_dir),
                 spec.at("factor").get<double>());
  if (type == "add-modular") {
    std::vector<double> z;
    for (const auto& v : spec.at("z")) z.push_back(v.get<double>());
    return add_modular(oracle_from_spec(spec.at("of"), base_dir), z);
  }
  if (type == "restrict" || type == "contract") {
    SetFunctionOracle inner = oracle_from_spec(spec.at("of"), base_dir);
    Subset a = subset_from_json(inner.p(), spec.at("set"));
    return type == "restrict" ? restrict_to(inner, a) : contract_on(inner, a);
  }
  if (type == "symmetrize")
    return symmetrize(oracle_from_spec(spec.at("of"), base_dir));
  if (type == "convolve-modular") {
    std::vector<double> z;
    for (const auto& v : spec.at("z")) z.push_back(v.get<double>());
    return convolve_modular(oracle_from_spec(spec.at("of"), base_dir), z);
  }
  if (type == "monotonize")
    return monotonize(oracle_from_spec(spec.at("of"), base_dir));
  if (type == "concave-compose")
    return concave_compose(oracle_from_spec(spec.at("of"), base_dir),
                           concave_from_json(spec.at("g")),
                           spec.value("trust_monotone", false));
  throw std::invalid_argument("spec: unknown function type '" + type + "'");
}

std::vector<double> read_vector_csv(std::istream& in) {
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(std::stod(line));
  }
  return out;
}

void write_vector_csv(std::ostream& out, const std::vector<double>& v) {
  std::ostringstream line;
  line.precision(17);
  for (double x : v) {
    line.str("");
    line << x << '\n';
    out << line.str();
  }
}

std::vector<std::vector<double>> read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_matrix_csv(std::ostream& out,
                      const std::vector<std::vector<double>>& m) {
  std::ostringstream line;
  line.precision(17);
  for (const auto& row : m) {
    line.str("");
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) line << ',';
      line << row[j];
    }
    line << '\n';
    out << line.str();
  }
}

Subset subset_from_string(int p, const std::string& text) {
  Subset s(p);
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    int k = std::stoi(tok);
    if (k < 1 || k > p)
      throw std::invalid_argument("subset: index out of range");
    s.add(k - 1);
  }
  return s;
}

}  // namespace subq
