// Function-spec JSON (consumed by the CLI and the benchmark replay files),
// plus small CSV helpers for vectors and kernel matrices.
#pragma once

#include <filesystem>

#include <json.hpp>

#include "subq/core.hpp"
#include "subq/zoo.hpp"

namespace subq {

// Builds an oracle from a spec like {"type": "cut", ...}; nested combinators
// reference sub-specs under "of"/"terms".  Relative file payloads resolve
// against `base_dir`.
SetFunctionOracle oracle_from_spec(const nlohmann::json& spec,
                                   const std::filesystem::path& base_dir = ".");

// One value per line.
std::vector<double> read_vector_csv(std::istream& in);
void write_vector_csv(std::ostream& out, const std::vector<double>& v);

// Dense matrix, comma separated rows.
std::vector<std::vector<double>> read_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out,
                      const std::vector<std::vector<double>>& m);

// "1,3,4" (1-based) -> subset; empty string -> empty set.
Subset subset_from_string(int p, const std::string& text);

}  // namespace subq
