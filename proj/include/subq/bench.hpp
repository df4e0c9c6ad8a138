// Benchmark CLI backend: builds generated instances, runs solver
// comparisons, emits machine-readable traces and summary tables.
#pragma once

#include <filesystem>

#include <json.hpp>

#include "subq/prox.hpp"
#include "subq/sfm.hpp"

namespace subq {

struct BenchConfig {
  std::string suite;  // chain|grid|genrmf-wide-like|genrmf-long-like|two-moons|cover
  std::uint64_t seed = 1;
  std::vector<std::string> solvers;
  std::uint64_t max_oracle_calls = 0;  // 0: suite default
  double max_wall_ms = std::numeric_limits<double>::infinity();
  std::filesystem::path out_dir = "bench-out";
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
};

// A generated instance: a factory (each solver run gets a fresh oracle and
// call counter) plus the replay spec.
struct BenchInstance {
  std::string name;
  nlohmann::json spec;
  std::function<SetFunctionOracle()> make;
  std::uint64_t default_budget = 0;
};

BenchInstance build_instance(const std::string& suite, std::uint64_t seed,
                             const std::filesystem::path& out_dir);

nlohmann::json run_sfm_bench(const BenchConfig& cfg);
nlohmann::json run_prox_bench(const BenchConfig& cfg);

}  // namespace subq
