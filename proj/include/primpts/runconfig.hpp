#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "primpts/heights.hpp"
#include "primpts/numfield.hpp"

namespace primpts {

constexpr int kRunConfigSchema = 1;

// One experiment: a field, a base field, an ALS, a grid and its budgets.
// Every key is optional except schema_version; unknown keys are rejected.
struct RunConfig {
  NumberField field;
  std::string field_source;  // shipped name, file path or "inline"
  std::string base_field;    // empty: K itself
  int n = 1;
  AlsSpec als;
  std::vector<mpq_class> X{1, 2, 3};
  std::uint64_t seed = 1;
  int workers = 0;  // 0: available parallelism
  long enum_budget = 200'000'000;
  long mc_samples = 1'000'000;
  std::optional<long> mobius_depth;
  double delta_bound = 2;
  double fit_tolerance = 0.1;
  std::vector<std::string> methods{"direct", "decomposed"};
  std::string out_dir = ".";
  int lattices = 100;
  int count_instances = 50;
  long chart_pairs = 10'000;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
RunConfig default_run_config();

// Resolves a shipped field name ("sqrt2") or a file path.
NumberField resolve_field(const std::string& ref);

}  // namespace primpts
