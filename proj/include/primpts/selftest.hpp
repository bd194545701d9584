#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "primpts/gon.hpp"

namespace primpts {

enum class CheckStatus { Pass, Fail, Skipped };

struct CheckResult {
  std::string suite, name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

struct SelftestReport {
  std::vector<CheckResult> checks;

  long count(CheckStatus s) const;
  bool ok() const { return count(CheckStatus::Fail) == 0; }
  // 0 all pass, 1 some failure, 3 skipped for budget only
  int exit_code() const;
  void append(const SelftestReport& other);
  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

struct SelftestOptions {
  std::uint64_t seed = 7;
  long budget = kDefaultEnumBudget;
  int lattices = 100;          // geometry-of-numbers suite
  int count_instances = 50;    // counting-bound suite
  long chart_pairs = 10'000;   // per chart set
  long boundary_samples = 20'000;
  int random_vectors = 1000;   // height comparisons
  int workers = 1;
};

// Runs fn; Error with a budget code becomes Skipped, any other Error a Fail.
void run_check(SelftestReport& rep, const std::string& suite, const std::string& name,
               const std::function<std::pair<bool, std::string>()>& fn);

SelftestReport gon_selftest(const SelftestOptions& opt);
SelftestReport counting_selftest(const SelftestOptions& opt);
SelftestReport chart_selftest(const SelftestOptions& opt);
inline SelftestReport lip_selftest(const SelftestOptions& opt) {
  auto r = counting_selftest(opt);
  r.append(chart_selftest(opt));
  return r;
}
SelftestReport structural_selftest(const SelftestOptions& opt);
SelftestReport census_selftest(const SelftestOptions& opt);
SelftestReport selftest_all(const SelftestOptions& opt);

}  // namespace primpts
