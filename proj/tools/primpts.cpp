// primpts: configuration-driven census and selftest runner.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "primpts/census.hpp"
#include "primpts/error.hpp"
#include "primpts/runconfig.hpp"
#include "primpts/selftest.hpp"

using namespace primpts;
namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { kPass = 0, kAssert = 1, kConfig = 2, kBudget = 3 };

int exit_for(Errc c) {
  switch (c) {
    case Errc::ConfigInvalid:
    case Errc::DiscriminantMismatch:
    case Errc::SignatureMismatch:
    case Errc::UnitLatticeMismatch:
    case Errc::ReducedPolynomial:
    case Errc::UnitRankMismatch:
    case Errc::UnsupportedSpec:
    case Errc::NotASubfield:
    case Errc::BadParams:
    case Errc::GridTooSmall:
    case Errc::ZetaUnavailable:
      return kConfig;
    case Errc::BudgetExceeded:
    case Errc::EnumerationBudgetExceeded:
    case Errc::QuotientTooLarge:
    case Errc::TruncationInsufficient:
    case Errc::DimensionTooLarge:
      return kBudget;
    default:
      return kAssert;
  }
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(Errc::ConfigInvalid, "cannot write " + p.string());
  out << text;
}

std::string base_of(const RunConfig& c) { return c.base_field.empty() ? c.field.name() : c.base_field; }

ojson provenance(const RunConfig& c) {
  ojson p;
  p["field"] = c.field.name();
  p["field_source"] = c.field_source;
  p["base_field"] = base_of(c);
  p["n"] = c.n;
  p["als"] = c.als.type;
  p["seed"] = c.seed;
  p["enumeration_budget"] = c.enum_budget;
  p["monte_carlo_samples"] = c.mc_samples;
  if (c.mobius_depth) p["mobius_depth"] = *c.mobius_depth;
  return p;
}

CensusOptions census_options(const RunConfig& c) {
  CensusOptions o;
  o.budget = c.enum_budget;
  o.workers = c.workers;
  o.mobius_depth = c.mobius_depth;
  o.mc_samples = c.mc_samples;
  o.seed = c.seed;
  return o;
}

int cmd_census(const RunConfig& c, const fs::path& out) {
  auto als = build_als(c.field, c.n, c.als);
  auto opt = census_options(c);
  ojson rep;
  rep["provenance"] = provenance(c);
  std::vector<CensusRecord> recs;
  for (const auto& m : c.methods) {
    auto r = m == "direct" ? census_direct(base_of(c), als, c.X, opt) : census_decomposed(base_of(c), als, c.X, opt);
    write_file(out / ("census_" + m + ".csv"), census_csv(r));
    rep[m] = census_json(r);
    recs.push_back(std::move(r));
  }
  bool agree = true;
  for (std::size_t i = 1; i < recs.size(); ++i) agree = agree && census_csv(recs[i]) == census_csv(recs[0]);
  rep["methods_agree"] = agree;
  write_file(out / "census_report.json", rep.dump(2) + "\n");
  std::cout << census_csv(recs[0]);
  if (!agree) {
    std::cerr << "AssertionFailed: census methods disagree\n";
    return kAssert;
  }
  return kPass;
}

int cmd_constants(const RunConfig& c, const fs::path& out) {
  const auto& K = c.field;
  auto als = build_als(K, c.n, c.als);
  auto V = global_volume(als, c.mc_samples, c.seed);
  ojson j;
  j["provenance"] = provenance(c);
  auto put = [&](const std::string& k, double v) {
    j[k] = format_number(v);
    std::cout << k << "," << format_number(v) << "\n";
  };
  std::cout << "quantity,value\n";
  try {
    auto S = schanuel_constant(K, c.n);
    put("S_K", S.value);
    put("S_K_error", S.error);
    put("main_coefficient", main_term_coefficient(als, V));
  } catch (const Error& e) {
    if (e.code() != Errc::ZetaUnavailable) throw;
    j["S_K"] = "unavailable";
    std::cout << "S_K,unavailable\n";
  }
  j["V_fin_exact"] = V.V_fin_exact.get_str();
  put("V_fin", V.V_fin);
  put("V_inf", V.V_inf);
  put("V_inf_halfwidth", V.V_inf_halfwidth);
  put("V_N", V.V_N);
  put("C_fin", als.C_fin);
  put("C_inf", als.C_inf);
  put("C_N", als.C);
  put("M_N", als.M_N);
  put("L_N", als.L_N);
  put("A_N", als.A_N);
  j["V_inf_bound_ok"] = V.V_inf_bound_ok;
  write_file(out / "constants.json", j.dump(2) + "\n");
  return V.V_inf_bound_ok ? kPass : kAssert;
}

std::string witness_str(const KVec& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? ";" : "") + w[i].to_string();
  return s;
}

int cmd_delta(const RunConfig& c, const fs::path& out) {
  std::string k = c.base_field.empty() ? (c.field.degree() == 1 ? c.field.name() : "Q") : c.base_field;
  auto r = delta_search(c.field, k, c.delta_bound, c.enum_budget);
  std::ostringstream csv;
  csv << "g,value,certified,found,bound,witness\n";
  auto row = [&](const DeltaEstimate& e) {
    csv << (e.g == 0 ? std::string("delta") : std::to_string(e.g)) << ',' << format_number(e.value) << ','
        << (e.certified ? "true" : "false") << ',' << (e.found ? "true" : "false") << ',' << format_number(e.bound)
        << ",\"" << witness_str(e.witness) << "\"\n";
  };
  row(r.delta);
  for (const auto& e : r.delta_g) row(e);
  write_file(out / "delta.csv", csv.str());
  std::cout << csv.str();
  if (!r.le_2e_delta_g) {
    std::cerr << "AssertionFailed: delta > 2e delta_g\n";
    return kAssert;
  }
  return kPass;
}

int cmd_fit(const RunConfig& c, const fs::path& out) {
  auto als = build_als(c.field, c.n, c.als);
  auto rec = census_direct(base_of(c), als, c.X, census_options(c));
  auto f = asymptotic_fit(rec, c.field.degree(), c.fit_tolerance, als.C);
  ojson j;
  j["provenance"] = provenance(c);
  j["leading_coefficient"] = format_number(f.leading_coefficient);
  j["expected"] = format_number(f.expected);
  j["relative_error"] = format_number(f.rel_error);
  j["tolerance"] = format_number(c.fit_tolerance);
  j["residual_slope"] = format_number(f.residual_slope);
  j["residual_slope_limit"] = format_number(c.field.degree() * (c.n + 1) - 1 + 0.3);
  j["ratio_slope_top_half"] = format_number(f.ratio_slope_top);
  j["coefficient_ok"] = f.coefficient_ok;
  j["slope_ok"] = f.slope_ok;
  j["pass"] = f.pass();
  write_file(out / "fit.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return f.pass() ? kPass : kAssert;
}

int cmd_selftest(const std::string& which, const RunConfig& c, const fs::path& out) {
  SelftestOptions o;
  o.seed = c.seed;
  o.budget = c.enum_budget;
  o.workers = c.workers;
  o.lattices = c.lattices;
  o.count_instances = c.count_instances;
  o.chart_pairs = c.chart_pairs;
  SelftestReport r = which == "gon-selftest"   ? gon_selftest(o)
                     : which == "lip-selftest" ? lip_selftest(o)
                                               : selftest_all(o);
  write_file(out / (which + ".json"), r.to_json().dump(2) + "\n");
  std::cout << r.to_text();
  return r.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Census and selftests for primitive points of bounded adelic height"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  app.add_option("--config", config_path, "run configuration (JSON)");
  app.add_option("--seed", seed, "override the configured seed");
  app.add_option("--workers", workers, "worker threads (0 = available parallelism)");
  app.add_option("--out", out_dir, "output directory");
  const std::pair<const char*, const char*> cmds[] = {
      {"census", "count points by the configured methods, write census_<method>.csv"},
      {"constants", "main-term constants and volumes, write constants.json"},
      {"delta", "minimal heights of generators, write delta.csv"},
      {"gon-selftest", "geometry-of-numbers suite"},
      {"lip-selftest", "counting-bound and Lipschitz chart suites"},
      {"fit", "direct census and asymptotic fit, write fit.json"},
      {"selftest", "every suite"}};
  for (const auto& [name, help] : cmds) app.add_subcommand(name, help);
  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    cfg = config_path.empty() ? default_run_config() : load_run_config(config_path);
    if (seed) cfg.seed = *seed;
    if (workers) cfg.workers = *workers;
    if (cfg.workers <= 0) cfg.workers = int(std::max(1u, std::thread::hardware_concurrency()));
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    fs::create_directories(cfg.out_dir);
  } catch (const Error& e) {
    if (cmd == "selftest") std::cout << "FAIL  config  (" << e.what() << ")\n";
    std::cerr << e.what() << "\n";
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "ConfigInvalid: " << e.what() << "\n";
    return kConfig;
  }
  try {
    fs::path out(cfg.out_dir);
    if (cmd == "census") return cmd_census(cfg, out);
    if (cmd == "constants") return cmd_constants(cfg, out);
    if (cmd == "delta") return cmd_delta(cfg, out);
    if (cmd == "fit") return cmd_fit(cfg, out);
    return cmd_selftest(cmd, cfg, out);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_for(e.code());
  }
}
