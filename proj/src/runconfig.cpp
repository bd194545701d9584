#include "primpts/runconfig.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "primpts/error.hpp"

namespace primpts {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) fail(Errc::ConfigInvalid, where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(Errc::ConfigInvalid, "unknown key '" + k + "' in " + where);
}

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    fail(Errc::ConfigInvalid, "bad value for '" + key + "': " + j.dump());
  }
}

long positive(const json& j, const std::string& key) {
  if (!j.is_number_integer()) fail(Errc::ConfigInvalid, "'" + key + "' must be an integer");
  long v = j.get<long>();
  if (v <= 0) fail(Errc::ConfigInvalid, "'" + key + "' must be positive");
  return v;
}

IdealModule parse_ideal(const json& j) {
  only_keys(j, {"hnf", "den"}, "ideal");
  IdealModule I;
  for (const auto& row : j.at("hnf")) {
    IntVec r;
    for (const auto& x : row) {
      mpq_class q = parse_rational(x);
      if (q.get_den() != 1) fail(Errc::ConfigInvalid, "ideal hnf entries must be integers");
      r.push_back(q.get_num());
    }
    I.hnf.push_back(r);
  }
  I.den = j.contains("den") ? parse_rational(j["den"]).get_num() : mpz_class(1);
  return I;
}

AlsSpec parse_als(const json& j) {
  only_keys(j, {"type", "linear_form", "divisor", "exceptions"}, "als");
  AlsSpec s;
  if (j.contains("type")) s.type = get_as<std::string>(j["type"], "als.type");
  if (!std::set<std::string>{"standard", "mahler", "linear_section", "norm_ball"}.count(s.type))
    fail(Errc::ConfigInvalid, "unknown als.type '" + s.type + "'");
  if (j.contains("linear_form"))
    for (const auto& c : parse_rational_vec(j["linear_form"])) {
      if (c.get_den() != 1) fail(Errc::ConfigInvalid, "linear_form coefficients must be integers");
      s.linear_form.push_back(c.get_num());
    }
  if (j.contains("divisor")) {
    mpq_class a = parse_rational(j["divisor"]);
    if (a.get_den() != 1 || a == 0) fail(Errc::ConfigInvalid, "divisor must be a nonzero integer");
    s.divisor = a.get_num();
  }
  if (j.contains("exceptions")) {
    for (const auto& e : j["exceptions"]) {
      only_keys(e, {"prime", "Np", "dv"}, "als.exceptions[]");
      AlsSpec::ExceptionCfg c;
      c.prime = parse_ideal(e.at("prime"));
      c.Np = parse_rational(e.at("Np")).get_num();
      c.dv = e.contains("dv") ? int(positive(e["dv"], "dv")) : 1;
      s.exceptions.push_back(c);
    }
  }
  if (s.type != "linear_section" && (!s.linear_form.empty() || s.divisor != 1))
    fail(Errc::ConfigInvalid, "linear_form/divisor only apply to linear_section");
  return s;
}

}  // namespace

NumberField resolve_field(const std::string& ref) {
  std::string shipped = std::string(PRIMPTS_DATA_DIR) + "/fields/" + ref + ".json";
  if (ref.find('/') == std::string::npos && std::filesystem::exists(shipped)) return load_field_file(shipped);
  if (std::filesystem::exists(ref)) return load_field_file(ref);
  fail(Errc::ConfigInvalid, "no field named or located at '" + ref + "'");
}

RunConfig default_run_config() {
  RunConfig c;
  c.field = resolve_field("rationals");
  c.field_source = "rationals";
  return c;
}

RunConfig parse_run_config(const json& j) {
  only_keys(j,
            {"schema_version", "field", "base_field", "n", "als", "X", "seed", "workers", "budgets", "methods",
             "fit_tolerance", "output", "selftest", "comment"},
            "run config");
  if (!j.contains("schema_version") || j["schema_version"] != kRunConfigSchema)
    fail(Errc::ConfigInvalid, "schema_version must be " + std::to_string(kRunConfigSchema));
  RunConfig c;
  if (!j.contains("field")) {
    c.field = resolve_field("rationals");
    c.field_source = "rationals";
  } else if (j["field"].is_string()) {
    c.field_source = j["field"].get<std::string>();
    c.field = resolve_field(c.field_source);
  } else {
    c.field = load_field(json{{"schema_version", 1}, {"field", j["field"]}});
    c.field_source = "inline";
  }
  if (j.contains("base_field")) c.base_field = get_as<std::string>(j["base_field"], "base_field");
  if (!c.base_field.empty() && c.base_field != c.field.name()) c.field.subfield_degree(c.base_field);
  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || j["n"].get<int>() < 0)
      fail(Errc::ConfigInvalid, "n must be a nonnegative integer");
    c.n = j["n"].get<int>();
  }
  if (j.contains("als")) c.als = parse_als(j["als"]);
  if (j.contains("X")) {
    c.X = parse_rational_vec(j["X"]);
    if (c.X.empty()) fail(Errc::ConfigInvalid, "X grid is empty");
    for (const auto& x : c.X)
      if (x <= 0) fail(Errc::ConfigInvalid, "X values must be positive");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail(Errc::ConfigInvalid, "seed must be a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("workers")) {
    if (!j["workers"].is_number_integer() || j["workers"].get<int>() < 0)
      fail(Errc::ConfigInvalid, "workers must be a nonnegative integer");
    c.workers = j["workers"].get<int>();
  }
  if (j.contains("budgets")) {
    const auto& b = j["budgets"];
    only_keys(b, {"enumeration", "monte_carlo", "mobius_depth", "delta_bound"}, "budgets");
    if (b.contains("enumeration")) c.enum_budget = positive(b["enumeration"], "budgets.enumeration");
    if (b.contains("monte_carlo")) c.mc_samples = positive(b["monte_carlo"], "budgets.monte_carlo");
    if (b.contains("mobius_depth")) c.mobius_depth = positive(b["mobius_depth"], "budgets.mobius_depth");
    if (b.contains("delta_bound")) {
      c.delta_bound = get_as<double>(b["delta_bound"], "budgets.delta_bound");
      if (!(c.delta_bound >= 1)) fail(Errc::ConfigInvalid, "budgets.delta_bound must be >= 1");
    }
  }
  if (j.contains("methods")) {
    c.methods = get_as<std::vector<std::string>>(j["methods"], "methods");
    if (c.methods.empty()) fail(Errc::ConfigInvalid, "methods is empty");
    for (const auto& m : c.methods)
      if (m != "direct" && m != "decomposed") fail(Errc::ConfigInvalid, "unknown census method '" + m + "'");
  }
  if (j.contains("fit_tolerance")) c.fit_tolerance = get_as<double>(j["fit_tolerance"], "fit_tolerance");
  if (j.contains("output")) {
    only_keys(j["output"], {"dir"}, "output");
    if (j["output"].contains("dir")) c.out_dir = get_as<std::string>(j["output"]["dir"], "output.dir");
  }
  if (j.contains("selftest")) {
    const auto& s = j["selftest"];
    only_keys(s, {"lattices", "count_instances", "chart_pairs"}, "selftest");
    if (s.contains("lattices")) c.lattices = int(positive(s["lattices"], "selftest.lattices"));
    if (s.contains("count_instances")) c.count_instances = int(positive(s["count_instances"], "selftest.count_instances"));
    if (s.contains("chart_pairs")) c.chart_pairs = positive(s["chart_pairs"], "selftest.chart_pairs");
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ConfigInvalid, "cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(Errc::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_run_config(j);
}

}  // namespace primpts
