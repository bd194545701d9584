#include "primpts/selftest.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>

#include "primpts/basicset.hpp"
#include "primpts/census.hpp"
#include "primpts/error.hpp"
#include "primpts/heights.hpp"
#include "primpts/lipcount.hpp"

namespace primpts {

long SelftestReport::count(CheckStatus s) const {
  long c = 0;
  for (const auto& r : checks) c += r.status == s;
  return c;
}

int SelftestReport::exit_code() const {
  if (count(CheckStatus::Fail)) return 1;
  if (count(CheckStatus::Skipped)) return 3;
  return 0;
}

void SelftestReport::append(const SelftestReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

namespace {

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "PASS";
    case CheckStatus::Fail:
      return "FAIL";
    default:
      return "SKIPPED";
  }
}

}  // namespace

nlohmann::ordered_json SelftestReport::to_json() const {
  nlohmann::ordered_json j;
  j["passed"] = count(CheckStatus::Pass);
  j["failed"] = count(CheckStatus::Fail);
  j["skipped"] = count(CheckStatus::Skipped);
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json o;
    o["suite"] = c.suite;
    o["check"] = c.name;
    o["status"] = status_name(c.status);
    o["detail"] = c.detail;
    arr.push_back(o);
  }
  j["checks"] = arr;
  return j;
}

std::string SelftestReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks)
    os << status_name(c.status) << "  " << c.suite << "/" << c.name << (c.detail.empty() ? "" : "  (" + c.detail + ")")
       << "\n";
  os << count(CheckStatus::Pass) << " passed, " << count(CheckStatus::Fail) << " failed, "
     << count(CheckStatus::Skipped) << " skipped\n";
  return os.str();
}

void run_check(SelftestReport& rep, const std::string& suite, const std::string& name,
               const std::function<std::pair<bool, std::string>()>& fn) {
  CheckResult r{suite, name, CheckStatus::Pass, ""};
  try {
    auto [ok, detail] = fn();
    r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    r.detail = detail;
  } catch (const Error& e) {
    bool budget = e.code() == Errc::BudgetExceeded || e.code() == Errc::EnumerationBudgetExceeded;
    r.status = budget ? CheckStatus::Skipped : CheckStatus::Fail;
    r.detail = e.what();
  }
  rep.checks.push_back(r);
}

namespace {

double vnorm(const Vec& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

LatticeBasis random_int_lattice(std::mt19937_64& rng, int D, int range) {
  std::uniform_int_distribution<long> u(-range, range);
  for (;;) {
    std::vector<RatVec> cols(D, RatVec(D));
    for (auto& c : cols)
      for (auto& e : c) e = u(rng);
    try {
      return make_lattice_exact(cols);
    } catch (const Error&) {
    }
  }
}

LatticeBasis near_diagonal_lattice(std::mt19937_64& rng, int D) {
  std::uniform_int_distribution<long> u(-3, 3);
  for (;;) {
    std::vector<RatVec> cols(D, RatVec(D));
    for (int j = 0; j < D; ++j)
      for (int i = 0; i < D; ++i) cols[j][i] = (i == j ? 2 : 0) + u(rng) / 2;
    try {
      return make_lattice_exact(cols);
    } catch (const Error&) {
    }
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

LipChartSet scale_charts(const LipChartSet& s, double T) {
  LipChartSet out = s;
  std::vector<Vec> A(s.D, Vec(s.D, 0.0));
  for (int i = 0; i < s.D; ++i) A[i][i] = T;
  for (auto& c : out.charts) c = chart_compose_affine(c, A, {}, T);
  out.L = s.L * T;
  return out;
}

FieldElement random_element(const NumberField& K, std::mt19937_64& rng, long range) {
  std::uniform_int_distribution<long> u(-range, range);
  for (;;) {
    RatVec c;
    for (int i = 0; i < K.degree(); ++i) c.emplace_back(u(rng));
    auto e = K.from_coords(c);
    if (!e.is_zero()) return e;
  }
}

NumberField shipped(const std::string& name) {
  return load_field_file(std::string(PRIMPTS_DATA_DIR) + "/fields/" + name + ".json");
}

}  // namespace

SelftestReport gon_selftest(const SelftestOptions& opt) {
  SelftestReport rep;
  const std::string S = "gon";
  std::mt19937_64 rng(opt.seed);
  std::vector<LatticeBasis> lat;
  for (int t = 0; t < opt.lattices; ++t) lat.push_back(random_int_lattice(rng, 2 + t % 5, 9));

  run_check(rep, S, "minkowski_second_theorem", [&] {
    long bad = 0;
    for (const auto& L : lat) bad += !minkowski_verify(successive_minima(L, opt.budget), L).pass;
    return std::pair{bad == 0, std::to_string(lat.size()) + " lattices, " + std::to_string(bad) + " violations"};
  });
  run_check(rep, S, "mahler_weyl_basis_lengths", [&] {
    long bad = 0;
    for (const auto& L : lat) {
      auto cert = successive_minima(L, opt.budget);
      auto mw = mahler_weyl_basis(cert, L);
      double sum = 0;
      for (int i = 0; i < L.D; ++i) {
        sum += cert.lambda[i];
        double bound = std::max(cert.lambda[i], sum / 2);
        if (vnorm(mw.basis.cols[i]) > bound * (1 + 1e-12)) ++bad;
      }
    }
    return std::pair{bad == 0, std::to_string(bad) + " basis vectors over the bound"};
  });
  run_check(rep, S, "orthogonality_defect_bound", [&] {
    long bad = 0;
    double worst = 0;
    for (const auto& L : lat) {
      auto mw = mahler_weyl_basis(successive_minima(L, opt.budget), L);
      double om = orthogonality_defect(mw.basis);
      worst = std::max(worst, om / mahler_weyl_defect_bound(L.D));
      if (om > mahler_weyl_defect_bound(L.D) || om < 1 - 1e-12) ++bad;
    }
    return std::pair{bad == 0, "max defect/bound " + fmt(worst)};
  });
  run_check(rep, S, "power_lattice_minima", [&] {
    long bad = 0, ran = 0;
    for (const auto& L : lat) {
      if (L.D > 3) continue;
      ++ran;
      bad += !power_minima_check(L, 1, opt.budget).pass;
    }
    return std::pair{bad == 0, std::to_string(ran) + " lattices with n = 1"};
  });
  return rep;
}

SelftestReport counting_selftest(const SelftestOptions& opt) {
  SelftestReport rep;
  const std::string S = "lipcount";
  std::mt19937_64 rng(opt.seed + 1);
  std::uniform_real_distribution<double> U(1.5, 4);
  const NumberField K = shipped("sqrt2");
  const auto geo = build_geometry(K);
  const auto als0 = build_als(K, 0, {});
  const auto sfc = sf_charts(geo, als0);
  const double vol1 = std::pow(1.0, geo.q) * K.invariants().R * *v_inf_exact(als0) / double(geo.t);

  long fail_lemma = 0, fail_lambda1 = 0, fail_minima = 0, fail_hat = 0, ran = 0;
  double worst = 0;
  std::string first_failure;
  for (int t = 0; t < opt.count_instances; ++t) {
    const int kind = t % 4;
    const int D = kind == 3 ? 2 : 2 + (t / 4) % 3;
    LatticeBasis L = near_diagonal_lattice(rng, D);
    CountSet cs;
    ChartParams p;
    p.D = D;
    double rad = U(rng);
    p.r = rad;
    if (kind == 0) {
      cs.member = [rad](const Vec& x) { return vnorm(x) <= rad ? Membership::In : Membership::Out; };
      cs.boundary = make_chart(ChartKind::Sphere, p);
      cs.volume = unit_ball_volume(D) * std::pow(rad, D);
      cs.radius = rad;
    } else if (kind == 1) {
      cs.member = [rad](const Vec& x) {
        for (double e : x)
          if (std::abs(e) > rad) return Membership::Out;
        return Membership::In;
      };
      cs.boundary = make_chart(ChartKind::CubeBoundary, p);
      cs.volume = std::pow(2 * rad, D);
      cs.radius = rad * std::sqrt(double(D));
    } else if (kind == 2) {
      std::uniform_real_distribution<double> E(-1.2, 1.2);
      Eigen::MatrixXd V(D, D);
      for (;;) {
        for (int j = 0; j < D; ++j)
          for (int i = 0; i < D; ++i) V(i, j) = (i == j ? rad : 0) + E(rng);
        if (std::abs(V.determinant()) > 0.5) break;
      }
      p.vectors.assign(D, Vec(D));
      p.center.assign(D, 0);
      double len = 0;
      for (int j = 0; j < D; ++j) {
        for (int i = 0; i < D; ++i) {
          p.vectors[j][i] = V(i, j);
          p.center[i] -= V(i, j) / 2;
        }
        len += V.col(j).norm();
      }
      Eigen::MatrixXd Vi = V.inverse();
      cs.member = [Vi, D](const Vec& x) {
        Eigen::VectorXd y(D);
        for (int i = 0; i < D; ++i) y(i) = x[i];
        Eigen::VectorXd c = Vi * y;
        for (int i = 0; i < D; ++i)
          if (c(i) < -0.5 || c(i) > 0.5) return Membership::Out;
        return Membership::In;
      };
      cs.boundary = make_chart(ChartKind::ParallelepipedBoundary, p);
      cs.volume = std::abs(V.determinant());
      cs.radius = len / 2;
    } else {
      mpq_class T(long(2 + (t / 4) % 4));
      cs.member = [&, T](const Vec& z) {
        return sf_cell_membership(geo, als0, 0, T, z) ? Membership::In : Membership::Out;
      };
      cs.boundary = scale_charts(sfc.charts, T.get_d());
      cs.volume = vol1 * T.get_d() * T.get_d();
      cs.radius = sf0_radius(geo, als0) * T.get_d();
    }
    DiscrepancyOptions o;
    o.boundary_samples = opt.boundary_samples;
    o.seed = opt.seed * 1000 + t;
    o.workers = opt.workers;
    auto r = discrepancy_experiment(L, cs, o);
    ++ran;
    fail_lemma += !r.pass_lemma;
    fail_lambda1 += !r.pass_lambda1;
    fail_minima += !r.pass_minima;
    fail_hat += !r.pass_T_hat;
    if (r.lambda1_bd > 0) worst = std::max(worst, r.discrepancy / r.lambda1_bd);
    if (!r.pass() && first_failure.empty()) first_failure = "instance " + std::to_string(t);
  }
  std::string n = std::to_string(ran) + " instances";
  run_check(rep, S, "discrepancy_vs_translate_bound",
            [&] { return std::pair{fail_lemma == 0, n + ", " + std::to_string(fail_lemma) + " violations"}; });
  run_check(rep, S, "discrepancy_vs_minimum_bound", [&] {
    return std::pair{fail_lambda1 == 0, n + ", max ratio " + fmt(worst) + ", " + std::to_string(fail_lambda1) + " violations"};
  });
  run_check(rep, S, "discrepancy_vs_all_minima_bound",
            [&] { return std::pair{fail_minima == 0, n + ", " + std::to_string(fail_minima) + " violations"}; });
  run_check(rep, S, "sampled_translates_vs_bound",
            [&] { return std::pair{fail_hat == 0, n + ", " + std::to_string(fail_hat) + " violations"}; });
  return rep;
}

SelftestReport chart_selftest(const SelftestOptions& opt) {
  SelftestReport rep;
  const std::string S = "charts";
  auto verify = [&](const std::string& name, const LipChartSet& set, std::uint64_t seed) {
    run_check(rep, S, name, [&, seed] {
      long per = (opt.chart_pairs + set.M() - 1) / set.M();
      auto r = verify_lipschitz(set, per, seed);
      bool ok = r.pass && r.pairs >= opt.chart_pairs;
      return std::pair{ok, std::to_string(r.pairs) + " pairs, max ratio " + fmt(r.max_ratio) + " <= L " +
                               fmt(r.declared)};
    });
  };
  ChartParams cube;
  cube.D = 3;
  cube.r = 1.5;
  verify("cube_boundary", make_chart(ChartKind::CubeBoundary, cube), opt.seed + 11);
  ChartParams sph;
  sph.D = 3;
  sph.r = 2;
  verify("sphere", make_chart(ChartKind::Sphere, sph), opt.seed + 12);
  ChartParams par;
  par.vectors = {{1, 0.3, 0}, {0.2, 1, 0.1}, {0, 0.4, 1.3}};
  verify("parallelepiped_boundary", make_chart(ChartKind::ParallelepipedBoundary, par), opt.seed + 13);
  auto eucl = [](const Vec& x) { return vnorm(x); };
  auto maxn = [](const Vec& x) {
    double s = 0;
    for (double e : x) s = std::max(s, std::abs(e));
    return s;
  };
  auto l1 = [](const Vec& x) {
    double s = 0;
    for (double e : x) s += std::abs(e);
    return s;
  };
  verify("norm_ball_euclidean", norm_ball_charts(eucl, 1, 1, std::sqrt(2.0)), opt.seed + 14);
  verify("norm_ball_max", norm_ball_charts(maxn, 1, 1, 1), opt.seed + 15);
  verify("norm_ball_l1", norm_ball_charts(l1, 1, 2, 1), opt.seed + 16);
  verify("norm_ball_complex", norm_ball_charts(eucl, 2, 1, 1), opt.seed + 17);
  const NumberField K = shipped("sqrt2");
  auto sc = sf_charts(build_geometry(K), build_als(K, 0, {}));
  verify("basic_set_boundary_sqrt2", sc.charts, opt.seed + 18);
  run_check(rep, S, "falsification_control", [&] {
    ChartParams bad = sph;
    bad.declared_L = 2.0;  // true constant is 2 pi r
    auto set = make_chart(ChartKind::Sphere, bad);
    auto r = verify_lipschitz(set, opt.chart_pairs, opt.seed + 19);
    return std::pair{!r.pass, "under-declared L " + fmt(r.declared) + " observed " + fmt(r.max_ratio)};
  });
  return rep;
}

SelftestReport structural_selftest(const SelftestOptions& opt) {
  SelftestReport rep;
  const std::string S = "structure";
  std::mt19937_64 rng(opt.seed + 2);
  struct Sys {
    std::string label;
    NumberField K;
    AlsSpec spec;
  };
  std::vector<Sys> systems;
  for (const char* f : {"rationals", "gaussian", "sqrt2"}) systems.push_back({f, shipped(f), {}});
  AlsSpec ls;
  ls.type = "linear_section";
  ls.linear_form = {2, 3};
  ls.divisor = 5;
  systems.push_back({"rationals_linear_section", shipped("rationals"), ls});
  AlsSpec ls2 = ls;
  ls2.divisor = 6;
  systems.push_back({"rationals_linear_section_6", shipped("rationals"), ls2});

  for (const auto& sy : systems) {
    auto als = build_als(sy.K, 1, sy.spec);
    const auto& K = sy.K;
    run_check(rep, S, sy.label + "/delta_class_independence", [&] {
      auto base = build_height_lattice(als, K.unit_ideal()).delta_ratio;
      int bad = 0;
      for (int s = 0; s < 10; ++s) {
        auto e = random_element(K, rng, 6);
        auto L = build_height_lattice(als, K.ideal_from_generators({e}));
        bad += L.delta_ratio != base;
      }
      return std::pair{bad == 0, "Delta_N ratio " + base.get_str() + ", " + std::to_string(bad) + " mismatches"};
    });
    run_check(rep, S, sy.label + "/c0_norm_identity", [&] {
      auto N = c0_ideal(als).norm();
      return std::pair{N == als.C_fin_pow_d, "N C0 = " + N.get_str() + ", C_fin^d = " + als.C_fin_pow_d.get_str()};
    });
    run_check(rep, S, sy.label + "/sandwich_inclusion", [&] {
      auto L = build_height_lattice(als, K.ideal_from_generators({random_element(K, rng, 4)}));
      auto r = sandwich_check(als, L, rng, 50);
      return std::pair{r.pass(), std::to_string(r.checked) + " memberships, " + std::to_string(r.failures) + " failures"};
    });
    run_check(rep, S, sy.label + "/volumes", [&] {
      auto V = global_volume(als, 200'000, opt.seed);
      bool ok = V.V_inf_bound_ok;
      if (sy.spec.type == "standard") ok = ok && V.V_fin_exact == 1;
      return std::pair{ok, "V_fin " + V.V_fin_exact.get_str() + ", V_inf " + fmt(V.V_inf)};
    });
    run_check(rep, S, sy.label + "/height_lower_bound", [&] {
      int bad = 0;
      std::uniform_int_distribution<int> zero(0, 5);
      for (int s = 0; s < opt.random_vectors; ++s) {
        KVec v;
        for (int j = 0; j <= als.n; ++j) v.push_back(zero(rng) == 0 ? K.zero() : random_element(K, rng, 30));
        bool all0 = true;
        for (const auto& a : v) all0 = all0 && a.is_zero();
        if (all0) continue;
        auto hn = adelic_height(als, v);
        auto h = weil_height(K, v);
        bool ok;
        if (hn.Hd_exact && h.Hd_exact && als.C_inf == 1)
          ok = *hn.Hd_exact * als.C_fin_pow_d >= *h.Hd_exact;
        else
          ok = hn.H * als.C >= h.H * (1 - 1e-12);
        bad += !ok;
      }
      return std::pair{bad == 0, std::to_string(opt.random_vectors) + " vectors, " + std::to_string(bad) + " failures"};
    });
  }
  AlsSpec ms;
  ms.type = "mahler";
  for (const char* f : {"rationals", "gaussian"}) {
    auto K = shipped(f);
    auto als = build_als(K, 1, ms);
    run_check(rep, S, std::string(f) + "_mahler/height_lower_bound", [&] {
      int bad = 0;
      for (int s = 0; s < opt.random_vectors; ++s) {
        KVec v{random_element(K, rng, 20), random_element(K, rng, 20)};
        bad += adelic_height(als, v).H * als.C < weil_height(K, v).H * (1 - 1e-12);
      }
      return std::pair{bad == 0, std::to_string(bad) + " failures"};
    });
    run_check(rep, S, std::string(f) + "_mahler/v_inf_bound", [&] {
      auto V = global_volume(als, 200'000, opt.seed);
      return std::pair{V.V_inf_bound_ok, "V_inf " + fmt(V.V_inf) + " +- " + fmt(V.V_inf_halfwidth)};
    });
  }
  return rep;
}

SelftestReport census_selftest(const SelftestOptions& opt) {
  SelftestReport rep;
  const std::string S = "census";
  CensusOptions co;
  co.budget = opt.budget;
  co.workers = opt.workers;
  auto grid = [](std::initializer_list<long> xs) {
    std::vector<mpq_class> v;
    for (long x : xs) v.emplace_back(x);
    return v;
  };
  for (auto [f, g] : std::vector<std::pair<const char*, std::vector<mpq_class>>>{
           {"rationals", grid({1, 2, 5, 10})}, {"gaussian", grid({1, 2, 3})}, {"sqrt2", grid({1, 2, 3})}}) {
    auto K = shipped(f);
    auto als = build_als(K, 1, {});
    run_check(rep, S, std::string(f) + "/dual_census_equality", [&] {
      auto a = census_direct(K.name(), als, g, co), b = census_decomposed(K.name(), als, g, co);
      return std::pair{census_csv(a) == census_csv(b), "Z(" + g.back().get_str() + ") = " +
                                                           std::to_string(a.rows.back().count_all)};
    });
    if (K.degree() == 2) {
      run_check(rep, S, std::string(f) + "/primitive_identity", [&] {
        auto Q = shipped("rationals");
        auto all = census_direct(K.name(), als, g, co);
        auto rel = census_direct("Q", als, g, co);
        auto rat = census_direct("Q", build_als(Q, 1, {}), g, co);
        bool ok = true;
        for (std::size_t i = 0; i < g.size(); ++i)
          ok = ok && rel.rows[i].count_primitive == all.rows[i].count_all - rat.rows[i].count_all;
        return std::pair{ok, "relative counts equal differences"};
      });
    }
  }
  run_check(rep, S, "rationals/schanuel_small_counts", [&] {
    auto K = shipped("rationals");
    auto r = census_direct("Q", build_als(K, 1, {}), grid({1}), co);
    return std::pair{r.rows[0].count_all == 4, "Z(1) = " + std::to_string(r.rows[0].count_all)};
  });
  run_check(rep, S, "delta/gaussian", [&] {
    auto d = delta_search(shipped("gaussian"), "Q", 1);
    return std::pair{d.delta.certified && d.delta.value == 1 && d.le_2e_delta_g, "delta = " + fmt(d.delta.value)};
  });
  run_check(rep, S, "delta/sqrt2", [&] {
    auto d = delta_search(shipped("sqrt2"), "Q", 2);
    bool ok = d.delta.certified && std::abs(d.delta.value - std::sqrt(2.0)) < 1e-12 && d.le_2e_delta_g;
    return std::pair{ok, "delta = " + fmt(d.delta.value)};
  });
  run_check(rep, S, "moebius_volume_convergence", [&] {
    auto K = shipped("gaussian");
    auto m = moebius_volume_check(build_als(K, 1, {}), {10, 100, 400});
    bool ok = true;
    for (std::size_t i = 0; i < m.partial.size(); ++i) ok = ok && std::abs(m.partial[i] - m.target) <= m.tail_bound[i];
    return std::pair{ok, "target " + fmt(m.target) + ", partial " + fmt(m.partial.back())};
  });
  run_check(rep, S, "minima_bounds_sqrt2", [&] {
    auto K = shipped("sqrt2");
    std::mt19937_64 rng(opt.seed + 3);
    auto r = minima_bounds_check(build_als(K, 1, {}), K.unit_ideal(), "Q", 0, {{1, std::sqrt(2.0)}}, rng);
    return std::pair{r.pass(), "l = " + std::to_string(r.l) + ", lambda_l = " + fmt(r.lambda[r.l - 1])};
  });
  return rep;
}

SelftestReport selftest_all(const SelftestOptions& opt) {
  SelftestReport rep = gon_selftest(opt);
  rep.append(lip_selftest(opt));
  rep.append(structural_selftest(opt));
  rep.append(census_selftest(opt));
  return rep;
}

}  // namespace primpts
