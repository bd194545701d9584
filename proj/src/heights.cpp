#include "primpts/heights.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace primpts {

namespace {

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<std::complex<double>> poly_roots(std::vector<std::complex<double>> c) {
  // c leading first, c[0] != 0
  std::size_t deg = c.size() - 1;
  std::vector<std::complex<double>> z(deg);
  if (deg == 0) return z;
  const std::complex<double> lead = c[0];
  for (auto& x : c) x /= lead;
  double bound = 0;
  for (std::size_t k = 1; k <= deg; ++k) bound = std::max(bound, std::pow(std::abs(c[k]), 1.0 / double(k)));
  bound = 2 * bound + 1e-3;
  for (std::size_t k = 0; k < deg; ++k) z[k] = std::polar(bound * 0.5, 2 * M_PI * (k + 0.3) / deg + 0.5);
  auto ev = [&](std::complex<double> x, std::complex<double>& der) {
    std::complex<double> v = 0;
    der = 0;
    for (std::size_t k = 0; k <= deg; ++k) {
      der = der * x + v;
      v = v * x + c[k];
    }
    return v;
  };
  for (int it = 0; it < 400; ++it) {
    double step = 0;
    for (std::size_t i = 0; i < deg; ++i) {
      std::complex<double> der, v = ev(z[i], der);
      if (v == 0.0) continue;
      std::complex<double> ratio = v / der, sum = 0;
      for (std::size_t j = 0; j < deg; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      std::complex<double> w = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = ratio;
      z[i] -= w;
      step = std::max(step, std::abs(w) / (1 + std::abs(z[i])));
    }
    if (step < 1e-16) break;
  }
  return z;
}

std::vector<double> place_coords(const FieldElement& a) {
  RatVec c = a.coords();
  std::vector<double> out;
  for (const auto& x : c) out.push_back(x.get_d());
  return out;
}

// sigma_v of each coordinate, laid out per place as R^{dv(n+1)}
std::vector<Vec> place_vectors(const NumberField& K, const KVec& vec) {
  std::vector<Vec> out(K.places());
  for (const auto& a : vec) {
    auto e = K.embed_double(place_coords(a));
    for (int p = 0; p < K.places(); ++p) {
      out[p].push_back(e[p].real());
      if (K.local_degree(p) == 2) out[p].push_back(e[p].imag());
    }
  }
  return out;
}

double max_norm_eval(const Vec& z, int dv) {
  double m = 0;
  if (dv == 1) {
    for (double x : z) m = std::max(m, std::abs(x));
  } else {
    for (std::size_t j = 0; j + 1 < z.size(); j += 2) m = std::max(m, std::hypot(z[j], z[j + 1]));
  }
  return m;
}

hp max_norm_eval_hp(const std::vector<hp>& z, int dv) {
  hp m = 0;
  if (dv == 1) {
    for (const auto& x : z) m = std::max(m, hp(abs(x)));
  } else {
    for (std::size_t j = 0; j + 1 < z.size(); j += 2) m = std::max(m, hp(sqrt(z[j] * z[j] + z[j + 1] * z[j + 1])));
  }
  return m;
}

void check_nonzero(const KVec& vec) {
  if (vec.empty() || std::all_of(vec.begin(), vec.end(), [](const FieldElement& a) { return a.is_zero(); }))
    fail(Errc::ZeroVector, "height of the zero vector");
}

long rational_ord(const mpq_class& x, const mpz_class& p) {
  long k = 0;
  mpz_class n = x.get_num(), d = x.get_den();
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  while (d % p == 0) {
    d /= p;
    --k;
  }
  return k;
}

mpq_class np_pow(const mpz_class& Np, long e) {
  mpz_class t;
  mpz_pow_ui(t.get_mpz_t(), Np.get_mpz_t(), std::labs(e));
  return e >= 0 ? mpq_class(t) : mpq_class(1) / mpq_class(t);
}

}  // namespace

long element_ord(const NumberField& K, const Place& pl, const FieldElement& x) {
  if (x.is_zero()) return std::numeric_limits<long>::max();
  if (K.degree() == 1) return rational_ord(x.power()[0], pl.p);
  return K.ideal_valuation(pl.prime, K.principal(x), 1 << 20);
}

double mahler_measure(const std::vector<std::complex<double>>& coeffs) {
  std::size_t i = 0;
  while (i < coeffs.size() && coeffs[i] == 0.0) ++i;
  if (i == coeffs.size()) return 0.0;
  std::vector<std::complex<double>> c(coeffs.begin() + i, coeffs.end());
  double lead = std::abs(c[0]);
  if (c.size() == 1) return lead;
  if (c.size() == 2) return std::max(std::abs(c[0]), std::abs(c[1]));
  double m = lead;
  for (auto z : poly_roots(c)) m *= std::max(1.0, std::abs(z));
  return m;
}

AdelicLipschitzSystem build_als(const NumberField& K, int n, const AlsSpec& spec) {
  if (n < 0) fail(Errc::UnsupportedSpec, "dimension n must be >= 0");
  AdelicLipschitzSystem A;
  A.K = K;
  A.n = n;
  A.spec = spec;
  const int d = K.degree();
  if (spec.type == "standard" || spec.type == "linear_section") {
    for (int p = 0; p < K.places(); ++p) {
      LipschitzDistanceFunction f;
      f.n = n;
      f.dv = K.local_degree(p);
      f.kind = DistanceKind::MaxNorm;
      int dv = f.dv;
      f.eval = [dv](const Vec& z) { return max_norm_eval(z, dv); };
      f.eval_hp = [dv](const std::vector<hp>& z) { return max_norm_eval_hp(z, dv); };
      ChartParams cp;
      if (dv == 1) {
        cp.D = n + 1;
        f.charts = make_chart(ChartKind::CubeBoundary, cp);
        f.M = 2 * n + 2;
        f.L = 2;
      } else {
        cp.n = n;
        f.charts = make_chart(ChartKind::ComplexMaxBallBoundary, cp);
        f.M = n + 1;
        f.L = 2 * M_PI * std::sqrt(2.0 * n + 1);
      }
      f.c_v = 1;
      A.inf.push_back(std::move(f));
    }
  } else if (spec.type == "mahler") {
    for (int p = 0; p < K.places(); ++p) {
      LipschitzDistanceFunction f;
      f.n = n;
      f.dv = K.local_degree(p);
      f.kind = DistanceKind::Mahler;
      int dv = f.dv;
      f.eval = [dv](const Vec& z) {
        std::vector<std::complex<double>> c;
        if (dv == 1)
          for (double x : z) c.emplace_back(x, 0.0);
        else
          for (std::size_t j = 0; j + 1 < z.size(); j += 2) c.emplace_back(z[j], z[j + 1]);
        return mahler_measure(c);
      };
      // |z_j| <= binom(n, j) M(f)
      f.c_v = 1.0 / binom(n, n / 2);
      A.inf.push_back(std::move(f));
    }
    A.has_charts = false;
    A.max_norm_inf = false;
  } else {
    fail(Errc::UnsupportedSpec, "unknown ALS type '" + spec.type + "'");
  }

  if (spec.type == "linear_section") {
    if (int(spec.linear_form.size()) != n + 1)
      fail(Errc::UnsupportedSpec, "linear form must have n+1 coefficients");
    if (spec.divisor == 0) fail(Errc::UnsupportedSpec, "divisor must be nonzero");
    std::vector<AlsSpec::ExceptionCfg> ex = spec.exceptions;
    if (ex.empty()) {
      if (d != 1) fail(Errc::UnsupportedSpec, "linear_section over K != Q needs configured prime ideals");
      mpz_class a = abs(spec.divisor);
      for (mpz_class p = 2; p * p <= a; ++p)
        if (a % p == 0) {
          ex.push_back({K.principal(K.from_int(p)), p, 1});
          while (a % p == 0) a /= p;
        }
      if (a > 1) ex.push_back({K.principal(K.from_int(a)), a, 1});
    }
    auto form = spec.linear_form;
    FieldElement a = K.from_int(spec.divisor);
    for (std::size_t i = 0; i < ex.size(); ++i) {
      FiniteException fe;
      fe.place.archimedean = false;
      fe.place.index = int(i);
      fe.place.dv = ex[i].dv;
      fe.place.prime = ex[i].prime;
      fe.place.Np = ex[i].Np;
      // rational prime below: smallest positive integer in the prime ideal
      {
        mpz_class pp = ex[i].prime.hnf.back().back();
        for (mpz_class q = 2; q <= pp; ++q)
          if (pp % q == 0) {
            pp = q;
            break;
          }
        fe.place.p = pp;
      }
      Place pl = fe.place;
      NumberField KK = K;
      long ord_a = element_ord(K, pl, a);
      fe.ord = [KK, pl, form, a, ord_a](const KVec& z) {
        long m = std::numeric_limits<long>::max();
        FieldElement l = KK.zero();
        for (std::size_t j = 0; j < z.size(); ++j) {
          m = std::min(m, element_ord(KK, pl, z[j]));
          l = l + mpq_class(form[j]) * z[j];
        }
        if (!l.is_zero()) m = std::min(m, element_ord(KK, pl, l) - ord_a);
        return m;
      };
      // c_v = |a|_v, C_v = |1/a|_v
      fe.c_exp = ord_a;
      fe.C_exp = ord_a;
      fe.c_v = std::pow(ex[i].Np.get_d(), -double(ord_a) / ex[i].dv);
      fe.C_v = 1.0 / fe.c_v;
      A.fin.push_back(fe);
    }
  } else if (!spec.exceptions.empty()) {
    fail(Errc::UnsupportedSpec, "exceptions given for a system without finite modifications");
  }

  // constants
  A.C_fin_pow_d = 1;
  for (const auto& fe : A.fin) A.C_fin_pow_d *= np_pow(fe.place.Np, fe.c_exp);
  A.C_fin = std::pow(A.C_fin_pow_d.get_d(), 1.0 / d);
  A.C_inf = 1;
  for (const auto& f : A.inf) A.C_inf = std::max(A.C_inf, 1.0 / f.c_v);
  A.C = A.C_fin * A.C_inf;
  if (A.has_charts) {
    for (const auto& f : A.inf) {
      A.M_N = std::max(A.M_N, double(f.M));
      A.L_N = std::max(A.L_N, f.L);
    }
    A.A_N = std::pow(A.M_N, d) * std::pow(A.C * (A.L_N + 1), d * (n + 1) - 1);
  } else {
    A.M_N = A.L_N = A.A_N = std::numeric_limits<double>::quiet_NaN();
  }
  return A;
}

std::optional<mpq_class> exact_inf_prod(const AdelicLipschitzSystem& als, const KVec& vec) {
  const NumberField& K = als.K;
  if (!als.max_norm_inf || K.places() != 1) return std::nullopt;
  mpq_class m = 0;
  for (const auto& a : vec) m = std::max(m, mpq_class(abs(a.norm())));
  return m;
}

std::optional<hp> hp_inf_prod(const AdelicLipschitzSystem& als, const KVec& vec) {
  const NumberField& K = als.K;
  const auto& F = K.data();
  for (const auto& f : als.inf)
    if (!f.eval_hp) return std::nullopt;
  std::vector<std::vector<hp>> z(K.places());
  for (const auto& a : vec) {
    RatVec c = a.coords();
    for (int p = 0; p < K.places(); ++p) {
      hcomplex s;
      for (int k = 0; k < K.degree(); ++k)
        if (c[k] != 0) s += hcomplex(to_hp(c[k])) * F.basis_emb_hp[k][p];
      z[p].push_back(s.re);
      if (K.local_degree(p) == 2) z[p].push_back(s.im);
    }
  }
  hp prod = 1;
  for (int p = 0; p < K.places(); ++p) {
    hp v = als.inf[p].eval_hp(z[p]);
    prod *= K.local_degree(p) == 2 ? v * v : v;
  }
  return prod;
}

namespace {

HeightValue finish(const NumberField& K, double inf_prod, mpq_class fin, std::optional<mpq_class> exact_inf) {
  HeightValue h;
  const int d = K.degree();
  h.inf_prod = inf_prod;
  h.fin_factor = fin;
  h.H_inf = std::pow(inf_prod, 1.0 / d);
  h.H_fin = std::pow(fin.get_d(), 1.0 / d);
  h.H = h.H_inf * h.H_fin;
  if (exact_inf) h.Hd_exact = *exact_inf * fin;
  return h;
}

}  // namespace

HeightValue weil_height(const NumberField& K, const KVec& vec) {
  check_nonzero(vec);
  auto pv = place_vectors(K, vec);
  double prod = 1;
  for (int p = 0; p < K.places(); ++p) {
    double m = max_norm_eval(pv[p], K.local_degree(p));
    prod *= K.local_degree(p) == 2 ? m * m : m;
  }
  mpq_class fin = 1 / coordinate_ideal(K, vec).norm();
  std::optional<mpq_class> ex;
  if (K.places() == 1) {
    mpq_class m = 0;
    for (const auto& a : vec) m = std::max(m, mpq_class(abs(a.norm())));
    ex = m;
  }
  return finish(K, prod, fin, ex);
}

HeightValue adelic_height(const AdelicLipschitzSystem& als, const KVec& vec) {
  check_nonzero(vec);
  const NumberField& K = als.K;
  if (int(vec.size()) != als.n + 1) fail(Errc::BadParams, "vector length differs from n+1");
  auto pv = place_vectors(K, vec);
  double prod = 1;
  for (int p = 0; p < K.places(); ++p) {
    double v = als.inf[p].eval(pv[p]);
    prod *= K.local_degree(p) == 2 ? v * v : v;
  }
  IdealModule I = coordinate_ideal(K, vec);
  mpq_class fin = 1 / I.norm();
  for (const auto& fe : als.fin) {
    long m = fe.ord(vec);
    long mmax = std::numeric_limits<long>::max();
    for (const auto& a : vec) mmax = std::min(mmax, element_ord(K, fe.place, a));
    // replace Np^{-mmax} (max-norm contribution inside N(I)^{-1}) by Np^{-m}
    fin *= np_pow(fe.place.Np, mmax - m);
  }
  return finish(K, prod, fin, exact_inf_prod(als, vec));
}

bool decide_le(double approx, const std::function<std::optional<hp>()>& precise, const mpq_class& bound,
               DecisionStats* stats) {
  double b = bound.get_d();
  if (approx < b * (1 - 1e-9)) return true;
  if (approx > b * (1 + 1e-9)) return false;
  if (stats) stats->escalations++;
  std::optional<hp> P = precise ? precise() : std::nullopt;
  if (P) {
    hp hb = to_hp(bound);
    hp diff = *P - hb;
    if (abs(diff) <= hp("1e-60") * abs(hb)) {
      if (stats) stats->snapped++;
      return true;
    }
    return diff < 0;
  }
  if (stats) stats->borderline++;
  return approx <= b;
}

bool height_at_most(const AdelicLipschitzSystem& als, const KVec& vec, const mpq_class& X, DecisionStats* stats) {
  HeightValue h = adelic_height(als, vec);
  const int d = als.K.degree();
  mpz_class xn = X.get_num(), xd = X.get_den(), pn, pd;
  mpz_pow_ui(pn.get_mpz_t(), xn.get_mpz_t(), d);
  mpz_pow_ui(pd.get_mpz_t(), xd.get_mpz_t(), d);
  mpq_class Xd(pn, pd);
  Xd.canonicalize();
  if (h.Hd_exact) return *h.Hd_exact <= Xd;
  mpq_class bound = Xd / h.fin_factor;
  return decide_le(h.inf_prod, [&]() { return hp_inf_prod(als, vec); }, bound, stats);
}

LipChartSet norm_ball_charts(const std::function<double(const Vec&)>& N, int dv, int n, double C,
                             std::uint64_t seed) {
  const int D = dv * (n + 1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> G(0.0, 1.0);
  auto rnd = [&]() {
    Vec x(D);
    for (auto& e : x) e = G(rng);
    return x;
  };
  for (int t = 0; t < 2000; ++t) {
    Vec x = rnd(), y = rnd(), s(D);
    for (int i = 0; i < D; ++i) s[i] = x[i] + y[i];
    double nx = N(x), ny = N(y), ns = N(s);
    if (!(nx > 0) || !(ny > 0)) fail(Errc::NotANorm, "evaluator vanishes at a nonzero point");
    if (ns > nx + ny + 1e-12 * (nx + ny)) fail(Errc::NotANorm, "triangle inequality fails on a sampled pair");
    double lam = G(rng);
    Vec lx = x;
    for (auto& e : lx) e *= lam;
    if (std::abs(N(lx) - std::abs(lam) * nx) > 1e-9 * (1 + std::abs(lam) * nx))
      fail(Errc::NotANorm, "evaluator is not homogeneous");
  }
  LipChartSet out;
  out.D = D;
  out.c = 1;
  out.label = "norm_ball";
  out.L = 8.0 * dv * dv * std::pow(double(n + 1), 2.5) * C;
  if (D == 1) {
    for (double sg : {-1.0, 1.0}) {
      Chart c;
      c.in_dim = 0;
      c.out_dim = 1;
      double v = sg / N({1.0});
      c.f = [v](const Vec&) { return Vec{v}; };
      c.L = out.L;
      c.sup = std::abs(v);
      out.charts.push_back(c);
    }
    return out;
  }
  Chart c;
  c.in_dim = D - 1;
  c.out_dim = D;
  c.f = [N, D](const Vec& u) {
    // spherical coordinates onto S^{D-1}, then radial normalization to {N = 1}
    Vec x(D);
    double s = 1;
    for (int i = 0; i < D - 1; ++i) {
      double ang = (i == D - 2) ? 2 * M_PI * u[i] : M_PI * u[i];
      x[i] = s * std::cos(ang);
      s *= std::sin(ang);
    }
    x[D - 1] = s;
    double nv = N(x);
    for (auto& e : x) e /= nv;
    return x;
  };
  c.L = out.L;
  c.sup = C * std::sqrt(double(n + 1));
  out.charts.push_back(c);
  return out;
}

}  // namespace primpts
