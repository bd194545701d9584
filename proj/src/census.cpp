#include "primpts/census.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "primpts/error.hpp"
#include "primpts/lipcount.hpp"

namespace primpts {

namespace {

mpq_class qpow(const mpq_class& x, long e) {
  mpq_class r = 1, b = x;
  if (e < 0) {
    b = 1 / b;
    e = -e;
  }
  for (; e; e >>= 1) {
    if (e & 1) r *= b;
    b *= b;
  }
  return r;
}

IdealModule ideal_pow(const NumberField& K, const IdealModule& P, long e) {
  IdealModule r = K.unit_ideal();
  IdealModule b = e < 0 ? K.ideal_inverse(P) : P;
  for (long k = 0; k < std::labs(e); ++k) r = K.ideal_mul(r, b);
  return r;
}

std::string key_of(const KVec& v) {
  std::string s;
  for (const auto& a : v) {
    for (const auto& c : a.power()) {
      s += c.get_str();
      s += ',';
    }
    s += ';';
  }
  return s;
}

double cnorm_d(const NumberField& K, const Vec& block_major, int n, int j) {
  // |N(alpha_j)| from a place-major embedding
  double p = 1;
  std::size_t off = 0;
  for (int v = 0; v < K.places(); ++v) {
    int w = K.local_degree(v);
    std::size_t at = off + std::size_t(j * w);
    double a = w == 1 ? std::abs(block_major[at]) : std::hypot(block_major[at], block_major[at + 1]);
    p *= w == 1 ? a : a * a;
    off += std::size_t(w * (n + 1));
  }
  return p;
}

// Decides k(P) = K quickly where possible.
class PrimitiveTester {
 public:
  PrimitiveTester(const NumberField& K, const std::string& k) : K_(K), k_(k) {
    if (k == K.name()) {
      all_ = true;
      return;
    }
    int m = K.subfield_degree(k);
    int e = K.degree() / m;
    bool prime = e > 1;
    for (int p = 2; p * p <= e; ++p)
      if (e % p == 0) prime = false;
    rank_path_ = prime && m == 1;
  }

  bool all() const { return all_; }

  // integral-basis coordinates (any common scaling), block j = alpha_j
  bool test_coords(const std::vector<std::int64_t>& c, int n) const {
    if (all_) return true;
    if (rank_path_) {
      const int d = K_.degree();
      int first = -1;
      for (int j = 0; j <= n && first < 0; ++j)
        for (int a = 0; a < d; ++a)
          if (c[j * d + a] != 0) {
            first = j;
            break;
          }
      if (first < 0) fail(Errc::ZeroVector, "zero point");
      for (int j = first + 1; j <= n; ++j)
        for (int a = 0; a < d; ++a)
          for (int b = a + 1; b < d; ++b) {
            __int128 m = __int128(c[first * d + a]) * c[j * d + b] - __int128(c[first * d + b]) * c[j * d + a];
            if (m != 0) return true;
          }
      return false;
    }
    RatVec q(c.begin(), c.end());
    return primitive_test(K_, k_, kcoords_to_kvec(K_, q, n));
  }

  bool test(const KVec& v) const {
    if (all_) return true;
    return primitive_test(K_, k_, v);
  }

 private:
  NumberField K_;
  std::string k_;
  bool all_ = false;
  bool rank_path_ = false;
};

// integer form of the K-coordinates of a lattice basis
struct IntKBasis {
  std::vector<std::vector<std::int64_t>> rows;
  mpz_class den = 1;
  bool ok = true;
};

IntKBasis int_kbasis(const std::vector<KCoords>& kb) {
  IntKBasis r;
  for (const auto& row : kb)
    for (const auto& c : row) r.den = lcm(r.den, c.get_den());
  for (const auto& row : kb) {
    std::vector<std::int64_t> v;
    for (const auto& c : row) {
      mpz_class z = c.get_num() * (r.den / c.get_den());
      if (!z.fits_slong_p() || abs(z) > (1L << 30)) r.ok = false;
      v.push_back(z.fits_slong_p() ? z.get_si() : 0);
    }
    r.rows.push_back(v);
  }
  return r;
}

std::vector<std::int64_t> int_combine(const IntKBasis& b, const CoeffVec& x, bool neg) {
  std::vector<std::int64_t> out(b.rows[0].size(), 0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!x[k]) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += x[k] * b.rows[k][i];
  }
  if (neg)
    for (auto& v : out) v = -v;
  return out;
}

KCoords rat_combine(const std::vector<KCoords>& kb, const CoeffVec& x, bool neg) {
  KCoords out(kb[0].size(), 0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!x[k]) continue;
    mpq_class xk = neg ? -x[k] : x[k];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += xk * kb[k][i];
  }
  return out;
}

mpq_class to_pow_d(const mpq_class& X, int d) { return qpow(X, d); }

LatticeBasis tau_lattice(const BasicSetGeometry& g, const LatticeBasis& B, long cell, int n) {
  std::vector<Vec> cols;
  for (const auto& c : B.cols) cols.push_back(tau_apply(g, cell, c, n));
  return make_lattice(std::move(cols));
}

// sigma(ideal) in R^d, place-major (n = 0)
std::vector<FieldElement> ideal_elems(const NumberField& K, const IdealModule& I) { return K.ideal_basis(I); }

void run_items(long count, int workers, const std::function<void(long)>& f) {
  workers = std::max(1, workers);
  if (workers == 1 || count < 2) {
    for (long i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> th;
  for (int w = 0; w < workers; ++w)
    th.emplace_back([&] {
      for (;;) {
        long i = next++;
        if (i >= count) return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(m);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : th) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace

KVec kcoords_to_kvec(const NumberField& K, const KCoords& c, int n) {
  const int d = K.degree();
  KVec v;
  for (int j = 0; j <= n; ++j) v.push_back(K.from_coords(RatVec(c.begin() + j * d, c.begin() + (j + 1) * d)));
  return v;
}

Vec embed_kvec(const NumberField& K, const KVec& v) {
  std::vector<std::vector<double>> m;
  for (const auto& a : v) m.push_back(K.minkowski(a));
  Vec z;
  int off = 0;
  for (int p = 0; p < K.places(); ++p) {
    int w = K.local_degree(p);
    for (const auto& row : m)
      for (int k = 0; k < w; ++k) z.push_back(row[off + k]);
    off += w;
  }
  return z;
}

double base_covolume(const NumberField& K) {
  return std::pow(2.0, -K.s()) * std::sqrt(std::abs(K.invariants().disc.get_d()));
}

IdealModule c0_ideal(const AdelicLipschitzSystem& als) {
  const NumberField& K = als.K;
  IdealModule r = K.unit_ideal();
  for (const auto& fe : als.fin) {
    double want = std::pow(fe.place.Np.get_d(), -double(fe.c_exp) / fe.place.dv);
    if (std::abs(fe.c_v - want) > 1e-12 * want)
      fail(Errc::NonIntegralExponent, "c_v is not a power of Np^{1/d_v}");
    r = K.ideal_mul(r, ideal_pow(K, fe.place.prime, fe.c_exp));
  }
  return r;
}

IdealModule c1_ideal(const AdelicLipschitzSystem& als) {
  const NumberField& K = als.K;
  IdealModule r = K.unit_ideal();
  for (const auto& fe : als.fin) r = K.ideal_mul(r, ideal_pow(K, fe.place.prime, std::max(0L, fe.C_exp)));
  return r;
}

bool in_height_lattice(const AdelicLipschitzSystem& als, const IdealModule& D, const KVec& v) {
  const NumberField& K = als.K;
  IdealModule outer = K.ideal_mul(K.ideal_inverse(c0_ideal(als)), D);
  for (const auto& a : v)
    if (!a.is_zero() && !K.ideal_contains(outer, a)) return false;
  bool zero = true;
  for (const auto& a : v) zero = zero && a.is_zero();
  if (zero) return true;
  for (const auto& fe : als.fin) {
    long need = K.ideal_valuation(fe.place.prime, D);
    if (fe.ord(v) < need) return false;
  }
  return true;
}

HeightLattice build_height_lattice(const AdelicLipschitzSystem& als, const IdealModule& Dd, long max_cosets) {
  const NumberField& K = als.K;
  HeightLattice L;
  L.ideal = Dd;
  L.n = als.n;
  L.d = K.degree();
  L.D = L.d * (L.n + 1);
  const int d = L.d, n = L.n, D = L.D;
  mpq_class ND = Dd.norm();

  auto block_vectors = [&](const std::vector<FieldElement>& basis) {
    std::vector<KCoords> out;
    for (int j = 0; j <= n; ++j)
      for (const auto& b : basis) {
        KCoords c(D, 0);
        RatVec bc = b.coords();
        for (int a = 0; a < d; ++a) c[j * d + a] = bc[a];
        out.push_back(c);
      }
    return out;
  };

  if (als.fin.empty()) {
    L.inner = L.outer = Dd;
    L.kbasis = block_vectors(ideal_elems(K, Dd));
  } else {
    L.outer = K.ideal_mul(K.ideal_inverse(c0_ideal(als)), Dd);
    L.inner = K.ideal_mul(c1_ideal(als), Dd);
    auto ob = ideal_elems(K, L.outer), ib = ideal_elems(K, L.inner);
    RatMat Bo, Bi;
    for (const auto& b : ob) Bo.push_back(b.coords());
    for (const auto& b : ib) Bi.push_back(b.coords());
    RatMat M = rat_mul(Bi, rat_inverse(Bo));  // inner in outer coordinates
    IntMat Mi;
    for (const auto& row : M) {
      IntVec r;
      for (const auto& x : row) {
        if (x.get_den() != 1) fail(Errc::AssertionFailed, "inner ideal not contained in outer ideal");
        r.push_back(x.get_num());
      }
      Mi.push_back(r);
    }
    IntMat H = hnf_rows(Mi, d);
    mpz_class idx1 = hnf_det(H);
    mpz_class total = 1;
    for (int j = 0; j <= n; ++j) total *= idx1;
    if (total > max_cosets) fail(Errc::QuotientTooLarge, "sandwich quotient has " + total.get_str() + " cosets");
    L.quotient_index = total.get_si();
    // coset representatives 0 <= x_i < H_ii per block, in outer coordinates
    std::vector<long> radix;
    for (int j = 0; j <= n; ++j)
      for (int a = 0; a < d; ++a) radix.push_back(H[a][a].get_si());
    IntMat gens;
    std::vector<long> digit(D, 0);
    long selected = 0;
    for (long t = 0; t < L.quotient_index; ++t) {
      long r = t;
      for (int i = 0; i < D; ++i) {
        digit[i] = r % radix[i];
        r /= radix[i];
      }
      KVec v;
      for (int j = 0; j <= n; ++j) {
        FieldElement a = K.zero();
        for (int i = 0; i < d; ++i)
          if (digit[j * d + i]) a = a + mpq_class(digit[j * d + i]) * ob[i];
        v.push_back(a);
      }
      if (!in_height_lattice(als, Dd, v)) continue;
      ++selected;
      IntVec row(D);
      for (int i = 0; i < D; ++i) row[i] = digit[i];
      gens.push_back(row);
    }
    L.cosets_selected = selected;
    for (int j = 0; j <= n; ++j)
      for (int a = 0; a < d; ++a) {
        IntVec row(D, 0);
        for (int b = 0; b < d; ++b) row[j * d + b] = H[a][b];
        gens.push_back(row);
      }
    IntMat HL = hnf_rows(gens, D);
    if (hnf_det(HL) * selected != total) fail(Errc::AssertionFailed, "selected cosets do not form a group");
    for (const auto& row : HL) {
      KCoords c(D, 0);
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i < d; ++i) {
          if (row[j * d + i] == 0) continue;
          RatVec oc = ob[i].coords();
          for (int a = 0; a < d; ++a) c[j * d + a] += mpq_class(row[j * d + i]) * oc[a];
        }
      L.kbasis.push_back(c);
    }
  }
  L.det_ratio = abs(rat_det(L.kbasis));
  L.delta_ratio = L.det_ratio / qpow(ND, n + 1);
  double base = std::pow(base_covolume(K), n + 1);
  L.det = L.det_ratio.get_d() * base;
  L.Delta_N = L.delta_ratio.get_d() * base;
  std::vector<Vec> cols;
  for (const auto& kb : L.kbasis) cols.push_back(embed_kvec(K, kcoords_to_kvec(K, kb, n)));
  L.basis = make_lattice(std::move(cols));
  return L;
}

SandwichReport sandwich_check(const AdelicLipschitzSystem& als, const HeightLattice& L, std::mt19937_64& rng,
                              int samples) {
  const NumberField& K = als.K;
  SandwichReport rep;
  std::uniform_int_distribution<int> U(-6, 6);
  RatMat kb(L.kbasis.begin(), L.kbasis.end());
  auto inner_b = ideal_elems(K, L.inner);
  for (int s = 0; s < samples; ++s) {
    // a point of Lambda lies in sigma(C0^{-1} D)^{n+1}
    CoeffVec x(L.D);
    for (auto& v : x) v = U(rng);
    KVec a = kcoords_to_kvec(K, rat_combine(L.kbasis, x, false), L.n);
    ++rep.checked;
    bool ok = in_height_lattice(als, L.ideal, a);
    for (const auto& e : a) ok = ok && (e.is_zero() || K.ideal_contains(L.outer, e));
    if (!ok) ++rep.failures;
    // a point of sigma(C1 D)^{n+1} lies in Lambda
    KVec b;
    KCoords bc;
    for (int j = 0; j <= L.n; ++j) {
      FieldElement e = K.zero();
      for (const auto& ib : inner_b) e = e + mpq_class(U(rng)) * ib;
      b.push_back(e);
      for (const auto& c : e.coords()) bc.push_back(c);
    }
    ++rep.checked;
    auto sol = rat_solve_left(kb, bc);
    bool ok2 = sol.has_value() && in_height_lattice(als, L.ideal, b);
    if (sol)
      for (const auto& c : *sol) ok2 = ok2 && c.get_den() == 1;
    if (!ok2) ++rep.failures;
  }
  return rep;
}

bool primitive_test(const NumberField& K, const std::string& k, const KVec& point) {
  int j0 = -1;
  for (std::size_t j = 0; j < point.size(); ++j)
    if (!point[j].is_zero()) {
      j0 = int(j);
      break;
    }
  if (j0 < 0) fail(Errc::ZeroVector, "primitive_test of the zero vector");
  if (k == K.name()) return true;
  KVec ratios;
  FieldElement inv = point[j0].inverse();
  for (std::size_t j = 0; j < point.size(); ++j)
    if (int(j) != j0 && !point[j].is_zero()) ratios.push_back(point[j] * inv);
  return K.degree_over(k, ratios) == K.relative_degree(k);
}

bool primitive_test_scalarized(const NumberField& K, const std::string& k, const KVec& point) {
  int j0 = -1;
  for (std::size_t j = 0; j < point.size(); ++j)
    if (!point[j].is_zero()) {
      j0 = int(j);
      break;
    }
  if (j0 < 0) fail(Errc::ZeroVector, "primitive_test of the zero vector");
  const int e = K.relative_degree(k);
  if (e == 1) return true;
  KVec ratios;
  FieldElement inv = point[j0].inverse();
  for (std::size_t j = 0; j < point.size(); ++j)
    if (int(j) != j0) ratios.push_back(point[j] * inv);
  std::vector<int> m(ratios.size(), 0);
  for (;;) {
    FieldElement b = K.zero();
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m[j]) b = b + mpq_class(m[j]) * ratios[j];
    if (K.degree_over(k, {b}) == e) return true;
    std::size_t i = 0;
    while (i < m.size() && ++m[i] == e) m[i++] = 0;
    if (i == m.size()) return false;
  }
}

// --- delta ----------------------------------------------------------------------

std::vector<int> G_set(const NumberField& K, const std::string& k) {
  if (k == K.name()) return {1};
  auto g = K.subfield_degrees(k);
  std::sort(g.begin(), g.end());
  return g;
}

long mu_g(int m, int e, int g, int n) { return long(m) * (e - g) * (n + 1) - 1; }

DeltaReport delta_search(const NumberField& K, const std::string& k, double B, long budget) {
  if (!(B >= 1)) fail(Errc::BadParams, "delta_search needs B >= 1");
  const int d = K.degree();
  const int e = K.relative_degree(k);
  const double Bd = std::pow(B, d);
  const double tol = 1e-12;
  DeltaReport rep;
  rep.G = G_set(K, k);

  struct Cand {
    FieldElement a;
    double H;
    int deg;  // [k(a):k]
  };
  std::vector<Cand> cand;
  std::set<std::string> seen;
  long points = 0;
  auto consider = [&](const FieldElement& a) {
    std::string key = key_of({a});
    if (!seen.insert(key).second) return;
    auto h = weil_height(K, {K.one(), a});
    if (h.H > B * (1 + tol)) return;
    cand.push_back({a, h.H, K.degree_over(k, {a})});
  };
  consider(K.zero());
  for (const auto& Dn : K.integral_ideals_up_to(long(std::floor(Bd * (1 + tol))))) {
    auto inv = K.ideal_inverse(Dn);
    auto basis = K.ideal_basis(inv);
    std::vector<Vec> cols;
    for (const auto& b : basis) cols.push_back(K.minkowski(b));
    LatticeBasis L = make_lattice(cols);
    enumerate_short(
        L, std::sqrt(double(d)) * Bd * (1 + tol),
        [&](const CoeffVec& x, double) {
          if (++points > budget) fail(Errc::BudgetExceeded, "delta_search point budget exceeded");
          FieldElement a = K.zero();
          for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i]) a = a + mpq_class(x[i]) * basis[i];
          // house <= B^d
          auto emb = K.embed_double([&] {
            std::vector<double> c;
            for (const auto& q : a.coords()) c.push_back(q.get_d());
            return c;
          }());
          for (const auto& z : emb)
            if (std::abs(z) > Bd * (1 + tol)) return;
          consider(a);
          consider(-a);
        },
        budget);
  }
  std::sort(cand.begin(), cand.end(), [](const Cand& a, const Cand& b) { return a.H < b.H; });
  auto certify = [&](DeltaEstimate& est) {
    est.bound = B;
    est.candidates = long(cand.size());
    if (!est.found) {
      est.value = std::numeric_limits<double>::infinity();
      return;
    }
    est.certified = est.value < B || std::abs(est.value - 1) <= tol;
  };

  rep.delta.g = 0;
  for (const auto& c : cand)
    if (c.deg == e) {
      rep.delta.found = true;
      rep.delta.value = c.H;
      rep.delta.witness = {c.a};
      rep.delta.value_pow_d = weil_height(K, {K.one(), c.a}).Hd_exact;
      break;
    }
  certify(rep.delta);

  for (int g : rep.G) {
    DeltaEstimate est;
    est.g = g;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ca : cand) {
      if (ca.deg != (k == K.name() ? 1 : g)) continue;
      if (ca.H > best * (1 + tol)) break;
      for (const auto& cb : cand) {
        if (std::max(ca.H, cb.H) > best * (1 + tol)) break;
        if (K.degree_over(k, {ca.a, cb.a}) != e) continue;
        auto h = weil_height(K, {K.one(), ca.a, cb.a});
        if (h.H < best * (1 - tol)) {
          best = h.H;
          est.found = true;
          est.value = h.H;
          est.value_pow_d = h.Hd_exact;
          est.witness = {ca.a, cb.a};
        }
      }
    }
    certify(est);
    rep.delta_g.push_back(est);
  }
  for (const auto& est : rep.delta_g)
    if (rep.delta.certified && est.certified && rep.delta.value > 2.0 * e * est.value * (1 + tol))
      rep.le_2e_delta_g = false;
  return rep;
}

// --- constants ---------------------------------------------------------------

ZetaValue schanuel_constant(const NumberField& K, int n) {
  const auto& inv = K.invariants();
  auto z = dedekind_zeta(K, n + 1);
  double r = K.r(), s = K.s();
  double base = std::pow(2.0, r) * std::pow(2 * M_PI, s) / std::sqrt(std::abs(inv.disc.get_d()));
  double v = inv.h * inv.R / (inv.w * z.value) * std::pow(base, n + 1) * std::pow(n + 1.0, r + s - 1);
  return {v, v * (z.error / z.value + 1e-15)};
}

GlobalVolume global_volume(const AdelicLipschitzSystem& als, long mc_samples, std::uint64_t seed) {
  const NumberField& K = als.K;
  const int n = als.n, d = K.degree();
  GlobalVolume V;
  mpq_class sum = 0;
  for (const auto& A : K.invariants().class_reps) {
    auto L = build_height_lattice(als, A);
    V.class_delta_ratio.push_back(L.delta_ratio);
    sum += 1 / L.delta_ratio;
  }
  V.V_fin_exact = sum / K.invariants().h;
  V.V_fin = V.V_fin_exact.get_d();
  if (auto vi = v_inf_exact(als)) {
    V.V_inf = *vi;
    V.V_inf_exact = true;
  } else {
    // per-place Monte-Carlo in the box max |z| <= 1/c_v
    double v = 1, rel = 0;
    for (int p = 0; p < K.places(); ++p) {
      const auto& f = als.inf[p];
      int dim = f.dv * (n + 1);
      double h = 1 / f.c_v;
      Vec lo(dim, -h), hi(dim, h);
      auto est = volume_mc([&](const Vec& z) { return f.eval(z) <= 1; }, lo, hi, mc_samples, sub_seed(seed, p));
      v *= est.estimate;
      rel += est.halfwidth / est.estimate;
    }
    V.V_inf = v;
    V.V_inf_halfwidth = v * rel;
  }
  V.V_inf_bound_ok = V.V_inf - V.V_inf_halfwidth <= std::pow(2 * als.C_inf, d * (n + 1)) * (1 + 1e-12);
  V.V_N = V.V_inf * V.V_fin;
  return V;
}

double main_term_coefficient(const AdelicLipschitzSystem& als, const GlobalVolume& V) {
  const NumberField& K = als.K;
  const int n = als.n;
  double S = schanuel_constant(K, n).value;
  return std::pow(2.0, -K.r() * (n + 1)) * std::pow(M_PI, -K.s() * (n + 1)) * V.V_N * S;
}

// --- census ----------------------------------------------------------------

double direct_radius(const BasicSetGeometry& g, const AdelicLipschitzSystem& als, double T) {
  double su = 0;
  for (const auto& u : g.u) {
    double s = 0;
    for (double x : u) s += x * x;
    su += std::sqrt(s);
  }
  const int D = g.K.degree() * (als.n + 1);
  return std::sqrt(double(D)) * als.C_inf * std::exp(su) * T;
}

long certified_mobius_depth(const BasicSetGeometry& g, const AdelicLipschitzSystem& als, const mpq_class& X) {
  const int d = g.K.degree();
  double delta1 = sf0_radius(g, als);
  double b = std::pow(delta1 * X.get_d() * als.C_fin * std::sqrt(2.0 / d), d);
  return long(std::floor(b * (1 + 1e-12)));
}

namespace {

std::vector<mpq_class> sorted_grid(const std::vector<mpq_class>& X) {
  if (X.empty()) fail(Errc::BadParams, "empty X grid");
  for (const auto& x : X)
    if (x <= 0) fail(Errc::BadParams, "X must be positive");
  auto s = X;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

void fill_main(CensusRecord& rec, const AdelicLipschitzSystem& als) {
  const int d = als.K.degree(), n = als.n;
  for (auto& row : rec.rows) {
    double X = row.X.get_d();
    row.main_term = rec.main_coefficient * std::pow(X, d * (n + 1));
    row.residual = std::abs(double(row.count_primitive) - row.main_term);
    if (n == 1 && d == 1) row.log_term = std::log(std::max(2.0, 2 * als.C * X));
  }
}

CensusRecord new_record(const std::string& method, const std::string& k, const AdelicLipschitzSystem& als,
                        const std::vector<mpq_class>& grid, const CensusOptions& opt) {
  CensusRecord rec;
  rec.method = method;
  rec.field = als.K.name();
  rec.base = k;
  rec.n = als.n;
  rec.als_type = als.spec.type;
  try {
    rec.main_coefficient = main_term_coefficient(als, global_volume(als, opt.mc_samples, opt.seed));
  } catch (const Error& e) {
    if (e.code() != Errc::ZetaUnavailable) throw;
    rec.main_coefficient = std::numeric_limits<double>::quiet_NaN();
  }
  for (const auto& x : grid) {
    CensusRow r;
    r.X = x;
    rec.rows.push_back(r);
  }
  return rec;
}

}  // namespace

CensusRecord census_direct(const std::string& k, const AdelicLipschitzSystem& als, const std::vector<mpq_class>& Xg,
                           const CensusOptions& opt) {
  const NumberField& K = als.K;
  const int d = K.degree(), n = als.n;
  auto grid = sorted_grid(Xg);
  CensusRecord rec = new_record("direct", k, als, grid, opt);
  auto g = build_geometry(K);
  PrimitiveTester prim(K, k);
  const mpq_class Xmax = grid.back();
  const mpq_class Xmax_d = to_pow_d(Xmax, d);
  const bool filter = als.fin.empty() && als.max_norm_inf;

  std::map<std::string, KVec> points;
  for (const auto& A : K.invariants().class_reps) {
    auto L = build_height_lattice(als, A);
    auto ib = int_kbasis(L.kbasis);
    double T = std::pow(A.norm().get_d(), 1.0 / d) * Xmax.get_d();
    double R = direct_radius(g, als, T) * (1 + 1e-9);
    double bound_d = mpq_class(A.norm() * Xmax_d).get_d();
    try {
      enumerate_short(
          L.basis, R,
          [&](const CoeffVec& x, double) {
            ++rec.stats.lattice_points;
            if (filter && A.is_integral() && ib.ok) {
              // H^d >= inf_prod / gcd_j |N alpha_j| on integral vectors
              Vec z = L.basis.combine(x);
              double prod = 1;
              std::size_t off = 0;
              for (int p = 0; p < K.places(); ++p) {
                int w = K.local_degree(p);
                double m = 0;
                for (int j = 0; j <= n; ++j) {
                  std::size_t at = off + std::size_t(j * w);
                  m = std::max(m, w == 1 ? std::abs(z[at]) : std::hypot(z[at], z[at + 1]));
                }
                prod *= w == 1 ? m : m * m;
                off += std::size_t(w * (n + 1));
              }
              long gg = 0;
              bool exact = true;
              for (int j = 0; j <= n; ++j) {
                double nj = cnorm_d(K, z, n, j);
                if (nj > 1e15) exact = false;
                long v = std::lround(nj);
                if (v) gg = std::gcd(gg, v);
              }
              if (exact && gg > 0 && prod > bound_d * double(gg) * (1 + 1e-6)) return;
            }
            KVec v = kcoords_to_kvec(K, rat_combine(L.kbasis, x, false), n);
            int j0 = 0;
            while (v[j0].is_zero()) ++j0;
            FieldElement inv = v[j0].inverse();
            for (auto& a : v) a = a * inv;
            points.emplace(key_of(v), std::move(v));
          },
          opt.budget);
    } catch (const Error& e) {
      if (e.code() == Errc::EnumerationBudgetExceeded) fail(Errc::BudgetExceeded, e.what());
      throw;
    }
  }
  std::vector<const KVec*> cands;
  for (const auto& kv : points) cands.push_back(&kv.second);
  rec.stats.candidates = long(cands.size());

  std::vector<mpq_class> Xd;
  for (const auto& x : grid) Xd.push_back(to_pow_d(x, d));
  // first grid index at which the point is counted (grid.size() = never)
  std::vector<std::size_t> first(cands.size(), grid.size());
  std::vector<char> is_prim(cands.size(), 0);
  DecisionStats ds;
  run_items(long(cands.size()), opt.workers, [&](long i) {
    const KVec& v = *cands[i];
    HeightValue h = adelic_height(als, v);
    std::optional<std::optional<hp>> cache;
    auto precise = [&]() -> std::optional<hp> {
      if (!cache) cache = hp_inf_prod(als, v);
      return *cache;
    };
    auto le = [&](std::size_t t) {
      if (h.Hd_exact) return *h.Hd_exact <= Xd[t];
      return decide_le(h.inf_prod, precise, Xd[t] / h.fin_factor, &ds);
    };
    std::size_t lo = 0, hi = grid.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (le(mid))
        hi = mid;
      else
        lo = mid + 1;
    }
    first[i] = lo;
    if (lo < grid.size()) is_prim[i] = prim.test(v);
  });
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t t = first[i]; t < grid.size(); ++t) {
      rec.rows[t].count_all++;
      if (is_prim[i]) rec.rows[t].count_primitive++;
    }
  }
  for (auto& row : rec.rows) {
    row.per_class_all = {row.count_all};
    row.per_class_primitive = {row.count_primitive};
  }
  rec.stats.escalations = ds.escalations;
  rec.stats.snapped = ds.snapped;
  rec.stats.borderline = ds.borderline;
  fill_main(rec, als);
  return rec;
}

CensusRecord census_decomposed(const std::string& k, const AdelicLipschitzSystem& als,
                               const std::vector<mpq_class>& Xg, const CensusOptions& opt) {
  const NumberField& K = als.K;
  const int d = K.degree(), n = als.n;
  auto grid = sorted_grid(Xg);
  CensusRecord rec = new_record("decomposed", k, als, grid, opt);
  auto g = build_geometry(K);
  PrimitiveTester prim(K, k);
  const std::size_t nx = grid.size();
  const auto& reps = K.invariants().class_reps;
  const long w = K.invariants().w;

  std::vector<long> depth(nx);
  for (std::size_t t = 0; t < nx; ++t) {
    long need = certified_mobius_depth(g, als, grid[t]);
    if (opt.mobius_depth && *opt.mobius_depth < need)
      fail(Errc::TruncationInsufficient, "Moebius depth " + std::to_string(*opt.mobius_depth) +
                                             " below the certified vanishing bound " + std::to_string(need));
    depth[t] = opt.mobius_depth ? *opt.mobius_depth : need;
  }
  auto ideals = K.integral_ideals_up_to(depth.back());
  auto mu = moebius_values(K, ideals);

  struct Item {
    std::size_t cls;
    std::size_t ideal;
    long cell;
  };
  std::vector<Item> items;
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = 0; b < ideals.size(); ++b)
      if (mu[b] != 0)
        for (long c = 0; c < g.t; ++c) items.push_back({a, b, c});

  struct ItemOut {
    std::vector<long> all, prim;
    long points = 0;
  };
  std::vector<ItemOut> out(items.size());
  // lattices per (class, ideal), built on demand
  std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<HeightLattice>> lat;
  std::mutex lat_m;
  SfStats stats;

  run_items(long(items.size()), opt.workers, [&](long it) {
    const Item& item = items[it];
    const IdealModule& A = reps[item.cls];
    ItemOut& o = out[it];
    o.all.assign(nx, 0);
    o.prim.assign(nx, 0);
    mpz_class NB = ideals[item.ideal].norm().get_num();
    std::shared_ptr<HeightLattice> L;
    {
      std::lock_guard<std::mutex> lk(lat_m);
      auto& slot = lat[{item.cls, item.ideal}];
      if (!slot) slot = std::make_shared<HeightLattice>(build_height_lattice(als, K.ideal_mul(A, ideals[item.ideal])));
      L = slot;
    }
    auto ib = int_kbasis(L->kbasis);
    LatticeBasis TL = tau_lattice(g, L->basis, item.cell, n);
    mpq_class NA = A.norm();
    std::vector<mpq_class> Td;
    for (const auto& x : grid) Td.push_back(NA * to_pow_d(x, d));
    double Tmax = std::pow(NA.get_d(), 1.0 / d) * grid.back().get_d();
    double R = sf0_radius(g, als) * Tmax * (1 + 1e-9);
    auto visit = [&](const CoeffVec& x, bool neg) {
      Vec wv = TL.combine(x);
      if (neg)
        for (auto& e : wv) e = -e;
      std::optional<std::optional<hp>> cache;
      auto precise = [&]() -> std::optional<hp> {
        if (!cache) cache = hp_inf_prod(als, kcoords_to_kvec(K, rat_combine(L->kbasis, x, neg), n));
        return *cache;
      };
      auto dec = sf_membership_td(g, als, Td.back(), wv, precise, &stats);
      if (!dec.accepted || !dec.cell || *dec.cell != 0) return;
      bool pr;
      if (prim.all())
        pr = true;
      else if (ib.ok)
        pr = prim.test_coords(int_combine(ib, x, neg), n);
      else
        pr = prim.test(kcoords_to_kvec(K, rat_combine(L->kbasis, x, neg), n));
      for (std::size_t t = 0; t < nx; ++t) {
        if (NB > depth[t]) continue;
        bool in = t + 1 == nx ? true : decide_le(dec.prod, precise, Td[t], &stats.height);
        if (!in) continue;
        o.all[t]++;
        if (pr) o.prim[t]++;
      }
    };
    try {
      enumerate_short(
          TL, R,
          [&](const CoeffVec& x, double) {
            o.points += 2;
            visit(x, false);
            visit(x, true);
          },
          opt.budget);
    } catch (const Error& e) {
      if (e.code() == Errc::EnumerationBudgetExceeded) fail(Errc::BudgetExceeded, e.what());
      throw;
    }
  });

  for (auto& row : rec.rows) {
    row.per_class_all.assign(reps.size(), 0);
    row.per_class_primitive.assign(reps.size(), 0);
    row.per_cell_all.assign(g.t, 0);
  }
  for (std::size_t it = 0; it < items.size(); ++it) {
    int m = mu[items[it].ideal];
    rec.stats.lattice_points += out[it].points;
    for (std::size_t t = 0; t < nx; ++t) {
      rec.rows[t].per_class_all[items[it].cls] += m * out[it].all[t];
      rec.rows[t].per_class_primitive[items[it].cls] += m * out[it].prim[t];
      rec.rows[t].per_cell_all[items[it].cell] += m * out[it].all[t];
    }
  }
  for (std::size_t t = 0; t < nx; ++t) {
    auto& row = rec.rows[t];
    long all = 0, pr = 0;
    for (long v : row.per_class_all) all += v;
    for (long v : row.per_class_primitive) pr += v;
    if (all % w != 0 || pr % w != 0)
      fail(Errc::AssertionFailed, "orbit count not divisible by w_K at X = " + row.X.get_str());
    row.count_all = all / w;
    row.count_primitive = pr / w;
    row.mobius_depth = depth[t];
    long used = 0;
    for (std::size_t b = 0; b < ideals.size(); ++b)
      if (mu[b] != 0 && ideals[b].norm() <= depth[t]) ++used;
    row.mobius_ideals = used;
  }
  rec.stats.escalations = stats.height.escalations;
  rec.stats.snapped = stats.height.snapped;
  rec.stats.borderline = stats.height.borderline;
  rec.stats.seam_snaps = stats.seam_snaps;
  fill_main(rec, als);
  return rec;
}

// --- experiments -------------------------------------------------------------

namespace {

struct TauMinima {
  MinimaCertificate cert;
  std::vector<FieldElement> theta;
  int l = 1, g = 1;
};

TauMinima tau_minima(const AdelicLipschitzSystem& als, const BasicSetGeometry& geo, const IdealModule& D,
                     const std::string& k, long cell) {
  const NumberField& K = als.K;
  IdealModule outer = K.ideal_mul(K.ideal_inverse(c0_ideal(als)), D);
  auto basis = K.ideal_basis(outer);
  std::vector<Vec> cols;
  for (const auto& b : basis) cols.push_back(tau_apply(geo, cell, embed_kvec(K, {b}), 0));
  LatticeBasis L = make_lattice(cols);
  TauMinima tm;
  tm.cert = successive_minima(L);
  for (const auto& wv : tm.cert.witnesses) {
    FieldElement t = K.zero();
    for (std::size_t i = 0; i < wv.size(); ++i)
      if (wv[i]) t = t + mpq_class(wv[i]) * basis[i];
    tm.theta.push_back(t);
  }
  const int d = K.degree();
  const int e = K.relative_degree(k);
  FieldElement inv = tm.theta[0].inverse();
  KVec ratios;
  tm.l = d;
  for (int l = 1; l <= d; ++l) {
    if (l >= 2) ratios.push_back(tm.theta[l - 1] * inv);
    if (K.degree_over(k, ratios) == e) {
      tm.l = l;
      break;
    }
  }
  if (tm.l >= 2) {
    KVec r0(ratios.begin(), ratios.begin() + (tm.l - 2));
    tm.g = K.degree_over(k, r0);
  }
  return tm;
}

}  // namespace

MinimaBoundsReport minima_bounds_check(const AdelicLipschitzSystem& als, const IdealModule& D, const std::string& k,
                                       long cell, const std::map<int, double>& delta_g, std::mt19937_64& rng,
                                       int tuples) {
  const NumberField& K = als.K;
  const int d = K.degree(), n = als.n;
  const int e = K.relative_degree(k);
  auto geo = build_geometry(K);
  auto tm = tau_minima(als, geo, D, k, cell);
  MinimaBoundsReport rep;
  rep.l = tm.l;
  rep.g = tm.g;
  rep.lambda = tm.cert.lambda;
  double ND = std::pow(D.norm().get_d(), 1.0 / d);
  rep.lambda1_bound = std::sqrt(d / 2.0) / als.C_fin * ND;
  double dg = 1;
  if (k != K.name()) {
    auto it = delta_g.find(tm.g);
    if (it == delta_g.end()) fail(Errc::BadParams, "no delta_g value for g = " + std::to_string(tm.g));
    dg = it->second;
  }
  rep.lambdal_bound = 1 / (std::sqrt(2.0) * e * d) / als.C_fin * ND * dg;
  rep.l_bound_ok = tm.l <= d / 2 + 1;
  rep.lambda1_ok = rep.lambda[0] >= rep.lambda1_bound * (1 - 1e-9);
  rep.lambdal_ok = rep.lambda[tm.l - 1] >= rep.lambdal_bound * (1 - 1e-9);
  // sampled primitive tuples of C0^{-1} D have |v| >= lambda_l
  IdealModule outer = K.ideal_mul(K.ideal_inverse(c0_ideal(als)), D);
  auto basis = K.ideal_basis(outer);
  std::uniform_int_distribution<int> U(-3, 3);
  for (int s = 0; s < tuples; ++s) {
    KVec v;
    bool zero = true;
    for (int j = 0; j <= n; ++j) {
      FieldElement a = K.zero();
      for (const auto& b : basis) a = a + mpq_class(U(rng)) * b;
      zero = zero && a.is_zero();
      v.push_back(a);
    }
    if (zero || !primitive_test(K, k, v)) continue;
    ++rep.tuples_checked;
    Vec z = tau_apply(geo, cell, embed_kvec(K, v), n);
    double s2 = 0;
    for (double x : z) s2 += x * x;
    if (std::sqrt(s2) < rep.lambda[tm.l - 1] * (1 - 1e-9)) ++rep.tuple_failures;
  }
  return rep;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (y[i] > 0 && x[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  if (lx.size() < 2) return 0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(lx.size());
  my /= double(lx.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0;
}

std::vector<double> residual_ratios(const CensusRecord& rec, int d, double C_N) {
  const int D = d * (rec.n + 1);
  std::vector<double> ratio;
  for (const auto& r : rec.rows) {
    double X = r.X.get_d();
    double LN = rec.n == 1 && d == 1 ? std::log(std::max(2.0, 2 * C_N * X)) : 1.0;
    ratio.push_back(r.residual / (std::pow(X, D - 1) * LN));
  }
  return ratio;
}

double residual_ratio_slope_top(const CensusRecord& rec, int d, double C_N) {
  if (rec.rows.size() < 2) fail(Errc::GridTooSmall, "the top half needs at least 2 grid points");
  auto ratio = residual_ratios(rec, d, C_N);
  std::vector<double> xs;
  for (const auto& r : rec.rows) xs.push_back(r.X.get_d());
  std::size_t h = std::min(xs.size() / 2, xs.size() - 2);
  std::vector<double> tx(xs.begin() + long(h), xs.end()), ty(ratio.begin() + long(h), ratio.end());
  return loglog_slope(tx, ty);
}

FitReport asymptotic_fit(const CensusRecord& rec, int d, double tolerance, double C_N) {
  if (rec.rows.size() < 5) fail(Errc::GridTooSmall, "asymptotic_fit needs at least 5 grid points");
  FitReport f;
  const int D = d * (rec.n + 1);
  const auto& last = rec.rows.back();
  double Xl = last.X.get_d();
  f.leading_coefficient = double(last.count_primitive) / std::pow(Xl, D);
  f.expected = rec.main_coefficient;
  f.rel_error = std::abs(f.leading_coefficient - f.expected) / f.expected;
  f.coefficient_ok = f.rel_error <= tolerance;
  std::vector<double> xs, res;
  for (const auto& r : rec.rows) {
    xs.push_back(r.X.get_d());
    res.push_back(r.residual);
  }
  f.ratios = residual_ratios(rec, d, C_N);
  f.residual_slope = loglog_slope(xs, res);
  f.ratio_slope_top = residual_ratio_slope_top(rec, d, C_N);
  f.slope_ok = f.residual_slope <= D - 1 + 0.3;
  return f;
}

CellCountReport cell_count_experiment(const std::string& k, const AdelicLipschitzSystem& als,
                               const std::vector<IdealModule>& ideals, const std::vector<double>& Ts,
                               const std::map<int, double>& delta_g, long budget) {
  const NumberField& K = als.K;
  const int d = K.degree(), n = als.n, D = d * (n + 1);
  const int m = K.subfield_degree(k), e = d / m;
  auto geo = build_geometry(K);
  auto vi = v_inf_exact(als);
  if (!vi) fail(Errc::UnsupportedSpec, "the cell-count experiment needs an exact V_inf");
  double vol1 = std::pow(n + 1.0, geo.q) * K.invariants().R * *vi / double(geo.t);  // Vol S_{F(0)}(1)
  PrimitiveTester prim(K, k);
  CellCountReport rep;
  for (const auto& Dd : ideals) {
    auto L = build_height_lattice(als, Dd);
    auto ib = int_kbasis(L.kbasis);
    double ND = Dd.norm().get_d();
    for (long cell = 0; cell < geo.t; ++cell) {
      auto tm = tau_minima(als, geo, Dd, k, cell);
      double dg = 1;
      if (k != K.name()) {
        auto it = delta_g.find(tm.g);
        if (it == delta_g.end()) fail(Errc::BadParams, "no delta_g value for g = " + std::to_string(tm.g));
        dg = it->second;
      }
      long mug = k == K.name() ? -1 : mu_g(m, e, tm.g, n);
      LatticeBasis TL = tau_lattice(geo, L.basis, cell, n);
      for (double T : Ts) {
        mpq_class Td(std::pow(T, d));
        long count = 0;
        enumerate_short(
            TL, sf0_radius(geo, als) * T * (1 + 1e-9),
            [&](const CoeffVec& x, double) {
              for (bool neg : {false, true}) {
                Vec w = TL.combine(x);
                if (neg)
                  for (auto& v : w) v = -v;
                auto dec = sf_membership_td(geo, als, Td, w);
                if (!dec.accepted || *dec.cell != 0) continue;
                bool pr = prim.all() || (ib.ok ? prim.test_coords(int_combine(ib, x, neg), n)
                                               : prim.test(kcoords_to_kvec(K, rat_combine(L.kbasis, x, neg), n)));
                if (pr) ++count;
              }
            },
            budget);
        CellCountEntry en;
        en.ideal = Dd.to_string();
        en.norm = Dd.norm().get_num();
        en.cell = cell;
        en.T = T;
        en.count = count;
        en.g = tm.g;
        en.main = vol1 * std::pow(T, D) / L.det;
        en.scale = als.A_N * std::pow(T, D - 1) / (std::pow(ND, n + 1 - 1.0 / d) * std::pow(dg, double(mug)));
        en.ratio = std::abs(double(count) - en.main) / en.scale;
        rep.max_ratio = std::max(rep.max_ratio, en.ratio);
        rep.entries.push_back(en);
      }
    }
  }
  return rep;
}

MoebiusSumReport moebius_volume_check(const AdelicLipschitzSystem& als, const std::vector<long>& bounds) {
  const NumberField& K = als.K;
  const int n = als.n;
  MoebiusSumReport rep;
  rep.bounds = bounds;
  std::sort(rep.bounds.begin(), rep.bounds.end());
  const auto& reps = K.invariants().class_reps;
  double sum_inv = 0, max_inv = 0;
  for (const auto& A : reps) {
    double v = 1 / build_height_lattice(als, A).Delta_N;
    sum_inv += v;
    max_inv = std::max(max_inv, v);
  }
  auto z = dedekind_zeta(K, n + 1);
  rep.target = sum_inv / z.value;
  auto ideals = K.integral_ideals_up_to(rep.bounds.empty() ? 1 : rep.bounds.back());
  auto mu = moebius_values(K, ideals);
  double partial = 0, plain = 0;
  std::size_t i = 0;
  for (long B : rep.bounds) {
    for (; i < ideals.size() && ideals[i].norm() <= B; ++i) {
      double NB = ideals[i].norm().get_d();
      double w = std::pow(NB, -(n + 1.0));
      plain += w;
      if (!mu[i]) continue;
      for (const auto& A : reps) {
        double inv = 1 / build_height_lattice(als, K.ideal_mul(A, ideals[i])).Delta_N;
        partial += mu[i] * w * inv;
      }
    }
    rep.partial.push_back(partial);
    rep.tail_bound.push_back(double(reps.size()) * max_inv * std::max(0.0, z.value - plain) + z.error);
  }
  return rep;
}

// --- serialization -------------------------------------------------------------

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string census_csv(const CensusRecord& rec) {
  std::ostringstream os;
  os << "X,count_all,count_primitive,main_term,residual\n";
  for (const auto& r : rec.rows)
    os << r.X.get_str() << ',' << r.count_all << ',' << r.count_primitive << ',' << format_number(r.main_term) << ','
       << format_number(r.residual) << '\n';
  return os.str();
}

nlohmann::ordered_json census_json(const CensusRecord& rec) {
  nlohmann::ordered_json j;
  j["method"] = rec.method;
  j["field"] = rec.field;
  j["base_field"] = rec.base;
  j["n"] = rec.n;
  j["als"] = rec.als_type;
  j["main_coefficient"] = format_number(rec.main_coefficient);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : rec.rows) {
    nlohmann::ordered_json o;
    o["X"] = r.X.get_str();
    o["count_all"] = r.count_all;
    o["count_primitive"] = r.count_primitive;
    o["main_term"] = format_number(r.main_term);
    o["residual"] = format_number(r.residual);
    o["per_class_all"] = r.per_class_all;
    o["per_class_primitive"] = r.per_class_primitive;
    if (!r.per_cell_all.empty()) o["per_cell_all"] = r.per_cell_all;
    if (rec.method == "decomposed") {
      o["mobius_depth"] = r.mobius_depth;
      o["mobius_ideals"] = r.mobius_ideals;
    }
    if (r.log_term) o["L_N"] = format_number(*r.log_term);
    rows.push_back(o);
  }
  j["rows"] = rows;
  nlohmann::ordered_json s;
  s["lattice_points"] = rec.stats.lattice_points;
  s["candidates"] = rec.stats.candidates;
  s["escalations"] = rec.stats.escalations;
  s["snapped"] = rec.stats.snapped;
  s["borderline"] = rec.stats.borderline;
  s["seam_snaps"] = rec.stats.seam_snaps;
  j["stats"] = s;
  return j;
}

}  // namespace primpts
