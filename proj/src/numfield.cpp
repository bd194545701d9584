#include "primpts/numfield.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace primpts {

using nlohmann::json;

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ReducedPolynomial: return "ReducedPolynomial";
    case Errc::SignatureMismatch: return "SignatureMismatch";
    case Errc::DiscriminantMismatch: return "DiscriminantMismatch";
    case Errc::UnitLatticeMismatch: return "UnitLatticeMismatch";
    case Errc::PrecisionUnreachable: return "PrecisionUnreachable";
    case Errc::PrecisionStall: return "PrecisionStall";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::NotASubfield: return "NotASubfield";
    case Errc::UnsupportedSpec: return "UnsupportedSpec";
    case Errc::NotANorm: return "NotANorm";
    case Errc::DimensionTooLarge: return "DimensionTooLarge";
    case Errc::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case Errc::WitnessNotInLattice: return "WitnessNotInLattice";
    case Errc::NotLatticeMember: return "NotLatticeMember";
    case Errc::BadParams: return "BadParams";
    case Errc::DomainMismatch: return "DomainMismatch";
    case Errc::BadQ: return "BadQ";
    case Errc::UndecidableMembership: return "UndecidableMembership";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::UnitRankMismatch: return "UnitRankMismatch";
    case Errc::BadIndex: return "BadIndex";
    case Errc::ChartsUnavailable: return "ChartsUnavailable";
    case Errc::QuotientTooLarge: return "QuotientTooLarge";
    case Errc::NonIntegralExponent: return "NonIntegralExponent";
    case Errc::NothingFound: return "NothingFound";
    case Errc::ZetaUnavailable: return "ZetaUnavailable";
    case Errc::GridTooSmall: return "GridTooSmall";
    case Errc::TruncationInsufficient: return "TruncationInsufficient";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::AssertionFailed: return "AssertionFailed";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// polynomial helpers

namespace {

using RatPoly = std::vector<mpq_class>;  // ascending

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RatPoly poly_mod(RatPoly a, const RatPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    mpq_class f = a.back() / b.back();
    std::size_t sh = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[sh + i] -= f * b[i];
    trim(a);
  }
  return a;
}

RatPoly poly_gcd(RatPoly a, RatPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    RatPoly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

template <class P, class Z>
void eval_poly(const IntVec& f, const Z& z, Z& val, Z& der) {
  val = Z(P(0));
  der = Z(P(0));
  for (std::size_t k = f.size(); k-- > 0;) {
    der = der * z + val;
    val = val * z + Z(P(f[k].get_d()));
  }
}

hcomplex hp_eval(const IntVec& f, const hcomplex& z, hcomplex* der) {
  hcomplex v, dv;
  for (std::size_t k = f.size(); k-- > 0;) {
    dv = dv * z + v;
    v = v * z + hcomplex(to_hp(f[k]));
  }
  if (der) *der = dv;
  return v;
}

std::vector<std::complex<double>> aberth(const IntVec& f) {
  std::size_t d = f.size() - 1;
  std::vector<std::complex<double>> z(d);
  double bound = 1.0;
  for (std::size_t k = 0; k < d; ++k) bound = std::max(bound, 1.0 + std::abs(f[k].get_d()));
  double rad = std::min(bound, 2.0);
  for (std::size_t k = 0; k < d; ++k) {
    double ang = 2.0 * M_PI * (double(k) + 0.25) / double(d) + 0.4;
    z[k] = std::polar(rad, ang);
  }
  for (int it = 0; it < 500; ++it) {
    double maxstep = 0;
    for (std::size_t i = 0; i < d; ++i) {
      std::complex<double> v, dv;
      eval_poly<double, std::complex<double>>(f, z[i], v, dv);
      if (std::abs(v) == 0) continue;
      std::complex<double> ratio = v / dv;
      std::complex<double> sum = 0;
      for (std::size_t j = 0; j < d; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      std::complex<double> w = ratio / (1.0 - ratio * sum);
      z[i] -= w;
      maxstep = std::max(maxstep, std::abs(w) / (1.0 + std::abs(z[i])));
    }
    if (maxstep < 1e-15) break;
  }
  return z;
}

mpq_class parse_rat_str(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) fail(Errc::ConfigInvalid, "bad rational '" + s + "'");
  q.canonicalize();
  return q;
}

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) fail(Errc::ConfigInvalid, where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(Errc::ConfigInvalid, "unknown key '" + it.key() + "' in " + where);
}

int divisors_of(long n, std::vector<long>& out) {
  out.clear();
  for (long i = 1; i * i <= n; ++i)
    if (n % i == 0) {
      out.push_back(i);
      if (i * i != n) out.push_back(n / i);
    }
  return int(out.size());
}

}  // namespace

mpq_class parse_rational(const json& j) {
  if (j.is_number_integer()) return mpq_class(mpz_class(std::to_string(j.get<long long>())));
  if (j.is_string()) return parse_rat_str(j.get<std::string>());
  fail(Errc::ConfigInvalid, "expected integer or rational string, got " + j.dump());
}

RatVec parse_rational_vec(const json& j) {
  if (!j.is_array()) fail(Errc::ConfigInvalid, "expected array, got " + j.dump());
  RatVec v;
  for (const auto& x : j) v.push_back(parse_rational(x));
  return v;
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(std::shared_ptr<const FieldData> f, RatVec power)
    : f_(std::move(f)), p_(std::move(power)) {}

RatVec FieldElement::coords() const { return rat_vec_mat(p_, f_->basis_inv); }

bool FieldElement::is_zero() const {
  return std::all_of(p_.begin(), p_.end(), [](const mpq_class& x) { return x == 0; });
}

bool FieldElement::is_rational() const {
  for (std::size_t i = 1; i < p_.size(); ++i)
    if (p_[i] != 0) return false;
  return true;
}

bool FieldElement::is_integral_coords() const {
  for (const auto& c : coords())
    if (c.get_den() != 1) return false;
  return true;
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  RatVec c = a.p_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.p_[i];
  return {a.f_, std::move(c)};
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  RatVec c = a.p_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.p_[i];
  return {a.f_, std::move(c)};
}

FieldElement FieldElement::operator-() const {
  RatVec c = p_;
  for (auto& x : c) x = -x;
  return {f_, std::move(c)};
}

FieldElement operator*(const mpq_class& k, const FieldElement& a) {
  RatVec c = a.p_;
  for (auto& x : c) x *= k;
  return {a.f_, std::move(c)};
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  const FieldData& F = *a.f_;
  std::size_t d = F.d;
  RatVec conv(2 * d - 1, 0);
  for (std::size_t i = 0; i < d; ++i) {
    if (a.p_[i] == 0) continue;
    for (std::size_t j = 0; j < d; ++j) conv[i + j] += a.p_[i] * b.p_[j];
  }
  RatVec c(conv.begin(), conv.begin() + d);
  for (std::size_t k = d; k < conv.size(); ++k) {
    if (conv[k] == 0) continue;
    for (std::size_t j = 0; j < d; ++j) c[j] += conv[k] * F.power_red[k][j];
  }
  return {a.f_, std::move(c)};
}

namespace {
RatMat power_mult_matrix(const FieldElement& a) {
  const FieldData& F = *a.field();
  RatMat m;
  RatVec e(F.d, 0);
  for (int j = 0; j < F.d; ++j) {
    std::fill(e.begin(), e.end(), mpq_class(0));
    e[j] = 1;
    m.push_back((a * FieldElement(a.field(), e)).power());
  }
  return m;
}
}  // namespace

mpq_class FieldElement::norm() const { return rat_det(power_mult_matrix(*this)); }

mpq_class FieldElement::trace() const {
  RatMat m = power_mult_matrix(*this);
  mpq_class t = 0;
  for (std::size_t i = 0; i < m.size(); ++i) t += m[i][i];
  return t;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) fail(Errc::ZeroVector, "inverse of zero");
  RatVec one(f_->d, 0);
  one[0] = 1;
  auto x = rat_solve_left(power_mult_matrix(*this), one);
  return {f_, *x};
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

std::string FieldElement::to_string() const {
  std::ostringstream os;
  os << "[";
  RatVec c = coords();
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i].get_str();
  os << "]";
  return os.str();
}

mpq_class IdealModule::norm() const {
  mpq_class n(hnf_det(hnf));
  mpz_class dd;
  mpz_pow_ui(dd.get_mpz_t(), den.get_mpz_t(), hnf.size());
  return n / mpq_class(dd);
}

std::string IdealModule::to_string() const {
  std::ostringstream os;
  os << "(1/" << den.get_str() << ")[";
  for (std::size_t i = 0; i < hnf.size(); ++i) {
    os << (i ? ";" : "");
    for (std::size_t j = 0; j < hnf[i].size(); ++j) os << (j ? "," : "") << hnf[i][j].get_str();
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// NumberField

FieldElement NumberField::from_coords(const RatVec& c) const {
  return {d_, rat_vec_mat(c, d_->basis)};
}
FieldElement NumberField::from_power(const RatVec& p) const { return {d_, p}; }
FieldElement NumberField::from_rat(const mpq_class& q) const {
  RatVec p(d_->d, 0);
  p[0] = q;
  return {d_, p};
}
FieldElement NumberField::from_int(const mpz_class& z) const { return from_rat(mpq_class(z)); }
FieldElement NumberField::generator() const {
  RatVec p(d_->d, 0);
  if (d_->d == 1)
    p[0] = -mpq_class(d_->min_poly[0]);
  else
    p[1] = 1;
  return {d_, p};
}

RatMat NumberField::mult_matrix(const FieldElement& a) const {
  RatMat m;
  for (int k = 0; k < d_->d; ++k) m.push_back((a * FieldElement(d_, d_->basis[k])).coords());
  return m;
}

EmbeddingValue NumberField::embed(const FieldElement& a, double precision) const {
  if (!(precision >= kMinRadius))
    fail(Errc::PrecisionUnreachable, "requested radius below working precision");
  EmbeddingValue out;
  const FieldData& F = *d_;
  const RatVec& c = a.power();
  for (int p = 0; p < F.r + F.s; ++p) {
    const hcomplex& z = F.roots[p];
    const hp& eps = F.root_rad[p];
    hcomplex v;
    hp mag = 0, drift = 0, zabs = z.abs(), zpow_lo = 1;
    for (std::size_t k = c.size(); k-- > 0;) v = v * z + hcomplex(to_hp(c[k]));
    // |sum c_k (z^k - rho^k)| <= sum |c_k| k (|z|+eps)^{k-1} eps
    hp zr = zabs + eps, zp = 1;
    for (std::size_t k = 0; k < c.size(); ++k) {
      hp ck = abs(to_hp(c[k]));
      if (k > 0) {
        drift += ck * hp(unsigned(k)) * zp * eps;
        zp *= zr;
      }
      mag += ck * zpow_lo;
      zpow_lo *= zabs + 1;
    }
    hp rad = drift + mag * hp("1e-110");
    if (rad > hp(precision)) fail(Errc::PrecisionUnreachable, "embedding radius exceeds request");
    if (p < F.r) v.im = 0;
    out.mid.push_back(v);
    out.rad.push_back(rad);
  }
  return out;
}

std::vector<std::complex<double>> NumberField::embed_double(const std::vector<double>& coords) const {
  const FieldData& F = *d_;
  std::vector<std::complex<double>> v(F.r + F.s, 0.0);
  for (int k = 0; k < F.d; ++k) {
    if (coords[k] == 0) continue;
    for (int p = 0; p < F.r + F.s; ++p) v[p] += coords[k] * F.basis_emb[k][p];
  }
  return v;
}

std::vector<double> NumberField::minkowski_coords(const std::vector<double>& coords) const {
  auto e = embed_double(coords);
  std::vector<double> out;
  for (int p = 0; p < d_->r + d_->s; ++p) {
    out.push_back(e[p].real());
    if (p >= d_->r) out.push_back(e[p].imag());
  }
  return out;
}

std::vector<double> NumberField::minkowski(const FieldElement& a) const {
  EmbeddingValue e = embed(a, 1e-30);
  std::vector<double> out;
  for (int p = 0; p < d_->r + d_->s; ++p) {
    out.push_back(e.mid[p].re.convert_to<double>());
    if (p >= d_->r) out.push_back(e.mid[p].im.convert_to<double>());
  }
  return out;
}

std::vector<std::vector<double>> NumberField::minkowski_basis() const {
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < d_->d; ++k) {
    std::vector<double> c(d_->d, 0.0);
    c[k] = 1.0;
    rows.push_back(minkowski_coords(c));
  }
  return rows;
}

std::vector<double> NumberField::log_embedding(const FieldElement& a) const {
  if (a.is_zero()) fail(Errc::ZeroVector, "log embedding of zero");
  EmbeddingValue e = embed(a, 1e-30);
  std::vector<double> out;
  for (int p = 0; p < d_->r + d_->s; ++p)
    out.push_back(local_degree(p) * log(e.mid[p].abs()).convert_to<double>());
  return out;
}

// --- ideals ------------------------------------------------------------------

namespace {
IdealModule canonical_ideal(IntMat h, mpz_class den) {
  mpz_class g = den;
  for (const auto& r : h)
    for (const auto& x : r) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g != 1) {
    for (auto& r : h)
      for (auto& x : r) x /= g;
    den /= g;
  }
  return {std::move(h), std::move(den)};
}

IdealModule module_from_rows(const std::vector<RatVec>& rows, std::size_t d) {
  RatMat m(rows.begin(), rows.end());
  mpz_class D = lcm_denominators(m);
  IntMat im;
  for (const auto& r : rows) {
    IntVec v(d);
    for (std::size_t j = 0; j < d; ++j) {
      mpq_class t = r[j] * D;
      v[j] = t.get_num();
    }
    im.push_back(std::move(v));
  }
  return canonical_ideal(hnf_rows(std::move(im), d), D);
}
}  // namespace

IdealModule NumberField::ideal_from_generators(const std::vector<FieldElement>& gens) const {
  std::vector<RatVec> rows;
  bool any = false;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    any = true;
    for (auto& r : mult_matrix(g)) rows.push_back(std::move(r));
  }
  if (!any) fail(Errc::ZeroVector, "ideal generated by zero vector");
  return module_from_rows(rows, d_->d);
}

IdealModule NumberField::unit_ideal() const {
  IntMat h(d_->d, IntVec(d_->d, 0));
  for (int i = 0; i < d_->d; ++i) h[i][i] = 1;
  return {h, 1};
}

std::vector<FieldElement> NumberField::ideal_basis(const IdealModule& a) const {
  std::vector<FieldElement> out;
  for (const auto& r : a.hnf) {
    RatVec c(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) c[j] = mpq_class(r[j], a.den);
    for (auto& x : c) x.canonicalize();
    out.push_back(from_coords(c));
  }
  return out;
}

IdealModule NumberField::ideal_from_hnf(IntMat h, mpz_class den) const {
  std::size_t d = d_->d;
  if (h.size() != d || den <= 0) fail(Errc::ConfigInvalid, "ideal matrix has wrong shape");
  for (const auto& r : h)
    if (r.size() != d) fail(Errc::ConfigInvalid, "ideal matrix has wrong shape");
  IdealModule m;
  try {
    m = canonical_ideal(hnf_rows(h, d), den);
  } catch (const std::domain_error&) {
    fail(Errc::ConfigInvalid, "ideal matrix is singular");
  }
  // O_K-closure: every basis element times every omega_k stays inside
  for (const auto& row : m.hnf)
    for (std::size_t k = 0; k < d; ++k) {
      IntVec v(d, 0);
      for (std::size_t l = 0; l < d; ++l)
        for (std::size_t j = 0; j < d; ++j) v[j] += row[l] * d_->mtab[l][k][j];
      if (!hnf_contains(m.hnf, v)) fail(Errc::ConfigInvalid, "module is not an ideal");
    }
  return m;
}

IdealModule NumberField::ideal_mul(const IdealModule& a, const IdealModule& b) const {
  std::size_t d = d_->d;
  IntMat rows;
  for (const auto& x : a.hnf)
    for (const auto& y : b.hnf) {
      IntVec v(d, 0);
      for (std::size_t k = 0; k < d; ++k) {
        if (x[k] == 0) continue;
        for (std::size_t l = 0; l < d; ++l) {
          if (y[l] == 0) continue;
          mpz_class f = x[k] * y[l];
          for (std::size_t j = 0; j < d; ++j) v[j] += f * d_->mtab[k][l][j];
        }
      }
      rows.push_back(std::move(v));
    }
  return canonical_ideal(hnf_rows(std::move(rows), d), a.den * b.den);
}

IdealModule NumberField::ideal_add(const IdealModule& a, const IdealModule& b) const {
  std::size_t d = d_->d;
  mpz_class D;
  mpz_lcm(D.get_mpz_t(), a.den.get_mpz_t(), b.den.get_mpz_t());
  IntMat rows;
  for (const auto& r : a.hnf) {
    IntVec v = r;
    for (auto& x : v) x *= D / a.den;
    rows.push_back(v);
  }
  for (const auto& r : b.hnf) {
    IntVec v = r;
    for (auto& x : v) x *= D / b.den;
    rows.push_back(v);
  }
  return canonical_ideal(hnf_rows(std::move(rows), d), D);
}

IdealModule NumberField::ideal_inverse(const IdealModule& a) const {
  // a = (1/D) A with A integral; A^{-1} = (1/N) {y in O_K : y A ⊆ N O_K}, N = det A
  std::size_t d = d_->d;
  const IntMat& A = a.hnf;
  mpz_class N = hnf_det(A);
  // column lattice spanned by e_i and the maps y -> coords(y * b_i) / N
  IntMat gens;
  for (std::size_t i = 0; i < d; ++i) {
    IntVec e(d, 0);
    e[i] = N;
    gens.push_back(e);
  }
  for (const auto& b : A) {
    // M[k][j] = coords(omega_k * b)_j ; columns j give linear forms on y
    IntMat M(d, IntVec(d, 0));
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t l = 0; l < d; ++l) {
        if (b[l] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) M[k][j] += b[l] * d_->mtab[k][l][j];
      }
    for (std::size_t j = 0; j < d; ++j) {
      IntVec col(d);
      for (std::size_t k = 0; k < d; ++k) col[k] = M[k][j];
      gens.push_back(col);
    }
  }
  IntMat G = hnf_rows(std::move(gens), d);  // basis of N * dual-side lattice
  RatMat Gr(d, RatVec(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) Gr[i][j] = mpq_class(G[i][j], N);
  for (auto& r : Gr)
    for (auto& x : r) x.canonicalize();
  RatMat L = rat_transpose(rat_inverse(Gr));  // rows: basis of {y : y.g in Z}
  // A^{-1} = L / N; a^{-1} = D * A^{-1}
  std::vector<RatVec> rows;
  for (auto& r : L) {
    for (auto& x : r) x = x * mpq_class(a.den) / mpq_class(N);
    rows.push_back(r);
  }
  return module_from_rows(rows, d);
}

IdealModule NumberField::ideal_scale(const IdealModule& a, const FieldElement& c) const {
  if (c.is_zero()) fail(Errc::ZeroVector, "scaling ideal by zero");
  std::vector<RatVec> rows;
  for (const auto& b : ideal_basis(a)) rows.push_back((b * c).coords());
  return module_from_rows(rows, d_->d);
}

bool NumberField::ideal_contains_coords(const IdealModule& a, const RatVec& coords) const {
  IntVec v(coords.size());
  for (std::size_t j = 0; j < coords.size(); ++j) {
    mpq_class t = coords[j] * a.den;
    if (t.get_den() != 1) return false;
    v[j] = t.get_num();
  }
  return hnf_contains(a.hnf, v);
}

bool NumberField::ideal_contains(const IdealModule& a, const FieldElement& x) const {
  return ideal_contains_coords(a, x.coords());
}

bool NumberField::ideal_subset(const IdealModule& a, const IdealModule& b) const {
  for (const auto& e : ideal_basis(a))
    if (!ideal_contains(b, e)) return false;
  return true;
}

int NumberField::ideal_valuation(const IdealModule& p, const IdealModule& a, int cap) const {
  // shift a into an integral ideal: a * (den) is integral
  IdealModule A{a.hnf, 1};
  int shift = 0;
  IdealModule D = principal(from_int(a.den));
  // ord_p(den)
  IdealModule pk = p;
  while (shift < cap && ideal_subset(D, pk)) {
    ++shift;
    pk = ideal_mul(pk, p);
  }
  int k = 0;
  pk = p;
  while (k < cap && ideal_subset(A, pk)) {
    ++k;
    pk = ideal_mul(pk, p);
  }
  return k - shift;
}

std::vector<IdealModule> NumberField::integral_ideals_up_to(long bound) const {
  std::size_t d = d_->d;
  std::vector<IdealModule> out;
  IntMat h(d, IntVec(d, 0));
  std::vector<long> diag(d);
  std::function<void(std::size_t, long)> rec_diag;
  std::function<void(std::size_t, std::size_t)> rec_off;
  auto is_ideal = [&](const IntMat& m) {
    for (const auto& row : m)
      for (std::size_t k = 0; k < d; ++k) {
        IntVec v(d, 0);
        for (std::size_t l = 0; l < d; ++l) {
          if (row[l] == 0) continue;
          for (std::size_t j = 0; j < d; ++j) v[j] += row[l] * d_->mtab[l][k][j];
        }
        if (!hnf_contains(m, v)) return false;
      }
    return true;
  };
  // off-diagonal entries h[i][j], i < j, in [0, h[j][j])
  rec_off = [&](std::size_t i, std::size_t j) {
    if (i + 1 >= d) {
      if (is_ideal(h)) out.push_back({h, 1});
      return;
    }
    if (j >= d) {
      rec_off(i + 1, i + 2);
      return;
    }
    for (long v = 0; v < diag[j]; ++v) {
      h[i][j] = v;
      rec_off(i, j + 1);
    }
    h[i][j] = 0;
  };
  rec_diag = [&](std::size_t i, long rem) {
    if (i == d) {
      rec_off(0, 1);
      return;
    }
    for (long v = 1; v <= rem; ++v) {
      diag[i] = v;
      h[i][i] = v;
      rec_diag(i + 1, rem / v);
    }
  };
  if (bound >= 1) rec_diag(0, bound);
  std::sort(out.begin(), out.end(), [](const IdealModule& a, const IdealModule& b) {
    mpz_class na = hnf_det(a.hnf), nb = hnf_det(b.hnf);
    if (na != nb) return na < nb;
    return a.hnf < b.hnf;
  });
  return out;
}

IdealModule coordinate_ideal(const NumberField& K, const std::vector<FieldElement>& vec) {
  return K.ideal_from_generators(vec);
}

std::vector<int> moebius_values(const NumberField& K, const std::vector<IdealModule>& ideals) {
  std::vector<int> mu(ideals.size(), 0);
  std::vector<mpz_class> norms;
  for (const auto& I : ideals) norms.push_back(hnf_det(I.hnf));
  for (std::size_t i = 0; i < ideals.size(); ++i) {
    if (norms[i] == 1) {
      mu[i] = 1;
      continue;
    }
    int s = 0;
    for (std::size_t j = 0; j < i; ++j) {
      if (norms[j] >= norms[i] || norms[i] % norms[j] != 0 || mu[j] == 0) continue;
      if (K.ideal_subset(ideals[i], ideals[j])) s += mu[j];
    }
    mu[i] = -s;
  }
  return mu;
}

// --- subfields -----------------------------------------------------------------

namespace {
int algebra_dim(const NumberField& K, const std::vector<FieldElement>& gens) {
  RatMat span = {K.one().power()};
  std::size_t dim = 1;
  for (;;) {
    RatMat cand = span;
    for (const auto& b : span)
      for (const auto& g : gens) cand.push_back((K.from_power(b) * g).power());
    cand = rat_row_echelon(std::move(cand));
    if (cand.size() == dim) return int(dim);
    dim = cand.size();
    span = std::move(cand);
  }
}
}  // namespace

int NumberField::subfield_degree(const std::string& k) const {
  if (k == d_->name) return d_->d;
  auto it = d_->subfields.find(k);
  if (it == d_->subfields.end()) fail(Errc::NotASubfield, "'" + k + "' is not a configured subfield of " + d_->name);
  std::vector<FieldElement> g;
  for (const auto& c : it->second.generators) g.push_back(from_coords(c));
  return algebra_dim(*this, g);
}

std::vector<int> NumberField::subfield_degrees(const std::string& k) const {
  if (k == d_->name) return {};
  auto it = d_->subfields.find(k);
  if (it == d_->subfields.end()) fail(Errc::NotASubfield, "'" + k + "' is not a configured subfield of " + d_->name);
  return it->second.degrees;
}

int NumberField::degree_over(const std::string& k, const std::vector<FieldElement>& alphas) const {
  std::vector<FieldElement> g;
  if (k != d_->name) {
    auto it = d_->subfields.find(k);
    if (it == d_->subfields.end()) fail(Errc::NotASubfield, "'" + k + "' is not a configured subfield of " + d_->name);
    for (const auto& c : it->second.generators) g.push_back(from_coords(c));
  } else {
    g.push_back(generator());
  }
  int base = algebra_dim(*this, g);
  for (const auto& a : alphas) g.push_back(a);
  int top = algebra_dim(*this, g);
  if (top % base != 0) fail(Errc::NotASubfield, "degree of generated algebra not divisible by [k:Q]");
  return top / base;
}

std::optional<std::pair<double, double>> NumberField::configured_zeta(int s) const {
  auto it = d_->zeta.find(s);
  if (it == d_->zeta.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// loading

NumberField load_field(const json& cfg) {
  require_keys(cfg, {"schema_version", "field"}, "field config");
  if (!cfg.contains("schema_version") || cfg["schema_version"] != 1)
    fail(Errc::ConfigInvalid, "field config schema_version must be 1");
  const json& f = cfg.at("field");
  require_keys(f,
               {"name", "min_poly", "integral_basis", "signature", "irreducible", "invariants",
                "fundamental_units", "class_reps", "subfields", "zeta"},
               "field");
  for (const char* k : {"name", "min_poly", "integral_basis", "signature", "invariants"})
    if (!f.contains(k)) fail(Errc::ConfigInvalid, std::string("field.") + k + " missing");

  auto F = std::make_shared<FieldData>();
  F->name = f["name"].get<std::string>();
  // leading coefficient first
  RatVec mp = parse_rational_vec(f["min_poly"]);
  if (mp.size() < 2) fail(Errc::ConfigInvalid, "min_poly must have degree >= 1");
  std::reverse(mp.begin(), mp.end());
  for (const auto& c : mp)
    if (c.get_den() != 1) fail(Errc::ConfigInvalid, "min_poly coefficients must be integers");
  if (mp.back() != 1) fail(Errc::ConfigInvalid, "min_poly must be monic");
  for (const auto& c : mp) F->min_poly.push_back(c.get_num());
  const int d = int(F->min_poly.size()) - 1;
  F->d = d;

  const json& sig = f["signature"];
  if (!sig.is_array() || sig.size() != 2) fail(Errc::ConfigInvalid, "signature must be [r, s]");
  F->r = sig[0].get<int>();
  F->s = sig[1].get<int>();
  if (F->r < 0 || F->s < 0 || F->r + 2 * F->s != d)
    fail(Errc::SignatureMismatch, "r + 2s != d");

  // irreducibility
  if (d > 1) {
    std::vector<long> divs;
    mpz_class a0 = F->min_poly[0];
    if (a0 == 0) fail(Errc::ReducedPolynomial, "min_poly has root 0");
    if (!a0.fits_slong_p()) fail(Errc::ConfigInvalid, "constant term too large");
    divisors_of(std::labs(a0.get_si()), divs);
    for (long dv : divs)
      for (long sgn : {1L, -1L}) {
        mpz_class x = dv * sgn, v = 0;
        for (std::size_t k = F->min_poly.size(); k-- > 0;) v = v * x + F->min_poly[k];
        if (v == 0) fail(Errc::ReducedPolynomial, "min_poly has rational root " + x.get_str());
      }
    if (d > 3) {
      if (!f.contains("irreducible") || !f["irreducible"].get<bool>())
        fail(Errc::ReducedPolynomial, "degree > 3 requires an irreducibility attestation");
      RatPoly p(mp.begin(), mp.end()), dp;
      for (std::size_t k = 1; k < p.size(); ++k) dp.push_back(p[k] * mpq_class(long(k)));
      if (poly_gcd(p, dp).size() > 1) fail(Errc::ReducedPolynomial, "min_poly is not squarefree");
    }
  }

  // power reduction table
  F->power_red.assign(2 * d, RatVec(d, 0));
  for (int k = 0; k < d; ++k) F->power_red[k][k] = 1;
  for (int k = d; k < 2 * d; ++k) {
    // theta^k = theta * theta^{k-1}
    const RatVec& prev = F->power_red[k - 1];
    RatVec cur(d, 0);
    for (int j = 0; j + 1 < d; ++j) cur[j + 1] = prev[j];
    mpq_class top = prev[d - 1];
    for (int j = 0; j < d; ++j) cur[j] -= top * mpq_class(F->min_poly[j]);
    F->power_red[k] = cur;
  }

  // integral basis
  const json& ib = f["integral_basis"];
  if (!ib.is_array() || int(ib.size()) != d) fail(Errc::ConfigInvalid, "integral_basis must list d vectors");
  for (const auto& v : ib) {
    RatVec row = parse_rational_vec(v);
    if (int(row.size()) != d) fail(Errc::ConfigInvalid, "integral_basis vectors must have length d");
    F->basis.push_back(row);
  }
  try {
    F->basis_inv = rat_inverse(F->basis);
  } catch (const std::domain_error&) {
    fail(Errc::ConfigInvalid, "integral_basis is singular");
  }
  // multiplication table (must be integral: the basis spans an order)
  F->mtab.assign(d, std::vector<IntVec>(d));
  std::shared_ptr<const FieldData> cf = F;
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      FieldElement e = FieldElement(cf, F->basis[k]) * FieldElement(cf, F->basis[l]);
      RatVec c = e.coords();
      IntVec iv(d);
      for (int j = 0; j < d; ++j) {
        if (c[j].get_den() != 1) fail(Errc::ConfigInvalid, "integral_basis is not closed under multiplication");
        iv[j] = c[j].get_num();
      }
      F->mtab[k][l] = iv;
    }
  {
    RatVec one(d, 0);
    one[0] = 1;
    RatVec oc = rat_vec_mat(one, F->basis_inv);
    for (const auto& x : oc)
      if (x.get_den() != 1) fail(Errc::ConfigInvalid, "integral_basis does not contain 1");
  }

  // invariants
  const json& inv = f["invariants"];
  require_keys(inv, {"h", "R", "w", "disc"}, "field.invariants");
  for (const char* k : {"h", "R", "w", "disc"})
    if (!inv.contains(k)) fail(Errc::ConfigInvalid, std::string("field.invariants.") + k + " missing");
  F->inv.h = inv["h"].get<int>();
  if (inv["R"].is_string()) {
    F->inv.R_text = inv["R"].get<std::string>();
    F->inv.R = std::stod(F->inv.R_text);
  } else {
    F->inv.R = inv["R"].get<double>();
    F->inv.R_text = inv["R"].dump();
  }
  F->inv.w = inv["w"].get<int>();
  F->inv.disc = parse_rational(inv["disc"]).get_num();
  if (F->inv.h < 1 || F->inv.w < 2 || F->inv.w % 2 != 0 || F->inv.disc == 0 || !(F->inv.R > 0))
    fail(Errc::ConfigInvalid, "invariants out of range");
  if (F->r > 0 && F->inv.w != 2) fail(Errc::ConfigInvalid, "a field with a real place has w = 2");

  // discriminant of the basis: det Tr(omega_i omega_j)
  {
    RatMat tr(d, RatVec(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        tr[i][j] = (FieldElement(cf, F->basis[i]) * FieldElement(cf, F->basis[j])).trace();
    mpq_class disc = rat_det(tr);
    if (disc != mpq_class(F->inv.disc))
      fail(Errc::DiscriminantMismatch,
           "basis discriminant " + disc.get_str() + " != configured " + F->inv.disc.get_str());
    int sign = (F->s % 2 == 0) ? 1 : -1;
    if (sgn(F->inv.disc) != sign) fail(Errc::SignatureMismatch, "sign of discriminant contradicts signature");
  }

  // roots: Aberth in double, Newton polish at working precision, disk certification
  {
    std::vector<hcomplex> z;
    if (d == 1) {
      z.push_back(hcomplex(to_hp(mpz_class(-F->min_poly[0]))));
    } else {
      for (auto c : aberth(F->min_poly)) z.push_back(hcomplex(hp(c.real()), hp(c.imag())));
    }
    std::vector<hp> rad(d);
    std::vector<bool> real(d, false);
    for (int i = 0; i < d; ++i) {
      for (int it = 0; it < 200; ++it) {
        hcomplex der;
        hcomplex v = hp_eval(F->min_poly, z[i], &der);
        if (der.norm2() == 0) break;
        hcomplex step = v / der;
        z[i] -= step;
        if (step.abs() <= hp("1e-118") * (1 + z[i].abs())) break;
      }
      if (abs(z[i].im) <= hp("1e-40") * (1 + z[i].abs())) {
        z[i].im = 0;
        real[i] = true;
        for (int it = 0; it < 20; ++it) {
          hcomplex der;
          hcomplex v = hp_eval(F->min_poly, z[i], &der);
          if (der.norm2() == 0) break;
          z[i] -= v / der;
          z[i].im = 0;
        }
      }
      hcomplex der;
      hcomplex v = hp_eval(F->min_poly, z[i], &der);
      hp mag = 0, zp = 1;
      for (const auto& a : F->min_poly) {
        mag += abs(to_hp(a)) * zp;
        zp *= z[i].abs();
      }
      if (der.norm2() == 0) fail(Errc::PrecisionUnreachable, "multiple root");
      rad[i] = hp(d) * (v.abs() + mag * hp("1e-115")) / der.abs();
    }
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if ((z[i] - z[j]).abs() <= rad[i] + rad[j])
          fail(Errc::PrecisionUnreachable, "root disks overlap");
    std::vector<int> reals, uppers, lowers;
    for (int i = 0; i < d; ++i) {
      if (real[i])
        reals.push_back(i);
      else if (abs(z[i].im) <= rad[i])
        fail(Errc::PrecisionUnreachable, "root disk straddles the real axis");
      else if (z[i].im > 0)
        uppers.push_back(i);
      else
        lowers.push_back(i);
    }
    if (int(reals.size()) != F->r || int(uppers.size()) != F->s)
      fail(Errc::SignatureMismatch, "polynomial has " + std::to_string(reals.size()) + " real roots, expected " +
                                        std::to_string(F->r));
    auto by_re = [&](int a, int b) {
      if (z[a].re != z[b].re) return z[a].re < z[b].re;
      return z[a].im < z[b].im;
    };
    std::sort(reals.begin(), reals.end(), by_re);
    std::sort(uppers.begin(), uppers.end(), by_re);
    for (int i : reals) {
      F->roots.push_back(z[i]);
      F->root_rad.push_back(rad[i]);
    }
    for (int i : uppers) {
      F->roots.push_back(z[i]);
      F->root_rad.push_back(rad[i]);
    }
    for (int i : uppers) {
      F->roots.push_back(z[i].conj());
      F->root_rad.push_back(rad[i]);
    }
  }

  // basis embeddings
  {
    NumberField K(cf);
    F->basis_emb.assign(d, {});
    F->basis_emb_hp.assign(d, {});
    for (int k = 0; k < d; ++k) {
      EmbeddingValue e = K.embed(FieldElement(cf, F->basis[k]), 1e-60);
      for (auto& m : e.mid) {
        F->basis_emb[k].push_back(m.to_cd());
        F->basis_emb_hp[k].push_back(m);
      }
    }
  }

  NumberField K(cf);
  const int q = F->r + F->s - 1;

  // fundamental units
  {
    std::vector<FieldElement> units;
    if (f.contains("fundamental_units")) {
      for (const auto& u : f["fundamental_units"]) {
        RatVec c = parse_rational_vec(u);
        if (int(c.size()) != d) fail(Errc::ConfigInvalid, "unit coordinate vector has wrong length");
        units.push_back(K.from_coords(c));
      }
    }
    if (int(units.size()) != q)
      fail(Errc::UnitLatticeMismatch, "expected " + std::to_string(q) + " fundamental units");
    for (const auto& u : units) {
      if (!u.is_integral_coords()) fail(Errc::UnitLatticeMismatch, "unit is not integral");
      mpq_class n = u.norm();
      if (n != 1 && n != -1) fail(Errc::UnitLatticeMismatch, "unit has norm " + n.get_str());
    }
    F->inv.fundamental_units = units;
    double volume = 1.0;
    if (q > 0) {
      std::vector<std::vector<double>> L;
      for (const auto& u : units) L.push_back(K.log_embedding(u));
      // Gram determinant in double via Gaussian elimination
      std::vector<std::vector<double>> G(q, std::vector<double>(q, 0.0));
      for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
          for (int l = 0; l <= q; ++l) G[i][j] += L[i][l] * L[j][l];
      double det = 1.0;
      for (int c = 0; c < q; ++c) {
        int p = c;
        for (int i = c + 1; i < q; ++i)
          if (std::abs(G[i][c]) > std::abs(G[p][c])) p = i;
        std::swap(G[p], G[c]);
        if (p != c) det = -det;
        if (G[c][c] == 0) {
          det = 0;
          break;
        }
        det *= G[c][c];
        for (int i = c + 1; i < q; ++i) {
          double fac = G[i][c] / G[c][c];
          for (int j = c; j < q; ++j) G[i][j] -= fac * G[c][j];
        }
      }
      if (!(det > 0)) fail(Errc::UnitLatticeMismatch, "unit log-vectors are dependent");
      volume = std::sqrt(det);
    }
    double expect = std::sqrt(double(q + 1)) * F->inv.R;
    if (q == 0 && F->inv.R != 1.0) fail(Errc::UnitLatticeMismatch, "unit rank 0 requires R = 1");
    if (std::abs(volume - expect) > 1e-9 * expect)
      fail(Errc::UnitLatticeMismatch, "unit lattice determinant " + std::to_string(volume) +
                                          " != sqrt(q+1) R = " + std::to_string(expect));
  }

  // class representatives
  {
    if (!f.contains("class_reps")) {
      if (F->inv.h != 1) fail(Errc::ConfigInvalid, "class_reps required when h > 1");
      F->inv.class_reps.push_back(K.unit_ideal());
    } else {
      for (const auto& cr : f["class_reps"]) {
        require_keys(cr, {"hnf", "den"}, "class_reps entry");
        IntMat h;
        for (const auto& row : cr.at("hnf")) {
          RatVec rv = parse_rational_vec(row);
          IntVec iv;
          for (const auto& x : rv) {
            if (x.get_den() != 1) fail(Errc::ConfigInvalid, "class rep hnf must be integral");
            iv.push_back(x.get_num());
          }
          h.push_back(iv);
        }
        mpz_class den = cr.contains("den") ? parse_rational(cr["den"]).get_num() : mpz_class(1);
        F->inv.class_reps.push_back(K.ideal_from_hnf(h, den));
      }
      if (int(F->inv.class_reps.size()) != F->inv.h)
        fail(Errc::ConfigInvalid, "number of class representatives differs from h");
    }
  }

  // subfields
  if (f.contains("subfields")) {
    for (auto it = f["subfields"].begin(); it != f["subfields"].end(); ++it) {
      require_keys(it.value(), {"degrees", "generators"}, "subfield " + it.key());
      SubfieldInfo si;
      for (const auto& g : it.value().at("degrees")) si.degrees.push_back(g.get<int>());
      if (it.value().contains("generators"))
        for (const auto& g : it.value()["generators"]) {
          RatVec c = parse_rational_vec(g);
          if (int(c.size()) != d) fail(Errc::ConfigInvalid, "subfield generator has wrong length");
          si.generators.push_back(c);
        }
      std::sort(si.degrees.begin(), si.degrees.end());
      F->subfields[it.key()] = si;
      int kd = K.subfield_degree(it.key());
      if (d % kd != 0) fail(Errc::NotASubfield, "subfield degree does not divide d");
      int e = d / kd;
      for (int g : si.degrees)
        if (g < 1 || g >= e || e % g != 0) fail(Errc::ConfigInvalid, "bad intermediate degree in subfield " + it.key());
    }
  }

  if (f.contains("zeta")) {
    for (auto it = f["zeta"].begin(); it != f["zeta"].end(); ++it) {
      require_keys(it.value(), {"value", "error"}, "zeta entry");
      F->zeta[std::stoi(it.key())] = {it.value().at("value").get<double>(), it.value().at("error").get<double>()};
    }
  }
  return NumberField(cf);
}

NumberField load_field_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ConfigInvalid, "cannot open field config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(Errc::ConfigInvalid, std::string("field config is not valid JSON: ") + e.what());
  }
  return load_field(j);
}

}  // namespace primpts
