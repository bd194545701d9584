#pragma once

#include "json.hpp"

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "primpts/error.hpp"
#include "primpts/linalg.hpp"
#include "primpts/precision.hpp"

namespace primpts {

struct FieldData;
class NumberField;

// Element of K. Stored in power-basis coordinates; coords() exposes the
// integral-basis coordinates.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(std::shared_ptr<const FieldData> f, RatVec power);

  const RatVec& power() const { return p_; }
  RatVec coords() const;
  const std::shared_ptr<const FieldData>& field() const { return f_; }

  bool is_zero() const;
  bool is_rational() const;
  mpq_class norm() const;
  mpq_class trace() const;
  FieldElement inverse() const;
  // integral-basis coordinates are integers
  bool is_integral_coords() const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const mpq_class& c, const FieldElement& a);
  FieldElement operator-() const;
  friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.p_ == b.p_; }

  std::string to_string() const;

 private:
  std::shared_ptr<const FieldData> f_;
  RatVec p_;
};

// Fractional ideal (1/den) * rowspan_Z(hnf) over the integral basis.
struct IdealModule {
  IntMat hnf;
  mpz_class den = 1;

  mpq_class norm() const;
  bool is_integral() const { return den == 1; }
  friend bool operator==(const IdealModule& a, const IdealModule& b) {
    return a.den == b.den && a.hnf == b.hnf;
  }
  friend bool operator<(const IdealModule& a, const IdealModule& b) {
    if (a.den != b.den) return a.den < b.den;
    return a.hnf < b.hnf;
  }
  std::string to_string() const;
};

struct EmbeddingValue {
  // one entry per place v (r real places then s complex places)
  std::vector<hcomplex> mid;
  std::vector<hp> rad;
};

struct SubfieldInfo {
  std::vector<int> degrees;           // G(K/k)
  std::vector<RatVec> generators;     // integral-basis coordinates in K
};

struct InvariantRecord {
  int h = 1;
  double R = 1.0;
  std::string R_text = "1";
  int w = 2;
  mpz_class disc = 1;
  std::vector<FieldElement> fundamental_units;
  std::vector<IdealModule> class_reps;
};

struct FieldData {
  std::string name;
  int d = 1, r = 1, s = 0;
  IntVec min_poly;       // ascending: a_0 + a_1 x + ... + x^d
  RatMat basis;          // rows: integral basis in power coordinates
  RatMat basis_inv;      // power -> integral coordinates
  std::vector<RatVec> power_red;  // theta^k reduced, k < 2d-1
  IntVec power_traces;   // Tr(theta^k), k < 2d-1
  std::vector<hcomplex> roots;    // d roots: real, upper complex, conjugates
  std::vector<hp> root_rad;
  InvariantRecord inv;
  std::map<std::string, SubfieldInfo> subfields;
  std::map<int, std::pair<double, double>> zeta;  // s -> (value, error)
  // cached double-precision embeddings of the integral basis:
  // basis_emb[k][p] = sigma_p(omega_k), p over places
  std::vector<std::vector<std::complex<double>>> basis_emb;
  std::vector<std::vector<hcomplex>> basis_emb_hp;
  // mtab[k][l] = integral coordinates of omega_k * omega_l
  std::vector<std::vector<IntVec>> mtab;
};

class NumberField {
 public:
  NumberField() = default;
  explicit NumberField(std::shared_ptr<const FieldData> d) : d_(std::move(d)) {}

  const FieldData& data() const { return *d_; }
  const std::shared_ptr<const FieldData>& ptr() const { return d_; }
  const std::string& name() const { return d_->name; }
  int degree() const { return d_->d; }
  int r() const { return d_->r; }
  int s() const { return d_->s; }
  int places() const { return d_->r + d_->s; }
  int local_degree(int place) const { return place < d_->r ? 1 : 2; }
  int unit_rank() const { return d_->r + d_->s - 1; }
  const InvariantRecord& invariants() const { return d_->inv; }

  FieldElement from_coords(const RatVec& c) const;
  FieldElement from_power(const RatVec& p) const;
  FieldElement from_int(const mpz_class& z) const;
  FieldElement from_rat(const mpq_class& q) const;
  FieldElement zero() const { return from_int(0); }
  FieldElement one() const { return from_int(1); }
  FieldElement generator() const;  // theta

  // multiplication matrix of alpha on the integral basis (rows = coords of alpha*omega_k)
  RatMat mult_matrix(const FieldElement& a) const;

  // sigma_p(alpha), p over places; certified to radius <= precision
  EmbeddingValue embed(const FieldElement& a, double precision = 1e-30) const;
  // fast double embedding from integral coordinates
  std::vector<std::complex<double>> embed_double(const std::vector<double>& coords) const;
  // real coordinates of sigma(alpha) in R^d (real places, then Re/Im pairs)
  std::vector<double> minkowski(const FieldElement& a) const;
  std::vector<double> minkowski_coords(const std::vector<double>& coords) const;
  // Minkowski image of omega_k as rows; det = 2^{-s} sqrt|disc|
  std::vector<std::vector<double>> minkowski_basis() const;

  // log embedding l(alpha) = (d_v log|sigma_v alpha|)_v
  std::vector<double> log_embedding(const FieldElement& a) const;

  // ideals
  IdealModule ideal_from_generators(const std::vector<FieldElement>& gens) const;
  IdealModule ideal_from_hnf(IntMat h, mpz_class den) const;  // validates and canonicalizes
  IdealModule unit_ideal() const;
  IdealModule principal(const FieldElement& a) const { return ideal_from_generators({a}); }
  IdealModule ideal_mul(const IdealModule& a, const IdealModule& b) const;
  IdealModule ideal_inverse(const IdealModule& a) const;
  IdealModule ideal_scale(const IdealModule& a, const FieldElement& c) const;
  bool ideal_contains(const IdealModule& a, const FieldElement& x) const;
  bool ideal_contains_coords(const IdealModule& a, const RatVec& coords) const;
  bool ideal_subset(const IdealModule& a, const IdealModule& b) const;  // a ⊆ b
  std::vector<FieldElement> ideal_basis(const IdealModule& a) const;
  // sum of two ideals (gcd)
  IdealModule ideal_add(const IdealModule& a, const IdealModule& b) const;
  // exponent of the prime ideal p in the fractional ideal a (|k| <= cap)
  int ideal_valuation(const IdealModule& p, const IdealModule& a, int cap = 64) const;

  // all integral ideals of norm <= bound, sorted by (norm, hnf)
  std::vector<IdealModule> integral_ideals_up_to(long bound) const;

  // k-degree of the algebra generated by alphas over named subfield k
  int degree_over(const std::string& k, const std::vector<FieldElement>& alphas) const;
  int subfield_degree(const std::string& k) const;  // [k:Q]
  int relative_degree(const std::string& k) const { return d_->d / subfield_degree(k); }
  std::vector<int> subfield_degrees(const std::string& k) const;

  std::optional<std::pair<double, double>> configured_zeta(int s) const;

 private:
  std::shared_ptr<const FieldData> d_;
};

// fractional ideal generated by the coordinates of a nonzero vector
IdealModule coordinate_ideal(const NumberField& K, const std::vector<FieldElement>& vec);

// Möbius function on the list of integral ideals (must be divisor-closed,
// e.g. the output of integral_ideals_up_to), via containment recursion.
std::vector<int> moebius_values(const NumberField& K, const std::vector<IdealModule>& ideals);

// --- loading ----------------------------------------------------------------

NumberField load_field(const nlohmann::json& config);
NumberField load_field_file(const std::string& path);

mpq_class parse_rational(const nlohmann::json& j);
RatVec parse_rational_vec(const nlohmann::json& j);

}  // namespace primpts
