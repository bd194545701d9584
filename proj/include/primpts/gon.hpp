#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "primpts/charts.hpp"
#include "primpts/linalg.hpp"

namespace primpts {

constexpr int kMaxGonDim = 12;
constexpr long kDefaultEnumBudget = 200'000'000;

using CoeffVec = std::vector<std::int64_t>;

// Full-rank lattice in R^D spanned by the columns `cols`. When built from
// exact rational data, `exact` holds the same columns and norms are computed
// exactly.
struct LatticeBasis {
  int D = 0;
  std::vector<Vec> cols;
  std::optional<std::vector<RatVec>> exact;
  double det = 0;  // |det|

  Vec combine(const CoeffVec& x) const;
  double norm2(const CoeffVec& x) const;
};

LatticeBasis make_lattice(std::vector<Vec> cols);
LatticeBasis make_lattice_exact(const std::vector<RatVec>& cols);

struct MinimaCertificate {
  std::vector<double> lambda;
  std::vector<std::optional<mpq_class>> lambda_sq_exact;
  std::vector<CoeffVec> witnesses;  // coefficients in the input basis
  std::vector<Vec> witness_vectors;
  double radius = 0;  // every lattice vector of norm <= radius was enumerated
  double slack = 0;   // relative rounding slack applied to the radius
  long nodes = 0;
};

// LLL (delta = 0.99) in floating point; returns the unimodular transform U
// with reduced = basis * U (columns).
std::vector<CoeffVec> lll_transform(const LatticeBasis& B, double delta = 0.99);

// All nonzero x (one of each pair +-x) with |Bx| <= R. Calls f(x, |Bx|^2).
// Returns the number of enumeration nodes visited.
long enumerate_short(const LatticeBasis& B, double R, const std::function<void(const CoeffVec&, double)>& f,
                     long budget = kDefaultEnumBudget);

MinimaCertificate successive_minima(const LatticeBasis& B, long budget = kDefaultEnumBudget);

struct MahlerWeylResult {
  LatticeBasis basis;
  std::vector<CoeffVec> coeffs;  // columns, in the input basis
  std::vector<double> bounds;    // max{|u_i|, (|u_1|+...+|u_i|)/2}
};
MahlerWeylResult mahler_weyl_basis(const MinimaCertificate& cert, const LatticeBasis& B);

double orthogonality_defect(const LatticeBasis& B);
double mahler_weyl_defect_bound(int D);  // D^{3D/2} / (2 pi)^{D/2}

struct MinkowskiReport {
  double lower = 0, middle = 0, upper = 0;
  bool pass = false;
};
MinkowskiReport minkowski_verify(const MinimaCertificate& cert, const LatticeBasis& B);
double unit_ball_volume(int D);

struct PowerMinimaReport {
  std::vector<double> base, power, expected;
  bool pass = false;
};
PowerMinimaReport power_minima_check(const LatticeBasis& base, int n, long budget = kDefaultEnumBudget);

// Is |v| >= lambda_i, where V is spanned by the witnesses of lambda_1..lambda_{i-1}
// (i is 1-based). v must be a lattice vector.
bool min_outside_subspace(const LatticeBasis& B, const MinimaCertificate& cert, int i, const Vec& v);
// Does v lie in span of the first k witnesses
bool in_witness_span(const MinimaCertificate& cert, int k, const Vec& v);

// Integer coordinates of v in B, or nullopt
std::optional<CoeffVec> lattice_coords(const LatticeBasis& B, const Vec& v);

}  // namespace primpts
