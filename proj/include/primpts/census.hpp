#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "primpts/basicset.hpp"
#include "primpts/gon.hpp"
#include "primpts/heights.hpp"
#include "primpts/numfield.hpp"
#include "primpts/zeta.hpp"

namespace primpts {

// Vectors of K^{n+1} are stored as (n+1)d rational integral-basis coordinates,
// block j holding alpha_j.
using KCoords = RatVec;

KVec kcoords_to_kvec(const NumberField& K, const KCoords& c, int n);
// place-major embedding into R^D (the layout used by basicset)
Vec embed_kvec(const NumberField& K, const KVec& v);

struct HeightLattice {
  IdealModule ideal;
  int n = 1, d = 1, D = 2;
  std::vector<KCoords> kbasis;  // D basis vectors in K^{n+1}
  LatticeBasis basis;           // their images in R^D
  IdealModule inner, outer;     // C1 D and C0^{-1} D
  mpq_class det_ratio = 1;      // det / (2^{-s} sqrt|disc|)^{n+1}, exact
  double det = 0;
  mpq_class delta_ratio = 1;    // Delta_N / (2^{-s} sqrt|disc|)^{n+1} = det_ratio / N D^{n+1}
  double Delta_N = 0;
  long quotient_index = 1;      // [outer^{n+1} : inner^{n+1}]
  long cosets_selected = 1;     // [Lambda : inner^{n+1}]
};

// 2^{-s} sqrt|disc| = det sigma(O_K)
double base_covolume(const NumberField& K);

IdealModule c0_ideal(const AdelicLipschitzSystem& als);
IdealModule c1_ideal(const AdelicLipschitzSystem& als);

HeightLattice build_height_lattice(const AdelicLipschitzSystem& als, const IdealModule& D,
                                   long max_cosets = 1'000'000);

// N_v(sigma_v alpha) <= |D|_v for all finite v
bool in_height_lattice(const AdelicLipschitzSystem& als, const IdealModule& D, const KVec& v);

struct SandwichReport {
  long checked = 0, failures = 0;
  bool pass() const { return failures == 0; }
};
SandwichReport sandwich_check(const AdelicLipschitzSystem& als, const HeightLattice& L, std::mt19937_64& rng,
                              int samples = 50);

// k(P) = K, k given by subfield name (the field's own name means k = K)
bool primitive_test(const NumberField& K, const std::string& k, const KVec& point);
// Scalarization: some sum m_j alpha_j / alpha_{j0} with 0 <= m_j < e generates K over k
bool primitive_test_scalarized(const NumberField& K, const std::string& k, const KVec& point);

// --- delta_g ---------------------------------------------------------------

struct DeltaEstimate {
  int g = 0;                         // 0 for delta(K/k)
  double value = 0;                  // +inf when nothing was found
  std::optional<mpq_class> value_pow_d;  // H^d when rational
  KVec witness;                      // (alpha) or (alpha, beta)
  bool certified = false;
  bool found = false;
  double bound = 0;
  long candidates = 0;
};

struct DeltaReport {
  DeltaEstimate delta;
  std::vector<DeltaEstimate> delta_g;  // in the order of G(K/k)
  std::vector<int> G;
  bool le_2e_delta_g = true;            // delta <= 2e delta_g for every certified pair
};

std::vector<int> G_set(const NumberField& K, const std::string& k);
// mu_g = m (e - g) (n + 1) - 1
long mu_g(int m, int e, int g, int n);
DeltaReport delta_search(const NumberField& K, const std::string& k, double B, long budget = 5'000'000);

// --- constants ---------------------------------------------------------------

ZetaValue schanuel_constant(const NumberField& K, int n);

struct GlobalVolume {
  mpq_class V_fin_exact = 1;  // exact for max-norm style systems
  double V_fin = 1, V_inf = 0, V_inf_halfwidth = 0, V_N = 0;
  bool V_inf_exact = false;
  bool V_inf_bound_ok = true;  // V_inf <= (2 C_inf)^{d(n+1)}
  std::vector<mpq_class> class_delta_ratio;
};
GlobalVolume global_volume(const AdelicLipschitzSystem& als, long mc_samples = 1'000'000, std::uint64_t seed = 1);

// 2^{-r(n+1)} pi^{-s(n+1)} V_N S_K(n)
double main_term_coefficient(const AdelicLipschitzSystem& als, const GlobalVolume& V);

// --- census ----------------------------------------------------------------

struct CensusRow {
  mpq_class X = 1;
  long count_all = 0;
  long count_primitive = 0;
  std::vector<long> per_class_all, per_class_primitive;  // before the w_K division
  std::vector<long> per_cell_all;                        // decomposed only, before division
  long mobius_depth = 0;
  long mobius_ideals = 0;
  double main_term = 0;
  double residual = 0;  // |count_primitive - main_term|
  std::optional<double> log_term;  // L_N = log max{2, 2 C X} when (n, d) = (1, 1)
};

struct CensusStats {
  long lattice_points = 0;
  long candidates = 0;  // distinct projective points examined (direct)
  long escalations = 0, snapped = 0, borderline = 0, seam_snaps = 0;
};

struct CensusRecord {
  std::string method;  // direct | decomposed
  std::string field, base;
  int n = 1;
  std::string als_type;
  double main_coefficient = 0;
  std::vector<CensusRow> rows;
  CensusStats stats;
};

struct CensusOptions {
  long budget = kDefaultEnumBudget;
  int workers = 1;
  std::optional<long> mobius_depth;  // decomposed: override the certified depth
  long mc_samples = 1'000'000;        // main-term volume when V_inf has no closed form
  std::uint64_t seed = 1;
};

// sqrt(d(n+1)) C_inf e^{sum |u_j|} N A^{1/d} X covers S_F(N A^{1/d} X)
double direct_radius(const BasicSetGeometry& g, const AdelicLipschitzSystem& als, double T);
// smallest depth beyond which Lambda(AB) ∩ S_F(T) is provably empty
long certified_mobius_depth(const BasicSetGeometry& g, const AdelicLipschitzSystem& als, const mpq_class& X);

CensusRecord census_direct(const std::string& k, const AdelicLipschitzSystem& als, const std::vector<mpq_class>& X,
                           const CensusOptions& opt = {});
CensusRecord census_decomposed(const std::string& k, const AdelicLipschitzSystem& als,
                               const std::vector<mpq_class>& X, const CensusOptions& opt = {});

// --- experiments -------------------------------------------------------------

struct MinimaBoundsReport {
  int l = 0, g = 1;
  std::vector<double> lambda;
  double lambda1_bound = 0, lambdal_bound = 0;
  bool l_bound_ok = false, lambda1_ok = false, lambdal_ok = false;
  long tuples_checked = 0, tuple_failures = 0;
  bool pass() const { return l_bound_ok && lambda1_ok && lambdal_ok && tuple_failures == 0; }
};
// minima of tau_cell sigma(C0^{-1} D); delta_g values indexed like G_set
MinimaBoundsReport minima_bounds_check(const AdelicLipschitzSystem& als, const IdealModule& D, const std::string& k,
                                       long cell, const std::map<int, double>& delta_g, std::mt19937_64& rng,
                                       int tuples = 200);

struct FitReport {
  double leading_coefficient = 0, expected = 0, rel_error = 0;
  double residual_slope = 0;      // log |Z - main| against log X, all points with nonzero residual
  double ratio_slope_top = 0;     // log(|Z - main| / (X^{D-1} L_N)) against log X, top half
  std::vector<double> ratios;
  bool coefficient_ok = false, slope_ok = false;
  bool pass() const { return coefficient_ok && slope_ok; }
};
FitReport asymptotic_fit(const CensusRecord& rec, int d, double tolerance, double C_N = 1);
// least squares slope of log y against log x over the points with y > 0
// |Z - main| / (X^{D-1} L_N) per grid point, and its log-log slope over the top half
std::vector<double> residual_ratios(const CensusRecord& rec, int d, double C_N = 1);
double residual_ratio_slope_top(const CensusRecord& rec, int d, double C_N = 1);

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct CellCountEntry {
  std::string ideal;
  mpz_class norm;
  long cell = 0;
  double T = 0;
  long count = 0;
  double main = 0, scale = 0, ratio = 0;
  int g = 1;
};
struct CellCountReport {
  std::vector<CellCountEntry> entries;
  double max_ratio = 0;
};
CellCountReport cell_count_experiment(const std::string& k, const AdelicLipschitzSystem& als,
                               const std::vector<IdealModule>& ideals, const std::vector<double>& T,
                               const std::map<int, double>& delta_g, long budget = kDefaultEnumBudget);

struct MoebiusSumReport {
  std::vector<long> bounds;
  std::vector<double> partial;
  double target = 0;
  std::vector<double> tail_bound;  // sum_{N B > bound} |mu| / N B^{n+1} <= zeta(n+1)^d - partial of that series
};
MoebiusSumReport moebius_volume_check(const AdelicLipschitzSystem& als, const std::vector<long>& bounds);

// --- serialization -------------------------------------------------------------

std::string census_csv(const CensusRecord& rec);
nlohmann::ordered_json census_json(const CensusRecord& rec);
std::string format_number(double x);

}  // namespace primpts
