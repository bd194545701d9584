#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "primpts/charts.hpp"
#include "primpts/numfield.hpp"

namespace primpts {

using KVec = std::vector<FieldElement>;

struct Place {
  bool archimedean = true;
  int index = 0;  // embedding/place index, or exception index for finite places
  int dv = 1;
  // finite places
  IdealModule prime;
  mpz_class Np = 0;
  mpz_class p = 0;  // rational prime below
};

enum class DistanceKind { MaxNorm, NormBall, Mahler, Custom };

// Archimedean distance function on R^{dv(n+1)}; complex coordinates are laid
// out as (Re z_0, Im z_0, Re z_1, ...).
struct LipschitzDistanceFunction {
  int n = 0;
  int dv = 1;
  DistanceKind kind = DistanceKind::MaxNorm;
  std::function<double(const Vec&)> eval;
  std::function<hp(const std::vector<hp>&)> eval_hp;  // optional
  std::optional<LipChartSet> charts;
  int M = 0;
  double L = 0;
  double c_v = 1;  // N_v >= c_v max|z_j|
};

// Finite exception: N_v(z) = Np^{-m/dv} where m = ord(z) is returned by
// `ord` (an integer valuation). c_v, C_v are exact elements of Gamma_v.
struct FiniteException {
  Place place;
  std::function<long(const KVec&)> ord;
  // c_v = Np^{-c_exp/dv}, C_v = Np^{C_exp/dv}
  long c_exp = 0;
  long C_exp = 0;
  double c_v = 1, C_v = 1;
};

struct AlsSpec {
  std::string type = "standard";      // standard | mahler | linear_section | norm_ball
  std::vector<mpz_class> linear_form;  // linear_section
  mpz_class divisor = 1;
  // exceptions for fields other than Q: prime ideal data, keyed in order of primes of the divisor
  struct ExceptionCfg {
    IdealModule prime;
    mpz_class Np;
    int dv = 1;
  };
  std::vector<ExceptionCfg> exceptions;
};

struct AdelicLipschitzSystem {
  NumberField K;
  int n = 1;
  AlsSpec spec;
  std::vector<LipschitzDistanceFunction> inf;
  std::vector<FiniteException> fin;
  double C_fin = 1, C_inf = 1, C = 1, M_N = 0, L_N = 0, A_N = 0;
  mpq_class C_fin_pow_d = 1;  // (C_fin)^d, exact
  bool max_norm_inf = true;   // every infinite place is the max-norm
  bool has_charts = true;
};

AdelicLipschitzSystem build_als(const NumberField& K, int n, const AlsSpec& spec);

// H^d = inf_prod * fin_factor with fin_factor exact.
struct HeightValue {
  double H = 0, H_inf = 0, H_fin = 0;
  double inf_prod = 0;             // prod_v N_v(sigma_v a)^{dv}
  mpq_class fin_factor = 1;        // prod_{v finite} N_v^{dv}
  std::optional<mpq_class> Hd_exact;  // H^d when rational
};

HeightValue weil_height(const NumberField& K, const KVec& vec);
HeightValue adelic_height(const AdelicLipschitzSystem& als, const KVec& vec);

// exact inf_prod when every infinite place is the max-norm and r + s = 1
std::optional<mpq_class> exact_inf_prod(const AdelicLipschitzSystem& als, const KVec& vec);
// high-precision inf_prod (max-norm or evaluators with eval_hp)
std::optional<hp> hp_inf_prod(const AdelicLipschitzSystem& als, const KVec& vec);

// Decide value <= bound where value is known in double (approx) and lazily in
// high precision. The policy: decide in double outside a 1e-9 relative band;
// inside it use the high-precision value, treating |value - bound| <= 1e-60
// relative as equality. Without a high-precision route the double midpoint
// decides and the borderline counter is incremented.
struct DecisionStats {
  std::atomic<long> escalations{0};
  std::atomic<long> snapped{0};
  std::atomic<long> borderline{0};
};
bool decide_le(double approx, const std::function<std::optional<hp>()>& precise, const mpq_class& bound,
               DecisionStats* stats = nullptr);

// H_N(vec)^d <= X^d, i.e. H_N <= X
bool height_at_most(const AdelicLipschitzSystem& als, const KVec& vec, const mpq_class& X,
                    DecisionStats* stats = nullptr);

double mahler_measure(const std::vector<std::complex<double>>& coeffs);  // leading first

LipChartSet norm_ball_charts(const std::function<double(const Vec&)>& norm, int dv, int n, double C,
                             std::uint64_t seed = 1);

// valuation of x at a prime ideal (x != 0); fast path over Q
long element_ord(const NumberField& K, const Place& pl, const FieldElement& x);

}  // namespace primpts
