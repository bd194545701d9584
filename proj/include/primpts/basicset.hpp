#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <vector>

#include "primpts/charts.hpp"
#include "primpts/heights.hpp"
#include "primpts/numfield.hpp"

namespace primpts {

// Points of R^D, D = d(n+1), are laid out place by place: the block of place
// p holds sigma_p(alpha_0..alpha_n), complex places as (Re, Im) pairs.
struct BasicSetGeometry {
  NumberField K;
  int q = 0;
  std::vector<int> delta;           // d_1..d_{q+1}
  std::vector<FieldElement> units;  // reduced unit basis eta_j
  std::vector<Vec> u;               // u_j = l(eta_j) in R^{q+1}
  std::vector<long> nj;             // floor(|u_j|) + 1
  long t = 1;
  double t_over_R = 1;              // observed c_d ratio
  std::vector<std::vector<long>> indices;  // partition index set
  std::vector<std::vector<double>> gamma;  // per index, gamma_1..gamma_{q+1}
  // x in Sigma -> coordinates in the frame u_j (q x (q+1) left inverse)
  std::vector<Vec> coord_map;
  std::vector<Vec> sigma_frame;  // orthonormal basis e_1..e_q of Sigma

  long index_of(const std::vector<long>& i) const;
};

BasicSetGeometry build_geometry(const NumberField& K);

struct SfDecomposition {
  bool nonzero = false;           // every block nonzero
  std::vector<double> N;          // N_i(z_i)
  double prod = 0;                // prod N_i^{d_i}
  double t_height = 0;            // (sum y_i) / d
  Vec x;                          // projection to Sigma
  Vec coords;                     // coordinates of x in the u_j frame
};
SfDecomposition sf_decompose(const BasicSetGeometry& g, const AdelicLipschitzSystem& als, const Vec& z);

struct SfMembershipDecision {
  bool accepted = false;
  double t_height = 0;
  double prod = 0;                 // prod N_i^{d_i}
  Vec x;
  std::optional<long> cell;        // index into g.indices
  std::optional<long> cell_full;   // cell index of x in F, regardless of height
  bool seam_snapped = false;
  bool escalated = false;
};

struct SfStats {
  std::atomic<long> seam_snaps{0};
  DecisionStats height;
};

// z ∈ S_F(T). `precise` optionally returns prod N_i^{d_i} in high precision for
// boundary decisions.
SfMembershipDecision sf_membership(const BasicSetGeometry& g, const AdelicLipschitzSystem& als, const mpq_class& T,
                                   const Vec& z, const std::function<std::optional<hp>()>& precise = nullptr,
                                   SfStats* stats = nullptr);
// same with the bound given as T^d (T itself may be irrational)
SfMembershipDecision sf_membership_td(const BasicSetGeometry& g, const AdelicLipschitzSystem& als, const mpq_class& Td,
                                      const Vec& z, const std::function<std::optional<hp>()>& precise = nullptr,
                                      SfStats* stats = nullptr);
// z ∈ S_{F(i)}(T)
bool sf_cell_membership(const BasicSetGeometry& g, const AdelicLipschitzSystem& als, long cell, const mpq_class& T,
                        const Vec& z);

Vec tau_apply(const BasicSetGeometry& g, long cell, const Vec& z, int n);

// boundary of S_{F(0)}(1)
struct SfChartSet {
  LipChartSet charts;
  double M_declared = 0;
  double L_declared = 0;
  double rF = 0, Mprime = 0, Lprime = 0;
};
SfChartSet sf_charts(const BasicSetGeometry& g, const AdelicLipschitzSystem& als);

// sqrt(d(n+1)) C_inf e^q: S_{F(0)}(T) ⊆ B_0(delta1 T)
double sf0_radius(const BasicSetGeometry& g, const AdelicLipschitzSystem& als);

// prod_v Vol{N_v <= 1} for max-norm systems (exact), else nullopt
std::optional<double> v_inf_exact(const AdelicLipschitzSystem& als);

}  // namespace primpts
