#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "primpts/charts.hpp"
#include "primpts/gon.hpp"

namespace primpts {

// upper bound for the number of translates of F meeting a Lip(D,1,M,L) boundary
double translate_count_bound(double M, long Q, int D, double L, const std::vector<double>& minima, double omega);
// 3^D M (sqrt(D) Omega L / lambda_1 + 1)^{D-1}
double lambda1_count_bound(double M, double L, double lambda1, double omega, int D);
// Q used in the proof of the corollary: floor(sqrt(D) Omega L / lambda_1) + 1
long lambda1_Q(double L, double lambda1, double omega, int D);
double c0(int D);  // D^{3D^2/2}
// c0(D) M max_{0<=i<D} L^i / (lambda_1 ... lambda_i)
double minima_count_bound(double M, double L, const std::vector<double>& minima, int D);

enum class Membership { In, Out, Undecidable };
using MembershipFn = std::function<Membership(const Vec&)>;

// |Lambda ∩ S| for S inside the closed ball of the given radius
long exact_lattice_count(const LatticeBasis& B, const MembershipFn& in, double radius,
                         long budget = kDefaultEnumBudget);

struct VolumeEstimate {
  double estimate = 0;
  double halfwidth = 0;  // 99% binomial interval
  long samples = 0;
  long hits = 0;
};
// Shards of fixed size, each with its own sub-seed; the result does not
// depend on `workers`.
VolumeEstimate volume_mc(const std::function<bool(const Vec&)>& in, const Vec& lo, const Vec& hi, long N,
                         std::uint64_t seed, int workers = 1);
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index);

struct CountSet {
  MembershipFn member;
  LipChartSet boundary;
  double radius = 0;                // S ⊆ B_0(radius)
  std::optional<double> volume;     // exact volume if known
  Vec box_lo, box_hi;               // for Monte Carlo when volume is absent
  long mc_samples = 1'000'000;
};

struct CountReport {
  double det = 0;
  long count = 0;
  double volume = 0, volume_halfwidth = 0;
  double discrepancy = 0;  // |count - vol/det|
  std::vector<double> minima;
  double omega = 0;
  long Q = 1;
  long T_hat = 0;  // sampled lower estimate of translates meeting the boundary
  double translate_bd = 0, lambda1_bd = 0, minima_bd = 0;
  bool pass_lemma = false;  // discrepancy <= translate_bd via the translate count
  bool pass_lambda1 = false, pass_minima = false, pass_T_hat = false;
  bool pass() const { return pass_lemma && pass_lambda1 && pass_minima && pass_T_hat; }
};

struct DiscrepancyOptions {
  std::optional<long> Q;  // default: the corollary's choice
  long boundary_samples = 200'000;
  std::uint64_t seed = 1;
  int workers = 1;
};

CountReport discrepancy_experiment(const LatticeBasis& B, const CountSet& S, const DiscrepancyOptions& opt = {});

}  // namespace primpts
