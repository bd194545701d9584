#include "primpts/lipcount.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <thread>

#include "primpts/error.hpp"

namespace primpts {

double translate_count_bound(double M, long Q, int D, double L, const std::vector<double>& minima, double omega) {
  if (Q < 1) fail(Errc::BadQ, "Q must be a positive integer");
  if (int(minima.size()) != D) fail(Errc::BadParams, "need D minima");
  double v = M * std::pow(double(Q), D - 1);
  for (int i = 0; i < D; ++i) v *= std::sqrt(double(D - 1)) * omega * L / (minima[i] * double(Q)) + 2;
  return v;
}

double lambda1_count_bound(double M, double L, double lambda1, double omega, int D) {
  return std::pow(3.0, D) * M * std::pow(std::sqrt(double(D)) * omega * L / lambda1 + 1, D - 1);
}

long lambda1_Q(double L, double lambda1, double omega, int D) {
  return long(std::floor(std::sqrt(double(D)) * omega * L / lambda1)) + 1;
}

double c0(int D) { return std::pow(double(D), 1.5 * D * D); }

double minima_count_bound(double M, double L, const std::vector<double>& minima, int D) {
  double best = 1, term = 1;
  for (int i = 1; i < D; ++i) {
    term *= L / minima[i - 1];
    best = std::max(best, term);
  }
  return c0(D) * M * best;
}

long exact_lattice_count(const LatticeBasis& B, const MembershipFn& in, double radius, long budget) {
  long count = 0;
  auto test = [&](const Vec& v) {
    Membership m = in(v);
    if (m == Membership::Undecidable) fail(Errc::UndecidableMembership, "membership undecidable at a lattice point");
    if (m == Membership::In) ++count;
  };
  test(Vec(B.D, 0.0));
  try {
    enumerate_short(
        B, radius,
        [&](const CoeffVec& x, double) {
          Vec v = B.combine(x);
          test(v);
          for (auto& e : v) e = -e;
          test(v);
        },
        budget);
  } catch (const Error& e) {
    if (e.code() == Errc::EnumerationBudgetExceeded) fail(Errc::BudgetExceeded, e.what());
    throw;
  }
  return count;
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 of (seed, index)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

VolumeEstimate volume_mc(const std::function<bool(const Vec&)>& in, const Vec& lo, const Vec& hi, long N,
                         std::uint64_t seed, int workers) {
  constexpr long kShard = 1 << 15;
  const int D = int(lo.size());
  double boxvol = 1;
  for (int i = 0; i < D; ++i) boxvol *= hi[i] - lo[i];
  long shards = (N + kShard - 1) / kShard;
  std::vector<long> hits(shards, 0);
  auto run = [&](long s) {
    std::mt19937_64 rng(sub_seed(seed, std::uint64_t(s)));
    std::uniform_real_distribution<double> U(0.0, 1.0);
    long cnt = std::min(kShard, N - s * kShard);
    Vec x(D);
    long h = 0;
    for (long t = 0; t < cnt; ++t) {
      for (int i = 0; i < D; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * U(rng);
      h += in(x);
    }
    hits[s] = h;
  };
  workers = std::max(1, workers);
  if (workers == 1) {
    for (long s = 0; s < shards; ++s) run(s);
  } else {
    std::vector<std::thread> th;
    for (int w = 0; w < workers; ++w)
      th.emplace_back([&, w] {
        for (long s = w; s < shards; s += workers) run(s);
      });
    for (auto& t : th) t.join();
  }
  VolumeEstimate v;
  v.samples = N;
  for (long h : hits) v.hits += h;
  double p = N ? double(v.hits) / double(N) : 0.0;
  v.estimate = p * boxvol;
  v.halfwidth = N ? 2.5758293035489 * std::sqrt(p * (1 - p) / double(N)) * boxvol : 0.0;
  return v;
}

CountReport discrepancy_experiment(const LatticeBasis& B, const CountSet& S, const DiscrepancyOptions& opt) {
  const int D = B.D;
  CountReport r;
  r.det = B.det;
  r.count = exact_lattice_count(B, S.member, S.radius);
  if (S.volume) {
    r.volume = *S.volume;
  } else {
    auto in = [&](const Vec& x) { return S.member(x) == Membership::In; };
    auto v = volume_mc(in, S.box_lo, S.box_hi, S.mc_samples, opt.seed, opt.workers);
    r.volume = v.estimate;
    r.volume_halfwidth = v.halfwidth;
  }
  r.discrepancy = std::abs(double(r.count) - r.volume / r.det);
  double slack = r.volume_halfwidth / r.det;

  auto cert = successive_minima(B);
  r.minima = cert.lambda;
  auto mw = mahler_weyl_basis(cert, B);
  r.omega = orthogonality_defect(mw.basis);
  const double M = S.boundary.M(), L = S.boundary.L;
  r.Q = opt.Q ? *opt.Q : lambda1_Q(L, r.minima[0], r.omega, D);
  r.translate_bd = translate_count_bound(M, r.Q, D, L, r.minima, r.omega);
  r.lambda1_bd = lambda1_count_bound(M, L, r.minima[0], r.omega, D);
  r.minima_bd = minima_count_bound(M, L, r.minima, D);

  // cells of the Mahler-Weyl fundamental domain hit by boundary samples
  Eigen::MatrixXd Bm(D, D);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) Bm(i, j) = mw.basis.cols[j][i];
  Eigen::MatrixXd Bi = Bm.inverse();
  std::set<CoeffVec> cells;
  std::mt19937_64 rng(sub_seed(opt.seed, 0xce11));
  std::uniform_real_distribution<double> U(0.0, 1.0);
  if (S.boundary.M() > 0) {
    long per = std::max(1L, opt.boundary_samples / S.boundary.M());
    for (const auto& ch : S.boundary.charts) {
      Vec u(ch.in_dim);
      for (long t = 0; t < per; ++t) {
        for (auto& e : u) e = U(rng);
        Vec x = ch.f(u);
        Eigen::VectorXd xv(D);
        for (int i = 0; i < D; ++i) xv(i) = x[i];
        Eigen::VectorXd c = Bi * xv;
        CoeffVec cell(D);
        for (int i = 0; i < D; ++i) cell[i] = std::int64_t(std::floor(c(i)));
        cells.insert(cell);
      }
    }
  }
  r.T_hat = long(cells.size());
  const double tol = 1e-9;
  r.pass_lemma = r.discrepancy <= r.translate_bd * (1 + tol) + slack;
  r.pass_lambda1 = r.discrepancy <= r.lambda1_bd * (1 + tol) + slack;
  r.pass_minima = r.discrepancy <= r.minima_bd * (1 + tol) + slack;
  r.pass_T_hat = double(r.T_hat) <= r.translate_bd * (1 + tol);
  return r;
}

}  // namespace primpts
