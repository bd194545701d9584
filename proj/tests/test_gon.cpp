#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "primpts/error.hpp"
#include "primpts/gon.hpp"

using namespace primpts;

namespace {

LatticeBasis int_lattice(const std::vector<std::vector<long>>& cols) {
  std::vector<RatVec> c;
  for (const auto& col : cols) {
    RatVec v;
    for (long x : col) v.emplace_back(x);
    c.push_back(v);
  }
  return make_lattice_exact(c);
}

double norm(const Vec& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Brute force: coefficients bounded through Cramer's rule, |x_i| <= |row_i(B^-1)| R.
// Returns the successive minima by greedy independent selection, or empty if the box is too big.
std::vector<double> brute_minima(const LatticeBasis& B, long max_points = 3'000'000) {
  const int D = B.D;
  Eigen::MatrixXd M(D, D);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) M(i, j) = B.cols[j][i];
  double R = 0;
  for (const auto& c : B.cols) R = std::max(R, norm(c));
  Eigen::MatrixXd Mi = M.inverse();
  std::vector<long> box(D);
  double total = 1;
  for (int i = 0; i < D; ++i) {
    box[i] = long(std::floor(Mi.row(i).norm() * R + 1e-9));
    total *= 2 * box[i] + 1;
  }
  if (total > max_points) return {};
  std::vector<std::pair<double, Eigen::VectorXd>> pts;
  std::vector<long> x(D);
  for (int i = 0; i < D; ++i) x[i] = -box[i];
  for (;;) {
    Eigen::VectorXd c(D);
    for (int i = 0; i < D; ++i) c(i) = double(x[i]);
    Eigen::VectorXd v = M * c;
    if (c.norm() > 0 && v.norm() <= R * (1 + 1e-9)) pts.push_back({v.squaredNorm(), v});
    int k = 0;
    while (k < D && ++x[k] > box[k]) x[k++] = -box[k];
    if (k == D) break;
  }
  std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<double> lam;
  Eigen::MatrixXd S(D, 0);
  for (auto& [n2, v] : pts) {
    Eigen::MatrixXd T(D, S.cols() + 1);
    T << S, v;
    if (Eigen::FullPivLU<Eigen::MatrixXd>(T).rank() == T.cols()) {
      S = T;
      lam.push_back(std::sqrt(n2));
      if (int(lam.size()) == D) break;
    }
  }
  return lam;
}

LatticeBasis random_int_lattice(std::mt19937_64& rng, int D, int range) {
  std::uniform_int_distribution<long> u(-range, range);
  for (;;) {
    std::vector<std::vector<long>> cols(D, std::vector<long>(D));
    for (auto& c : cols)
      for (auto& e : c) e = u(rng);
    try {
      return int_lattice(cols);
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST_CASE("successive minima examples") {
  auto I = int_lattice({{1, 0}, {0, 1}});
  auto c = successive_minima(I);
  CHECK(c.lambda[0] == doctest::Approx(1));
  CHECK(c.lambda[1] == doctest::Approx(1));
  CHECK(c.witness_vectors[0] == Vec{1, 0});
  CHECK(c.witness_vectors[1] == Vec{0, 1});

  auto B = int_lattice({{2, 0}, {1, 3}});
  auto cb = successive_minima(B);
  CHECK(*cb.lambda_sq_exact[0] == 4);
  CHECK(*cb.lambda_sq_exact[1] == 10);
  CHECK(cb.lambda[1] == doctest::Approx(std::sqrt(10.0)));
  CHECK(cb.radius >= cb.lambda[1] * (1 - 1e-12));
  CHECK(brute_minima(B)[1] == doctest::Approx(std::sqrt(10.0)));

  // a floating-point lattice
  auto F = make_lattice({{1.0, 0.0}, {0.5, std::sqrt(3.0) / 2}});
  auto cf = successive_minima(F);
  CHECK(cf.lambda[0] == doctest::Approx(1));
  CHECK(cf.lambda[1] == doctest::Approx(1));
}

TEST_CASE("successive minima against brute force") {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    int D = 2 + t % 3;
    auto B = random_int_lattice(rng, D, 6);
    auto lam = brute_minima(B);
    if (lam.empty()) continue;
    ++checked;
    auto c = successive_minima(B);
    REQUIRE(lam.size() == c.lambda.size());
    for (int i = 0; i < D; ++i) CHECK(c.lambda[i] == doctest::Approx(lam[i]).epsilon(1e-12));
    for (int i = 0; i + 1 < D; ++i) CHECK(c.lambda[i] <= c.lambda[i + 1]);
    // witnesses are lattice vectors of the claimed norm
    for (int i = 0; i < D; ++i) {
      CHECK(lattice_coords(B, c.witness_vectors[i]));
      CHECK(norm(c.witness_vectors[i]) == doctest::Approx(c.lambda[i]));
    }
  }
  CHECK(checked > 30);
}

TEST_CASE("enumeration finds every short vector") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    auto B = random_int_lattice(rng, 3, 4);
    double R = 6;
    long count = 0;
    enumerate_short(B, R, [&](const CoeffVec&, double) { ++count; });
    // oracle: count over a Cramer box
    Eigen::MatrixXd M(3, 3);
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) M(i, j) = B.cols[j][i];
    Eigen::MatrixXd Mi = M.inverse();
    long bx[3];
    for (int i = 0; i < 3; ++i) bx[i] = long(Mi.row(i).norm() * R) + 1;
    long ref = 0;
    for (long a = -bx[0]; a <= bx[0]; ++a)
      for (long b = -bx[1]; b <= bx[1]; ++b)
        for (long c = -bx[2]; c <= bx[2]; ++c) {
          Eigen::Vector3d v = M * Eigen::Vector3d(a, b, c);
          if ((a || b || c) && v.squaredNorm() <= R * R) ++ref;
        }
    CHECK(2 * count == ref);
  }
}

TEST_CASE("errors") {
  std::vector<Vec> cols(13, Vec(13, 0.0));
  for (int i = 0; i < 13; ++i) cols[i][i] = 1;
  auto B = make_lattice(cols);
  CHECK_THROWS_AS(successive_minima(B), Error);
  try {
    successive_minima(B);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DimensionTooLarge);
  }
  std::vector<Vec> c8(8, Vec(8, 0.0));
  for (int i = 0; i < 8; ++i) c8[i][i] = 1;
  try {
    enumerate_short(make_lattice(c8), 5.0, [](const CoeffVec&, double) {}, 1000);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EnumerationBudgetExceeded);
  }
  auto Z2 = int_lattice({{1, 0}, {0, 1}});
  auto c = successive_minima(Z2);
  CHECK_THROWS_AS(min_outside_subspace(Z2, c, 2, Vec{0.5, 0}), Error);
}

TEST_CASE("orthogonality defect examples") {
  CHECK(orthogonality_defect(int_lattice({{1, 0}, {0, 1}})) == doctest::Approx(1));
  CHECK(orthogonality_defect(int_lattice({{1, 0}, {1, 1}})) == doctest::Approx(std::sqrt(2.0)));
  CHECK(orthogonality_defect(int_lattice({{1, 0}, {10, 1}})) == doctest::Approx(std::sqrt(101.0)));
  CHECK(mahler_weyl_defect_bound(2) == doctest::Approx(8 / (2 * M_PI)));
}

TEST_CASE("Mahler-Weyl basis") {
  auto B = int_lattice({{2, 0}, {1, 3}});
  auto c = successive_minima(B);
  auto mw = mahler_weyl_basis(c, B);
  CHECK(norm(mw.basis.cols[1]) <= std::sqrt(10.0) + 1e-12);
  CHECK(mw.bounds[1] == doctest::Approx(std::sqrt(10.0)));
  auto I = int_lattice({{1, 0}, {0, 1}});
  auto mi = mahler_weyl_basis(successive_minima(I), I);
  CHECK(orthogonality_defect(mi.basis) == doctest::Approx(1));

  MinimaCertificate bad = c;
  bad.witness_vectors[0] = Vec{1, 0};
  CHECK_THROWS_AS(mahler_weyl_basis(bad, B), Error);

  std::mt19937_64 rng(13);
  for (int t = 0; t < 80; ++t) {
    int D = 2 + t % 5;
    auto L = random_int_lattice(rng, D, 5);
    auto cert = successive_minima(L);
    auto r = mahler_weyl_basis(cert, L);
    // same lattice: unimodular coefficient matrix
    Eigen::MatrixXd C(D, D);
    for (int j = 0; j < D; ++j)
      for (int i = 0; i < D; ++i) C(i, j) = double(r.coeffs[j][i]);
    CHECK(std::abs(std::abs(C.determinant()) - 1) < 1e-9);
    CHECK(r.basis.det == doctest::Approx(L.det));
    for (int i = 0; i < D; ++i) {
      CHECK(norm(r.basis.cols[i]) <= r.bounds[i] * (1 + 1e-12));
      CHECK(in_witness_span(cert, i + 1, r.basis.cols[i]));
    }
    CHECK(orthogonality_defect(r.basis) >= 1 - 1e-12);
    CHECK(orthogonality_defect(r.basis) <= mahler_weyl_defect_bound(D));
  }
}

TEST_CASE("Minkowski second theorem") {
  auto Z2 = int_lattice({{1, 0}, {0, 1}});
  auto r = minkowski_verify(successive_minima(Z2), Z2);
  CHECK(r.lower == doctest::Approx(2));
  CHECK(r.middle == doctest::Approx(M_PI));
  CHECK(r.upper == doctest::Approx(4));
  CHECK(r.pass);
  auto B = int_lattice({{2, 0}, {1, 3}});
  auto rb = minkowski_verify(successive_minima(B), B);
  CHECK(rb.middle == doctest::Approx(2 * std::sqrt(10.0) * M_PI));
  CHECK(rb.lower == doctest::Approx(12));
  CHECK(rb.upper == doctest::Approx(24));
  CHECK(rb.pass);
  std::mt19937_64 rng(2024);
  int passed = 0;
  for (int t = 0; t < 100; ++t) {
    int D = 2 + t % 5;
    auto L = random_int_lattice(rng, D, 9);
    passed += minkowski_verify(successive_minima(L), L).pass;
  }
  CHECK(passed == 100);
}

TEST_CASE("power minima") {
  auto r1 = power_minima_check(int_lattice({{1, 0}, {0, 3}}), 1);
  CHECK(r1.pass);
  CHECK(r1.power[0] == doctest::Approx(1));
  CHECK(r1.power[1] == doctest::Approx(1));
  CHECK(r1.power[2] == doctest::Approx(3));
  CHECK(r1.power[3] == doctest::Approx(3));
  auto r2 = power_minima_check(int_lattice({{1}}), 2);
  CHECK(r2.pass);
  CHECK(r2.power.size() == 3);
  auto r3 = power_minima_check(int_lattice({{2, 0}, {1, 3}}), 1);
  CHECK(r3.pass);
  CHECK(r3.power[3] == doctest::Approx(std::sqrt(10.0)));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) CHECK(power_minima_check(random_int_lattice(rng, 2, 5), 2).pass);
}

TEST_CASE("minimum outside a subspace") {
  auto Z2 = int_lattice({{1, 0}, {0, 1}});
  auto c = successive_minima(Z2);
  CHECK(min_outside_subspace(Z2, c, 2, Vec{5, 1}));
  auto Dg = int_lattice({{1, 0}, {0, 3}});
  auto cd = successive_minima(Dg);
  CHECK(cd.witness_vectors[0] == Vec{1, 0});
  CHECK(min_outside_subspace(Dg, cd, 2, Vec{2, 3}));
  CHECK(in_witness_span(cd, 1, Vec{4, 0}));
  CHECK(min_outside_subspace(Dg, cd, 2, Vec{4, 0}));

  std::mt19937_64 rng(8);
  for (int t = 0; t < 30; ++t) {
    int D = 2 + t % 3;
    auto L = random_int_lattice(rng, D, 5);
    auto cert = successive_minima(L);
    double R = 1.5 * cert.lambda.back();
    enumerate_short(L, R, [&](const CoeffVec& x, double) {
      Vec v = L.combine(x);
      for (int i = 1; i <= D; ++i)
        if (!in_witness_span(cert, i - 1, v)) CHECK(min_outside_subspace(L, cert, i, v));
    });
  }
}
