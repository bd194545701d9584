#include "primpts/gon.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "primpts/error.hpp"

namespace primpts {

namespace {

constexpr double kRadiusSlack = 1e-9;

Eigen::MatrixXd to_eigen(const std::vector<Vec>& cols) {
  int D = int(cols.size());
  Eigen::MatrixXd M(D, D);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) M(i, j) = cols[j][i];
  return M;
}

double vnorm(const Vec& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

mpq_class exact_norm2(const std::vector<RatVec>& cols, const CoeffVec& x) {
  std::size_t D = cols[0].size();
  mpq_class s = 0;
  for (std::size_t i = 0; i < D; ++i) {
    mpq_class c = 0;
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (x[j]) c += cols[j][i] * mpq_class(mpz_class(std::to_string(x[j])));
    s += c * c;
  }
  return s;
}

void canonical_sign(CoeffVec& x) {
  for (auto c : x)
    if (c != 0) {
      if (c < 0)
        for (auto& e : x) e = -e;
      return;
    }
}

// incremental exact independence test on integer coefficient vectors
struct RankTracker {
  std::vector<RatVec> rows;  // echelon rows
  std::vector<int> pivots;
  bool add(const CoeffVec& x) {
    RatVec v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = mpq_class(mpz_class(std::to_string(x[i])));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      int p = pivots[r];
      if (v[p] != 0) {
        mpq_class f = v[p] / rows[r][p];
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= f * rows[r][i];
      }
    }
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] != 0) {
        rows.push_back(v);
        pivots.push_back(int(i));
        return true;
      }
    return false;
  }
};

}  // namespace

Vec LatticeBasis::combine(const CoeffVec& x) const {
  Vec v(D, 0.0);
  for (int j = 0; j < D; ++j)
    if (x[j])
      for (int i = 0; i < D; ++i) v[i] += double(x[j]) * cols[j][i];
  return v;
}

double LatticeBasis::norm2(const CoeffVec& x) const {
  if (exact) return exact_norm2(*exact, x).get_d();
  Vec v = combine(x);
  double s = 0;
  for (double e : v) s += e * e;
  return s;
}

LatticeBasis make_lattice(std::vector<Vec> cols) {
  LatticeBasis B;
  B.D = int(cols.size());
  for (const auto& c : cols)
    if (int(c.size()) != B.D) fail(Errc::BadParams, "lattice basis must be square");
  B.cols = std::move(cols);
  B.det = B.D == 0 ? 1.0 : std::abs(to_eigen(B.cols).determinant());
  if (!(B.det > 0)) fail(Errc::BadParams, "lattice basis is singular");
  return B;
}

LatticeBasis make_lattice_exact(const std::vector<RatVec>& cols) {
  std::vector<Vec> c;
  for (const auto& col : cols) {
    Vec v;
    for (const auto& x : col) v.push_back(x.get_d());
    c.push_back(v);
  }
  LatticeBasis B = make_lattice(c);
  B.exact = cols;
  RatMat m = cols;
  B.det = mpq_class(abs(rat_det(m))).get_d();
  return B;
}

std::vector<CoeffVec> lll_transform(const LatticeBasis& B, double delta) {
  const int D = B.D;
  std::vector<Vec> b = B.cols;
  std::vector<CoeffVec> U(D, CoeffVec(D, 0));
  for (int i = 0; i < D; ++i) U[i][i] = 1;
  auto dot = [&](const Vec& x, const Vec& y) {
    double s = 0;
    for (int i = 0; i < D; ++i) s += x[i] * y[i];
    return s;
  };
  std::vector<Vec> bs(D, Vec(D));
  std::vector<std::vector<double>> mu(D, std::vector<double>(D, 0));
  std::vector<double> Bn(D);
  auto gso = [&]() {
    for (int i = 0; i < D; ++i) {
      bs[i] = b[i];
      for (int j = 0; j < i; ++j) {
        mu[i][j] = dot(b[i], bs[j]) / Bn[j];
        for (int t = 0; t < D; ++t) bs[i][t] -= mu[i][j] * bs[j][t];
      }
      Bn[i] = dot(bs[i], bs[i]);
    }
  };
  gso();
  int k = 1;
  long guard = 0;
  while (k < D && guard++ < 1'000'000) {
    for (int j = k - 1; j >= 0; --j) {
      double q = std::round(mu[k][j]);
      if (q != 0) {
        auto qi = std::int64_t(q);
        for (int t = 0; t < D; ++t) {
          b[k][t] -= q * b[j][t];
          U[k][t] -= qi * U[j][t];
        }
        gso();
      }
    }
    if (Bn[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * Bn[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      std::swap(U[k], U[k - 1]);
      gso();
      k = std::max(k - 1, 1);
    }
  }
  return U;  // U[j] = coefficients of reduced vector j in the input basis
}

long enumerate_short(const LatticeBasis& B, double R, const std::function<void(const CoeffVec&, double)>& f,
                     long budget) {
  const int D = B.D;
  if (D > kMaxGonDim) fail(Errc::DimensionTooLarge, "lattice dimension exceeds " + std::to_string(kMaxGonDim));
  auto U = lll_transform(B);
  std::vector<Vec> red;
  for (int j = 0; j < D; ++j) red.push_back(B.combine(U[j]));
  Eigen::MatrixXd M = to_eigen(red);
  Eigen::MatrixXd G = M.transpose() * M;
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  Eigen::MatrixXd Rm = llt.matrixU();
  std::vector<double> qd(D);
  std::vector<std::vector<double>> q(D, std::vector<double>(D, 0));
  for (int i = 0; i < D; ++i) {
    qd[i] = Rm(i, i) * Rm(i, i);
    for (int j = i + 1; j < D; ++j) q[i][j] = Rm(i, j) / Rm(i, i);
  }
  const double R2 = R * R * (1 + kRadiusSlack) + 1e-300;
  std::vector<std::int64_t> y(D, 0);
  long nodes = 0;
  std::function<void(int, double)> rec = [&](int i, double rem) {
    double c = 0;
    for (int j = i + 1; j < D; ++j) c -= q[i][j] * double(y[j]);
    double w = std::sqrt(std::max(0.0, rem / qd[i])) + 1e-9;
    auto lo = std::int64_t(std::ceil(c - w)), hi = std::int64_t(std::floor(c + w));
    for (std::int64_t t = lo; t <= hi; ++t) {
      if (++nodes > budget) fail(Errc::EnumerationBudgetExceeded, "lattice enumeration budget exceeded");
      double dd = double(t) - c;
      double nr = rem - qd[i] * dd * dd;
      if (nr < -1e-12 * R2) continue;
      y[i] = t;
      if (i == 0) {
        // keep one of +-y: first nonzero reduced coordinate from the top is positive
        int top = D - 1;
        while (top >= 0 && y[top] == 0) --top;
        if (top < 0 || y[top] < 0) continue;
        CoeffVec x(D, 0);
        for (int j = 0; j < D; ++j)
          if (y[j])
            for (int t2 = 0; t2 < D; ++t2) x[t2] += y[j] * U[j][t2];
        double n2 = B.norm2(x);
        if (n2 <= R2) {
          canonical_sign(x);
          f(x, n2);
        }
      } else {
        rec(i - 1, nr);
      }
    }
    y[i] = 0;
  };
  if (D > 0) rec(D - 1, R2);
  return nodes;
}

MinimaCertificate successive_minima(const LatticeBasis& B, long budget) {
  const int D = B.D;
  if (D > kMaxGonDim) fail(Errc::DimensionTooLarge, "lattice dimension exceeds " + std::to_string(kMaxGonDim));
  auto U = lll_transform(B);
  std::vector<double> rn;
  for (int j = 0; j < D; ++j) rn.push_back(std::sqrt(B.norm2(U[j])));
  std::sort(rn.begin(), rn.end());
  double R = rn.front(), R0 = rn.back();
  MinimaCertificate cert;
  cert.slack = kRadiusSlack;
  for (;;) {
    struct Item {
      CoeffVec x;
      double n2;
      std::optional<mpq_class> ex;
    };
    std::vector<Item> items;
    cert.nodes += enumerate_short(
        B, R,
        [&](const CoeffVec& x, double n2) {
          Item it{x, n2, std::nullopt};
          if (B.exact) it.ex = exact_norm2(*B.exact, x);
          items.push_back(std::move(it));
        },
        budget - cert.nodes);
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      if (a.ex && b.ex) {
        if (*a.ex != *b.ex) return *a.ex < *b.ex;
      } else if (a.n2 != b.n2) {
        return a.n2 < b.n2;
      }
      return a.x > b.x;  // ties: lexicographically largest canonical coefficients first
    });
    RankTracker rt;
    MinimaCertificate c;
    for (const auto& it : items) {
      if (int(c.witnesses.size()) == D) break;
      if (rt.add(it.x)) {
        c.witnesses.push_back(it.x);
        c.witness_vectors.push_back(B.combine(it.x));
        c.lambda.push_back(it.ex ? std::sqrt(it.ex->get_d()) : std::sqrt(it.n2));
        c.lambda_sq_exact.push_back(it.ex);
      }
    }
    if (int(c.witnesses.size()) == D) {
      cert.lambda = c.lambda;
      cert.lambda_sq_exact = c.lambda_sq_exact;
      cert.witnesses = c.witnesses;
      cert.witness_vectors = c.witness_vectors;
      cert.radius = R;
      return cert;
    }
    if (R >= R0) fail(Errc::AssertionFailed, "enumeration at the reduced-basis radius missed a basis");
    R = std::min(R0, R * 1.25);
  }
}

std::optional<CoeffVec> lattice_coords(const LatticeBasis& B, const Vec& v) {
  Eigen::MatrixXd M = to_eigen(B.cols);
  Eigen::VectorXd b(B.D);
  for (int i = 0; i < B.D; ++i) b(i) = v[i];
  Eigen::VectorXd x = M.fullPivLu().solve(b);
  CoeffVec c(B.D);
  for (int i = 0; i < B.D; ++i) {
    if (std::abs(x(i) - std::round(x(i))) > 1e-7) return std::nullopt;
    c[i] = std::int64_t(std::llround(x(i)));
  }
  Vec w = B.combine(c);
  double err = 0;
  for (int i = 0; i < B.D; ++i) err = std::max(err, std::abs(w[i] - v[i]));
  if (err > 1e-9 * (1 + vnorm(v))) return std::nullopt;
  return c;
}

MahlerWeylResult mahler_weyl_basis(const MinimaCertificate& cert, const LatticeBasis& B) {
  const int D = B.D;
  if (int(cert.witnesses.size()) != D) fail(Errc::WitnessNotInLattice, "certificate lacks witnesses");
  for (int i = 0; i < D; ++i) {
    Vec w = B.combine(cert.witnesses[i]);
    if (!cert.witness_vectors.empty()) {
      double err = 0;
      for (int t = 0; t < D; ++t) err = std::max(err, std::abs(w[t] - cert.witness_vectors[i][t]));
      if (err > 1e-9 * (1 + vnorm(w))) fail(Errc::WitnessNotInLattice, "witness vector differs from its coefficients");
    }
  }
  // W: columns are witness coefficient vectors
  RatMat W(D, RatVec(D));
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) W[i][j] = mpq_class(mpz_class(std::to_string(cert.witnesses[j][i])));
  mpq_class detW = rat_det(W);
  if (detW == 0) fail(Errc::WitnessNotInLattice, "witnesses are dependent");
  RatMat Wi = rat_inverse(W);
  mpz_class N = mpq_class(abs(detW)).get_num();
  // lattice Z^D in witness coordinates is spanned by the columns of W^{-1};
  // N * W^{-1} is integral. Reverse coordinates so the row HNF is lower
  // triangular in witness order.
  IntMat rows;
  for (int j = 0; j < D; ++j) {
    IntVec r(D);
    for (int i = 0; i < D; ++i) {
      mpq_class e = Wi[i][j] * N;
      r[D - 1 - i] = e.get_num();
    }
    rows.push_back(r);
  }
  IntMat H = hnf_rows(rows, D);
  std::vector<RatVec> T(D, RatVec(D, 0));  // T[i]: witness coordinates of v_i, support 0..i
  for (int i = 0; i < D; ++i) {
    const IntVec& h = H[D - 1 - i];
    for (int t = 0; t < D; ++t) T[i][D - 1 - t] = mpq_class(h[t], N);
    for (auto& e : T[i]) e.canonicalize();
  }
  for (int i = 0; i < D; ++i) {
    if (T[i][i] == 1) {
      for (int t = 0; t < D; ++t) T[i][t] = t == i ? 1 : 0;
      continue;
    }
    for (int j = i - 1; j >= 0; --j) {
      mpq_class r = T[i][j] / T[j][j] + mpq_class(1, 2);
      mpz_class qf;
      mpz_fdiv_q(qf.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
      if (qf != 0)
        for (int t = 0; t <= j; ++t) T[i][t] -= qf * T[j][t];
    }
  }
  MahlerWeylResult out;
  std::vector<Vec> cols;
  std::vector<RatVec> ecols;
  double acc = 0;
  for (int i = 0; i < D; ++i) {
    CoeffVec x(D, 0);
    for (int r = 0; r < D; ++r) {
      mpq_class s = 0;
      for (int j = 0; j < D; ++j) s += W[r][j] * T[i][j];
      if (s.get_den() != 1) fail(Errc::AssertionFailed, "Mahler-Weyl vector left the lattice");
      x[r] = s.get_num().get_si();
    }
    out.coeffs.push_back(x);
    cols.push_back(B.combine(x));
    if (B.exact) {
      RatVec e(D, 0);
      for (int j = 0; j < D; ++j)
        if (x[j])
          for (int t = 0; t < D; ++t) e[t] += (*B.exact)[j][t] * mpq_class(mpz_class(std::to_string(x[j])));
      ecols.push_back(e);
    }
    double ui = cert.lambda[i];
    acc += ui;
    out.bounds.push_back(std::max(ui, acc / 2));
  }
  out.basis = B.exact ? make_lattice_exact(ecols) : make_lattice(cols);
  return out;
}

double orthogonality_defect(const LatticeBasis& B) {
  double p = 1;
  for (const auto& c : B.cols) p *= vnorm(c);
  return p / B.det;
}

double mahler_weyl_defect_bound(int D) { return std::pow(double(D), 1.5 * D) / std::pow(2 * M_PI, D / 2.0); }

double unit_ball_volume(int D) { return std::pow(M_PI, D / 2.0) / std::tgamma(D / 2.0 + 1); }

MinkowskiReport minkowski_verify(const MinimaCertificate& cert, const LatticeBasis& B) {
  MinkowskiReport r;
  const int D = B.D;
  r.lower = std::pow(2.0, D) / std::tgamma(D + 1.0) * B.det;
  r.upper = std::pow(2.0, D) * B.det;
  r.middle = unit_ball_volume(D);
  for (double l : cert.lambda) r.middle *= l;
  r.pass = r.lower <= r.middle * (1 + 1e-9) && r.middle <= r.upper * (1 + 1e-9);
  return r;
}

PowerMinimaReport power_minima_check(const LatticeBasis& base, int n, long budget) {
  const int d = base.D, D = d * (n + 1);
  if (D > kMaxGonDim) fail(Errc::DimensionTooLarge, "d(n+1) exceeds " + std::to_string(kMaxGonDim));
  PowerMinimaReport rep;
  rep.base = successive_minima(base, budget).lambda;
  std::vector<Vec> cols;
  std::vector<RatVec> ecols;
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j < d; ++j) {
      Vec c(D, 0.0);
      RatVec e(D, 0);
      for (int i = 0; i < d; ++i) {
        c[k * d + i] = base.cols[j][i];
        if (base.exact) e[k * d + i] = (*base.exact)[j][i];
      }
      cols.push_back(c);
      ecols.push_back(e);
    }
  LatticeBasis P = base.exact ? make_lattice_exact(ecols) : make_lattice(cols);
  rep.power = successive_minima(P, budget).lambda;
  for (double l : rep.base)
    for (int k = 0; k <= n; ++k) rep.expected.push_back(l);
  rep.pass = rep.power.size() == rep.expected.size();
  for (std::size_t i = 0; rep.pass && i < rep.power.size(); ++i)
    rep.pass = std::abs(rep.power[i] - rep.expected[i]) <= 1e-9 * (1 + rep.expected[i]);
  return rep;
}

bool in_witness_span(const MinimaCertificate& cert, int k, const Vec& v) {
  if (k == 0) return vnorm(v) == 0;
  int D = int(v.size());
  Eigen::MatrixXd A(D, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < D; ++i) A(i, j) = cert.witness_vectors[j][i];
  Eigen::VectorXd b(D);
  for (int i = 0; i < D; ++i) b(i) = v[i];
  Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
  return (A * x - b).norm() <= 1e-9 * (1 + b.norm());
}

bool min_outside_subspace(const LatticeBasis& B, const MinimaCertificate& cert, int i, const Vec& v) {
  if (i < 1 || i > B.D) fail(Errc::BadIndex, "minimum index out of range");
  if (!lattice_coords(B, v)) fail(Errc::NotLatticeMember, "vector is not in the lattice");
  return vnorm(v) >= cert.lambda[i - 1] * (1 - 1e-12);
}

}  // namespace primpts
