#include "primpts/charts.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "primpts/error.hpp"

namespace primpts {

namespace {

double norm(const Vec& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Vec translate(Vec v, const Vec& c) {
  if (!c.empty())
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += c[i];
  return v;
}

// face k, sign sg of [-1,1]^D parameterized by [0,1]^{D-1}
Vec cube_face_point(int D, int k, double sg, const Vec& u) {
  Vec p(D);
  int j = 0;
  for (int i = 0; i < D; ++i) p[i] = (i == k) ? sg : 2.0 * u[j++] - 1.0;
  return p;
}

}  // namespace

LipChartSet make_chart(ChartKind kind, const ChartParams& p) {
  LipChartSet out;
  switch (kind) {
    case ChartKind::CubeBoundary: {
      // boundary of the cube [-r, r]^D: 2D faces, each of Lipschitz constant 2r
      int D = p.D;
      if (D < 1 || p.r <= 0) fail(Errc::BadParams, "cube_boundary needs D >= 1, r > 0");
      out.D = D;
      out.c = 1;
      out.label = "cube_boundary";
      for (int k = 0; k < D; ++k)
        for (double sg : {-1.0, 1.0}) {
          Chart c;
          c.in_dim = D - 1;
          c.out_dim = D;
          double r = p.r;
          Vec ctr = p.center;
          c.f = [D, k, sg, r, ctr](const Vec& u) {
            Vec x = cube_face_point(D, k, sg, u);
            for (auto& e : x) e *= r;
            return translate(x, ctr);
          };
          c.L = 2.0 * r;
          c.sup = r * std::sqrt(double(D)) + norm(ctr);
          out.charts.push_back(c);
        }
      out.L = 2.0 * p.r;
      break;
    }
    case ChartKind::Sphere: {
      // radial projection of the cube faces onto the sphere of radius r
      int D = p.D;
      if (D < 2 || p.r <= 0) fail(Errc::BadParams, "sphere needs D >= 2, r > 0");
      double L = p.declared_L > 0 ? p.declared_L : 2.0 * p.r;
      out.D = D;
      out.c = 1;
      out.label = "sphere";
      for (int k = 0; k < D; ++k)
        for (double sg : {-1.0, 1.0}) {
          Chart c;
          c.in_dim = D - 1;
          c.out_dim = D;
          double r = p.r;
          Vec ctr = p.center;
          c.f = [D, k, sg, r, ctr](const Vec& u) {
            Vec x = cube_face_point(D, k, sg, u);
            double n = norm(x);
            for (auto& e : x) e *= r / n;
            return translate(x, ctr);
          };
          c.L = L;
          c.sup = r + norm(ctr);
          out.charts.push_back(c);
        }
      out.L = L;
      break;
    }
    case ChartKind::ComplexMaxBallBoundary: {
      // {max |z_j| = r} in C^{n+1} = R^{2n+2}: piece k has |z_k| = r
      int n = p.n;
      if (n < 0 || p.r <= 0) fail(Errc::BadParams, "complex max ball needs n >= 0, r > 0");
      int D = 2 * (n + 1);
      out.D = D;
      out.c = 1;
      out.label = "complex_max_ball_boundary";
      double L = 2.0 * M_PI * std::sqrt(2.0 * n + 1.0) * p.r;
      for (int k = 0; k <= n; ++k) {
        Chart c;
        c.in_dim = 2 * n + 1;
        c.out_dim = D;
        double r = p.r;
        c.f = [n, k, r](const Vec& t) {
          Vec z(2 * (n + 1));
          int idx = 1;
          for (int j = 0; j <= n; ++j) {
            double rho, ang;
            if (j == k) {
              rho = r;
              ang = 2.0 * M_PI * t[0];
            } else {
              rho = r * t[idx];
              ang = 2.0 * M_PI * t[idx + 1];
              idx += 2;
            }
            z[2 * j] = rho * std::cos(ang);
            z[2 * j + 1] = rho * std::sin(ang);
          }
          return z;
        };
        c.L = L;
        c.sup = r * std::sqrt(double(n + 1));
        out.charts.push_back(c);
      }
      out.L = L;
      break;
    }
    case ChartKind::BallHyperplaneSection: {
      // B(center, r) ∩ (center + normal^perp), covered by one square chart
      int d = p.D;
      if (d < 2 || p.r <= 0 || int(p.normal.size()) != d || norm(p.normal) == 0)
        fail(Errc::BadParams, "ball_hyperplane_section needs D >= 2, r > 0, nonzero normal of length D");
      // orthonormal frame of the hyperplane via Gram-Schmidt against the normal
      std::vector<Vec> frame;
      Vec nn = p.normal;
      double nl = norm(nn);
      for (auto& x : nn) x /= nl;
      std::vector<Vec> basis = {nn};
      for (int i = 0; i < d && int(frame.size()) < d - 1; ++i) {
        Vec e(d, 0.0);
        e[i] = 1.0;
        for (const auto& b : basis) {
          double dot = 0;
          for (int j = 0; j < d; ++j) dot += e[j] * b[j];
          for (int j = 0; j < d; ++j) e[j] -= dot * b[j];
        }
        double el = norm(e);
        if (el < 1e-8) continue;
        for (auto& x : e) x /= el;
        basis.push_back(e);
        frame.push_back(e);
      }
      Chart c;
      c.in_dim = d - 1;
      c.out_dim = d;
      double r = p.r;
      Vec ctr = p.center;
      c.f = [frame, r, d, ctr](const Vec& u) {
        Vec x(d, 0.0);
        for (std::size_t i = 0; i < frame.size(); ++i) {
          double s = r * (2.0 * u[i] - 1.0);
          for (int j = 0; j < d; ++j) x[j] += s * frame[i][j];
        }
        return translate(x, ctr);
      };
      c.L = 2.0 * std::sqrt(double(d - 1)) * r;
      c.sup = r * std::sqrt(double(d - 1)) + norm(ctr);
      out.D = d;
      out.c = 1;
      out.L = c.L;
      out.label = "ball_hyperplane_section";
      out.charts.push_back(c);
      break;
    }
    case ChartKind::ParallelepipedBoundary: {
      // boundary of {center + sum t_j v_j : t in [0,1]^q}; 2q faces
      int q = int(p.vectors.size());
      if (q < 1) fail(Errc::BadParams, "parallelepiped needs at least one vector");
      int m = int(p.vectors[0].size());
      for (const auto& v : p.vectors)
        if (int(v.size()) != m) fail(Errc::BadParams, "parallelepiped vectors differ in length");
      if (m < q) fail(Errc::BadParams, "more edge vectors than ambient dimension");
      double vmax = 0, vsum = 0;
      for (const auto& v : p.vectors) {
        vmax = std::max(vmax, norm(v));
        vsum += norm(v);
      }
      // q-1 parameters, each column of length <= vmax
      double L = double(q - 1) * std::max(1.0, vmax);
      out.D = m;
      out.c = m - q + 1;
      out.label = "parallelepiped_boundary";
      auto vecs = p.vectors;
      Vec ctr = p.center;
      for (int k = 0; k < q; ++k)
        for (double side : {0.0, 1.0}) {
          Chart c;
          c.in_dim = q - 1;
          c.out_dim = m;
          c.f = [vecs, k, side, m, q, ctr](const Vec& u) {
            Vec x(m, 0.0);
            int idx = 0;
            for (int j = 0; j < q; ++j) {
              double t = (j == k) ? side : u[idx++];
              for (int i = 0; i < m; ++i) x[i] += t * vecs[j][i];
            }
            return translate(x, ctr);
          };
          c.L = L;
          c.sup = vsum + norm(ctr);
          out.charts.push_back(c);
        }
      out.L = L;
      break;
    }
  }
  return out;
}

Chart chart_product(const Chart& a, const Chart& b) {
  Chart c;
  c.in_dim = a.in_dim + b.in_dim;
  c.out_dim = a.out_dim + b.out_dim;
  auto fa = a.f, fb = b.f;
  int na = a.in_dim;
  c.f = [fa, fb, na](const Vec& x) {
    Vec xa(x.begin(), x.begin() + na), xb(x.begin() + na, x.end());
    Vec y = fa(xa), z = fb(xb);
    y.insert(y.end(), z.begin(), z.end());
    return y;
  };
  c.L = std::sqrt(a.L * a.L + b.L * b.L);
  c.sup = std::sqrt(a.sup * a.sup + b.sup * b.sup);
  return c;
}

Chart chart_extend(const Chart& a, int new_in_dim) {
  if (new_in_dim < a.in_dim) fail(Errc::DomainMismatch, "extend cannot shrink the parameter cube");
  Chart c = a;
  c.in_dim = new_in_dim;
  auto fa = a.f;
  int na = a.in_dim;
  c.f = [fa, na](const Vec& x) { return fa(Vec(x.begin(), x.begin() + na)); };
  return c;
}

Chart chart_scale_multiply(const Chart& f, const Chart& g) {
  if (f.out_dim != 1) fail(Errc::DomainMismatch, "scale_multiply needs a scalar first factor");
  if (f.in_dim != g.in_dim) fail(Errc::DomainMismatch, "scale_multiply needs equal parameter cubes");
  Chart c;
  c.in_dim = g.in_dim;
  c.out_dim = g.out_dim;
  auto ff = f.f, fg = g.f;
  c.f = [ff, fg](const Vec& x) {
    double s = ff(x)[0];
    Vec y = fg(x);
    for (auto& e : y) e *= s;
    return y;
  };
  c.L = std::sqrt(2.0) * std::max(g.sup * f.L, f.sup * g.L);
  c.sup = f.sup * g.sup;
  return c;
}

Chart chart_compose_affine(const Chart& a, const std::vector<Vec>& A, const Vec& b, double opnorm) {
  Chart c;
  c.in_dim = a.in_dim;
  c.out_dim = int(A.size());
  auto fa = a.f;
  c.f = [fa, A, b](const Vec& x) {
    Vec y = fa(x);
    Vec z(A.size(), 0.0);
    for (std::size_t i = 0; i < A.size(); ++i) {
      for (std::size_t j = 0; j < y.size(); ++j) z[i] += A[i][j] * y[j];
      if (!b.empty()) z[i] += b[i];
    }
    return z;
  };
  c.L = opnorm * a.L;
  c.sup = opnorm * a.sup + (b.empty() ? 0.0 : norm(b));
  return c;
}

LipChartSet combine_charts(CombineOp op, const std::vector<LipChartSet>& args, int extend_to) {
  LipChartSet out;
  switch (op) {
    case CombineOp::Product: {
      if (args.size() != 2) fail(Errc::DomainMismatch, "product takes two chart sets");
      out.D = args[0].D + args[1].D;
      out.c = args[0].c + args[1].c;
      for (const auto& a : args[0].charts)
        for (const auto& b : args[1].charts) out.charts.push_back(chart_product(a, b));
      out.label = "product";
      break;
    }
    case CombineOp::Extend: {
      if (args.size() != 1) fail(Errc::DomainMismatch, "extend takes one chart set");
      out = args[0];
      int extra = extend_to - (args[0].D - args[0].c);
      if (extra < 0) fail(Errc::DomainMismatch, "extend cannot shrink the parameter cube");
      out.c -= extra;
      for (auto& c : out.charts) c = chart_extend(c, extend_to);
      out.label = "extend";
      break;
    }
    case CombineOp::ScaleMultiply: {
      if (args.size() != 2) fail(Errc::DomainMismatch, "scale_multiply takes two chart sets");
      out.D = args[1].D;
      out.c = args[1].c;
      for (const auto& f : args[0].charts)
        for (const auto& g : args[1].charts) out.charts.push_back(chart_scale_multiply(f, g));
      out.label = "scale_multiply";
      break;
    }
  }
  out.L = 0;
  for (const auto& c : out.charts) out.L = std::max(out.L, c.L);
  return out;
}

LipschitzReport verify_chart(const Chart& c, long samples, std::uint64_t seed) {
  LipschitzReport rep;
  rep.declared = c.L;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> G(0.0, 1.0);
  int k = c.in_dim;
  if (k == 0) {
    rep.pass = true;
    return rep;
  }
  Vec x(k), y(k);
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < k; ++i) x[i] = U(rng);
    if (s % 2 == 0) {
      for (int i = 0; i < k; ++i) y[i] = U(rng);
    } else {
      // nearby pair: random direction, step length log-uniform in [1e-6, 1e-1]
      double step = std::pow(10.0, -1.0 - 5.0 * U(rng));
      Vec dir(k);
      double dn = 0;
      for (int i = 0; i < k; ++i) {
        dir[i] = G(rng);
        dn += dir[i] * dir[i];
      }
      dn = std::sqrt(dn);
      for (int i = 0; i < k; ++i) y[i] = std::clamp(x[i] + step * dir[i] / dn, 0.0, 1.0);
    }
    double dxy = 0;
    for (int i = 0; i < k; ++i) dxy += (x[i] - y[i]) * (x[i] - y[i]);
    dxy = std::sqrt(dxy);
    if (dxy < 1e-12) continue;
    Vec fx = c.f(x), fy = c.f(y);
    double df = 0;
    for (std::size_t i = 0; i < fx.size(); ++i) df += (fx[i] - fy[i]) * (fx[i] - fy[i]);
    rep.max_ratio = std::max(rep.max_ratio, std::sqrt(df) / dxy);
    ++rep.pairs;
  }
  rep.pass = rep.max_ratio <= c.L + 1e-9;
  return rep;
}

LipschitzReport verify_lipschitz(const LipChartSet& set, long samples_per_chart, std::uint64_t seed) {
  LipschitzReport rep;
  rep.declared = set.L;
  rep.pass = true;
  for (std::size_t i = 0; i < set.charts.size(); ++i) {
    LipschitzReport r = verify_chart(set.charts[i], samples_per_chart, seed * 1000003ULL + i);
    rep.max_ratio = std::max(rep.max_ratio, r.max_ratio);
    rep.pairs += r.pairs;
  }
  rep.pass = rep.max_ratio <= set.L + 1e-9;
  return rep;
}

}  // namespace primpts
