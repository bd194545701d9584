#include "primpts/basicset.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "primpts/gon.hpp"

namespace primpts {

namespace {

constexpr double kSeamTol = 1e-9;

double vnorm(const Vec& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

FieldElement unit_power(const NumberField& K, const FieldElement& e, long k) {
  FieldElement b = k < 0 ? e.inverse() : e, r = K.one();
  for (long i = 0; i < std::labs(k); ++i) r = r * b;
  return r;
}

std::vector<Vec> sigma_basis(int q) {
  // orthonormal basis of {x_1 + ... + x_{q+1} = 0}
  std::vector<Vec> out;
  for (int k = 0; k < q; ++k) {
    Vec e(q + 1, 0.0);
    // Helmert vectors
    for (int i = 0; i <= k; ++i) e[i] = 1.0;
    e[k + 1] = -double(k + 1);
    double n = vnorm(e);
    for (auto& x : e) x /= n;
    out.push_back(e);
  }
  return out;
}

}  // namespace

long BasicSetGeometry::index_of(const std::vector<long>& i) const {
  if (q == 0) return 0;
  long idx = 0;
  for (int j = 0; j < q; ++j) idx = idx * nj[j] + i[j];
  return idx;
}

BasicSetGeometry build_geometry(const NumberField& K) {
  BasicSetGeometry g;
  g.K = K;
  g.q = K.unit_rank();
  for (int p = 0; p < K.places(); ++p) g.delta.push_back(K.local_degree(p));
  const auto& units = K.invariants().fundamental_units;
  if (int(units.size()) != g.q) fail(Errc::UnitRankMismatch, "fundamental unit count differs from r+s-1");
  const int q = g.q;
  g.sigma_frame = sigma_basis(q);
  if (q == 0) {
    g.t = 1;
    g.indices = {{0}};
    g.gamma = {std::vector<double>(1, 1.0)};
    g.t_over_R = 1.0 / K.invariants().R;
    return g;
  }
  // reduce the unit lattice inside Sigma
  std::vector<Vec> raw;
  for (const auto& e : units) raw.push_back(K.log_embedding(e));
  std::vector<Vec> cols;
  for (const auto& u : raw) {
    Vec c(q);
    for (int k = 0; k < q; ++k)
      for (int i = 0; i <= q; ++i) c[k] += g.sigma_frame[k][i] * u[i];
    cols.push_back(c);
  }
  LatticeBasis B = make_lattice(cols);
  auto cert = successive_minima(B);
  auto mw = mahler_weyl_basis(cert, B);
  for (int j = 0; j < q; ++j) {
    FieldElement e = K.one();
    for (int k = 0; k < q; ++k)
      if (mw.coeffs[j][k]) e = e * unit_power(K, units[k], mw.coeffs[j][k]);
    g.units.push_back(e);
    g.u.push_back(K.log_embedding(e));
  }
  g.t = 1;
  for (const auto& u : g.u) {
    g.nj.push_back(long(std::floor(vnorm(u))) + 1);
    g.t *= g.nj.back();
  }
  g.t_over_R = double(g.t) / K.invariants().R;
  // partition indices, i_1 most significant
  std::vector<long> i(q, 0);
  for (;;) {
    g.indices.push_back(i);
    int k = q - 1;
    while (k >= 0 && ++i[k] == g.nj[k]) i[k--] = 0;
    if (k < 0) break;
  }
  for (const auto& idx : g.indices) {
    Vec w(q + 1, 0.0);
    for (int j = 0; j < q; ++j)
      for (int c = 0; c <= q; ++c) w[c] += double(idx[j]) * g.u[j][c] / double(g.nj[j]);
    std::vector<double> gm(q + 1);
    for (int c = 0; c <= q; ++c) gm[c] = std::exp(-w[c] / g.delta[c]);
    g.gamma.push_back(gm);
  }
  Eigen::MatrixXd A(q + 1, q);
  for (int j = 0; j < q; ++j)
    for (int c = 0; c <= q; ++c) A(c, j) = g.u[j][c];
  Eigen::MatrixXd Li = (A.transpose() * A).inverse() * A.transpose();
  g.coord_map.assign(q, Vec(q + 1));
  for (int j = 0; j < q; ++j)
    for (int c = 0; c <= q; ++c) g.coord_map[j][c] = Li(j, c);
  return g;
}

SfDecomposition sf_decompose(const BasicSetGeometry& g, const AdelicLipschitzSystem& als, const Vec& z) {
  SfDecomposition out;
  const int n = als.n;
  const int d = g.K.degree();
  std::size_t off = 0;
  out.nonzero = true;
  out.prod = 1;
  double ysum = 0;
  std::vector<double> y;
  for (int p = 0; p <= g.q; ++p) {
    int len = g.delta[p] * (n + 1);
    Vec blk(z.begin() + off, z.begin() + off + len);
    off += len;
    double Np = als.inf[p].eval(blk);
    out.N.push_back(Np);
    if (!(Np > 0)) out.nonzero = false;
    out.prod *= g.delta[p] == 2 ? Np * Np : Np;
    y.push_back(g.delta[p] * std::log(Np));
    ysum += y.back();
  }
  if (!out.nonzero) return out;
  out.t_height = ysum / d;
  out.x.resize(g.q + 1);
  for (int p = 0; p <= g.q; ++p) out.x[p] = y[p] - out.t_height * g.delta[p];
  out.coords.assign(g.q, 0.0);
  for (int j = 0; j < g.q; ++j)
    for (int c = 0; c <= g.q; ++c) out.coords[j] += g.coord_map[j][c] * out.x[c];
  return out;
}

SfMembershipDecision sf_membership(const BasicSetGeometry& g, const AdelicLipschitzSystem& als, const mpq_class& T,
                                   const Vec& z, const std::function<std::optional<hp>()>& precise, SfStats* stats) {
  const int d = g.K.degree();
  mpz_class tn = T.get_num(), td = T.get_den(), pn, pd;
  mpz_pow_ui(pn.get_mpz_t(), tn.get_mpz_t(), d);
  mpz_pow_ui(pd.get_mpz_t(), td.get_mpz_t(), d);
  mpq_class Td(pn, pd);
  Td.canonicalize();
  return sf_membership_td(g, als, Td, z, precise, stats);
}

SfMembershipDecision sf_membership_td(const BasicSetGeometry& g, const AdelicLipschitzSystem& als, const mpq_class& Td,
                                      const Vec& z, const std::function<std::optional<hp>()>& precise,
                                      SfStats* stats) {
  SfMembershipDecision dec;
  auto dc = sf_decompose(g, als, z);
  if (!dc.nonzero) return dec;
  dec.t_height = dc.t_height;
  dec.prod = dc.prod;
  dec.x = dc.x;
  // cell of x in F, lower-closed at seams
  std::vector<long> idx(std::max(g.q, 1), 0);
  bool inF = true;
  for (int j = 0; j < g.q; ++j) {
    double s = dc.coords[j] * double(g.nj[j]);
    double r = std::round(s);
    if (std::abs(s - r) <= kSeamTol * (1 + std::abs(s))) {
      if (s != r) {
        dec.seam_snapped = true;
        if (stats) stats->seam_snaps++;
      }
      s = r;
    }
    long k = long(std::floor(s));
    if (k < 0 || k >= g.nj[j]) inF = false;
    idx[j] = k;
  }
  if (inF) dec.cell_full = g.index_of(idx);
  long before = stats ? stats->height.escalations.load() : 0;
  bool ok = decide_le(dc.prod, precise, Td, stats ? &stats->height : nullptr);
  if (stats) dec.escalated = stats->height.escalations.load() != before;
  dec.accepted = ok && inF;
  if (dec.accepted) dec.cell = dec.cell_full;
  return dec;
}

bool sf_cell_membership(const BasicSetGeometry& g, const AdelicLipschitzSystem& als, long cell, const mpq_class& T,
                        const Vec& z) {
  auto d = sf_membership(g, als, T, z);
  return d.accepted && d.cell && *d.cell == cell;
}

Vec tau_apply(const BasicSetGeometry& g, long cell, const Vec& z, int n) {
  if (cell < 0 || cell >= long(g.indices.size())) fail(Errc::BadIndex, "partition index out of range");
  Vec out = z;
  std::size_t off = 0;
  for (int p = 0; p <= g.q; ++p) {
    int len = g.delta[p] * (n + 1);
    for (int k = 0; k < len; ++k) out[off + k] *= g.gamma[cell][p];
    off += len;
  }
  return out;
}

double sf0_radius(const BasicSetGeometry& g, const AdelicLipschitzSystem& als) {
  return std::sqrt(double(g.K.degree() * (als.n + 1))) * als.C_inf * std::exp(double(g.q));
}

std::optional<double> v_inf_exact(const AdelicLipschitzSystem& als) {
  if (!als.max_norm_inf) return std::nullopt;
  double v = 1;
  for (const auto& f : als.inf) v *= f.dv == 1 ? std::pow(2.0, als.n + 1) : std::pow(M_PI, als.n + 1);
  return v;
}

SfChartSet sf_charts(const BasicSetGeometry& g, const AdelicLipschitzSystem& als) {
  for (const auto& f : als.inf)
    if (!f.charts) fail(Errc::ChartsUnavailable, "distance functions carry no boundary charts");
  SfChartSet out;
  const int q = g.q, n = als.n;
  const int D = g.K.degree() * (n + 1);
  if (q == 0) {
    out.charts = *als.inf[0].charts;
    out.M_declared = out.charts.M();
    out.L_declared = out.charts.L;
    return out;
  }
  out.rF = q;
  out.Mprime = 2 * q;
  out.Lprime = q - 1;
  const double L = als.L_N, Cinf = als.C_inf, rF = out.rF, Lp = out.Lprime;
  out.M_declared = (out.Mprime + 1) * std::pow(als.M_N, q + 1);
  out.L_declared = 3 * std::sqrt(double(D)) * (Lp + rF + 1) * std::exp(std::sqrt(double(q)) * (Lp + rF)) * (L + Cinf);

  ChartParams pp;
  for (int j = 0; j < q; ++j) {
    Vec v = g.u[j];
    for (auto& x : v) x /= double(g.nj[j]);
    pp.vectors.push_back(v);
  }
  LipChartSet psi = make_chart(ChartKind::ParallelepipedBoundary, pp);
  // Phi^{1/d_i} as maps [0,1]^q -> R^{q+1}
  std::vector<std::function<Vec(const Vec&)>> phis;
  auto delta = g.delta;
  for (const auto& ch : psi.charts) {
    auto f = ch.f;
    phis.push_back([f, q, delta](const Vec& t) {
      Vec a(t.begin(), t.begin() + (q - 1));
      Vec ps = f(a);
      double u = t[q - 1];
      Vec out(q + 1);
      for (int i = 0; i <= q; ++i) out[i] = std::exp(ps[i] / delta[i]) * u;
      return out;
    });
  }
  auto frame = g.sigma_frame;
  phis.push_back([frame, q, rF, delta](const Vec& t) {
    Vec nu(q + 1, 0.0);
    for (int k = 0; k < q; ++k)
      for (int i = 0; i <= q; ++i) nu[i] += (1 - 2 * t[k]) * rF * frame[k][i];
    Vec out(q + 1);
    for (int i = 0; i <= q; ++i) out[i] = std::exp(nu[i] / delta[i]);
    return out;
  });

  double sup2 = 0;
  for (int i = 0; i <= q; ++i) {
    double E = std::exp(std::sqrt(double(q)) * (Lp + rF) / delta[i]);
    double eta = std::sqrt(double(delta[i] * (n + 1))) * (L + Cinf);
    sup2 += E * E * eta * eta;
  }
  // every combination of one chart per place
  std::vector<int> pick(q + 1, 0);
  std::vector<int> blk_in, blk_out;
  for (int i = 0; i <= q; ++i) {
    blk_out.push_back(delta[i] * (n + 1));
    blk_in.push_back(delta[i] * (n + 1) - 1);
  }
  for (const auto& phi : phis) {
    std::fill(pick.begin(), pick.end(), 0);
    for (;;) {
      std::vector<std::function<Vec(const Vec&)>> etas;
      for (int i = 0; i <= q; ++i) etas.push_back(als.inf[i].charts->charts[pick[i]].f);
      Chart c;
      c.in_dim = D - 1;
      c.out_dim = D;
      c.L = out.L_declared;
      c.sup = std::sqrt(sup2);
      c.f = [phi, etas, q, blk_in, blk_out, D](const Vec& prm) {
        Vec t(prm.begin(), prm.begin() + q);
        Vec s = phi(t);
        Vec z;
        z.reserve(D);
        std::size_t off = q;
        for (int i = 0; i <= q; ++i) {
          Vec a(prm.begin() + off, prm.begin() + off + blk_in[i]);
          off += blk_in[i];
          Vec e = etas[i](a);
          for (double x : e) z.push_back(s[i] * x);
        }
        return z;
      };
      out.charts.charts.push_back(std::move(c));
      int k = q;
      while (k >= 0 && ++pick[k] == als.inf[k].charts->M()) pick[k--] = 0;
      if (k < 0) break;
    }
  }
  out.charts.D = D;
  out.charts.c = 1;
  out.charts.L = out.L_declared;
  out.charts.label = "sf0_boundary";
  return out;
}

}  // namespace primpts
