#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace primpts {

using Vec = std::vector<double>;

// A parameterizing map [0,1]^in_dim -> R^out_dim with a declared Lipschitz
// constant and a bound on its sup-norm over the unit cube. The sup bound is
// part of the descriptor (derived from the construction, never sampled).
struct Chart {
  int in_dim = 0;
  int out_dim = 0;
  std::function<Vec(const Vec&)> f;
  double L = 0;
  double sup = std::numeric_limits<double>::infinity();
};

// Lip(D, c, M, L): M = charts.size(), each chart maps [0,1]^{D-c} -> R^D.
struct LipChartSet {
  int D = 0;
  int c = 1;
  std::vector<Chart> charts;
  double L = 0;
  std::string label;
  int M() const { return int(charts.size()); }
};

enum class ChartKind { CubeBoundary, Sphere, ComplexMaxBallBoundary, BallHyperplaneSection, ParallelepipedBoundary };

struct ChartParams {
  int D = 0;      // ambient dimension (cube, sphere, hyperplane section)
  int n = 0;      // complex max ball: n+1 complex coordinates
  double r = 1;   // radius / half side
  double declared_L = 0;  // sphere only: override the declared constant (0 = default 2r)
  Vec center;             // optional translation
  Vec normal;             // hyperplane section normal
  std::vector<Vec> vectors;  // parallelepiped edges
};

LipChartSet make_chart(ChartKind kind, const ChartParams& p);

enum class CombineOp { Product, Extend, ScaleMultiply };

// product: (x, y) -> (a(x), b(y)), L = sqrt(La^2 + Lb^2)
Chart chart_product(const Chart& a, const Chart& b);
// extend: same map on a larger cube, ignoring the trailing coordinates
Chart chart_extend(const Chart& a, int new_in_dim);
// scale_multiply: x -> f(x) * g(x) with f scalar; L = sqrt2 max(|g| Lf, |f| Lg)
Chart chart_scale_multiply(const Chart& f, const Chart& g);
Chart chart_compose_affine(const Chart& a, const std::vector<Vec>& A, const Vec& b, double opnorm);

LipChartSet combine_charts(CombineOp op, const std::vector<LipChartSet>& args, int extend_to = 0);

struct LipschitzReport {
  double max_ratio = 0;
  double declared = 0;
  long pairs = 0;
  bool pass = false;
};

LipschitzReport verify_lipschitz(const LipChartSet& set, long samples_per_chart, std::uint64_t seed);
LipschitzReport verify_chart(const Chart& c, long samples, std::uint64_t seed);

}  // namespace primpts
