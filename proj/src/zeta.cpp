#include "primpts/zeta.hpp"

#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <cstdlib>

#include "primpts/error.hpp"

namespace primpts {

namespace {
constexpr double kRelErr = 1e-14;

int jacobi(long a, long m) {
  // m odd positive
  a %= m;
  if (a < 0) a += m;
  int t = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      long r = m % 8;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(a, m);
    if (a % 4 == 3 && m % 4 == 3) t = -t;
    a %= m;
  }
  return m == 1 ? t : 0;
}
}  // namespace

int kronecker(long D, long m) {
  if (m < 1) fail(Errc::BadParams, "kronecker symbol needs m >= 1");
  int t = 1;
  while (m % 2 == 0) {
    m /= 2;
    if (D % 2 == 0) return 0;
    long r = ((D % 8) + 8) % 8;
    if (r == 3 || r == 5) t = -t;
  }
  if (m == 1) return t;
  return t * jacobi(D, m);
}

double hurwitz_zeta(int s, double a) {
  if (s < 2) fail(Errc::BadParams, "hurwitz_zeta needs s >= 2");
  if (!(a > 0 && a <= 1)) fail(Errc::BadParams, "hurwitz_zeta needs 0 < a <= 1");
  // psi^{(m)}(a) = (-1)^{m+1} m! zeta(m+1, a)
  int m = s - 1;
  double p = boost::math::polygamma(m, a);
  double sign = (m % 2 == 0) ? -1.0 : 1.0;
  return sign * p / boost::math::factorial<double>(unsigned(m));
}

ZetaValue dirichlet_L(long D, int s) {
  long q = std::labs(D);
  if (q < 3) fail(Errc::BadParams, "discriminant must satisfy |D| >= 3");
  // L(s, chi) = q^{-s} sum_{a=1}^{q} chi(a) zeta(s, a/q)
  double sum = 0, mag = 0;
  for (long a = 1; a <= q; ++a) {
    int c = kronecker(D, a);
    if (!c) continue;
    double h = hurwitz_zeta(s, double(a) / double(q));
    sum += c * h;
    mag += h;
  }
  double f = std::pow(double(q), -s);
  return {sum * f, mag * f * kRelErr};
}

ZetaValue dedekind_zeta(const NumberField& K, int s) {
  if (s < 2) fail(Errc::ZetaUnavailable, "zeta_K(s) is only provided for integers s >= 2");
  double z = boost::math::zeta(double(s));
  if (K.degree() == 1) return {z, z * kRelErr};
  if (K.degree() == 2) {
    long D = K.invariants().disc.get_si();
    auto L = dirichlet_L(D, s);
    return {z * L.value, z * L.error + L.value * z * kRelErr};
  }
  auto c = K.configured_zeta(s);
  if (!c) fail(Errc::ZetaUnavailable, "no configured zeta_K(" + std::to_string(s) + ") for " + K.name());
  return {c->first, c->second};
}

}  // namespace primpts
