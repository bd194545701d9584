#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include <complex>

namespace primpts {

// Working high precision for root isolation and tie-breaking. 120 decimal
// digits supports embedding radii down to about 1e-100.
using hp = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<120>,
                                         boost::multiprecision::et_off>;

inline constexpr double kMinRadius = 1e-100;

struct hcomplex {
  hp re = 0, im = 0;
  hcomplex() = default;
  hcomplex(hp r, hp i = 0) : re(std::move(r)), im(std::move(i)) {}
  friend hcomplex operator+(const hcomplex& a, const hcomplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend hcomplex operator-(const hcomplex& a, const hcomplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend hcomplex operator*(const hcomplex& a, const hcomplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend hcomplex operator/(const hcomplex& a, const hcomplex& b) {
    hp n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  hcomplex& operator+=(const hcomplex& b) { return *this = *this + b; }
  hcomplex& operator-=(const hcomplex& b) { return *this = *this - b; }
  hcomplex& operator*=(const hcomplex& b) { return *this = *this * b; }
  hp norm2() const { return re * re + im * im; }
  hp abs() const { return sqrt(norm2()); }
  hcomplex conj() const { return {re, -im}; }
  std::complex<double> to_cd() const { return {re.convert_to<double>(), im.convert_to<double>()}; }
};

inline hp to_hp(const mpq_class& q) {
  hp n(q.get_num().get_str()), m(q.get_den().get_str());
  return n / m;
}

inline hp to_hp(const mpz_class& z) { return hp(z.get_str()); }

inline hp hp_pi() { return boost::math::constants::pi<hp>(); }

}  // namespace primpts
