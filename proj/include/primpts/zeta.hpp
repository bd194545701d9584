#pragma once

#include "primpts/numfield.hpp"

namespace primpts {

struct ZetaValue {
  double value = 0;
  double error = 0;  // absolute
};

// Kronecker symbol (D/m) for m >= 1
int kronecker(long D, long m);

// zeta(s, a) for integer s >= 2, 0 < a <= 1
double hurwitz_zeta(int s, double a);

// L(s, chi_D) for the Kronecker character of a fundamental discriminant D
ZetaValue dirichlet_L(long D, int s);

// zeta_K(s), s >= 2: series for Q, zeta * L(chi_D) for quadratic fields, the
// configured value otherwise (ZetaUnavailable if none)
ZetaValue dedekind_zeta(const NumberField& K, int s);

}  // namespace primpts
