#include "primpts/linalg.hpp"

#include <stdexcept>
#include <utility>

namespace primpts {

namespace {

template <class T>
struct Ops;

template <>
struct Ops<mpz_class> {
  static bool mul_sub(mpz_class& a, const mpz_class& q, const mpz_class& b) {
    a -= q * b;
    return true;
  }
  static mpz_class abs(const mpz_class& a) { return ::abs(a); }
  static mpz_class fdiv(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }
  static mpz_class tdiv(const mpz_class& a, const mpz_class& b) { return a / b; }
  static bool neg(mpz_class& a) {
    a = -a;
    return true;
  }
};

template <>
struct Ops<std::int64_t> {
  static bool mul_sub(std::int64_t& a, std::int64_t q, std::int64_t b) {
    std::int64_t p;
    if (__builtin_mul_overflow(q, b, &p)) return false;
    return !__builtin_sub_overflow(a, p, &a);
  }
  static std::int64_t abs(std::int64_t a) { return a < 0 ? -a : a; }
  static std::int64_t fdiv(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }
  static std::int64_t tdiv(std::int64_t a, std::int64_t b) { return a / b; }
  static bool neg(std::int64_t& a) {
    if (a == INT64_MIN) return false;
    a = -a;
    return true;
  }
};

// returns false on overflow or rank deficiency
template <class T>
bool hnf_impl(std::vector<std::vector<T>>& rows, std::size_t d) {
  using O = Ops<T>;
  std::size_t m = rows.size();
  if (m < d) return false;
  for (std::size_t c = 0; c < d; ++c) {
    for (;;) {
      std::size_t piv = m;
      for (std::size_t i = c; i < m; ++i) {
        if (rows[i][c] != 0 && (piv == m || O::abs(rows[i][c]) < O::abs(rows[piv][c]))) piv = i;
      }
      if (piv == m) return false;
      std::swap(rows[c], rows[piv]);
      bool done = true;
      for (std::size_t i = c + 1; i < m; ++i) {
        if (rows[i][c] == 0) continue;
        T q = O::tdiv(rows[i][c], rows[c][c]);
        for (std::size_t j = c; j < d; ++j)
          if (!O::mul_sub(rows[i][j], q, rows[c][j])) return false;
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[c][c] < 0)
      for (std::size_t j = c; j < d; ++j)
        if (!O::neg(rows[c][j])) return false;
    for (std::size_t i = 0; i < c; ++i) {
      T q = O::fdiv(rows[i][c], rows[c][c]);
      if (q == 0) continue;
      for (std::size_t j = c; j < d; ++j)
        if (!O::mul_sub(rows[i][j], q, rows[c][j])) return false;
    }
  }
  rows.resize(d);
  return true;
}

}  // namespace

IntMat hnf_rows(IntMat rows, std::size_t d) {
  for (auto& r : rows)
    if (r.size() != d) throw std::invalid_argument("hnf_rows: ragged input");
  if (!hnf_impl(rows, d)) throw std::domain_error("hnf_rows: rank deficient");
  return rows;
}

std::optional<std::vector<std::vector<std::int64_t>>> hnf_rows_i64(
    std::vector<std::vector<std::int64_t>> rows, std::size_t d) {
  if (!hnf_impl(rows, d)) return std::nullopt;
  return rows;
}

mpz_class hnf_det(const IntMat& h) {
  mpz_class p = 1;
  for (std::size_t i = 0; i < h.size(); ++i) p *= h[i][i];
  return p;
}

bool hnf_contains(const IntMat& h, const IntVec& v) {
  IntVec w = v;
  std::size_t d = h.size();
  for (std::size_t c = 0; c < d; ++c) {
    if (w[c] == 0) continue;
    if (w[c] % h[c][c] != 0) return false;
    mpz_class q = w[c] / h[c][c];
    for (std::size_t j = c; j < d; ++j) w[j] -= q * h[c][j];
  }
  return true;
}

RatMat rat_identity(std::size_t n) {
  RatMat m(n, RatVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

RatMat rat_mul(const RatMat& a, const RatMat& b) {
  std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  RatMat c(n, RatVec(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

RatVec rat_vec_mat(const RatVec& v, const RatMat& m) {
  std::size_t cols = m.empty() ? 0 : m[0].size();
  RatVec out(cols, 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < cols; ++j) out[j] += v[i] * m[i][j];
  }
  return out;
}

RatMat rat_transpose(const RatMat& a) {
  if (a.empty()) return {};
  RatMat t(a[0].size(), RatVec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

mpq_class rat_det(RatMat a) {
  std::size_t n = a.size();
  mpq_class det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      mpq_class f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

RatMat rat_row_echelon(RatMat a) {
  if (a.empty()) return a;
  std::size_t rows = a.size(), cols = a[0].size(), r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    mpq_class inv = 1 / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      mpq_class f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  a.resize(r);
  return a;
}

std::size_t rat_rank(RatMat a) { return rat_row_echelon(std::move(a)).size(); }

RatMat rat_inverse(const RatMat& a) {
  std::size_t n = a.size();
  RatMat aug(n, RatVec(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && aug[p][c] == 0) ++p;
    if (p == n) throw std::domain_error("rat_inverse: singular matrix");
    std::swap(aug[p], aug[c]);
    mpq_class inv = 1 / aug[c][c];
    for (std::size_t j = 0; j < 2 * n; ++j) aug[c][j] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || aug[i][c] == 0) continue;
      mpq_class f = aug[i][c];
      for (std::size_t j = 0; j < 2 * n; ++j) aug[i][j] -= f * aug[c][j];
    }
  }
  RatMat inv(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

std::optional<RatVec> rat_solve_left(const RatMat& a, const RatVec& b) {
  try {
    return rat_vec_mat(b, rat_inverse(a));
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

mpz_class lcm_denominators(const RatMat& a) {
  mpz_class l = 1;
  for (const auto& r : a)
    for (const auto& x : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

}  // namespace primpts
