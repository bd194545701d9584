#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

namespace primpts {

using IntVec = std::vector<mpz_class>;
using RatVec = std::vector<mpq_class>;
using IntMat = std::vector<IntVec>;  // row-major
using RatMat = std::vector<RatVec>;

// Row-style Hermite normal form of the lattice spanned by the rows of `rows`
// (each of length d). Output is the d x d upper triangular basis with positive
// diagonal and 0 <= h[i][j] < h[j][j] for i < j. Requires full rank.
IntMat hnf_rows(IntMat rows, std::size_t d);

// Same, on 64-bit integers; returns nullopt on overflow or rank deficiency.
std::optional<std::vector<std::vector<std::int64_t>>> hnf_rows_i64(
    std::vector<std::vector<std::int64_t>> rows, std::size_t d);

mpz_class hnf_det(const IntMat& h);

// true iff v is an integer combination of the rows of the HNF basis h
bool hnf_contains(const IntMat& h, const IntVec& v);

RatMat rat_identity(std::size_t n);
RatMat rat_mul(const RatMat& a, const RatMat& b);
RatVec rat_vec_mat(const RatVec& v, const RatMat& m);  // row vector times matrix
RatMat rat_transpose(const RatMat& a);
mpq_class rat_det(RatMat a);
std::size_t rat_rank(RatMat a);
// inverse of a square matrix; throws std::domain_error if singular
RatMat rat_inverse(const RatMat& a);
// solve x * A = b for the row vector x (A square, nonsingular)
std::optional<RatVec> rat_solve_left(const RatMat& a, const RatVec& b);

mpz_class lcm_denominators(const RatMat& a);

// reduced echelon basis of the row space (for rank / span tests)
RatMat rat_row_echelon(RatMat a);

}  // namespace primpts
