#pragma once

#include <cstddef>

#include "hciz/log_scalar.hpp"
#include "hciz/measures.hpp"

namespace hciz {

/// Relative eigenvalue gap below which hciz_det refuses to run.
inline constexpr double kDegeneracyGap = 1e-6;
inline constexpr unsigned kDefaultPrecisionBits = 256;
/// hciz_det gives up when n * eps * cond exceeds this.
inline constexpr double kDetLossLimit = 1e-3;

/// Product over i < j of (s_i - s_j) on the descending spectrum.
LogScalar vandermonde_log(const Spectrum& s);

/// log c_N with c_N = (prod_{p<N} p!) / N^{N(N-1)/2}, the constant making I_N(0, B) = 1.
double log_hciz_normalization(std::size_t n);

/// Unitary spherical integral I_N^{(2)}(A, B) = int exp(N Tr U A U* B) dU by
/// the Harish-Chandra determinant, in double precision with full-pivot LU.
/// Throws DegeneracyError when two eigenvalues of a or of b are closer than
/// kDegeneracyGap * max(1, |largest entry|), and PrecisionError when the scaled
/// kernel is too ill-conditioned for double precision (large N times spread).
LogScalar hciz_det(const Spectrum& a, const Spectrum& b);

/// I_N^{(2)}(diag(t, 0, ..., 0), B) with N = b.size().
///
/// Evaluated as exp(N t b_min) times a Poisson-weighted series of normalized
/// complete homogeneous polynomials in (b - b_min)/spread; every term is
/// nonnegative, so nothing cancels and repeated eigenvalues are allowed.
LogScalar hciz_rank_one(double t, const Spectrum& b);

/// I_N^{(2)}(A, B) for arbitrary (possibly repeated) eigenvalues.
///
/// Rows and columns of the Harish-Chandra kernel exp(N x y) are replaced by
/// bivariate Hermite divided differences over the sorted eigenvalues; the
/// resulting matrix is factorized in MPFR at `precision_bits`. The result is
/// recomputed at twice the precision and a PrecisionError is thrown if the
/// two logs differ by more than 1e-9.
LogScalar hciz_confluent(const Spectrum& a, const Spectrum& b,
                         unsigned precision_bits = kDefaultPrecisionBits);

/// Single evaluation of the confluent formula without the verification pass.
LogScalar hciz_confluent_unchecked(const Spectrum& a, const Spectrum& b, unsigned precision_bits);

}  // namespace hciz
