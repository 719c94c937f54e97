#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

#include <Eigen/Dense>

#include "hciz/measures.hpp"
#include "hciz/transforms.hpp"

namespace hciz {

using ComplexMatrix = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

/// Independent generator for substream `stream` of `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Haar-distributed element of O(n), U(n) or Sp(n/2), as an n x n complex matrix.
///
/// beta = 1, 2: Householder QR of a Gaussian matrix with column j multiplied by
/// r_jj/|r_jj|. beta = 4: Gram-Schmidt of quaternionic Gaussian columns, each
/// quaternion z + w j written as the block [[z, w], [-conj(w), conj(z)]], so the
/// result satisfies U J U^T = J with J = diag([[0, 1], [-1, 0]], ...).
ComplexMatrix haar_sample(BetaClass beta, std::size_t n, Rng& rng);

/// First `columns` columns of a Haar matrix (their joint law is exact).
/// For beta = 4, `columns` counts quaternionic columns, i.e. 2*columns complex columns.
ComplexMatrix haar_columns(BetaClass beta, std::size_t n, std::size_t columns, Rng& rng);

/// Symplectic form J of size n (n even).
ComplexMatrix symplectic_form(std::size_t n);

/// Re Tr(U A U* B) = sum_{ij} a_j b_i |U_ij|^2 for diagonal A, B.
/// Only columns with a_j != 0 are touched.
double trace_form(const ComplexMatrix& u, const Spectrum& a, const Spectrum& b);

/// Same sum with a_j supplied per column of `u` (u may have fewer columns than rows).
double trace_form(const ComplexMatrix& u, std::span<const double> column_weights, const Spectrum& b);

}  // namespace hciz
