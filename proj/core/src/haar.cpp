#include "hciz/haar.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "hciz/errors.hpp"

namespace hciz {

namespace {

using Complex = std::complex<double>;

void require_dimension(BetaClass beta, std::size_t n) {
  if (n < 1) throw DomainError("Haar sample needs n >= 1");
  if (beta.value() == 4 && n % 2 != 0)
    throw DomainError("symplectic Haar sample needs even n, got " + std::to_string(n));
}

// Quaternion z + w j with j c = conj(c) j.
struct Quaternion {
  Complex z;
  Complex w;
};

Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return {p.z * q.z - p.w * std::conj(q.w), p.z * q.w + p.w * std::conj(q.z)};
}
Quaternion conj(const Quaternion& q) { return {std::conj(q.z), -q.w}; }

ComplexMatrix symplectic_columns(std::size_t n, std::size_t columns, Rng& rng) {
  const std::size_t m = n / 2;
  std::normal_distribution<double> normal;
  auto gaussian = [&] { return Complex(normal(rng), normal(rng)); };

  std::vector<std::vector<Quaternion>> cols(columns, std::vector<Quaternion>(m));
  for (auto& col : cols)
    for (auto& q : col) q = {gaussian(), gaussian()};

  for (std::size_t k = 0; k < columns; ++k) {
    auto& v = cols[k];
    // Two projection passes keep the result orthonormal to ~1e-15.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < k; ++p) {
        const auto& u = cols[p];
        Quaternion inner{0.0, 0.0};
        for (std::size_t r = 0; r < m; ++r) {
          const Quaternion t = conj(u[r]) * v[r];
          inner.z += t.z;
          inner.w += t.w;
        }
        for (std::size_t r = 0; r < m; ++r) {
          const Quaternion t = u[r] * inner;
          v[r].z -= t.z;
          v[r].w -= t.w;
        }
      }
    }
    double norm2 = 0.0;
    for (const auto& q : v) norm2 += std::norm(q.z) + std::norm(q.w);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& q : v) {
      q.z *= inv;
      q.w *= inv;
    }
  }

  ComplexMatrix u(n, 2 * columns);
  for (std::size_t k = 0; k < columns; ++k)
    for (std::size_t r = 0; r < m; ++r) {
      const auto& q = cols[k][r];
      u(2 * r, 2 * k) = q.z;
      u(2 * r, 2 * k + 1) = q.w;
      u(2 * r + 1, 2 * k) = -std::conj(q.w);
      u(2 * r + 1, 2 * k + 1) = std::conj(q.z);
    }
  return u;
}

ComplexMatrix qr_columns(bool real, std::size_t n, std::size_t columns, Rng& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(n, columns);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      g(i, j) = real ? Complex(normal(rng), 0.0) : Complex(normal(rng), normal(rng));

  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, columns);
  const auto& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  if (real) q = q.real().cast<Complex>();
  return q;
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x68c1u};
  return Rng(seq);
}

ComplexMatrix haar_columns(BetaClass beta, std::size_t n, std::size_t columns, Rng& rng) {
  require_dimension(beta, n);
  if (beta.value() == 4) {
    if (columns > n / 2) throw DomainError("more quaternionic columns than n/2 requested");
    return symplectic_columns(n, columns, rng);
  }
  if (columns > n) throw DomainError("more columns than n requested");
  return qr_columns(beta.value() == 1, n, columns, rng);
}

ComplexMatrix haar_sample(BetaClass beta, std::size_t n, Rng& rng) {
  return haar_columns(beta, n, beta.value() == 4 ? n / 2 : n, rng);
}

ComplexMatrix symplectic_form(std::size_t n) {
  if (n % 2 != 0) throw DomainError("symplectic form needs even n");
  ComplexMatrix j = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < n; k += 2) {
    j(k, k + 1) = 1.0;
    j(k + 1, k) = -1.0;
  }
  return j;
}

double trace_form(const ComplexMatrix& u, std::span<const double> column_weights, const Spectrum& b) {
  if (static_cast<std::size_t>(u.rows()) != b.size())
    throw DomainError("trace_form: U has " + std::to_string(u.rows()) + " rows, B has dimension " +
                      std::to_string(b.size()));
  if (column_weights.size() > static_cast<std::size_t>(u.cols()))
    throw DomainError("trace_form: more weights than columns of U");
  double total = 0.0;
  for (std::size_t j = 0; j < column_weights.size(); ++j) {
    if (column_weights[j] == 0.0) continue;
    double col = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i)
      col += b[i] * std::norm(u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    total += column_weights[j] * col;
  }
  return total;
}

double trace_form(const ComplexMatrix& u, const Spectrum& a, const Spectrum& b) {
  if (static_cast<std::size_t>(u.cols()) != a.size())
    throw DomainError("trace_form: U has " + std::to_string(u.cols()) + " columns, A has dimension " +
                      std::to_string(a.size()));
  return trace_form(u, a.values(), b);
}

}  // namespace hciz
