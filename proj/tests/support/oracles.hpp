#pragma once

// Reference computations that share no code with the library. They are slow
// or limited to small inputs, which is fine for tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

using Vec = std::vector<double>;

inline long double log_factorial(std::size_t n) { return std::lgamma(static_cast<long double>(n) + 1); }

// log |det M| and sign by Gaussian elimination with partial pivoting.
inline std::pair<int, long double> log_det(std::vector<std::vector<long double>> m) {
  const std::size_t n = m.size();
  int sign = 1;
  long double acc = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(m[i][k]) > std::fabs(m[p][k])) p = i;
    if (m[p][k] == 0) return {0, -std::numeric_limits<long double>::infinity()};
    if (p != k) {
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    if (m[k][k] < 0) sign = -sign;
    acc += std::log(std::fabs(m[k][k]));
    for (std::size_t i = k + 1; i < n; ++i) {
      const long double f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return {sign, acc};
}

// Textbook Harish-Chandra formula in long double. Eigenvalues must be distinct
// and N * max|a| * max|b| modest.
inline double log_hc(const Vec& a, const Vec& b) {
  const std::size_t n = a.size();
  std::vector<std::vector<long double>> m(n, std::vector<long double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m[i][j] = std::exp(static_cast<long double>(n) * a[i] * b[j]);
  auto [sign, ld] = log_det(m);
  long double lv = 0;
  int vs = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const long double da = static_cast<long double>(a[i]) - a[j];
      const long double db = static_cast<long double>(b[i]) - b[j];
      lv += std::log(std::fabs(da)) + std::log(std::fabs(db));
      if (da < 0) vs = -vs;
      if (db < 0) vs = -vs;
    }
  long double lc = 0;
  for (std::size_t p = 1; p < n; ++p) lc += log_factorial(p);
  lc -= 0.5L * n * (n - 1) * std::log(static_cast<long double>(n));
  if (sign * vs <= 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(lc + ld - lv);
}

// E exp(<w, x>) for w uniform on the simplex, by the divided-difference formula
// (N-1)! sum_i e^{x_i} / prod_{j != i} (x_i - x_j). Needs distinct x.
inline double log_dirichlet_mgf(const Vec& x) {
  const std::size_t n = x.size();
  if (n == 1) return x[0];
  long double s = 0;
  const long double shift = *std::max_element(x.begin(), x.end());
  for (std::size_t i = 0; i < n; ++i) {
    long double d = 1;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) d *= static_cast<long double>(x[i]) - x[j];
    s += std::exp(static_cast<long double>(x[i]) - shift) / d;
  }
  return static_cast<double>(std::log(s) + log_factorial(n - 1) + shift);
}

// Rank-one unitary integral I_N(diag(t, 0, ...), B): the first column of a Haar
// unitary has |U_i1|^2 uniform on the simplex.
inline double log_rank_one(double t, const Vec& b) {
  Vec x(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) x[i] = static_cast<double>(b.size()) * t * b[i];
  return log_dirichlet_mgf(x);
}

// N = 2 unitary integral: |U_11|^2 is uniform on [0, 1].
inline double log_u2_quadrature(const Vec& a, const Vec& b) {
  auto g = [&](double u) {
    return std::exp(2.0 * ((a[0] * b[0] + a[1] * b[1]) * u + (a[1] * b[0] + a[0] * b[1]) * (1 - u)));
  };
  return std::log(boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, 15, 1e-14));
}

// N = 3, a = (s, s, 0): Tr U A U* B = s (Tr B - <w, b>) with w = |third column|^2
// uniform on the 2-simplex. Returns log of the 2-d quadrature.
inline double log_u3_double_quadrature(double s, const Vec& b) {
  using boost::math::quadrature::gauss_kronrod;
  const double tr = b[0] + b[1] + b[2];
  auto inner = [&](double w1) {
    auto g = [&](double w2) {
      const double w3 = 1.0 - w1 - w2;
      return std::exp(3.0 * s * (tr - (w1 * b[0] + w2 * b[1] + w3 * b[2])));
    };
    return gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0 - w1, 15, 1e-13);
  };
  // Density of the uniform law on the simplex is 2.
  return std::log(2.0 * gauss_kronrod<double, 61>::integrate(inner, 0.0, 1.0, 15, 1e-13));
}

// Hilbert transform of a density on [lo, hi] at z outside the interval.
inline double hilbert_density(const std::function<double(double)>& rho, double lo, double hi, double z) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double x) { return rho(x) / (z - x); }, lo, hi);
}

inline double semicircle_density(double c, double r, double x) {
  const double u = x - c;
  const double s = r * r - u * u;
  return s > 0 ? 2.0 / (M_PI * r * r) * std::sqrt(s) : 0.0;
}

// sup { sum_k w_k f(x_k) : |f| <= 1, Lip(f) <= 1 } for points sorted ascending,
// by dynamic programming over a lattice of f values with spacing h. Lower bound
// on the true value, within h * sum |w_k| of it.
inline double bl_sup_lattice(const Vec& x, const Vec& w, double h = 1e-4) {
  const auto levels = static_cast<long>(std::lround(1.0 / h));
  const std::size_t size = static_cast<std::size_t>(2 * levels + 1);
  std::vector<double> value(size), next(size);
  for (std::size_t v = 0; v < size; ++v) value[v] = w.back() * (static_cast<double>(v) - levels) * h;
  for (std::size_t k = x.size() - 1; k-- > 0;) {
    const auto reach = static_cast<long>(std::floor((x[k + 1] - x[k]) / h + 1e-9));
    // sliding-window max of value over [v - reach, v + reach]
    std::deque<long> window;
    long pushed = 0;
    for (long v = 0; v < static_cast<long>(size); ++v) {
      for (; pushed <= std::min<long>(static_cast<long>(size) - 1, v + reach); ++pushed) {
        while (!window.empty() && value[window.back()] <= value[pushed]) window.pop_back();
        window.push_back(pushed);
      }
      while (window.front() < v - reach) window.pop_front();
      next[v] = value[window.front()] + w[k] * (static_cast<double>(v) - levels) * h;
    }
    std::swap(value, next);
  }
  return *std::max_element(value.begin(), value.end());
}

// Merged signed weights of mu - nu for two atomic measures.
inline std::pair<Vec, Vec> signed_atoms(const Vec& p1, const Vec& w1, const Vec& p2, const Vec& w2) {
  std::vector<std::pair<double, double>> all;
  for (std::size_t i = 0; i < p1.size(); ++i) all.emplace_back(p1[i], w1[i]);
  for (std::size_t i = 0; i < p2.size(); ++i) all.emplace_back(p2[i], -w2[i]);
  std::sort(all.begin(), all.end());
  Vec x, w;
  for (auto [p, q] : all) {
    if (!x.empty() && x.back() == p) {
      w.back() += q;
    } else {
      x.push_back(p);
      w.push_back(q);
    }
  }
  return {x, w};
}

// Composite Simpson rule.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace oracle
