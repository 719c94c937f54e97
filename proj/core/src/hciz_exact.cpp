#include "hciz/hciz_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bigfloat.hpp"
#include "hciz/errors.hpp"

namespace hciz {

using detail::BigFloat;

namespace {

void require_same_dimension(const Spectrum& a, const Spectrum& b) {
  if (a.empty() || b.empty()) throw DomainError("spherical integral of an empty spectrum");
  if (a.size() != b.size())
    throw DomainError("spectra differ in dimension: " + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()));
}

void require_distinct(const Spectrum& s, const char* which) {
  double scale = 1.0;
  for (double v : s.values()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i] - s[i + 1] <= kDegeneracyGap * scale)
      throw DegeneracyError(std::string("eigenvalues of ") + which +
                            " are (nearly) repeated; use hciz_confluent");
}

// Sorted ascending points with the position of each entry inside its run of
// equal values, plus the index where that run starts.
struct HermiteNodes {
  std::vector<double> x;
  std::vector<std::size_t> order;  // derivative order carried by the entry
  std::vector<std::size_t> start;  // first index of the run
  std::size_t max_order = 0;
};

HermiteNodes hermite_nodes(const Spectrum& s) {
  HermiteNodes h;
  h.x.assign(s.values().rbegin(), s.values().rend());
  const std::size_t n = h.x.size();
  h.order.resize(n);
  h.start.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && h.x[i] == h.x[i - 1]) {
      h.order[i] = h.order[i - 1] + 1;
      h.start[i] = h.start[i - 1];
    } else {
      h.order[i] = 0;
      h.start[i] = i;
    }
    h.max_order = std::max(h.max_order, h.order[i]);
  }
  return h;
}

// In place: values[i] <- f[x_0, ..., x_i], where raw(i) holds f^{(order_i)}(x_i)/order_i!.
template <typename Raw>
void hermite_divided_differences(const HermiteNodes& nodes, std::vector<BigFloat>& q, Raw raw) {
  const std::size_t n = nodes.x.size();
  for (std::size_t i = 0; i < n; ++i) q[i] = raw(nodes.start[i]);
  const mpfr_prec_t bits = q.front().precision();
  BigFloat gap(bits);
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      const std::size_t lo = i - level;
      if (nodes.x[i] == nodes.x[lo]) {
        q[i] = raw(nodes.start[i] + level);
      } else {
        q[i] -= q[i - 1];
        mpfr_set_d(gap.get(), nodes.x[i], MPFR_RNDN);
        mpfr_sub_d(gap.get(), gap.get(), nodes.x[lo], MPFR_RNDN);
        q[i] /= gap;
      }
      if (i == level) break;
    }
  }
}

// Signed log|det| of a square BigFloat matrix (row-major) by partial-pivot LU.
LogScalar log_determinant(std::vector<BigFloat>& m, std::size_t n) {
  int sign = 1;
  double log_abs = 0.0;
  const mpfr_prec_t bits = m.front().precision();
  BigFloat factor(bits), tmp(bits);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (m[r * n + col].compare_abs(m[pivot * n + col]) > 0) pivot = r;
    if (m[pivot * n + col].is_zero()) return LogScalar::zero();
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m[pivot * n + c], m[col * n + c]);
      sign = -sign;
    }
    const BigFloat& p = m[col * n + col];
    if (p.sign() < 0) sign = -sign;
    log_abs += p.log_abs();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r * n + col].is_zero()) continue;
      mpfr_div(factor.get(), m[r * n + col].get(), p.get(), MPFR_RNDN);
      for (std::size_t c = col + 1; c < n; ++c) {
        mpfr_mul(tmp.get(), factor.get(), m[col * n + c].get(), MPFR_RNDN);
        m[r * n + c] -= tmp;
      }
    }
  }
  return LogScalar(sign, log_abs);
}

}  // namespace

LogScalar vandermonde_log(const Spectrum& s) {
  double log_abs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double d = s[i] - s[j];
      if (d == 0.0) return LogScalar::zero();
      log_abs += std::log(d);
    }
  return LogScalar(1, log_abs);
}

double log_hciz_normalization(std::size_t n) {
  const auto nd = static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t p = 1; p < n; ++p) acc += std::lgamma(static_cast<double>(p) + 1.0);
  return acc - 0.5 * nd * (nd - 1.0) * std::log(nd);
}

LogScalar hciz_det(const Spectrum& a, const Spectrum& b) {
  require_same_dimension(a, b);
  require_distinct(a, "A");
  require_distinct(b, "B");
  const std::size_t n = a.size();
  const auto nd = static_cast<double>(n);

  Eigen::MatrixXd exponent(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) exponent(i, j) = nd * a[i] * b[j];
  // Row then column shifts bring every entry into (0, 1] with a 1 in each row and column.
  const Eigen::VectorXd row_shift = exponent.rowwise().maxCoeff();
  exponent.colwise() -= row_shift;
  const Eigen::RowVectorXd col_shift = exponent.colwise().maxCoeff();
  exponent.rowwise() -= col_shift;
  const Eigen::MatrixXd scaled = exponent.array().exp().matrix();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(scaled);
  // n eps cond(M) bounds the relative error of the LU determinant.
  const double loss = nd * std::numeric_limits<double>::epsilon() / lu.rcond();
  if (!(loss < kDetLossLimit))
    throw PrecisionError("Harish-Chandra determinant is ill-conditioned (estimated relative error " +
                         std::to_string(loss) + "); use hciz_confluent");
  const auto& packed = lu.matrixLU();
  int sign = static_cast<int>(lu.permutationP().determinant() * lu.permutationQ().determinant());
  double log_abs = row_shift.sum() + col_shift.sum();
  for (std::size_t k = 0; k < n; ++k) {
    const double u = packed(k, k);
    if (u == 0.0) throw DegeneracyError("Harish-Chandra determinant is numerically singular");
    if (u < 0.0) sign = -sign;
    log_abs += std::log(std::abs(u));
  }
  const LogScalar det(sign, log_abs);
  return det * LogScalar::from_log(log_hciz_normalization(n)) / (vandermonde_log(a) * vandermonde_log(b));
}

LogScalar hciz_rank_one(double t, const Spectrum& b) {
  if (b.empty()) throw DomainError("spherical integral of an empty spectrum");
  if (!std::isfinite(t)) throw DomainError("rank-one weight must be finite");
  const std::size_t n = b.size();
  if (t == 0.0) return LogScalar::one();

  // I = E[exp(c <w, y>)] with w ~ Dirichlet(1, ..., 1); flip so that c > 0.
  double c = static_cast<double>(n) * t;
  std::vector<double> y(b.values().begin(), b.values().end());
  if (c < 0.0) {
    c = -c;
    for (double& v : y) v = -v;
  }
  const double y_min = *std::min_element(y.begin(), y.end());
  double spread = 0.0;
  for (double& v : y) {
    v -= y_min;
    spread = std::max(spread, v);
  }
  if (spread == 0.0) return LogScalar::from_log(c * y_min);
  for (double& v : y) v /= spread;

  // g[m] = E[<w, y>^m] = h_m(y) / binom(m + n - 1, m), built one point at a time.
  const double lambda = c * spread;
  const auto terms = static_cast<std::size_t>(std::ceil(lambda + 12.0 * std::sqrt(lambda) + 50.0));
  std::vector<double> g(terms + 1, 0.0);
  g[0] = 1.0;
  for (std::size_t m = 1; m <= terms; ++m) g[m] = y[0] * g[m - 1];
  for (std::size_t j = 1; j < n; ++j) {
    const auto jd = static_cast<double>(j);
    for (std::size_t m = 1; m <= terms; ++m) {
      const auto md = static_cast<double>(m);
      g[m] = (jd / (md + jd)) * g[m] + (md / (md + jd)) * y[j] * g[m - 1];
    }
  }

  // sum_m Poisson(lambda; m) g[m], Neumaier-compensated.
  const double log_lambda = std::log(lambda);
  double sum = 0.0, carry = 0.0;
  for (std::size_t m = 0; m <= terms; ++m) {
    const auto md = static_cast<double>(m);
    const double term = std::exp(md * log_lambda - std::lgamma(md + 1.0) - lambda) * g[m];
    const double s = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - s) + term : (term - s) + sum;
    sum = s;
  }
  return LogScalar::from_log(c * y_min + lambda + std::log(sum + carry));
}

LogScalar hciz_confluent_unchecked(const Spectrum& a, const Spectrum& b, unsigned precision_bits) {
  require_same_dimension(a, b);
  if (precision_bits < 53) throw DomainError("precision_bits must be at least 53");
  const std::size_t n = a.size();
  const auto bits = static_cast<mpfr_prec_t>(precision_bits);
  const auto xs = hermite_nodes(a);
  const auto ys = hermite_nodes(b);

  // Normalized mixed derivatives of exp(N x y):
  //   d_x^k d_y^l K / (k! l!) = K * sum_r (N^r / r!) (N x)^{l-r}/(l-r)! (N y)^{k-r}/(k-r)!
  const auto nd = static_cast<double>(n);
  auto scaled_powers = [&](const std::vector<double>& pts, std::size_t max_power) {
    std::vector<std::vector<BigFloat>> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      BigFloat base(bits, nd);
      base *= pts[i];
      out[i].reserve(max_power + 1);
      out[i].emplace_back(bits, 1.0);
      for (std::size_t p = 1; p <= max_power; ++p) {
        BigFloat next = out[i].back() * base;
        next /= static_cast<double>(p);
        out[i].push_back(std::move(next));
      }
    }
    return out;
  };
  const auto px = scaled_powers(xs.x, ys.max_order);
  const auto py = scaled_powers(ys.x, xs.max_order);
  std::vector<BigFloat> n_over_fact;
  n_over_fact.emplace_back(bits, 1.0);
  for (std::size_t r = 1; r <= std::min(xs.max_order, ys.max_order); ++r) {
    BigFloat next = n_over_fact.back();
    next *= nd / static_cast<double>(r);
    n_over_fact.push_back(std::move(next));
  }

  std::vector<BigFloat> raw(n * n, BigFloat(bits));
  {
    BigFloat arg(bits), sum(bits), term(bits);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = xs.order[i], l = ys.order[j];
        mpfr_set_d(arg.get(), nd, MPFR_RNDN);
        mpfr_mul_d(arg.get(), arg.get(), xs.x[i], MPFR_RNDN);
        mpfr_mul_d(arg.get(), arg.get(), ys.x[j], MPFR_RNDN);
        BigFloat& out = raw[i * n + j];
        mpfr_exp(out.get(), arg.get(), MPFR_RNDN);
        if (k == 0 && l == 0) continue;
        mpfr_set_zero(sum.get(), 1);
        for (std::size_t r = 0; r <= std::min(k, l); ++r) {
          mpfr_mul(term.get(), n_over_fact[r].get(), px[i][l - r].get(), MPFR_RNDN);
          mpfr_mul(term.get(), term.get(), py[j][k - r].get(), MPFR_RNDN);
          sum += term;
        }
        out *= sum;
      }
  }

  // Divided differences in x down each column, then in y along each row.
  std::vector<BigFloat> stage(n * n, BigFloat(bits));
  std::vector<BigFloat> work(n, BigFloat(bits));
  for (std::size_t j = 0; j < n; ++j) {
    hermite_divided_differences(xs, work, [&](std::size_t i) -> const BigFloat& { return raw[i * n + j]; });
    for (std::size_t i = 0; i < n; ++i) stage[i * n + j] = work[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    hermite_divided_differences(ys, work, [&](std::size_t j) -> const BigFloat& { return stage[i * n + j]; });
    for (std::size_t j = 0; j < n; ++j) raw[i * n + j] = work[j];
  }

  return log_determinant(raw, n) * LogScalar::from_log(log_hciz_normalization(n));
}

LogScalar hciz_confluent(const Spectrum& a, const Spectrum& b, unsigned precision_bits) {
  const LogScalar coarse = hciz_confluent_unchecked(a, b, precision_bits);
  const LogScalar fine = hciz_confluent_unchecked(a, b, 2 * precision_bits);
  if (fine.sign() != 1 || coarse.sign() != 1 || std::abs(fine.log_abs() - coarse.log_abs()) > 1e-9)
    throw PrecisionError("confluent evaluation at " + std::to_string(precision_bits) +
                         " bits disagrees with " + std::to_string(2 * precision_bits) +
                         " bits; increase precision_bits");
  return fine;
}

}  // namespace hciz
