#include "hciz/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hciz/errors.hpp"

namespace hciz {

namespace {

constexpr double kQuadratureTolerance = 1e-11;
constexpr unsigned kQuadratureDepth = 15;

double gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, kQuadratureDepth, kQuadratureTolerance);
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

// ---------------------------------------------------------------- Spectrum

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) require_finite(v, "spectrum value");
  std::sort(values_.begin(), values_.end(), std::greater<>());
}

std::size_t Spectrum::rank() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
}

double Spectrum::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

Spectrum Spectrum::shifted(double shift) const {
  std::vector<double> out(values_);
  for (double& v : out) v += shift;
  return Spectrum(std::move(out));
}

Spectrum Spectrum::scaled(double scale) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= scale;
  return Spectrum(std::move(out));
}

// --------------------------------------------------------- SpectralMeasure

SpectralMeasure SpectralMeasure::atomic(std::vector<double> points, std::vector<double> weights) {
  if (points.empty()) throw DomainError("atomic measure needs at least one atom");
  if (points.size() != weights.size())
    throw DomainError("atomic measure: points and weights differ in length");

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_finite(points[i], "atom position");
    require_finite(weights[i], "atom weight");
    if (weights[i] < 0.0) throw DomainError("atomic measure: negative weight");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance)
    throw DomainError("atomic measure: weights sum to " + std::to_string(total) + ", not 1");
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return points[i] < points[j]; });

  SpectralMeasure m;
  m.kind_ = Kind::atomic;
  for (std::size_t idx : order) {
    if (weights[idx] == 0.0) continue;
    if (!m.points_.empty() && points[idx] - m.points_.back() < kAtomMergeTolerance) {
      m.weights_.back() += weights[idx];
    } else {
      m.points_.push_back(points[idx]);
      m.weights_.push_back(weights[idx]);
    }
  }
  if (m.points_.empty()) throw DomainError("atomic measure: all weights are zero");
  m.support_min_ = m.points_.front();
  m.support_max_ = m.points_.back();
  return m;
}

SpectralMeasure SpectralMeasure::uniform(double a, double b) {
  require_finite(a, "uniform endpoint");
  require_finite(b, "uniform endpoint");
  if (!(a < b)) throw DomainError("uniform measure needs a < b");
  SpectralMeasure m;
  m.kind_ = Kind::uniform;
  m.p0_ = a;
  m.p1_ = b;
  m.support_min_ = a;
  m.support_max_ = b;
  return m;
}

SpectralMeasure SpectralMeasure::semicircle(double center, double radius) {
  require_finite(center, "semicircle center");
  require_finite(radius, "semicircle radius");
  if (!(radius > 0.0)) throw DomainError("semicircle radius must be positive");
  SpectralMeasure m;
  m.kind_ = Kind::semicircle;
  m.p0_ = center;
  m.p1_ = radius;
  m.support_min_ = center - radius;
  m.support_max_ = center + radius;
  return m;
}

double SpectralMeasure::mean() const {
  switch (kind_) {
    case Kind::atomic: {
      double s = 0.0;
      for (std::size_t i = 0; i < points_.size(); ++i) s += weights_[i] * points_[i];
      return s;
    }
    case Kind::uniform:
      return 0.5 * (p0_ + p1_);
    case Kind::semicircle:
      return p0_;
  }
  return 0.0;
}

double SpectralMeasure::integrate(const std::function<double(double)>& g) const {
  switch (kind_) {
    case Kind::atomic: {
      double s = 0.0;
      for (std::size_t i = 0; i < points_.size(); ++i) s += weights_[i] * g(points_[i]);
      return s;
    }
    case Kind::uniform: {
      const double width = p1_ - p0_;
      return gauss_kronrod(g, p0_, p1_) / width;
    }
    case Kind::semicircle: {
      // lambda = c + r cos(theta) turns the density into (2/pi) sin^2(theta).
      const double c = p0_, r = p1_;
      auto integrand = [&](double theta) {
        const double s = std::sin(theta);
        return g(c + r * std::cos(theta)) * s * s;
      };
      return 2.0 / std::numbers::pi * gauss_kronrod(integrand, 0.0, std::numbers::pi);
    }
  }
  return 0.0;
}

double SpectralMeasure::cdf(double x) const {
  switch (kind_) {
    case Kind::atomic: {
      double s = 0.0;
      for (std::size_t i = 0; i < points_.size() && points_[i] <= x; ++i) s += weights_[i];
      return std::min(s, 1.0);
    }
    case Kind::uniform:
      return std::clamp((x - p0_) / (p1_ - p0_), 0.0, 1.0);
    case Kind::semicircle: {
      const double u = std::clamp((x - p0_) / p1_, -1.0, 1.0);
      return 0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / std::numbers::pi;
    }
  }
  return 0.0;
}

double SpectralMeasure::partial_mean(double x) const {
  switch (kind_) {
    case Kind::atomic: {
      double s = 0.0;
      for (std::size_t i = 0; i < points_.size() && points_[i] <= x; ++i)
        s += weights_[i] * points_[i];
      return s;
    }
    case Kind::uniform: {
      const double y = std::clamp(x, p0_, p1_);
      return (y * y - p0_ * p0_) / (2.0 * (p1_ - p0_));
    }
    case Kind::semicircle: {
      const double u = std::clamp((x - p0_) / p1_, -1.0, 1.0);
      const double q = 1.0 - u * u;
      return p0_ * cdf(x) - 2.0 * p1_ / (3.0 * std::numbers::pi) * q * std::sqrt(q);
    }
  }
  return 0.0;
}

double SpectralMeasure::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  switch (kind_) {
    case Kind::atomic: {
      double s = 0.0;
      for (std::size_t i = 0; i < points_.size(); ++i) {
        s += weights_[i];
        if (s >= u) return points_[i];
      }
      return points_.back();
    }
    case Kind::uniform:
      return p0_ + u * (p1_ - p0_);
    case Kind::semicircle: {
      // Mirror the upper half so symmetric levels give exactly symmetric points.
      if (u > 0.5) return 2.0 * p0_ - quantile(1.0 - u);
      double lo = support_min_, hi = p0_;
      while (hi - lo > 1e-12 * std::max(1.0, p1_)) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (cdf(mid) < u ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------- operations

SpectralMeasure empirical_measure(const Spectrum& s) {
  if (s.empty()) throw DomainError("empirical measure of an empty spectrum");
  const auto n = static_cast<double>(s.size());
  std::vector<double> points(s.values().begin(), s.values().end());
  std::vector<double> weights(s.size(), 1.0 / n);
  // 1/n summed n times can miss 1 by a few ulps; renormalize the last weight.
  const double partial = std::accumulate(weights.begin(), weights.end() - 1, 0.0);
  weights.back() = 1.0 - partial;
  return SpectralMeasure::atomic(std::move(points), std::move(weights));
}

bool check_spacing(const Spectrum& s, double c) {
  if (!(c > 0.0)) throw DomainError("spacing constant must be positive");
  if (s.size() < 2) throw DomainError("spacing check needs at least two eigenvalues");
  const double gap = c / static_cast<double>(s.size());
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i + 1] + gap < s[i]) return false;
  return true;
}

Spectrum trim_spectrum(const Spectrum& s, std::size_t step, TrimSide side) {
  const std::size_t n = s.size();
  if (step < 1 || step > n)
    throw DomainError("trim step " + std::to_string(step) + " outside [1, " + std::to_string(n) + "]");
  const std::size_t keep = n + 1 - step;
  const auto v = s.values();
  if (side == TrimSide::lower) return Spectrum({v.begin() + (step - 1), v.end()});
  return Spectrum({v.begin(), v.begin() + keep});
}

Spectrum sample_spectrum(const SpectralMeasure& m, std::size_t n, std::uint64_t /*seed*/) {
  if (n < 1) throw DomainError("sample size must be positive");
  std::vector<double> values;
  values.reserve(n);
  if (m.kind() == SpectralMeasure::Kind::atomic) {
    const auto w = m.weights();
    const auto p = m.points();
    std::vector<std::size_t> counts(w.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double exact = w[k] * static_cast<double>(n);
      counts[k] = static_cast<std::size_t>(std::floor(exact));
      assigned += counts[k];
      remainders.emplace_back(exact - std::floor(exact), k);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++counts[remainders[r % w.size()].second];
    for (std::size_t k = 0; k < w.size(); ++k) values.insert(values.end(), counts[k], p[k]);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      values.push_back(m.quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n)));
  }
  return Spectrum(std::move(values));
}

}  // namespace hciz
