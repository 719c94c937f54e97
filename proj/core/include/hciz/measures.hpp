#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hciz {

/// Sorted-descending list of eigenvalues of a diagonal matrix.
///
/// Holds both the full-rank matrix B_N and the small-rank A_N; `rank()` counts
/// entries that are exactly nonzero.
class Spectrum {
 public:
  Spectrum() = default;
  /// Sorts the input descending. Throws DomainError on non-finite entries.
  explicit Spectrum(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::size_t rank() const;
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  double max() const { return values_.front(); }
  double min() const { return values_.back(); }
  double sum() const;

  /// Spectrum of X + shift * Id.
  Spectrum shifted(double shift) const;
  /// Spectrum of scale * X.
  Spectrum scaled(double scale) const;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> values_;
};

/// Compactly supported probability measure on the real line.
class SpectralMeasure {
 public:
  enum class Kind { atomic, uniform, semicircle };

  /// Atoms closer than `kAtomMergeTolerance` are merged; weights must sum to 1.
  static SpectralMeasure atomic(std::vector<double> points, std::vector<double> weights);
  static SpectralMeasure uniform(double a, double b);
  static SpectralMeasure semicircle(double center, double radius);
  static SpectralMeasure dirac(double point) { return atomic({point}, {1.0}); }

  Kind kind() const { return kind_; }
  double support_min() const { return support_min_; }
  double support_max() const { return support_max_; }

  // atomic
  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  // uniform: [lo, hi]; semicircle: center +- radius
  double lo() const { return p0_; }
  double hi() const { return p1_; }
  double center() const { return p0_; }
  double radius() const { return p1_; }

  double mean() const;

  /// Integral of g against the measure. Atomic measures sum exactly; continuous
  /// kinds use adaptive Gauss-Kronrod quadrature.
  double integrate(const std::function<double(double)>& g) const;

  /// Distribution function F(x) = mu((-inf, x]).
  double cdf(double x) const;
  /// Partial first moment G(x) = int_{(-inf, x]} lambda dmu(lambda).
  double partial_mean(double x) const;
  /// Generalized inverse of the distribution function, u in (0, 1).
  double quantile(double u) const;

  friend bool operator==(const SpectralMeasure&, const SpectralMeasure&) = default;

  static constexpr double kAtomMergeTolerance = 1e-12;
  static constexpr double kWeightSumTolerance = 1e-12;

 private:
  SpectralMeasure() = default;

  Kind kind_ = Kind::atomic;
  std::vector<double> points_;
  std::vector<double> weights_;
  double p0_ = 0.0;
  double p1_ = 0.0;
  double support_min_ = 0.0;
  double support_max_ = 0.0;
};

enum class TrimSide { upper, lower };

/// Atomic measure N^{-1} sum_i delta_{s_i}.
SpectralMeasure empirical_measure(const Spectrum& s);

/// True iff s_{i+1} + c/N >= s_i for every consecutive pair.
bool check_spacing(const Spectrum& s, double c);

/// Spectrum of length N+1-i used at peeling step i (1-based).
/// `lower` keeps (s_i, ..., s_N); `upper` keeps (s_1, ..., s_{N+1-i}).
Spectrum trim_spectrum(const Spectrum& s, std::size_t step, TrimSide side);

/// Deterministic n-point realization of a measure by quantile placement
/// (continuous kinds) or largest-remainder rounding of weights (atomic).
/// `seed` is accepted for interface uniformity; placement does not consume it.
Spectrum sample_spectrum(const SpectralMeasure& m, std::size_t n, std::uint64_t seed = 0);

struct BlOptions {
  std::size_t grid_points = 512;
};

/// Endpoint terms plus the bounded-Lipschitz supremum over f with
/// |f| <= 1 and Lip(f) <= 1, solved exactly on a piecewise-linear grid.
double bl_distance(const SpectralMeasure& m1, const SpectralMeasure& m2,
                   const BlOptions& options = {});

/// Bounded-Lipschitz supremum alone (no endpoint terms).
double bl_supremum(const SpectralMeasure& m1, const SpectralMeasure& m2,
                   const BlOptions& options = {});

}  // namespace hciz
