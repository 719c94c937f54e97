#include "hciz/transforms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hciz/errors.hpp"

namespace hciz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// H(1/t + R) / t, written so that nothing cancels when t is small.
double resolvent_ratio(const SpectralMeasure& m, double t, double r) {
  switch (m.kind()) {
    case SpectralMeasure::Kind::atomic: {
      double s = 0.0;
      const auto p = m.points();
      const auto w = m.weights();
      for (std::size_t i = 0; i < p.size(); ++i) s += w[i] / (1.0 + t * (r - p[i]));
      return s;
    }
    case SpectralMeasure::Kind::uniform: {
      const double width = m.hi() - m.lo();
      const double denom = 1.0 + t * (r - m.hi());
      return std::log1p(t * width / denom) / (t * width);
    }
    case SpectralMeasure::Kind::semicircle: {
      const double u = 1.0 + t * (r - m.center());
      const double tr = t * m.radius();
      return 2.0 / (u + std::sqrt(std::max(0.0, u * u - tr * tr)));
    }
  }
  return 0.0;
}

bool in_band(const HilbertEdges& e, double s) { return e.h_min <= s && s <= e.h_max; }

}  // namespace

BetaClass::BetaClass(int beta) : beta_(beta) {
  if (beta != 1 && beta != 2 && beta != 4)
    throw DomainError("beta must be 1, 2 or 4, got " + std::to_string(beta));
}

std::string_view BetaClass::group_name() const {
  switch (beta_) {
    case 1: return "O(N)";
    case 2: return "U(N)";
    default: return "Sp(N/2)";
  }
}

std::string_view branch_name(Branch b) {
  switch (b) {
    case Branch::r_transform: return "R";
    case Branch::upper: return "upper";
    case Branch::lower: return "lower";
  }
  return "?";
}

double hilbert_transform(const SpectralMeasure& m, double z) {
  if (!std::isfinite(z)) throw DomainError("Hilbert transform argument must be finite");
  // The semicircle integral converges at its edges; the other kinds diverge there.
  const bool closed = m.kind() != SpectralMeasure::Kind::semicircle;
  const bool inside = closed ? (z >= m.support_min() && z <= m.support_max())
                             : (z > m.support_min() && z < m.support_max());
  if (inside)
    throw DomainError("Hilbert transform evaluated inside the support (principal values unsupported)");
  switch (m.kind()) {
    case SpectralMeasure::Kind::atomic: {
      double s = 0.0;
      const auto p = m.points();
      const auto w = m.weights();
      for (std::size_t i = 0; i < p.size(); ++i) s += w[i] / (z - p[i]);
      return s;
    }
    case SpectralMeasure::Kind::uniform: {
      const double a = m.lo(), b = m.hi(), width = b - a;
      if (z > b) return std::log1p(width / (z - b)) / width;
      return -std::log1p(width / (a - z)) / width;
    }
    case SpectralMeasure::Kind::semicircle: {
      const double w = z - m.center(), r = m.radius();
      const double root = std::sqrt((w - r) * (w + r));
      return 2.0 / (w > 0.0 ? w + root : w - root);
    }
  }
  return 0.0;
}

HilbertEdges hilbert_edges(const SpectralMeasure& m) {
  if (m.kind() == SpectralMeasure::Kind::semicircle) {
    // H(c + r) = 2/r: the square-root edge keeps the integral finite.
    return {-2.0 / m.radius(), 2.0 / m.radius()};
  }
  // Atoms diverge like 1/(z - b); a density bounded below diverges like log.
  return {-kInf, kInf};
}

double r_transform(const SpectralMeasure& m, double t) {
  if (!std::isfinite(t)) throw DomainError("R-transform argument must be finite");
  if (t == 0.0) return m.mean();
  const auto edges = hilbert_edges(m);
  if (!in_band(edges, t))
    throw OutOfBandError("R-transform argument " + std::to_string(t) + " outside [" +
                         std::to_string(edges.h_min) + ", " + std::to_string(edges.h_max) + "]");
  const double lmin = m.support_min(), lmax = m.support_max();
  if (t == edges.h_max) return lmax - 1.0 / t;
  if (t == edges.h_min) return lmin - 1.0 / t;

  // 1/t + R stays off the support and H is monotone there, which pins R to
  // [lmin, lmax] intersected with the admissible side.
  double lo = lmin, hi = lmax;
  if (t > 0.0)
    lo = std::max(lo, lmax - 1.0 / t);
  else
    hi = std::min(hi, lmin - 1.0 / t);
  const bool decreasing = t > 0.0;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double excess = resolvent_ratio(m, t, mid) - 1.0;
    if (excess == 0.0) return mid;
    if ((excess > 0.0) == decreasing)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

BranchValue v_branch(const SpectralMeasure& m, double t, BetaClass beta) {
  if (t == 0.0) return {m.mean(), Branch::r_transform};
  const double half_beta = beta.as_double() / 2.0;
  const double s = t / half_beta;
  const auto edges = hilbert_edges(m);
  if (s > edges.h_max) return {m.support_max() - half_beta / t, Branch::upper};
  if (s < edges.h_min) return {m.support_min() - half_beta / t, Branch::lower};
  return {r_transform(m, s), Branch::r_transform};
}

double f_beta(const SpectralMeasure& m, double t, BetaClass beta) {
  if (beta.value() == 4) return -f_beta(m, -t, BetaClass::unitary());
  if (t == 0.0) return 0.0;
  const double half_beta = beta.as_double() / 2.0;
  const double s = t / half_beta;
  const auto [v, branch] = v_branch(m, t, beta);

  // Argument of the logarithm, 1 + s (v - lambda); on a saturated branch it is
  // s (edge - lambda) and vanishes at that edge.
  auto argument = [&](double lambda) {
    switch (branch) {
      case Branch::upper: return s * (m.support_max() - lambda);
      case Branch::lower: return s * (m.support_min() - lambda);
      default: return 1.0 + s * (v - lambda);
    }
  };
  constexpr double kSlack = 1e-12;
  if (argument(m.support_min()) < -kSlack || argument(m.support_max()) < -kSlack)
    throw std::logic_error("f_beta: nonpositive logarithm argument on the support");
  const double log_term = m.integrate([&](double lambda) { return std::log(argument(lambda)); });
  return t * v - half_beta * log_term;
}

double f_beta_integral_form(const SpectralMeasure& m, double t, BetaClass beta) {
  if (beta.value() == 4) return -f_beta_integral_form(m, -t, BetaClass::unitary());
  if (t == 0.0) return 0.0;
  const double half_beta = beta.as_double() / 2.0;
  const double s_end = t / half_beta;
  if (!in_band(hilbert_edges(m), s_end))
    throw DomainError("integral form of f_beta requires 2t/beta inside [H_min, H_max]");
  auto r = [&](double s) { return r_transform(m, s); };
  const double lo = std::min(0.0, s_end), hi = std::max(0.0, s_end);
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(r, lo, hi, 15, 1e-12);
  return half_beta * (s_end > 0.0 ? integral : -integral);
}

}  // namespace hciz
