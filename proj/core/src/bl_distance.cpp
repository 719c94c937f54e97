#include <algorithm>
#include <cmath>
#include <vector>

#include "hciz/errors.hpp"
#include "hciz/measures.hpp"

namespace hciz {

namespace {

struct Breakpoint {
  double x;
  double y;
};

// Concave piecewise-linear function on [-1, 1], stored by breakpoints.
using Concave = std::vector<Breakpoint>;

double interpolate(const Breakpoint& p, const Breakpoint& q, double x) {
  if (q.x == p.x) return std::max(p.y, q.y);
  return p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x);
}

// m(f) = max { V(g) : |g - f| <= h, g in [-1, 1] }, restricted to [-1, 1].
Concave window_max(const Concave& v, double h) {
  std::size_t first = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i].y > v[first].y) first = i;
  std::size_t last = first;
  while (last + 1 < v.size() && v[last + 1].y >= v[first].y) ++last;

  Concave moved;
  moved.reserve(v.size() + 2);
  for (std::size_t i = 0; i <= first; ++i) moved.push_back({v[i].x - h, v[i].y});
  for (std::size_t i = last; i < v.size(); ++i) moved.push_back({v[i].x + h, v[i].y});

  Concave out;
  out.reserve(moved.size() + 2);
  for (std::size_t i = 0; i < moved.size(); ++i) {
    const auto& p = moved[i];
    if (p.x < -1.0) {
      if (i + 1 < moved.size() && moved[i + 1].x > -1.0)
        out.push_back({-1.0, interpolate(p, moved[i + 1], -1.0)});
      continue;
    }
    if (p.x > 1.0) {
      if (i > 0 && moved[i - 1].x < 1.0) out.push_back({1.0, interpolate(moved[i - 1], p, 1.0)});
      break;
    }
    out.push_back(p);
  }
  return out;
}

std::vector<double> node_grid(const SpectralMeasure& m1, const SpectralMeasure& m2,
                              std::size_t grid_points) {
  const double lo = std::min(m1.support_min(), m2.support_min());
  const double hi = std::max(m1.support_max(), m2.support_max());
  std::vector<double> nodes;
  if (hi > lo) {
    for (std::size_t k = 0; k < grid_points; ++k)
      nodes.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid_points - 1));
  } else {
    nodes.push_back(lo);
  }
  for (const auto* m : {&m1, &m2})
    if (m->kind() == SpectralMeasure::Kind::atomic)
      nodes.insert(nodes.end(), m->points().begin(), m->points().end());
  std::sort(nodes.begin(), nodes.end());
  const double tol = SpectralMeasure::kAtomMergeTolerance;
  nodes.erase(std::unique(nodes.begin(), nodes.end(),
                          [tol](double a, double b) { return b - a < tol; }),
              nodes.end());
  return nodes;
}

// Adds int hat_k dm to w[k], hat_k the piecewise-linear basis on `nodes`.
void accumulate_hat_weights(const SpectralMeasure& m, const std::vector<double>& nodes,
                            std::vector<double>& w) {
  if (m.kind() == SpectralMeasure::Kind::atomic) {
    const auto p = m.points();
    const auto q = m.weights();
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto it = std::lower_bound(nodes.begin(), nodes.end(), p[i] - SpectralMeasure::kAtomMergeTolerance);
      w[static_cast<std::size_t>(it - nodes.begin())] += q[i];
    }
    return;
  }
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double a = nodes[k], b = nodes[k + 1];
    const double mass = m.cdf(b) - m.cdf(a);
    if (mass == 0.0) continue;
    const double moment = m.partial_mean(b) - m.partial_mean(a);
    const double h = b - a;
    // int (x - a)/h and int (b - x)/h over the cell
    const double right_share = (moment - a * mass) / h;
    const double left_share = (b * mass - moment) / h;
    w[k] += left_share;
    w[k + 1] += right_share;
  }
}

}  // namespace

double bl_supremum(const SpectralMeasure& m1, const SpectralMeasure& m2, const BlOptions& options) {
  if (options.grid_points < 2) throw DomainError("BL grid needs at least two points");
  const auto nodes = node_grid(m1, m2, options.grid_points);
  std::vector<double> w1(nodes.size(), 0.0), w2(nodes.size(), 0.0);
  accumulate_hat_weights(m1, nodes, w1);
  accumulate_hat_weights(m2, nodes, w2);
  std::vector<double> w(nodes.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = w1[k] - w2[k];
  // The value is invariant under w -> -w (f -> -f); fixing the sign makes the
  // computation identical for (m1, m2) and (m2, m1).
  const auto lead = std::find_if(w.begin(), w.end(), [](double x) { return x != 0.0; });
  if (lead != w.end() && *lead < 0.0)
    for (double& x : w) x = -x;

  // Backward dynamic programming over nodes: V_k(f) = w_k f + max_{|g-f|<=h_k} V_{k+1}(g).
  const std::size_t n = nodes.size();
  Concave v{{-1.0, -w[n - 1]}, {1.0, w[n - 1]}};
  for (std::size_t k = n - 1; k-- > 0;) {
    v = window_max(v, nodes[k + 1] - nodes[k]);
    for (auto& p : v) p.y += w[k] * p.x;
  }
  double best = v.front().y;
  for (const auto& p : v) best = std::max(best, p.y);
  return std::max(best, 0.0);
}

double bl_distance(const SpectralMeasure& m1, const SpectralMeasure& m2, const BlOptions& options) {
  return std::abs(m1.support_max() - m2.support_max()) +
         std::abs(m1.support_min() - m2.support_min()) + bl_supremum(m1, m2, options);
}

}  // namespace hciz
