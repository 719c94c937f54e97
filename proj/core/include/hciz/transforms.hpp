#pragma once

#include <limits>
#include <string_view>

#include "hciz/measures.hpp"

namespace hciz {

/// Symmetry class: 1 = orthogonal O_N, 2 = unitary U_N, 4 = symplectic Sp(N/2).
class BetaClass {
 public:
  /// Throws DomainError unless beta is 1, 2 or 4.
  explicit BetaClass(int beta);

  static BetaClass orthogonal() { return BetaClass(1); }
  static BetaClass unitary() { return BetaClass(2); }
  static BetaClass symplectic() { return BetaClass(4); }

  int value() const { return beta_; }
  double as_double() const { return static_cast<double>(beta_); }
  std::string_view group_name() const;

  friend bool operator==(BetaClass, BetaClass) = default;

 private:
  int beta_;
};

/// Limits of the Hilbert transform at the edges of the support.
struct HilbertEdges {
  double h_min = -std::numeric_limits<double>::infinity();
  double h_max = std::numeric_limits<double>::infinity();
};

enum class Branch { r_transform, upper, lower };
std::string_view branch_name(Branch b);

struct BranchValue {
  double value;
  Branch branch;
};

/// H(z) = int (z - lambda)^{-1} dmu(lambda) for real z off the support.
double hilbert_transform(const SpectralMeasure& m, double z);

/// h_min = lim_{z -> lambda_min^-} H(z), h_max = lim_{z -> lambda_max^+} H(z).
/// Atoms and densities bounded below at an edge make the limit infinite.
HilbertEdges hilbert_edges(const SpectralMeasure& m);

/// Voiculescu R-transform on the real band [h_min, h_max]: the unique R with
/// H(1/t + R) = t. R(0) is the mean. Throws OutOfBandError outside the band.
double r_transform(const SpectralMeasure& m, double t);

/// Three-case branch function: R(2t/beta) in band, edge-saturated outside.
BranchValue v_branch(const SpectralMeasure& m, double t, BetaClass beta);

/// Rank-one spherical-integral limit f^{(beta)}_mu(t).
double f_beta(const SpectralMeasure& m, double t, BetaClass beta);

/// (beta/2) int_0^{2t/beta} R(s) ds by adaptive quadrature. Only valid in band.
/// For beta = 4 the reflection -F^{(2)}(-t) of the unitary integral is used.
double f_beta_integral_form(const SpectralMeasure& m, double t, BetaClass beta);

}  // namespace hciz
