#include <gtest/gtest.h>

#include <cmath>

#include "hciz/errors.hpp"
#include "hciz/transforms.hpp"
#include "oracles.hpp"

using namespace hciz;

namespace {

const SpectralMeasure kSemi = SpectralMeasure::semicircle(0, 2);
const SpectralMeasure kUnif = SpectralMeasure::uniform(0, 1);
const SpectralMeasure kAtoms = SpectralMeasure::atomic({-1.0, 0.5, 2.0}, {0.2, 0.5, 0.3});

// Grid of n points strictly inside (lo, hi), skipping t = 0.
std::vector<double> band_grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) {
    const double t = lo + (hi - lo) * (k + 0.5) / n;
    if (t != 0.0) out.push_back(t);
  }
  return out;
}

}  // namespace

TEST(BetaClass, OnlyThreeValues) {
  EXPECT_THROW(BetaClass(3), DomainError);
  EXPECT_THROW(BetaClass(0), DomainError);
  EXPECT_EQ(BetaClass(4).group_name(), BetaClass::symplectic().group_name());
}

TEST(Hilbert, Examples) {
  EXPECT_DOUBLE_EQ(hilbert_transform(SpectralMeasure::dirac(0), 2), 0.5);
  EXPECT_NEAR(hilbert_transform(kUnif, 2), std::log(2.0), 1e-12);
  EXPECT_NEAR(hilbert_transform(kSemi, 2), 1.0, 1e-12);
  EXPECT_THROW(hilbert_transform(kUnif, 0.5), DomainError);
  EXPECT_THROW(hilbert_transform(kAtoms, 0.5), DomainError);
}

TEST(Hilbert, AgreesWithQuadratureOracle) {
  for (double z : {-3.7, -2.01, 2.0001, 2.5, 9.0}) {
    const double ref = oracle::hilbert_density([](double x) { return oracle::semicircle_density(0, 2, x); },
                                               -2, 2, z);
    EXPECT_NEAR(hilbert_transform(kSemi, z), ref, 1e-9) << z;
  }
  for (double z : {-1.0, -1e-3, 1.001, 4.0}) {
    const double ref = oracle::hilbert_density([](double) { return 1.0; }, 0, 1, z);
    EXPECT_NEAR(hilbert_transform(kUnif, z), ref, 1e-9) << z;
  }
}

TEST(Hilbert, StrictlyDecreasingOffSupport) {
  for (const auto* m : {&kSemi, &kUnif, &kAtoms}) {
    double prev = hilbert_transform(*m, m->support_max() + 1e-3);
    for (double d = 2e-3; d < 50; d *= 1.7) {
      const double h = hilbert_transform(*m, m->support_max() + d);
      EXPECT_LT(h, prev);
      prev = h;
    }
  }
}

TEST(Hilbert, Edges) {
  auto d = hilbert_edges(SpectralMeasure::dirac(1.5));
  EXPECT_TRUE(std::isinf(d.h_min) && d.h_min < 0);
  EXPECT_TRUE(std::isinf(d.h_max) && d.h_max > 0);
  auto s = hilbert_edges(kSemi);
  EXPECT_NEAR(s.h_min, -1.0, 1e-12);
  EXPECT_NEAR(s.h_max, 1.0, 1e-12);
  // the oracle edge value approaches the same limit
  EXPECT_NEAR(oracle::hilbert_density([](double x) { return oracle::semicircle_density(0, 2, x); }, -2, 2,
                                      2 + 1e-8),
              1.0, 1e-3);
  auto u = hilbert_edges(kUnif);
  EXPECT_TRUE(std::isinf(u.h_min) && std::isinf(u.h_max));
}

TEST(RTransform, Examples) {
  for (double t : {-3.0, 0.2, 5.0}) EXPECT_NEAR(r_transform(SpectralMeasure::dirac(0.7), t), 0.7, 1e-12);
  EXPECT_NEAR(r_transform(kSemi, 0.3), 0.3, 1e-8);
  auto pm = SpectralMeasure::atomic({-1, 1}, {0.5, 0.5});
  EXPECT_NEAR(r_transform(pm, 1.0), (std::sqrt(5.0) - 1) / 2, 1e-10);
  EXPECT_DOUBLE_EQ(r_transform(kUnif, 0.0), 0.5);
  EXPECT_THROW(r_transform(kSemi, 1.5), OutOfBandError);
}

TEST(RTransform, InversionResidualOnGrids) {
  struct Case {
    const SpectralMeasure* m;
    double lo, hi;
  };
  for (auto [m, lo, hi] : {Case{&kSemi, -0.999, 0.999}, Case{&kUnif, -6, 6}, Case{&kAtoms, -4, 4}}) {
    for (double t : band_grid(lo, hi, 25)) {
      const double r = r_transform(*m, t);
      EXPECT_LT(std::abs(hilbert_transform(*m, 1 / t + r) - t), 1e-9) << t;
    }
  }
}

TEST(RTransform, ResidualAgainstIndependentH) {
  for (double t : band_grid(-0.95, 0.95, 9)) {
    const double z = 1 / t + r_transform(kSemi, t);
    const double h = oracle::hilbert_density([](double x) { return oracle::semicircle_density(0, 2, x); }, -2,
                                             2, z);
    EXPECT_NEAR(h, t, 1e-9);
  }
  for (double t : band_grid(-5, 5, 9)) {
    const double z = 1 / t + r_transform(kUnif, t);
    EXPECT_NEAR(oracle::hilbert_density([](double) { return 1.0; }, 0, 1, z), t, 1e-9);
  }
}

TEST(VBranch, Examples) {
  auto two = BetaClass::unitary();
  EXPECT_NEAR(v_branch(SpectralMeasure::dirac(0.4), 17.0, two).value, 0.4, 1e-12);
  auto v = v_branch(kSemi, 0.5, two);
  EXPECT_NEAR(v.value, 0.5, 1e-9);
  EXPECT_EQ(v.branch, Branch::r_transform);
  v = v_branch(kSemi, 2.0, two);
  EXPECT_DOUBLE_EQ(v.value, 1.5);
  EXPECT_EQ(v.branch, Branch::upper);
  v = v_branch(kSemi, -2.0, two);
  EXPECT_DOUBLE_EQ(v.value, -1.5);
  EXPECT_EQ(v.branch, Branch::lower);
  EXPECT_DOUBLE_EQ(v_branch(kUnif, 0.0, two).value, 0.5);
  // beta = 1 moves the edge to t = 1/2
  EXPECT_EQ(v_branch(kSemi, 0.6, BetaClass::orthogonal()).branch, Branch::upper);
}

TEST(FBeta, Examples) {
  for (int b : {1, 2, 4}) EXPECT_EQ(f_beta(kUnif, 0.0, BetaClass(b)), 0.0);
  EXPECT_NEAR(f_beta(SpectralMeasure::dirac(1.3), 0.7, BetaClass::unitary()), 0.7 * 1.3, 1e-14);
  EXPECT_NEAR(f_beta(kSemi, 0.5, BetaClass::unitary()), 0.125, 1e-9);
  EXPECT_NEAR(f_beta_integral_form(kSemi, 0.5, BetaClass::unitary()), 0.125, 1e-9);
  EXPECT_NEAR(f_beta_integral_form(SpectralMeasure::dirac(1.3), 0.7, BetaClass::unitary()), 0.91, 1e-12);
  EXPECT_NEAR(f_beta_integral_form(kSemi, 0.25, BetaClass::orthogonal()), 0.0625, 1e-9);
  EXPECT_THROW(f_beta_integral_form(kSemi, 2.0, BetaClass::unitary()), DomainError);
}

TEST(FBeta, SemicircleSaturatedClosedForm) {
  // integrating v(s) = s on [0,1] and 2 - 1/s beyond gives 2t - 3/2 - log t
  for (double t : {1.0, 1.3, 2.0, 5.0})
    EXPECT_NEAR(f_beta(kSemi, t, BetaClass::unitary()), 2 * t - 1.5 - std::log(t), 1e-9) << t;
}

TEST(FBeta, DerivativeIsV) {
  for (const auto* m : {&kSemi, &kUnif, &kAtoms})
    for (int b : {1, 2})
      for (double t : {-2.5, -0.8, 0.3, 1.7}) {
        const BetaClass beta(b);
        const double h = 1e-5;
        const double df = (f_beta(*m, t + h, beta) - f_beta(*m, t - h, beta)) / (2 * h);
        EXPECT_NEAR(df, v_branch(*m, t, beta).value, 1e-6) << t;
      }
}

TEST(FBeta, InBandAgreementWithIntegralForm) {
  for (int b : {1, 2}) {
    const BetaClass beta(b);
    const double scale = b / 2.0;
    struct Case {
      const SpectralMeasure* m;
      double lo, hi;
    };
    for (auto [m, lo, hi] : {Case{&kSemi, -0.99, 0.99}, Case{&kUnif, -4, 4}, Case{&kAtoms, -3, 3}})
      for (double t : band_grid(lo * scale, hi * scale, 25))
        EXPECT_LT(std::abs(f_beta(*m, t, beta) - f_beta_integral_form(*m, t, beta)), 1e-7) << t;
  }
}

TEST(FBeta, IntegralFormAgainstSimpson) {
  // independent integration of the R-transform along s
  const double t = 0.8;
  const double ref = oracle::simpson([](double s) { return r_transform(kUnif, s); }, 0, t, 400);
  EXPECT_NEAR(f_beta_integral_form(kUnif, t, BetaClass::unitary()), ref, 1e-9);
}

TEST(FBeta, SymplecticReflectionIsExact) {
  for (const auto* m : {&kSemi, &kUnif, &kAtoms})
    for (double t : {-3.0, -0.4, 0.0, 0.7, 2.5})
      EXPECT_EQ(f_beta(*m, t, BetaClass::symplectic()), -f_beta(*m, -t, BetaClass::unitary()));
}

TEST(FBeta, BetaRescaling) {
  for (double t : {-1.4, 0.3, 2.2})
    EXPECT_NEAR(f_beta(kUnif, t, BetaClass::orthogonal()), 0.5 * f_beta(kUnif, 2 * t, BetaClass::unitary()),
                1e-12);
}

TEST(FBeta, ContinuousInTheMeasure) {
  double prev = INFINITY;
  for (std::size_t n : {50, 200, 800}) {
    const auto atomized = empirical_measure(sample_spectrum(kSemi, n));
    const double gap = std::abs(f_beta(atomized, 0.5, BetaClass::unitary()) - f_beta(kSemi, 0.5, BetaClass::unitary()));
    EXPECT_LT(gap, prev) << n;
    prev = gap;
  }
}

TEST(FBeta, ContinuousAcrossTheEdge) {
  for (int b : {1, 2}) {
    const BetaClass beta(b);
    const double edge = hilbert_edges(kSemi).h_max * b / 2.0;
    EXPECT_LT(std::abs(f_beta(kSemi, edge + 1e-6, beta) - f_beta(kSemi, edge - 1e-6, beta)), 1e-4);
    EXPECT_LT(std::abs(f_beta(kSemi, -edge + 1e-6, beta) - f_beta(kSemi, -edge - 1e-6, beta)), 1e-4);
  }
}
