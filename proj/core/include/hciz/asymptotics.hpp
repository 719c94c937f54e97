#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hciz/hciz_exact.hpp"
#include "hciz/hciz_mc.hpp"
#include "hciz/log_scalar.hpp"
#include "hciz/measures.hpp"
#include "hciz/transforms.hpp"

namespace hciz {

enum class Method { exact, mc };
std::string_view method_name(Method m);
Method parse_method(std::string_view name);

/// How the rank-M average of f is weighted.
/// `none`: (1/M) sum f(a_i). `scaled`: (beta/2)(1/M) sum f(a_i).
enum class PrefactorMode { none, scaled };
std::string_view prefactor_name(PrefactorMode p);
PrefactorMode parse_prefactor(std::string_view name);

/// Rank M(N) of the small-rank matrix; all choices are o(N).
enum class RankRule { one, cbrt, sqrt, n_over_log };
std::string_view rank_rule_name(RankRule r);
RankRule parse_rank_rule(std::string_view name);
std::size_t rank_for(RankRule rule, std::size_t n);

struct EvalOptions {
  Method method = Method::exact;
  unsigned precision_bits = kDefaultPrecisionBits;
  McOptions mc{};
};

struct ScaledLog {
  double value = 0.0;   // (1/(N M)) log I
  double stderr = 0.0;  // zero for exact evaluation
  LogScalar integral;   // I itself
};

/// (1/(N M)) log I_N^{(beta)}(A, B), M = rank(A) >= 1.
/// Exact evaluation (confluent formula) is only available for beta = 2.
ScaledLog lhs_scaled_log(const Spectrum& a, const Spectrum& b, BetaClass beta,
                         const EvalOptions& options = {});

/// Average of f^{(beta)}_mu over the nonzero eigenvalues of A.
double rhs_f_average(const Spectrum& a, const SpectralMeasure& mu, BetaClass beta,
                     PrefactorMode mode = PrefactorMode::none);

struct SandwichBounds {
  LogScalar lower;
  LogScalar upper;
  double stderr_lower = 0.0;  // Monte Carlo factors only
  double stderr_upper = 0.0;
  double shift = 0.0;         // B was bounded as B + shift * Id
  bool reflected = false;     // (A, B) replaced by (-A, -B)
};

/// Products of rank-one integrals over trimmed spectra bracketing log I(A, B).
///
/// Step i peels a_i: the factor is I_{N+1-i}((N/(N+1-i)) diag(a_i, 0, ...), B_i)
/// with B_i = trim_spectrum(b, i, lower|upper). For beta = 4 the embedding
/// fixes a 2x2 block, so steps peel eigenvalue pairs and drop two entries of B.
/// A must be entrywise >= 0 (or entrywise <= 0, handled by reflecting both
/// matrices). B is shifted to be nonnegative and the shift is undone exactly.
SandwichBounds sandwich_bounds(const Spectrum& a, const Spectrum& b, BetaClass beta,
                               const EvalOptions& options = {});

struct ConvergenceRow {
  std::size_t n = 0;
  std::size_t m = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  LogScalar lower_log;
  LogScalar upper_log;
  Method method = Method::exact;
  double stderr = 0.0;
  double shift = 0.0;
};

struct ReportSummary {
  double max_gap = 0.0;
  double final_gap = 0.0;
  bool monotone = true;  // gap nonincreasing along rows
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  int beta = 2;
  std::string measure;  // JSON descriptor of mu
  std::string rank_rule;
  double t = 0.0;
  std::uint64_t seed = 0;
  PrefactorMode prefactor = PrefactorMode::none;

  ReportSummary summary() const;
};

struct ConvergenceConfig {
  RankRule rank_rule = RankRule::cbrt;
  double t = 0.5;
  std::vector<std::size_t> dims{8, 16, 32, 64};
  BetaClass beta = BetaClass::unitary();
  EvalOptions eval{};
  std::uint64_t seed = 0;
  PrefactorMode prefactor = PrefactorMode::none;
  bool with_bounds = true;
};

/// One row per N: B_N quantile-sampled from mu, A_N = diag(t, ..., t, 0, ...)
/// with rank_for(rule, N) copies of t.
ConvergenceReport convergence_study(const SpectralMeasure& mu, const ConvergenceConfig& config);

struct DiluteRow {
  double a = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  double proxy = 0.0;   // a^{-1} (1/n^2) log I
  double target = 0.0;  // int f_mu dnu
  double gap = 0.0;
  LogScalar lower_log;
  LogScalar upper_log;
  Method method = Method::exact;
  double stderr = 0.0;
};

struct DiluteReport {
  std::vector<DiluteRow> rows;
  int beta = 2;
  std::string nu;
  std::string mu;
  std::uint64_t seed = 0;

  ReportSummary summary() const;
};

struct DiluteConfig {
  std::vector<double> a_grid{0.5, 0.25};
  std::size_t n = 64;
  BetaClass beta = BetaClass::unitary();
  EvalOptions eval{};
  std::uint64_t seed = 0;
  bool with_bounds = true;
};

/// Finite-n proxy of lim_{a->0} a^{-1} I~(nu_a, mu) with nu_a = a nu + (1-a) delta_0.
/// For each a, A_n has ceil(a n) eigenvalues quantile-sampled from nu and the
/// rest zero; B_n is quantile-sampled from mu, which must have a density
/// bounded below on its support (uniform kind).
DiluteReport dilute_rank_limit(const SpectralMeasure& nu, const SpectralMeasure& mu,
                               const DiluteConfig& config);

}  // namespace hciz
