#include "hciz/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hciz/errors.hpp"
#include "hciz/io.hpp"

namespace hciz {

namespace {

std::uint64_t factor_seed(std::uint64_t seed, std::size_t step, int side) {
  // splitmix64 finalizer over (seed, step, side)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (2 * step + static_cast<std::uint64_t>(side) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Spectrum padded(std::vector<double> nonzero, std::size_t n) {
  nonzero.resize(n, 0.0);
  return Spectrum(std::move(nonzero));
}

struct Factor {
  LogScalar value;
  double stderr = 0.0;
};

Factor peeled_factor(const std::vector<double>& weights, const Spectrum& trimmed, BetaClass beta,
                     const EvalOptions& options, std::uint64_t seed) {
  if (beta.value() == 2) return {hciz_rank_one(weights.front(), trimmed), 0.0};
  McOptions mc = options.mc;
  mc.seed = seed;
  const auto est = hciz_mc_estimate(padded(weights, trimmed.size()), trimmed, beta, mc);
  return {est.log_mean, est.stderr_log};
}

template <typename Row>
ReportSummary summarize(const std::vector<Row>& rows) {
  ReportSummary s;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    s.max_gap = std::max(s.max_gap, rows[i].gap);
    if (i > 0 && rows[i].gap > rows[i - 1].gap) s.monotone = false;
  }
  if (!rows.empty()) s.final_gap = rows.back().gap;
  return s;
}

bool sign_consistent(const Spectrum& a) {
  return a.min() >= 0.0 || a.max() <= 0.0;
}

}  // namespace

std::string_view method_name(Method m) { return m == Method::exact ? "exact" : "mc"; }

Method parse_method(std::string_view name) {
  if (name == "exact") return Method::exact;
  if (name == "mc") return Method::mc;
  throw DomainError("unknown method \"" + std::string(name) + "\" (expected exact|mc)");
}

std::string_view prefactor_name(PrefactorMode p) { return p == PrefactorMode::none ? "none" : "scaled"; }

PrefactorMode parse_prefactor(std::string_view name) {
  if (name == "none") return PrefactorMode::none;
  if (name == "scaled") return PrefactorMode::scaled;
  throw DomainError("unknown prefactor mode \"" + std::string(name) + "\" (expected none|scaled)");
}

std::string_view rank_rule_name(RankRule r) {
  switch (r) {
    case RankRule::one: return "one";
    case RankRule::cbrt: return "cbrt";
    case RankRule::sqrt: return "sqrt";
    case RankRule::n_over_log: return "nlog";
  }
  return "?";
}

RankRule parse_rank_rule(std::string_view name) {
  if (name == "one" || name == "1") return RankRule::one;
  if (name == "cbrt") return RankRule::cbrt;
  if (name == "sqrt") return RankRule::sqrt;
  if (name == "nlog") return RankRule::n_over_log;
  throw DomainError("unknown rank rule \"" + std::string(name) + "\" (expected one|cbrt|sqrt|nlog)");
}

std::size_t rank_for(RankRule rule, std::size_t n) {
  if (n == 0) throw DomainError("dimension must be positive");
  std::size_t r = 1;
  switch (rule) {
    case RankRule::one:
      break;
    case RankRule::cbrt:
      while (r * r * r < n) ++r;
      break;
    case RankRule::sqrt:
      while (r * r < n) ++r;
      break;
    case RankRule::n_over_log:
      if (n > 2) r = static_cast<std::size_t>(std::ceil(static_cast<double>(n) / std::log(static_cast<double>(n))));
      break;
  }
  return std::clamp<std::size_t>(r, 1, n);
}

ScaledLog lhs_scaled_log(const Spectrum& a, const Spectrum& b, BetaClass beta, const EvalOptions& options) {
  const std::size_t m = a.rank();
  if (m == 0) throw DomainError("small-rank scaling needs rank(A) >= 1");
  if (a.size() != b.size()) throw DomainError("spectra differ in dimension");
  const double scale = static_cast<double>(a.size()) * static_cast<double>(m);
  ScaledLog out;
  if (options.method == Method::exact) {
    if (beta.value() != 2)
      throw UnsupportedMethodError("exact evaluation exists only for beta = 2; use method mc");
    out.integral = hciz_confluent(a, b, options.precision_bits);
    out.value = out.integral.log() / scale;
  } else {
    const auto est = hciz_mc_estimate(a, b, beta, options.mc);
    out.integral = est.log_mean;
    out.value = est.log_mean.log() / scale;
    out.stderr = est.stderr_log / scale;
  }
  return out;
}

double rhs_f_average(const Spectrum& a, const SpectralMeasure& mu, BetaClass beta, PrefactorMode mode) {
  double sum = 0.0;
  std::size_t m = 0;
  for (double v : a.values()) {
    if (v == 0.0) continue;
    sum += f_beta(mu, v, beta);
    ++m;
  }
  if (m == 0) throw DomainError("average of f over a rank-zero matrix");
  const double avg = sum / static_cast<double>(m);
  return mode == PrefactorMode::scaled ? 0.5 * beta.as_double() * avg : avg;
}

SandwichBounds sandwich_bounds(const Spectrum& a_in, const Spectrum& b_in, BetaClass beta,
                               const EvalOptions& options) {
  if (a_in.size() != b_in.size() || a_in.empty())
    throw DomainError("sandwich bounds need nonempty spectra of equal dimension");
  if (!sign_consistent(a_in))
    throw DomainError(
        "sandwich bounds need A >= 0 (or A <= 0); shift A by a multiple of the identity first");
  const std::size_t n = a_in.size();
  if (beta.value() == 4 && n % 2 != 0) throw DomainError("symplectic bounds need even dimension");

  SandwichBounds out;
  out.reflected = a_in.max() <= 0.0 && a_in.min() < 0.0;
  const Spectrum a = out.reflected ? a_in.scaled(-1.0) : a_in;
  const Spectrum b0 = out.reflected ? b_in.scaled(-1.0) : b_in;
  out.shift = -b0.min();
  const Spectrum b = b0.shifted(out.shift);

  const auto nd = static_cast<double>(n);
  const std::size_t rank = a.rank();
  const std::size_t width = beta.value() == 4 ? 2 : 1;
  LogScalar lower = LogScalar::one(), upper = LogScalar::one();
  double var_lower = 0.0, var_upper = 0.0;
  for (std::size_t first = 0, step = 0; first < rank; first += width, ++step) {
    // Peel a[first .. first+width) into dimension n - first.
    const std::size_t dim = n - first;
    std::vector<double> weights;
    for (std::size_t k = first; k < first + width; ++k) weights.push_back(nd * a[k] / static_cast<double>(dim));
    const auto lo = peeled_factor(weights, trim_spectrum(b, first + 1, TrimSide::lower), beta, options,
                                  factor_seed(options.mc.seed, step, 0));
    const auto hi = peeled_factor(weights, trim_spectrum(b, first + 1, TrimSide::upper), beta, options,
                                  factor_seed(options.mc.seed, step, 1));
    lower *= lo.value;
    upper *= hi.value;
    var_lower += lo.stderr * lo.stderr;
    var_upper += hi.stderr * hi.stderr;
  }
  // log I(A, B) = log I(A, B + x Id) - N x Tr A
  const LogScalar correction = LogScalar::from_log(-nd * out.shift * a.sum());
  out.lower = lower * correction;
  out.upper = upper * correction;
  out.stderr_lower = std::sqrt(var_lower);
  out.stderr_upper = std::sqrt(var_upper);
  return out;
}

ReportSummary ConvergenceReport::summary() const { return summarize(rows); }
ReportSummary DiluteReport::summary() const { return summarize(rows); }

ConvergenceReport convergence_study(const SpectralMeasure& mu, const ConvergenceConfig& config) {
  if (config.t == 0.0) throw DomainError("convergence study needs t != 0 (rank would be zero)");
  ConvergenceReport report;
  report.beta = config.beta.value();
  report.measure = io::measure_to_json(mu).dump();
  report.rank_rule = rank_rule_name(config.rank_rule);
  report.t = config.t;
  report.seed = config.seed;
  report.prefactor = config.prefactor;

  auto dims = config.dims;
  std::sort(dims.begin(), dims.end());
  for (std::size_t n : dims) {
    const Spectrum b = sample_spectrum(mu, n, config.seed);
    const std::size_t m = rank_for(config.rank_rule, n);
    const Spectrum a = padded(std::vector<double>(m, config.t), n);

    EvalOptions eval = config.eval;
    eval.mc.seed = factor_seed(config.seed, n, 2);
    const auto lhs = lhs_scaled_log(a, b, config.beta, eval);

    ConvergenceRow row;
    row.n = n;
    row.m = m;
    row.lhs = lhs.value;
    row.rhs = rhs_f_average(a, mu, config.beta, config.prefactor);
    row.gap = std::abs(row.lhs - row.rhs);
    row.method = config.eval.method;
    row.stderr = lhs.stderr;
    if (config.with_bounds) {
      const auto bounds = sandwich_bounds(a, b, config.beta, eval);
      row.lower_log = bounds.lower;
      row.upper_log = bounds.upper;
      row.shift = bounds.shift;
    }
    report.rows.push_back(row);
  }
  return report;
}

DiluteReport dilute_rank_limit(const SpectralMeasure& nu, const SpectralMeasure& mu, const DiluteConfig& config) {
  if (mu.kind() != SpectralMeasure::Kind::uniform)
    throw DomainError("dilute-rank limit needs mu with a density bounded below on its support (uniform)");
  if (config.n < 1) throw DomainError("dimension must be positive");
  DiluteReport report;
  report.beta = config.beta.value();
  report.nu = io::measure_to_json(nu).dump();
  report.mu = io::measure_to_json(mu).dump();
  report.seed = config.seed;

  const auto nd = static_cast<double>(config.n);
  const Spectrum b = sample_spectrum(mu, config.n, config.seed);
  const double target = nu.integrate([&](double t) { return f_beta(mu, t, config.beta); });

  for (double dilution : config.a_grid) {
    if (!(dilution > 0.0 && dilution <= 1.0)) throw DomainError("dilution a must lie in (0, 1]");
    if (dilution * nd < 1.0)
      throw DomainError("resolution: a * n = " + std::to_string(dilution * nd) + " < 1");
    const auto m = static_cast<std::size_t>(std::ceil(dilution * nd - 1e-9));
    const Spectrum sampled = sample_spectrum(nu, m, config.seed);
    const Spectrum a = padded({sampled.values().begin(), sampled.values().end()}, config.n);

    DiluteRow row;
    row.a = dilution;
    row.n = config.n;
    row.m = m;
    row.target = target;
    row.method = config.eval.method;
    const double scale = dilution * nd * nd;
    if (a.rank() > 0) {
      EvalOptions eval = config.eval;
      eval.mc.seed = factor_seed(config.seed, m, 3);
      const auto lhs = lhs_scaled_log(a, b, config.beta, eval);
      // lhs.value = log I / (n * rank)
      row.proxy = lhs.integral.log() / scale;
      row.stderr = lhs.stderr * nd * static_cast<double>(a.rank()) / scale;
      if (config.with_bounds && sign_consistent(a)) {
        const auto bounds = sandwich_bounds(a, b, config.beta, eval);
        row.lower_log = bounds.lower;
        row.upper_log = bounds.upper;
      }
    } else {
      row.lower_log = LogScalar::one();
      row.upper_log = LogScalar::one();
    }
    row.gap = std::abs(row.proxy - row.target);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace hciz
