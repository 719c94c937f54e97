#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hciz/asymptotics.hpp"
#include "hciz/errors.hpp"
#include "hciz/hciz_exact.hpp"
#include "hciz/hciz_mc.hpp"
#include "hciz/io.hpp"
#include "hciz/measures.hpp"
#include "hciz/transforms.hpp"

namespace hciz::cli {

namespace {

using io::Json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal, independent of the C locale.
std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string log_or_empty(const LogScalar& x) {
  if (x.sign() != 1) return "";
  return num(x.log_abs());
}

struct Grid {
  double lo = 0.0, hi = 0.0, step = 0.0;
};

Grid parse_grid(const std::string& text) {
  Grid g;
  std::vector<double> parts;
  std::size_t pos = 0;
  for (int k = 0; k < 3; ++k) {
    auto next = text.find(':', pos);
    if ((k < 2) != (next != std::string::npos)) throw UsageError("t-grid must be lo:hi:step");
    std::string piece = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    double v = 0.0;
    auto res = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (res.ec != std::errc{} || res.ptr != piece.data() + piece.size() || !std::isfinite(v))
      throw UsageError("bad number \"" + piece + "\" in t-grid");
    parts.push_back(v);
    pos = next + 1;
  }
  g.lo = parts[0];
  g.hi = parts[1];
  g.step = parts[2];
  if (!(g.step > 0.0) || g.hi < g.lo) throw UsageError("t-grid needs lo <= hi and step > 0");
  return g;
}

std::vector<double> grid_points(const Grid& g) {
  const auto count = static_cast<std::size_t>(std::floor((g.hi - g.lo) / g.step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    double t = g.lo + static_cast<double>(k) * g.step;
    out.push_back(std::round(t * 1e12) / 1e12);
  }
  return out;
}

Spectrum pad(const Spectrum& s, std::size_t n) {
  if (s.size() > n) throw DomainError("spectrum longer than requested dimension");
  std::vector<double> v(s.values().begin(), s.values().end());
  v.resize(n, 0.0);
  return Spectrum(std::move(v));
}

// Options shared by every subcommand.
struct Common {
  std::uint64_t seed = 0;
  unsigned precision_bits = kDefaultPrecisionBits;
  int beta = 2;
  std::string output;
};

struct McFlags {
  std::size_t samples = McOptions{}.n_samples;
  std::size_t chunks = McOptions{}.chunks;
  std::size_t workers = 0;
};

struct MeasureArgs {
  std::string measure, spectrum, compare;
  std::size_t sample = 0;
  std::size_t grid_points = BlOptions{}.grid_points;
  std::optional<double> spacing;
};

struct TransformArgs {
  std::string measure;
  std::string t_grid = "-1:1:0.1";
};

struct PairArgs {
  std::string a, b;
  std::size_t n = 0;
  std::string method;
};

struct StudyArgs {
  std::string measure, nu, summary;
  double t = 0.5;
  std::string rank = "cbrt";
  std::vector<std::size_t> dims{8, 16, 32, 64};
  std::vector<double> a_grid{0.5, 0.25};
  std::size_t n = 64;
  std::string method = "exact";
  std::string prefactor = "none";
  bool no_bounds = false;
};

class Runner {
 public:
  Runner(std::ostream& out) : out_(out) {}

  Json config(const std::string& subcommand) const {
    return {{"subcommand", subcommand},
            {"seed", common_.seed},
            {"precision_bits", common_.precision_bits},
            {"beta", common_.beta},
            {"output", common_.output.empty() ? Json("-") : Json(common_.output)}};
  }

  std::ostream& sink() {
    if (common_.output.empty()) return out_;
    file_ = std::make_unique<std::ofstream>(common_.output);
    if (!*file_) throw std::runtime_error("cannot write " + common_.output);
    return *file_;
  }

  EvalOptions eval(const std::string& method) const {
    EvalOptions e;
    e.method = parse_method(method);
    e.precision_bits = common_.precision_bits;
    e.mc.n_samples = mc_.samples;
    e.mc.seed = common_.seed;
    e.mc.chunks = mc_.chunks;
    e.mc.workers = mc_.workers;
    return e;
  }

  Json mc_config() const { return {{"samples", mc_.samples}, {"chunks", mc_.chunks}}; }

  void measure() {
    if (m_.measure.empty() == m_.spectrum.empty())
      throw UsageError("measure needs exactly one of --measure or --spectrum");
    Json result{{"config", config("measure")}};
    auto& cfg = result["config"];
    cfg["measure"] = m_.measure;
    cfg["spectrum"] = m_.spectrum;
    cfg["sample"] = m_.sample;
    cfg["compare"] = m_.compare;
    cfg["grid_points"] = m_.grid_points;
    cfg["spacing"] = m_.spacing ? Json(*m_.spacing) : Json(nullptr);

    std::optional<Spectrum> spectrum;
    SpectralMeasure mu = SpectralMeasure::dirac(0.0);
    if (!m_.spectrum.empty()) {
      spectrum = io::load_spectrum(m_.spectrum);
      mu = empirical_measure(*spectrum);
    } else {
      mu = io::load_measure(m_.measure);
    }
    if (m_.sample > 0) {
      spectrum = sample_spectrum(mu, m_.sample, common_.seed);
      result["spectrum"] = io::spectrum_to_json(*spectrum);
    } else if (spectrum) {
      result["spectrum"] = io::spectrum_to_json(*spectrum);
    }
    result["measure"] = io::measure_to_json(mu);
    result["support"] = {mu.support_min(), mu.support_max()};
    result["mean"] = mu.mean();
    const auto edges = hilbert_edges(mu);
    result["hilbert_edges"] = {{"h_min", finite_or_null(edges.h_min)},
                               {"h_max", finite_or_null(edges.h_max)}};
    if (spectrum) {
      result["rank"] = spectrum->rank();
      if (m_.spacing) result["spacing_ok"] = check_spacing(*spectrum, *m_.spacing);
    }
    if (!m_.compare.empty()) {
      const auto other = io::load_measure(m_.compare);
      const auto target = m_.sample > 0 ? empirical_measure(*spectrum) : mu;
      result["bl_distance"] = bl_distance(target, other, BlOptions{m_.grid_points});
    }
    sink() << result.dump() << '\n';
  }

  void transform() {
    const auto grid = parse_grid(tr_.t_grid);
    const auto mu = io::load_measure(tr_.measure);
    const BetaClass beta(common_.beta);
    Json cfg = config("transform");
    cfg["measure"] = io::measure_to_json(mu);
    cfg["t_grid"] = tr_.t_grid;
    std::ostringstream body;
    body << "# config " << cfg.dump() << '\n';
    body << "t,v,f_beta,branch\n";
    for (double t : grid_points(grid)) {
      const auto v = v_branch(mu, t, beta);
      body << num(t) << ',' << num(v.value) << ',' << num(f_beta(mu, t, beta)) << ','
           << branch_name(v.branch) << '\n';
    }
    sink() << body.str();
  }

  std::pair<Spectrum, Spectrum> load_pair() {
    if (pair_.a.empty() || pair_.b.empty()) throw UsageError("--a-spectrum and --b-spectrum are required");
    auto a = io::load_spectrum(pair_.a);
    auto b = io::load_spectrum(pair_.b);
    if (pair_.n == 0) pair_.n = std::max(a.size(), b.size());
    return {pad(a, pair_.n), pad(b, pair_.n)};
  }

  Json pair_config(const std::string& name) const {
    Json cfg = config(name);
    cfg["a_spectrum"] = pair_.a;
    cfg["b_spectrum"] = pair_.b;
    cfg["n"] = pair_.n;
    return cfg;
  }

  void exact() {
    if (common_.beta != 2)
      throw UnsupportedMethodError("exact evaluation is only available for beta = 2");
    auto [a, b] = load_pair();
    const std::string method = pair_.method.empty() ? "confluent" : pair_.method;
    LogScalar value;
    if (method == "confluent") {
      value = hciz_confluent(a, b, common_.precision_bits);
    } else if (method == "det") {
      value = hciz_det(a, b);
    } else if (method == "rank-one") {
      if (a.rank() > 1) throw DomainError("rank-one method needs A = diag(t, 0, ..., 0)");
      const double t = a.max() != 0.0 ? a.max() : a.min();
      value = hciz_rank_one(t, b);
    } else {
      throw UsageError("unknown exact method \"" + method + "\"");
    }
    Json result = io::log_scalar_to_json(value);
    result["n"] = a.size();
    result["method"] = method;
    result["config"] = pair_config("exact");
    result["config"]["method"] = method;
    sink() << result.dump() << '\n';
  }

  void mc() {
    auto [a, b] = load_pair();
    const auto options = eval("mc").mc;
    const auto est = hciz_mc_estimate(a, b, BetaClass(common_.beta), options);
    Json result = io::mc_estimate_to_json(est);
    result["n"] = a.size();
    result["config"] = pair_config("mc");
    result["config"].update(mc_config());
    sink() << result.dump() << '\n';
  }

  void bounds() {
    auto [a, b] = load_pair();
    const std::string method = pair_.method.empty() ? "exact" : pair_.method;
    const BetaClass beta(common_.beta);
    const auto sb = sandwich_bounds(a, b, beta, eval(method));
    Json result{{"lower", io::log_scalar_to_json(sb.lower)},
                {"upper", io::log_scalar_to_json(sb.upper)},
                {"stderr_lower", sb.stderr_lower},
                {"stderr_upper", sb.stderr_upper},
                {"shift", sb.shift},
                {"reflected", sb.reflected},
                {"n", a.size()}};
    if (beta.value() == 2 && method == "exact")
      result["exact"] = io::log_scalar_to_json(hciz_confluent(a, b, common_.precision_bits));
    result["config"] = pair_config("bounds");
    result["config"]["method"] = method;
    result["config"].update(mc_config());
    sink() << result.dump() << '\n';
  }

  static Json summary_json(const ReportSummary& s) {
    return {{"max_gap", s.max_gap}, {"final_gap", s.final_gap}, {"monotone", s.monotone}};
  }

  void write_summary(const Json& summary) const {
    if (study_.summary.empty()) return;
    std::ofstream f(study_.summary);
    if (!f) throw std::runtime_error("cannot write " + study_.summary);
    f << summary.dump() << '\n';
  }

  void converge() {
    if (study_.measure.empty()) throw UsageError("--measure is required");
    const auto mu = io::load_measure(study_.measure);
    ConvergenceConfig cc;
    cc.rank_rule = parse_rank_rule(study_.rank);
    cc.t = study_.t;
    cc.dims = study_.dims;
    cc.beta = BetaClass(common_.beta);
    cc.eval = eval(study_.method);
    cc.seed = common_.seed;
    cc.prefactor = parse_prefactor(study_.prefactor);
    cc.with_bounds = !study_.no_bounds;
    const auto report = convergence_study(mu, cc);

    Json cfg = config("converge");
    cfg["measure"] = io::measure_to_json(mu);
    cfg["t"] = cc.t;
    cfg["rank"] = rank_rule_name(cc.rank_rule);
    cfg["dims"] = cc.dims;
    cfg["method"] = method_name(cc.eval.method);
    cfg["prefactor"] = prefactor_name(cc.prefactor);
    cfg["bounds"] = cc.with_bounds;
    cfg["summary"] = study_.summary;
    cfg.update(mc_config());

    std::ostringstream body;
    body << "# config " << cfg.dump() << '\n';
    body << "n,m,lhs,rhs,gap,lower,upper,method,stderr\n";
    for (const auto& r : report.rows) {
      body << r.n << ',' << r.m << ',' << num(r.lhs) << ',' << num(r.rhs) << ',' << num(r.gap)
           << ',' << log_or_empty(r.lower_log) << ',' << log_or_empty(r.upper_log) << ','
           << method_name(r.method) << ',' << num(r.stderr) << '\n';
    }
    const Json summary = summary_json(report.summary());
    body << "# summary " << summary.dump() << '\n';
    sink() << body.str();
    write_summary(summary);
  }

  void dilute() {
    if (study_.nu.empty() || study_.measure.empty()) throw UsageError("--nu and --mu are required");
    const auto nu = io::load_measure(study_.nu);
    const auto mu = io::load_measure(study_.measure);
    DiluteConfig dc;
    dc.a_grid = study_.a_grid;
    dc.n = study_.n;
    dc.beta = BetaClass(common_.beta);
    dc.eval = eval(study_.method);
    dc.seed = common_.seed;
    dc.with_bounds = !study_.no_bounds;
    const auto report = dilute_rank_limit(nu, mu, dc);

    Json cfg = config("dilute");
    cfg["nu"] = io::measure_to_json(nu);
    cfg["mu"] = io::measure_to_json(mu);
    cfg["a_grid"] = dc.a_grid;
    cfg["n"] = dc.n;
    cfg["method"] = method_name(dc.eval.method);
    cfg["bounds"] = dc.with_bounds;
    cfg["summary"] = study_.summary;
    cfg.update(mc_config());

    std::ostringstream body;
    body << "# config " << cfg.dump() << '\n';
    body << "a,n,m,lhs,rhs,gap,lower,upper,method,stderr\n";
    for (const auto& r : report.rows) {
      body << num(r.a) << ',' << r.n << ',' << r.m << ',' << num(r.proxy) << ',' << num(r.target)
           << ',' << num(r.gap) << ',' << log_or_empty(r.lower_log) << ','
           << log_or_empty(r.upper_log) << ',' << method_name(r.method) << ',' << num(r.stderr)
           << '\n';
    }
    const Json summary = summary_json(report.summary());
    body << "# summary " << summary.dump() << '\n';
    sink() << body.str();
    write_summary(summary);
  }

  Common common_;
  McFlags mc_;
  MeasureArgs m_;
  TransformArgs tr_;
  PairArgs pair_;
  StudyArgs study_;

 private:
  std::ostream& out_;
  std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  sub->add_option("--precision-bits", c.precision_bits, "MPFR precision for exact evaluation")
      ->capture_default_str()
      ->check(CLI::Range(64u, 65536u));
  sub->add_option("--beta", c.beta, "symmetry class")
      ->capture_default_str()
      ->check(CLI::IsMember({1, 2, 4}));
  sub->add_option("-o,--output", c.output, "output file (default stdout)");
}

void add_mc(CLI::App* sub, McFlags& m) {
  sub->add_option("--samples", m.samples, "Monte Carlo samples")->capture_default_str();
  sub->add_option("--chunks", m.chunks, "independent RNG substreams")->capture_default_str();
  sub->add_option("--workers", m.workers, "worker threads (0 = auto); never changes results");
}

void add_pair(CLI::App* sub, PairArgs& p) {
  sub->add_option("--a-spectrum,--a", p.a, "spectrum JSON for A");
  sub->add_option("--b-spectrum,--b", p.b, "spectrum JSON for B");
  sub->add_option("--n", p.n, "zero-pad both spectra to this dimension");
}

void diagnose(std::ostream& err, const char* kind, const std::string& message) {
  err << Json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Runner r(out);
  CLI::App app{"Spherical integral laboratory", "hciz"};
  app.require_subcommand(1);

  auto* measure = app.add_subcommand("measure", "inspect, sample or compare a measure");
  add_common(measure, r.common_);
  measure->add_option("--measure", r.m_.measure, "measure JSON");
  measure->add_option("--spectrum", r.m_.spectrum, "spectrum JSON (uses its empirical measure)");
  measure->add_option("--sample", r.m_.sample, "emit an n-point quantile spectrum");
  measure->add_option("--compare", r.m_.compare, "measure JSON for a bounded-Lipschitz distance");
  measure->add_option("--grid-points", r.m_.grid_points, "grid size for the distance")
      ->capture_default_str();
  measure->add_option("--spacing", r.m_.spacing, "check s_{i+1} + c/N >= s_i");

  auto* transform = app.add_subcommand("transform", "tabulate v(t) and f_beta(t)");
  add_common(transform, r.common_);
  transform->add_option("--measure", r.tr_.measure, "measure JSON")->required();
  transform->add_option("--t-grid", r.tr_.t_grid, "lo:hi:step")->capture_default_str();

  auto* exact = app.add_subcommand("exact", "unitary spherical integral, exact");
  add_common(exact, r.common_);
  add_pair(exact, r.pair_);
  exact->add_option("--method", r.pair_.method, "confluent, det or rank-one")
      ->check(CLI::IsMember({"confluent", "det", "rank-one"}));

  auto* mc = app.add_subcommand("mc", "Monte Carlo spherical integral");
  add_common(mc, r.common_);
  add_pair(mc, r.pair_);
  add_mc(mc, r.mc_);

  auto* bounds = app.add_subcommand("bounds", "rank-one sandwich bounds on log I");
  add_common(bounds, r.common_);
  add_pair(bounds, r.pair_);
  add_mc(bounds, r.mc_);
  bounds->add_option("--method", r.pair_.method, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));

  auto* converge = app.add_subcommand("converge", "small-rank convergence study");
  add_common(converge, r.common_);
  add_mc(converge, r.mc_);
  converge->add_option("--measure", r.study_.measure, "limiting measure of B")->required();
  converge->add_option("--t", r.study_.t, "nonzero eigenvalue of A")->capture_default_str();
  converge->add_option("--rank", r.study_.rank, "one, cbrt, sqrt or nlog")
      ->capture_default_str()
      ->check(CLI::IsMember({"one", "cbrt", "sqrt", "nlog"}));
  converge->add_option("--dims", r.study_.dims, "comma-separated N values")->delimiter(',');
  converge->add_option("--method", r.study_.method, "exact or mc")
      ->capture_default_str()
      ->check(CLI::IsMember({"exact", "mc"}));
  converge->add_option("--prefactor", r.study_.prefactor, "none or scaled")
      ->capture_default_str()
      ->check(CLI::IsMember({"none", "scaled"}));
  converge->add_flag("--no-bounds", r.study_.no_bounds, "skip sandwich bounds");
  converge->add_option("--csv", r.common_.output, "alias of --output");
  converge->add_option("--summary", r.study_.summary, "write the JSON summary here as well");

  auto* dilute = app.add_subcommand("dilute", "dilute-rank limit study");
  add_common(dilute, r.common_);
  add_mc(dilute, r.mc_);
  dilute->add_option("--nu", r.study_.nu, "measure of the nonzero eigenvalues of A")->required();
  dilute->add_option("--mu,--measure", r.study_.measure, "limiting measure of B")->required();
  dilute->add_option("--a-grid", r.study_.a_grid, "comma-separated fractions")->delimiter(',');
  dilute->add_option("--n", r.study_.n, "dimension")->capture_default_str();
  dilute->add_option("--method", r.study_.method, "exact or mc")
      ->capture_default_str()
      ->check(CLI::IsMember({"exact", "mc"}));
  dilute->add_flag("--no-bounds", r.study_.no_bounds, "skip sandwich bounds");
  dilute->add_option("--csv", r.common_.output, "alias of --output");
  dilute->add_option("--summary", r.study_.summary, "write the JSON summary here as well");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    diagnose(err, "usage", e.what());
    return kExitUsage;
  }

  const std::vector<std::pair<CLI::App*, std::function<void()>>> table{
      {measure, [&] { r.measure(); }},   {transform, [&] { r.transform(); }},
      {exact, [&] { r.exact(); }},       {mc, [&] { r.mc(); }},
      {bounds, [&] { r.bounds(); }},     {converge, [&] { r.converge(); }},
      {dilute, [&] { r.dilute(); }}};
  try {
    for (const auto& [sub, action] : table)
      if (sub->parsed()) action();
  } catch (const UsageError& e) {
    diagnose(err, "usage", e.what());
    return kExitUsage;
  } catch (const UnsupportedMethodError& e) {
    diagnose(err, "unsupported", e.what());
    return kExitDomain;
  } catch (const OutOfBandError& e) {
    diagnose(err, "out_of_band", e.what());
    return kExitDomain;
  } catch (const DegeneracyError& e) {
    diagnose(err, "degenerate", e.what());
    return kExitDomain;
  } catch (const DomainError& e) {
    diagnose(err, "domain", e.what());
    return kExitDomain;
  } catch (const PrecisionError& e) {
    diagnose(err, "precision", e.what());
    return kExitPrecision;
  } catch (const std::exception& e) {
    diagnose(err, "runtime", e.what());
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace hciz::cli
