#include "hciz/hciz_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "hciz/errors.hpp"
#include "hciz/haar.hpp"

namespace hciz {

namespace {

struct ChunkSums {
  double max_exponent = -std::numeric_limits<double>::infinity();
  double sum = 0.0;     // sum exp(e - max)
  double sum_sq = 0.0;  // sum exp(2 (e - max))
  std::size_t count = 0;

  void add(double e) {
    if (e > max_exponent) {
      const double r = std::exp(max_exponent - e);
      sum *= r;
      sum_sq *= r * r;
      max_exponent = e;
    }
    const double w = std::exp(e - max_exponent);
    sum += w;
    sum_sq += w * w;
    ++count;
  }
};

// Columns of U that the integrand actually reads, and the weight each carries.
struct ActiveColumns {
  std::vector<double> weights;  // per generated complex column
  std::size_t generated = 0;    // columns (quaternionic for beta = 4) to generate
};

ActiveColumns active_columns(const Spectrum& a, BetaClass beta) {
  ActiveColumns out;
  if (beta.value() == 4) {
    // Permuting quaternionic columns preserves Haar measure on Sp; keep pairs intact.
    for (std::size_t q = 0; q < a.size() / 2; ++q) {
      if (a[2 * q] == 0.0 && a[2 * q + 1] == 0.0) continue;
      out.weights.push_back(a[2 * q]);
      out.weights.push_back(a[2 * q + 1]);
      ++out.generated;
    }
  } else {
    for (double v : a.values())
      if (v != 0.0) out.weights.push_back(v);
    out.generated = out.weights.size();
  }
  return out;
}

}  // namespace

std::size_t resolve_workers(std::size_t requested) {
  std::size_t workers = requested;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HCIZ_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && cap > 0) workers = std::min<std::size_t>(workers, cap);
  }
  return std::max<std::size_t>(workers, 1);
}

McEstimate hciz_mc_estimate(const Spectrum& a, const Spectrum& b, BetaClass beta, const McOptions& options) {
  if (a.size() != b.size() || a.empty())
    throw DomainError("Monte Carlo needs nonempty spectra of equal dimension");
  if (beta.value() == 4 && a.size() % 2 != 0)
    throw DomainError("symplectic integral needs even dimension, got " + std::to_string(a.size()));
  if (options.n_samples < 2) throw DomainError("Monte Carlo needs at least two samples");
  if (options.chunks < 1 || options.chunks > options.n_samples)
    throw DomainError("chunk count must lie in [1, n_samples]");

  const std::size_t n = a.size();
  const auto nd = static_cast<double>(n);
  const ActiveColumns active = active_columns(a, beta);
  const std::size_t chunks = options.chunks;
  std::vector<ChunkSums> partial(chunks);

  auto run_chunk = [&](std::size_t k) {
    const std::size_t base = options.n_samples / chunks;
    const std::size_t count = base + (k < options.n_samples % chunks ? 1 : 0);
    ChunkSums acc;
    if (active.generated == 0) {
      for (std::size_t s = 0; s < count; ++s) acc.add(0.0);
    } else {
      Rng rng = make_stream(options.seed, k);
      for (std::size_t s = 0; s < count; ++s) {
        const ComplexMatrix u = haar_columns(beta, n, active.generated, rng);
        acc.add(nd * trace_form(u, active.weights, b));
      }
    }
    partial[k] = acc;
  };

  const std::size_t workers = std::min(resolve_workers(options.workers), chunks);
  if (workers <= 1) {
    for (std::size_t k = 0; k < chunks; ++k) run_chunk(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < chunks; k = next++) run_chunk(k);
      });
  }

  double max_exponent = -std::numeric_limits<double>::infinity();
  for (const auto& p : partial) max_exponent = std::max(max_exponent, p.max_exponent);
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& p : partial) {
    const double r = std::exp(p.max_exponent - max_exponent);
    sum += p.sum * r;
    sum_sq += p.sum_sq * r * r;
  }
  const auto count = static_cast<double>(options.n_samples);
  const double mean = sum / count;
  const double variance = std::max(0.0, (sum_sq / count - mean * mean) * count / (count - 1.0));

  McEstimate est;
  est.log_mean = LogScalar::from_log(max_exponent + std::log(mean));
  est.stderr_log = std::sqrt(variance / count) / mean;
  est.n_samples = options.n_samples;
  est.seed = options.seed;
  est.chunks = chunks;
  return est;
}

}  // namespace hciz
