#pragma once

#include <cstddef>
#include <cstdint>

#include "hciz/log_scalar.hpp"
#include "hciz/measures.hpp"
#include "hciz/transforms.hpp"

namespace hciz {

struct McOptions {
  std::size_t n_samples = 100000;
  std::uint64_t seed = 0;
  /// Number of independent substreams; fixes the reduction order.
  std::size_t chunks = 16;
  /// Worker threads; 0 means HCIZ_THREADS or hardware concurrency. Never
  /// affects the result.
  std::size_t workers = 0;
};

struct McEstimate {
  /// log of the sample mean of exp(N Tr U A U* B)
  LogScalar log_mean;
  /// Delta-method standard error of log_mean.
  double stderr_log = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::size_t chunks = 0;
};

/// Worker count after applying the HCIZ_THREADS cap.
std::size_t resolve_workers(std::size_t requested);

/// Monte Carlo estimate of I_N^{(beta)}(A, B) over Haar-random U.
///
/// Sample s of chunk k is drawn from make_stream(seed, k); chunks hold
/// (max exponent, scaled sum, scaled sum of squares) and are merged in chunk
/// order, so the output is bit-identical for fixed (seed, chunks).
McEstimate hciz_mc_estimate(const Spectrum& a, const Spectrum& b, BetaClass beta,
                            const McOptions& options = {});

}  // namespace hciz
