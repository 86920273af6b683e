#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tbl/fredholm.hpp"

namespace tbl {

/// Integer partition, weakly decreasing positive parts.
struct Partition {
  std::vector<std::int64_t> parts;

  std::int64_t weight() const;
  std::int64_t rows() const { return static_cast<std::int64_t>(parts.size()); }
  /// lambda_i with the empty-row convention lambda_i = 0 for i > rows.
  std::int64_t part(std::int64_t i) const {
    return (i >= 1 && i <= rows()) ? parts[static_cast<std::size_t>(i - 1)] : 0;
  }
};

/// One draw from the Poissonized Plancherel measure: n ~ Poisson(L^2), a
/// uniform permutation of n, RSK row insertion, keep the shape. All randomness
/// comes from mt19937_64 with portable hand-rolled distributions, so results
/// are bit-identical across platforms for a given seed.
Partition sample_plancherel(double L, std::uint64_t seed);

/// In-stream variant for samplers that own the engine.
Partition sample_plancherel(double L, std::mt19937_64& rng);

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of E prod_i (1 - sigma(lambda_i - i - s)) under the
/// Poissonized Plancherel measure. The factors beyond the last row collapse
/// into the analytic partial product prod_{i>rows} (1 - sigma(-i-s)).
McEstimate multiplicative_statistic_mc(const SigmaProfile& sigma, double L, HalfInt s,
                                       std::int64_t n_samples, std::uint64_t seed);

/// Same, for several thresholds sharing one partition stream (common random
/// numbers: differences across s are low-variance).
std::vector<McEstimate> multiplicative_statistic_mc_sweep(const SigmaProfile& sigma, double L,
                                                          const std::vector<HalfInt>& s_list,
                                                          std::int64_t n_samples,
                                                          std::uint64_t seed);

namespace detail {

/// Poisson draw by chunked inversion, exact for any lambda <= 1e6.
std::int64_t poisson_draw(double lambda, std::mt19937_64& rng);

/// Uniform integer in [0, bound) by rejection, portable.
std::uint64_t uniform_below(std::uint64_t bound, std::mt19937_64& rng);

/// RSK shape of a permutation given as values perm[0..n-1].
Partition rsk_shape(const std::vector<std::int64_t>& perm);

}  // namespace detail

}  // namespace tbl
