#pragma once

#include "semibiv/bivariate.hpp"
#include "semibiv/validity.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace semibiv {

struct SamplePair {
    double x1 = 0.0;
    double x2 = 0.0;
    bool tied = false;  // drawn from the singular part; x1 == x2 bit for bit
};

struct SampleBatch {
    std::vector<SamplePair> pairs;
    std::size_t tie_count = 0;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    // Rejection statistics (general sampler only).
    std::size_t proposals = 0;
    std::size_t accepted = 0;
};

/// Counter-based generator: a SplitMix64 sequence whose starting point is a
/// hash of (seed, shard, stream). Distinct streams never share state, so the
/// draws of one mixture branch do not depend on how many the other consumed.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t shard, std::uint64_t stream);

    std::uint64_t next();
    // Uniform on the open interval (0, 1).
    double uniform();
    double exponential();

private:
    std::uint64_t state_;
};

struct SamplingOptions {
    // 0: use the hardware concurrency.
    unsigned threads = 0;
    // Samples per shard; each shard has its own derived streams, so output
    // depends on (seed, shard_size) but not on the thread count.
    std::size_t shard_size = 8192;
};

/// Latent competing-risks draw: X1 = min(U1, U3), X2 = min(U2, U3) with
/// U_i = R0^-1(E_i / theta_i). The minimum is taken on the R0 scale so ties
/// are exact.
SampleBatch sample_ph(const PHBivariateModel& model, std::size_t n, std::uint64_t seed,
                      const SamplingOptions& options = {});

/// Mixture draw: with probability 1 - alpha a diagonal pair (T, T),
/// T = R0^-1(E / theta); otherwise rejection sampling from alpha f_a in the
/// compactified wedge coordinates with a piecewise-constant envelope on the
/// grid cells (default grid when none is given).
/// ModelError when alpha is outside [0, 1]; SamplerError when the envelope
/// acceptance rate would be below 0.1%.
SampleBatch sample_general(const GeneralBivariateModel& model, std::size_t n, std::uint64_t seed,
                           const SamplingOptions& options = {},
                           const std::optional<GridSpec>& grid = std::nullopt);

// CSV with header "x1,x2,tied"; shortest round-trip number formatting.
void write_batch_csv(std::ostream& out, const SampleBatch& batch);

}  // namespace semibiv
