#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "icb/model.hpp"

namespace icb {

/// Samples are processed in fixed blocks; each block draws from its own
/// generator seeded by (seed, block index), so results do not depend on how
/// blocks are scheduled across threads.
inline constexpr std::size_t kSampleBlock = 1024;

std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t block);

/// Worker count used by parallel sweeps: ICB_THREADS if set, otherwise the
/// hardware concurrency.
unsigned sweep_threads();

/// Runs body(begin, end, rng) for every block of [0, n). Blocks run
/// concurrently; body must only write to per-index storage.
template <class Body>
void for_each_block(std::size_t n, std::uint64_t seed, Body&& body);

double uniform(std::mt19937_64& rng, double lo, double hi);
double gaussian(std::mt19937_64& rng, double sigma);

/// Uniform state in the data box.
State sample_state(std::mt19937_64& rng, const DomainBounds& b);

/// State with active contact: |z - theta| <= v_max*dt and v below the contact
/// threshold, so step_explicit applies a positive impulse.
State sample_contact_state(std::mt19937_64& rng, const ModelParams& p, const DomainBounds& b);

/// Certification mix, one quarter each: on-graph points; graph points with
/// Gaussian noise (sigma = 0.05) on z, v and y; uniform states with y uniform in
/// [-v_max, v_max]; contact states with y uniform in [-v_max, v_max].
Datapoint sample_mixed_datapoint(std::mt19937_64& rng, const ModelParams& p, const DomainBounds& b);

/// n datapoints from sample_mixed_datapoint, deterministic in seed.
std::vector<Datapoint> mixed_datapoints(const ModelParams& p, const DomainBounds& b, std::size_t n,
                                        std::uint64_t seed);

}  // namespace icb

#include "icb/detail/parallel.hpp"
