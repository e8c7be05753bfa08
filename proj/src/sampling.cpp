#include "icb/sampling.hpp"

#include <cstdlib>
#include <string>
#include <thread>
#include <algorithm>

#include "icb/contact_model.hpp"

namespace icb {

std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), 0x1cbu};
  return std::mt19937_64(seq);
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("ICB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double gaussian(std::mt19937_64& rng, double sigma) {
  if (sigma <= 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

State sample_state(std::mt19937_64& rng, const DomainBounds& b) {
  const double z = uniform(rng, b.z_lo, b.z_hi);
  const double v = uniform(rng, -b.v_max, b.v_max);
  return {z, v};
}

State sample_contact_state(std::mt19937_64& rng, const ModelParams& p, const DomainBounds& b) {
  const double band = b.v_max * p.dt;
  const double z = uniform(rng, p.theta - band, p.theta + band);
  // contact_slack > 0  <=>  v < a*dt + (theta - z)/dt
  const double v_hi = std::min(b.v_max, p.a_grav * p.dt + (p.theta - z) / p.dt);
  double v = uniform(rng, -b.v_max, v_hi);
  if (!(contact_slack(p, {z, v}) > 0.0)) v = -b.v_max;
  return {z, v};
}

Datapoint sample_mixed_datapoint(std::mt19937_64& rng, const ModelParams& p, const DomainBounds& b) {
  const int kind = static_cast<int>(uniform(rng, 0.0, 4.0));
  switch (kind) {
    case 0: {
      const State x = sample_state(rng, b);
      return {x, step_explicit(p, x)};
    }
    case 1: {
      const State x = uniform(rng, 0.0, 1.0) < 0.5 ? sample_state(rng, b) : sample_contact_state(rng, p, b);
      const double y = step_explicit(p, x);
      const State xn{x.z + gaussian(rng, 0.05), x.v + gaussian(rng, 0.05)};
      return {xn, y + gaussian(rng, 0.05)};
    }
    case 2: {
      const State x = sample_state(rng, b);
      return {x, uniform(rng, -b.v_max, b.v_max)};
    }
    default: {
      const State x = sample_contact_state(rng, p, b);
      return {x, uniform(rng, -b.v_max, b.v_max)};
    }
  }
}

std::vector<Datapoint> mixed_datapoints(const ModelParams& p, const DomainBounds& b, std::size_t n,
                                        std::uint64_t seed) {
  std::vector<Datapoint> out(n);
  for_each_block(n, seed, [&](std::size_t begin, std::size_t end, std::mt19937_64& rng) {
    for (std::size_t i = begin; i < end; ++i) out[i] = sample_mixed_datapoint(rng, p, b);
  });
  return out;
}

}  // namespace icb
