#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace icb {

template <class Body>
void for_each_block(std::size_t n, std::uint64_t seed, Body&& body) {
  const std::size_t blocks = (n + kSampleBlock - 1) / kSampleBlock;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(sweep_threads(), blocks));
  auto run_block = [&](std::size_t blk) {
    std::mt19937_64 rng = block_rng(seed, blk);
    const std::size_t begin = blk * kSampleBlock;
    body(begin, std::min(n, begin + kSampleBlock), rng);
  };
  if (workers <= 1) {
    for (std::size_t blk = 0; blk < blocks; ++blk) run_block(blk);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t blk = next++; blk < blocks; blk = next++) {
        try {
          run_block(blk);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace icb
