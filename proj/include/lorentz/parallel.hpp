// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "lorentz/random.hpp"

namespace lorentz {

/// Seed and worker count for a Monte Carlo ensemble.
struct McOptions {
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: LORENTZ_THREADS, then hardware concurrency
};

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LORENTZ_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline constexpr std::uint64_t kChunkSize = 4096;

/**
 * Runs `kernel(rng, begin, end) -> Partial` over fixed-size chunks of
 * [0, n_items) and folds the partial results in chunk order with
 * `merge(acc, partial)`.
 *
 * Chunk k always draws from stream k of the seed, so the result does not
 * depend on the thread count or on scheduling.
 */
template <class Partial, class Kernel, class Merge>
Partial run_chunked(std::uint64_t n_items, const McOptions& opt, Partial init, Kernel&& kernel,
                    Merge&& merge, std::uint64_t chunk_size = kChunkSize) {
  const std::uint64_t n_chunks = (n_items + chunk_size - 1) / chunk_size;
  std::vector<Partial> partials(n_chunks, init);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t k = next.fetch_add(1);
      if (k >= n_chunks) return;
      try {
        Rng rng(opt.seed, k);
        const std::uint64_t begin = k * chunk_size;
        const std::uint64_t end = std::min(n_items, begin + chunk_size);
        partials[k] = kernel(rng, begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(opt.threads), n_chunks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  Partial acc = std::move(init);
  for (auto& p : partials) merge(acc, p);
  return acc;
}

}  // namespace lorentz
