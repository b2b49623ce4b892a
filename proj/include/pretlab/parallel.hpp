#pragma once

// Deterministic block-parallel reduction. Work over [1,x] is cut into fixed
// 2^16 blocks; workers grab blocks by atomic counter, partial results land in
// a per-block slot and are combined in block order, so the result is identical
// for every thread count.

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pretlab {

constexpr std::uint64_t kBlockSize = 1u << 16;

inline unsigned effective_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// block_fn(lo, hi) computes the partial for n in [lo, hi).
template <typename T, typename BlockFn>
std::vector<T> map_blocks(std::uint64_t lo, std::uint64_t hi, BlockFn block_fn,
                          unsigned threads = 0) {
  if (hi <= lo) return {};
  std::uint64_t nblocks = (hi - lo + kBlockSize - 1) / kBlockSize;
  std::vector<T> partials(nblocks);
  unsigned nt = effective_threads(threads);
  if (nt <= 1 || nblocks == 1) {
    for (std::uint64_t b = 0; b < nblocks; ++b) {
      std::uint64_t a = lo + b * kBlockSize;
      partials[b] = block_fn(a, std::min(hi, a + kBlockSize));
    }
    return partials;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error = nullptr;
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::uint64_t b = next.fetch_add(1);
        if (b >= nblocks || failed.load()) return;
        std::uint64_t a = lo + b * kBlockSize;
        try {
          partials[b] = block_fn(a, std::min(hi, a + kBlockSize));
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return partials;
}

template <typename T, typename BlockFn>
T sum_blocks(std::uint64_t lo, std::uint64_t hi, T init, BlockFn block_fn, unsigned threads = 0) {
  auto partials = map_blocks<T>(lo, hi, block_fn, threads);
  T total = init;
  for (auto& p : partials) total += p;  // fixed order
  return total;
}

}  // namespace pretlab
