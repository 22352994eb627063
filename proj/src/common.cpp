#include "specising/common.hpp"

#include <algorithm>

namespace specising {

double log_sum_exp(std::span<const double> log_terms) {
  LogSumAccumulator acc;
  for (double x : log_terms) acc.add(x);
  return acc.value();
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_chunks(int num_chunks, int threads, const std::function<void(int)>& body) {
  threads = std::min(resolve_thread_count(threads), num_chunks);
  if (threads <= 1) {
    for (int c = 0; c < num_chunks; ++c) body(c);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int c = next.fetch_add(1);
        if (c >= num_chunks) break;
        body(c);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace specising
