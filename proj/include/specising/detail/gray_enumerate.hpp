#pragma once

#include <bit>
#include <cstdint>

#include "specising/common.hpp"
#include "specising/interaction.hpp"

namespace specising::detail {

// Number of fixed high bits used to split the 2^N state space into chunks.
// A function of N only, so results merged in chunk order are reproducible
// for any thread count.
inline int enumeration_chunk_bits(int n) { return n >= 22 ? 6 : 0; }

// Visits all 2^N spin configurations exactly once with O(row support)
// incremental energy updates along a Gray code. factory(chunk) must return a
// callable visitor(mask, energy); each chunk gets its own visitor instance.
template <typename VisitorFactory>
void gray_enumerate_chunked(const SymmetricInteraction& J, int threads,
                            VisitorFactory&& factory) {
  const int n = J.dimension();
  const int chunk_bits = enumeration_chunk_bits(n);
  const int low_bits = n - chunk_bits;
  const auto& adj = J.adjacency();

  auto run_chunk = [&](int chunk) {
    auto visitor = factory(chunk);
    const std::uint64_t high_mask = static_cast<std::uint64_t>(chunk) << low_bits;
    SpinConfiguration sigma = SpinConfiguration::from_mask(n, high_mask);
    double e = energy(J, sigma);
    std::vector<double> h(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      for (const auto& [j, w] : adj[static_cast<std::size_t>(i)])
        h[static_cast<std::size_t>(i)] += w * sigma.spins[static_cast<std::size_t>(j)];

    std::uint64_t gray = 0;
    visitor(high_mask, e);
    const std::uint64_t count = std::uint64_t{1} << low_bits;
    for (std::uint64_t idx = 1; idx < count; ++idx) {
      const int b = std::countr_zero(idx);
      const std::size_t bs = static_cast<std::size_t>(b);
      e -= 2.0 * sigma.spins[bs] * h[bs];
      sigma.spins[bs] = static_cast<std::int8_t>(-sigma.spins[bs]);
      const double delta = 2.0 * sigma.spins[bs];
      for (const auto& [j, w] : adj[bs]) h[static_cast<std::size_t>(j)] += delta * w;
      gray ^= std::uint64_t{1} << b;
      visitor(high_mask | gray, e);
    }
  };

  parallel_chunks(1 << chunk_bits, threads, run_chunk);
}

}  // namespace specising::detail
