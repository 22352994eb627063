#include "specising/gibbs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "specising/common.hpp"
#include "specising/detail/gray_enumerate.hpp"

namespace specising {

GibbsSummary brute_force_log_z(const SymmetricInteraction& J, const BruteForceOptions& opts) {
  const int n = J.dimension();
  if (n > opts.max_dimension)
    throw std::invalid_argument("brute_force_log_z: dimension " + std::to_string(n) +
                                " exceeds cap " + std::to_string(opts.max_dimension));
  if (opts.with_table && n > opts.table_max_dimension)
    throw std::invalid_argument("brute_force_log_z: probability table capped at N <= " +
                                std::to_string(opts.table_max_dimension));

  const int chunks = 1 << detail::enumeration_chunk_bits(n);
  std::vector<LogSumAccumulator> partial(static_cast<std::size_t>(chunks));
  std::vector<double> table;
  if (opts.with_table) table.resize(std::size_t{1} << n);

  if (opts.with_table) {
    detail::gray_enumerate_chunked(J, opts.threads, [&](int chunk) {
      auto* acc = &partial[static_cast<std::size_t>(chunk)];
      auto* t = table.data();
      return [acc, t](std::uint64_t mask, double e) {
        acc->add(e);
        t[mask] = e;
      };
    });
  } else {
    detail::gray_enumerate_chunked(J, opts.threads, [&](int chunk) {
      auto* acc = &partial[static_cast<std::size_t>(chunk)];
      return [acc](std::uint64_t, double e) { acc->add(e); };
    });
  }

  LogSumAccumulator total;
  for (const auto& acc : partial) total.merge(acc);

  GibbsSummary summary{total.value(), std::nullopt};
  if (opts.with_table) {
    for (auto& v : table) v = std::exp(v - summary.log_z);
    summary.probabilities = std::move(table);
  }
  return summary;
}

double conditional_spin_probability(const SymmetricInteraction& J,
                                    const SpinConfiguration& sigma, int site) {
  const double h = local_field(J, sigma, site);
  return sigmoid(2.0 * h);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw std::invalid_argument("total_variation: distributions have mismatched supports");
  double sp = 0.0, sq = 0.0;
  for (double x : p) sp += x;
  for (double x : q) sq += x;
  if (std::abs(sp - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9)
    throw std::invalid_argument("total_variation: inputs must sum to 1 within 1e-9");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

}  // namespace specising
