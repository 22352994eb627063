#include "specising/exact_dos.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace specising {

namespace {

// Exact incremental Gray-code enumeration in rational arithmetic.
// visit(mask, energy) is called for every configuration.
template <typename Visitor>
void exact_enumerate(const SymmetricInteraction& J, Visitor&& visit) {
  const int n = J.dimension();
  std::vector<std::vector<std::pair<int, mpq_class>>> adj(static_cast<std::size_t>(n));
  mpq_class e = 0;
  for (const auto& entry : J.entries()) {
    if (!std::isfinite(entry.w))
      throw std::invalid_argument("exact_dos: non-finite weight has no rational value");
    mpq_class w(entry.w);
    if (entry.i == entry.j) {
      e += w / 2;  // sigma_i^2 = 1
    } else {
      adj[static_cast<std::size_t>(entry.i)].emplace_back(entry.j, w);
      adj[static_cast<std::size_t>(entry.j)].emplace_back(entry.i, w);
    }
  }

  // start at all-minus: off-diagonal terms contribute +w each
  std::vector<int> spins(static_cast<std::size_t>(n), -1);
  std::vector<mpq_class> h(static_cast<std::size_t>(n), mpq_class(0));
  for (int i = 0; i < n; ++i)
    for (const auto& [j, w] : adj[static_cast<std::size_t>(i)]) {
      h[static_cast<std::size_t>(i)] += spins[static_cast<std::size_t>(j)] * w;
      if (i < j) e += w * spins[static_cast<std::size_t>(i)] * spins[static_cast<std::size_t>(j)];
    }

  std::uint64_t gray = 0;
  visit(gray, e);
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t idx = 1; idx < count; ++idx) {
    const int b = std::countr_zero(idx);
    const std::size_t bs = static_cast<std::size_t>(b);
    e -= 2 * spins[bs] * h[bs];
    spins[bs] = -spins[bs];
    for (const auto& [j, w] : adj[bs]) h[static_cast<std::size_t>(j)] += 2 * spins[bs] * w;
    gray ^= std::uint64_t{1} << b;
    visit(gray, e);
  }
}

void check_cap(const SymmetricInteraction& J, int max_dimension) {
  if (J.dimension() > max_dimension)
    throw std::invalid_argument("exact enumeration capped at N <= " +
                                std::to_string(max_dimension));
}

}  // namespace

std::uint64_t RationalDos::total_states() const {
  std::uint64_t total = 0;
  for (const auto& [e, c] : counts) total += c;
  return total;
}

double RationalDos::log_z() const {
  if (counts.empty()) return -std::numeric_limits<double>::infinity();
  long double max_e = -std::numeric_limits<long double>::infinity();
  for (const auto& [e, c] : counts) max_e = std::max(max_e, (long double)mpq_get_d(e.get_mpq_t()));
  long double sum = 0.0L, comp = 0.0L;
  for (const auto& [e, c] : counts) {
    // mpq -> long double via num/den keeps ~1e-19 relative accuracy
    const long double num = mpz_get_d(e.get_num_mpz_t());
    const long double den = mpz_get_d(e.get_den_mpz_t());
    const long double x = static_cast<long double>(c) * expl(num / den - max_e);
    const long double y = x - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return static_cast<double>(max_e + logl(sum - comp));
}

RationalDos exact_dos(const SymmetricInteraction& J, int max_dimension) {
  check_cap(J, max_dimension);
  RationalDos dos;
  exact_enumerate(J, [&](std::uint64_t, const mpq_class& e) { ++dos.counts[e]; });
  return dos;
}

std::pair<RationalDos, RationalDos> phase_split_dos(const SymmetricInteraction& J,
                                                    const std::vector<int>& terminals,
                                                    int max_dimension) {
  check_cap(J, max_dimension);
  const int n = J.dimension();
  std::uint64_t terminal_mask = 0;
  for (int s : terminals) {
    if (s < 0 || s >= n) throw std::invalid_argument("phase_split_dos: terminal out of range");
    terminal_mask |= std::uint64_t{1} << s;
  }
  const int non_terminal = n - std::popcount(terminal_mask);
  if (non_terminal % 2 == 0)
    throw std::invalid_argument("phase_split_dos: non-terminal count must be odd (no ties)");

  std::pair<RationalDos, RationalDos> split;
  const std::uint64_t free_mask = (n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1) &
                                  ~terminal_mask;
  exact_enumerate(J, [&](std::uint64_t mask, const mpq_class& e) {
    // plus count among non-terminals vs half of their number
    const int plus = std::popcount(mask & free_mask);
    auto& dos = (2 * plus > non_terminal) ? split.first : split.second;
    ++dos.counts[e];
  });
  return split;
}

}  // namespace specising
