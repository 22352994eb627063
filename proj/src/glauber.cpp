#include "specising/glauber.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "specising/common.hpp"

namespace specising {

GlauberChain::GlauberChain(const SymmetricInteraction& J, StartConfiguration start,
                           const GlauberOptions& opts)
    : J_(J), opts_(opts), rng_(opts.seed) {
  const int n = J.dimension();
  spins_.resize(static_cast<std::size_t>(n));
  switch (start) {
    case StartConfiguration::all_plus:
      std::fill(spins_.begin(), spins_.end(), std::int8_t{1});
      break;
    case StartConfiguration::all_minus:
      std::fill(spins_.begin(), spins_.end(), std::int8_t{-1});
      break;
    case StartConfiguration::random:
      for (auto& s : spins_) s = (rng_() & 1u) ? std::int8_t{1} : std::int8_t{-1};
      break;
  }
  magnetization_ = 0;
  for (auto s : spins_) magnetization_ += s;
  fields_.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (const auto& [j, w] : J.adjacency()[static_cast<std::size_t>(i)])
      fields_[static_cast<std::size_t>(i)] += w * spins_[static_cast<std::size_t>(j)];
}

void GlauberChain::update() {
  const int n = J_.dimension();
  const auto i = static_cast<std::size_t>(uniform_below(rng_, static_cast<std::uint64_t>(n)));
  const double p_plus = sigmoid(2.0 * fields_[i]);
  const std::int8_t next = uniform_unit(rng_) < p_plus ? 1 : -1;
  if (next == spins_[i]) return;
  spins_[i] = next;
  magnetization_ += 2 * next;
  const double delta = 2.0 * next;
  for (const auto& [j, w] : J_.adjacency()[i]) fields_[static_cast<std::size_t>(j)] += delta * w;
}

void GlauberChain::sweep() {
  const int n = J_.dimension();
  for (int k = 0; k < n; ++k) update();
  ++sweeps_;
  if (opts_.debug_audit && sweeps_ % opts_.audit_interval == 0) audit_fields();
}

void GlauberChain::audit_fields() {
  const int n = J_.dimension();
  for (int i = 0; i < n; ++i) {
    double h = 0.0;
    for (const auto& [j, w] : J_.adjacency()[static_cast<std::size_t>(i)])
      h += w * spins_[static_cast<std::size_t>(j)];
    const double drift = std::abs(h - fields_[static_cast<std::size_t>(i)]);
    max_field_drift_ = std::max(max_field_drift_, drift);
    if (drift > opts_.audit_tol * std::max(1.0, J_.max_abs_row_sum()))
      throw std::runtime_error("GlauberChain: cached field drifted beyond audit tolerance at site " +
                               std::to_string(i));
    fields_[static_cast<std::size_t>(i)] = h;
  }
}

std::uint64_t GlauberChain::state_mask() const {
  if (J_.dimension() > 64) throw std::invalid_argument("state_mask: N exceeds 64");
  std::uint64_t mask = 0;
  for (int i = 0; i < J_.dimension(); ++i)
    if (spins_[static_cast<std::size_t>(i)] > 0) mask |= std::uint64_t{1} << i;
  return mask;
}

MixingReport mixing_experiment(const SymmetricInteraction& J, StartConfiguration start,
                               std::uint64_t sweeps, std::uint64_t seed,
                               std::uint64_t trace_stride, const GlauberOptions& opts) {
  if (sweeps < 1) throw std::invalid_argument("mixing_experiment: sweeps must be >= 1");
  GlauberOptions chain_opts = opts;
  chain_opts.seed = seed;
  GlauberChain chain(J, start, chain_opts);

  MixingReport report;
  report.sweeps = sweeps;
  report.seed = seed;
  report.start = start;
  report.trace_stride = trace_stride > 0 ? trace_stride : std::max<std::uint64_t>(1, sweeps / 1000);

  const double inv_n = 1.0 / static_cast<double>(J.dimension());
  int phase = chain.magnetization() > 0 ? 1 : (chain.magnetization() < 0 ? -1 : 0);
  const int start_phase = start == StartConfiguration::all_minus ? -1 : 1;
  std::uint64_t plus_sweeps = 0, minus_sweeps = 0;

  for (std::uint64_t s = 1; s <= sweeps; ++s) {
    chain.sweep();
    const int m = chain.magnetization();
    if (s % report.trace_stride == 0)
      report.magnetization_trace.push_back(m * inv_n);
    if (m > 0)
      ++plus_sweeps;
    else if (m < 0)
      ++minus_sweeps;
    const int sign = m > 0 ? 1 : (m < 0 ? -1 : 0);
    if (sign != 0) {
      if (phase != 0 && sign != phase) ++report.sign_changes;
      phase = sign;
      if (!report.first_escape_sweep && sign != start_phase &&
          start != StartConfiguration::random)
        report.first_escape_sweep = s;
    }
  }
  const double denom = static_cast<double>(plus_sweeps + minus_sweeps);
  if (denom > 0) {
    report.plus_occupancy = static_cast<double>(plus_sweeps) / denom;
    report.minus_occupancy = static_cast<double>(minus_sweeps) / denom;
  }
  return report;
}

std::vector<double> empirical_state_distribution(const SymmetricInteraction& J,
                                                 std::uint64_t updates, std::uint64_t seed,
                                                 std::uint64_t burn_in_updates) {
  const int n = J.dimension();
  if (n > 20) throw std::invalid_argument("empirical_state_distribution: N capped at 20");
  GlauberOptions opts;
  opts.seed = seed;
  GlauberChain chain(J, StartConfiguration::random, opts);
  for (std::uint64_t u = 0; u < burn_in_updates; ++u) chain.update();
  std::vector<std::uint64_t> counts(std::size_t{1} << n, 0);
  for (std::uint64_t u = 0; u < updates; ++u) {
    chain.update();
    ++counts[chain.state_mask()];
  }
  std::vector<double> dist(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    dist[i] = static_cast<double>(counts[i]) / static_cast<double>(updates);
  return dist;
}

}  // namespace specising
