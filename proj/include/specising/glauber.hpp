#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "specising/interaction.hpp"

namespace specising {

enum class StartConfiguration { all_plus, all_minus, random };

struct GlauberOptions {
  std::uint64_t seed = 1;
  // debug audit: every audit_interval sweeps, compare the cached local fields
  // against a fresh recomputation, then refresh the cache. Catches update
  // logic errors; the tolerance absorbs float drift of the incremental path.
  bool debug_audit = false;
  std::uint64_t audit_interval = 1000;
  double audit_tol = 1e-9;
};

// Single-site heat-bath chain with cached local fields and O(row support)
// incremental updates. Reproducible bit-for-bit for a fixed seed.
class GlauberChain {
 public:
  GlauberChain(const SymmetricInteraction& J, StartConfiguration start,
               const GlauberOptions& opts = {});

  void update();  // one site update at a uniformly random site
  void sweep();   // N updates

  int magnetization() const { return magnetization_; }
  const std::vector<std::int8_t>& spins() const { return spins_; }
  std::uint64_t sweeps_done() const { return sweeps_; }
  std::uint64_t state_mask() const;  // bit i set <=> spin i = +1 (N <= 64)

  double max_field_drift() const { return max_field_drift_; }

 private:
  void audit_fields();

  const SymmetricInteraction& J_;
  GlauberOptions opts_;
  std::mt19937_64 rng_;
  std::vector<std::int8_t> spins_;
  std::vector<double> fields_;
  int magnetization_ = 0;
  std::uint64_t sweeps_ = 0;
  double max_field_drift_ = 0.0;
};

struct MixingReport {
  std::uint64_t sweeps = 0;
  std::uint64_t seed = 0;
  StartConfiguration start = StartConfiguration::all_plus;
  std::uint64_t trace_stride = 1;
  std::vector<double> magnetization_trace;  // mean spin, subsampled
  double plus_occupancy = 0.0;              // fraction of sweeps with m > 0
  double minus_occupancy = 0.0;
  std::uint64_t sign_changes = 0;           // m == 0 keeps the previous phase
  std::optional<std::uint64_t> first_escape_sweep;  // first sweep in the other phase
};

MixingReport mixing_experiment(const SymmetricInteraction& J, StartConfiguration start,
                               std::uint64_t sweeps, std::uint64_t seed,
                               std::uint64_t trace_stride = 0,  // 0: pick ~1000 points
                               const GlauberOptions& opts = {});

// Occupancy histogram over all 2^N states along the chain (N <= 20),
// one count per single-site update after burn-in.
std::vector<double> empirical_state_distribution(const SymmetricInteraction& J,
                                                 std::uint64_t updates, std::uint64_t seed,
                                                 std::uint64_t burn_in_updates = 0);

}  // namespace specising
