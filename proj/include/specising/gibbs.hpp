#pragma once

#include <optional>
#include <span>
#include <vector>

#include "specising/interaction.hpp"

namespace specising {

struct BruteForceOptions {
  int max_dimension = 30;     // hard cap on 2^N enumeration
  bool with_table = false;    // full probability table (N <= table_max_dimension)
  int table_max_dimension = 25;
  int threads = 0;            // <= 0: all hardware threads
};

struct GibbsSummary {
  double log_z;
  // probabilities[mask]: bit i set <=> spin i is +1. Present only when requested.
  std::optional<std::vector<double>> probabilities;
};

// log Z by exhaustive enumeration, Gray-code incremental energies,
// max-shifted log-domain accumulation. Deterministic for a given N
// independent of thread count.
GibbsSummary brute_force_log_z(const SymmetricInteraction& J,
                               const BruteForceOptions& opts = {});

// mu_J(sigma_i = +1 | rest) = 1/(1 + exp(-2 h_i)); the diagonal drops out.
double conditional_spin_probability(const SymmetricInteraction& J,
                                    const SpinConfiguration& sigma, int site);

// 1/2 * sum |p - q|; both inputs must sum to 1 within 1e-9.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace specising
