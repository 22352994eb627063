#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <vector>

#include "specising/interaction.hpp"

namespace specising {

// Exact density of states: energy -> number of configurations at that energy,
// with energies as exact rationals (every finite double weight is rational).
// Z = sum_E count(E) * exp(E) symbolically; equality of two RationalDos objects
// is a bit-exact statement about the corresponding partition sums.
struct RationalDos {
  std::map<mpq_class, std::uint64_t> counts;

  std::uint64_t total_states() const;
  // log Z evaluated from the exact table in extended precision.
  double log_z() const;

  bool operator==(const RationalDos& other) const { return counts == other.counts; }
};

// Exhaustive exact enumeration; refuses N > max_dimension (default 20) and
// non-finite weights.
RationalDos exact_dos(const SymmetricInteraction& J, int max_dimension = 20);

// DOS split by the phase of the spins outside `terminals` (their sum's sign).
// Requires an odd number of non-terminal sites so no tie can occur.
// first = plus phase, second = minus phase.
std::pair<RationalDos, RationalDos> phase_split_dos(const SymmetricInteraction& J,
                                                    const std::vector<int>& terminals,
                                                    int max_dimension = 20);

}  // namespace specising
