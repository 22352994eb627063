#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "specising/interaction.hpp"

namespace specising {

enum class PhaseLabel : int { plus = +1, minus = -1 };

inline PhaseLabel opposite(PhaseLabel p) {
  return p == PhaseLabel::plus ? PhaseLabel::minus : PhaseLabel::plus;
}

// Complete-graph gadget with J = (beta/r) * ones (diagonal included) and
// terminals S = {0, ..., t-1}. Phase-conditioned operations additionally
// require r = n - t odd so the phase is never tied.
struct CliqueGadget {
  int n;
  int t;
  double beta;

  CliqueGadget(int n, int t, double beta);

  int r() const { return n - t; }
  std::vector<int> terminals() const;
  SymmetricInteraction interaction() const;
};

// Sign of the spin sum outside the terminal set; requires an odd number of
// non-terminal sites.
PhaseLabel phase_of(const SpinConfiguration& sigma, const std::vector<int>& terminals);

// log Z^{k/r}(tau) = log C(r,k) + (beta/2r) * ((2k - r) + tau_sum)^2:
// contribution of configurations with k plus spins among the non-terminals and
// terminal sum tau_sum. Depends on tau only through its sum.
double z_alpha_tau(const CliqueGadget& g, int k, int tau_sum);

// log C(r, k) by summed logs of integers (no Stirling approximation).
double log_binomial(int r, int k);
// log C(r,k) - r*H(k/r): the o(r) gap the Stirling form hides.
double stirling_log_binomial_gap(int r, int k);

// logW[(s+t)/2] = log sum_k Z^{k/r}(s) over all k: total gadget weight at a
// given terminal sum s.
std::vector<double> clique_terminal_log_weights(const CliqueGadget& g);
// Same with k restricted to one phase (k above or below r/2); requires odd r.
std::vector<double> clique_terminal_log_weights(const CliqueGadget& g, PhaseLabel phase);

struct TerminalDistribution {
  PhaseLabel phase;
  int t;
  std::vector<double> probabilities;  // indexed by tau bitmask (bit i: terminal i = +1)
  double epsilon = 0.0;               // filled by product-measure comparisons
};

// Exact conditional law of the terminal spins given the phase, O(r * 2^t).
TerminalDistribution terminal_distribution(const CliqueGadget& g, PhaseLabel phase,
                                           int t_cap = 20);

// Q(tau) = q^{(s+t)/2} (1-q)^{(t-s)/2} for tau with sum s.
double product_measure_prob(double q, int t, int tau_sum);
std::vector<double> product_measure_table(double q, int t);

// max over tau and both phases of |Pr[tau | phase] / Q^{phase}(tau) - 1|,
// with Q built from the mean-field q+ at g.beta.
double gadget_epsilon(const CliqueGadget& g);

// f(alpha) = H(alpha) + (beta/2)(2 alpha - 1)^2; its maxima are the
// mean-field roots.
double f_alpha(double beta, double alpha);

struct MaximaPair {
  double q_minus;
  double q_plus;
};
MaximaPair locate_maxima(double beta);

// Simple d-regular graph sampled by the pairing model with whole-graph
// rejection on self-loops and multi-edges.
struct RegularGraph {
  int n = 0;
  int d = 0;
  std::vector<std::pair<int, int>> edges;
};

RegularGraph build_regular_graph(int n, int d, std::uint64_t seed, int max_attempts = 10000);

struct RegularGadget {
  RegularGraph graph;
  int t;
  double beta;

  RegularGadget(RegularGraph g, int t, double beta);

  int n() const { return graph.n; }
  int d() const { return graph.d; }
  int r() const { return graph.n - t; }
  std::vector<int> terminals() const;
  SymmetricInteraction interaction() const;  // beta * adjacency, zero diagonal
};

// Exact per-phase terminal conditionals of an arbitrary interaction by full
// enumeration; returns (plus, minus). Requires an odd non-terminal count.
std::pair<TerminalDistribution, TerminalDistribution> brute_force_terminal_distribution(
    const SymmetricInteraction& J, const std::vector<int>& terminals, int threads = 0,
    int max_dimension = 24);

struct RegularVerifyOptions {
  double epsilon_target = 0.25;
  std::uint64_t samples = 200000;  // recorded sweeps per phase on the sampling path
  std::uint64_t burn_in_sweeps = 2000;
  std::uint64_t seed = 1;
  int exact_max_dimension = 24;
  int threads = 0;
};

struct RegularGadgetReport {
  double gap;             // spectral width of J = beta * A
  double friedman_bound;  // beta * (d + 2 sqrt(d-1)) + epsilon_target
  bool gap_ok;
  bool phase_balance_structural;  // r odd; flip symmetry then gives exactly 1/2
  double tree_q_plus;
  bool exact;              // enumeration (n <= cap) vs phase-restricted sampling
  double max_deviation;    // max_tau |Pr[tau|phase] / Q^phase(tau) - 1|
  double flip_symmetry_gap;  // max_tau |Pr[tau|+] - Pr[-tau|-]|
  std::vector<double> conditional_plus;   // Pr[tau | +] by tau bitmask
  std::vector<double> conditional_minus;  // Pr[tau | -]
  std::uint64_t samples_used = 0;
  double max_std_error = 0.0;
  bool epsilon_met;
  double epsilon_target;
};

RegularGadgetReport verify_regular_gadget(const RegularGadget& g,
                                          const RegularVerifyOptions& opts = {});

}  // namespace specising
