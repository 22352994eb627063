#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "specising/gadget.hpp"
#include "specising/interaction.hpp"
#include "specising/io.hpp"

namespace specising {

enum class ReductionVariant { dense, sparse };

// Exponent of A in the Lemma-4 center. The construction has m*t/2 matching
// edges; the alternative 3*m*t/2 convention is kept runnable for audits.
enum class MatchExponent { per_matching_edge, three_halves_mt };

struct ReductionParams {
  ReductionVariant variant = ReductionVariant::dense;
  double gamma = 0;
  double beta = 0;     // dense: (1+gamma)/2; sparse: beta_{d-1} + eta
  double w_minus = 0;  // dense: (1-gamma)/5; sparse: -eta
  double eta = 0;      // sparse only
  int t = 0;           // terminals per gadget, multiple of 3
  int n = 0;           // gadget size
  int d = 0;           // sparse: row-support bound; gadget degree is d-1
  std::uint64_t seed = 1;  // sparse gadget sampling

  // psi(x, y) = exp(psi_c * w_minus * x * y). psi_c = 1 matches the energy a
  // matching edge contributes under this matrix convention.
  double psi_c = 1.0;
  MatchExponent exponent = MatchExponent::per_matching_edge;

  // Dense variant: n/r < (6g+4)/(5g+5) makes the Weyl bound < gamma.
  // Informational; ratio experiments may run inadmissible sizes on purpose.
  bool admissible = false;

  double matching_exponent(int m) const;
};

// Smallest n with n - t odd and n/(n-t) < (6g+4)/(5g+5).
int dense_admissible_n(double gamma, int t);
// eta with beta*lambda + 2*eta < gamma guaranteed (requires gamma above the
// Theorem-2 threshold for d).
double default_sparse_eta(double gamma, int d);

ReductionParams dense_reduction_params(double gamma, int t, std::optional<int> n = std::nullopt);
ReductionParams sparse_reduction_params(double gamma, int d, int t, int n,
                                        std::optional<double> eta = std::nullopt,
                                        std::uint64_t seed = 1);

struct MaxCutInstance {
  int m = 0;
  std::vector<std::pair<int, int>> edges;
  bool three_regular = false;

  static MaxCutInstance from_graph(const GraphFile& g);
  std::vector<std::vector<int>> sorted_neighbors() const;
};

struct MatchingEdge {
  int i, j;  // global vertex indices, i < j
  double w;
};

// The composite instance H^G: one gadget block per vertex of H plus the
// inter-gadget matchings. Vertex s of block v sits at global index v*n + s;
// terminals are local indices [0, t).
struct ReducedInstance {
  ReductionParams params;
  MaxCutInstance maxcut_instance;
  SymmetricInteraction coupling;        // J = D + E
  SymmetricInteraction block_diagonal;  // D
  std::vector<MatchingEdge> matching;   // E
  std::optional<RegularGraph> gadget_graph;  // sparse variant (replicated per block)

  int total_dimension() const { return params.n * maxcut_instance.m; }
  int block_of(int global_index) const { return global_index / params.n; }
  int local_of(int global_index) const { return global_index % params.n; }
  std::vector<int> block_terminals(int v) const;
};

ReducedInstance build_reduction(const MaxCutInstance& H, const ReductionParams& p);

// q+ used by the ratio constants: clique mean-field root (dense) or
// (d-1)-regular tree root marginal (sparse).
double reduction_q_plus(const ReductionParams& p);

struct RatioConstants {
  double a;
  double b;
  double q_plus;
  double psi_c;
};

RatioConstants compute_ab(const ReductionParams& p, double q_plus);

struct StructuredZOptions {
  int outer_cap_bits = 26;        // cap on t*m
  int sparse_gadget_max_n = 24;   // exact inner enumeration cap
  int threads = 0;
};

// Exact log Z of H^G (include_matchings) or of the disjoint union H-hat^G,
// by summing gadget terminal weights over all 2^{t m} terminal assignments.
double structured_log_z(const ReducedInstance& inst, bool include_matchings,
                        const StructuredZOptions& opts = {});

// Lemma-1/Lemma-5 epsilon of the gadget this instance replicates
// (exact computation; sparse variant requires n <= sparse_gadget_max_n).
double reduction_gadget_epsilon(const ReducedInstance& inst,
                                const StructuredZOptions& opts = {});

struct MaxCutResult {
  int maxcut;
  int edge_count;
  double random_cut_floor;  // |E|/2, equals 3m/4 on 3-regular graphs
  bool floor_ok;            // maxcut >= floor
};

MaxCutResult brute_force_maxcut(const MaxCutInstance& H, int max_vertices = 24);

struct RatioReport {
  double log_z_full;
  double log_z_hat;
  double log_ratio;
  double epsilon;
  int maxcut;
  double a;
  double b;
  double e_match;            // exponent of A used in the center
  double log_center;         // e_match*log A + maxcut*(t/3)*log(B/A)
  double ratio_over_center;  // exp(log_ratio - log_center)
  double window_lower;       // (1-4e)^m 2^{-m}, or 0 when vacuous
  double window_upper;       // (1+4e)^m
  bool lower_vacuous;        // epsilon >= 1/4
  bool pass;
  double psi_c;
};

RatioReport lemma4_check(const ReducedInstance& inst, const StructuredZOptions& opts = {},
                         std::optional<double> epsilon_override = std::nullopt);

struct MaxCutBounds {
  double lower;
  double upper;
};

// Theorem-1 style bracketing of maxcut(H) from log(Z/Z-hat). delta is the
// per-site oracle error on log Z (widens both sides by 3*delta*m*n/(t log(B/A))).
MaxCutBounds maxcut_bounds(double log_z_ratio, const ReductionParams& p, double epsilon, int m,
                           double delta = 0.0,
                           std::optional<double> q_plus = std::nullopt);

// Composite meta (instance parameters + H + gadget + matching) round-trip.
void write_instance_meta(const std::string& path, const ReducedInstance& inst);
ReducedInstance read_instance_meta(const std::string& path);

}  // namespace specising
