#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

namespace specising {

struct MatrixEntry {
  int i;  // row, i <= j
  int j;  // column
  double w;
};

// Symmetric interaction matrix J stored as upper-triangular entries.
// An entry (i, j, w) with i != j means J_ij = J_ji = w; (i, i, w) means J_ii = w.
// Immutable after construction; safe to share across threads.
class SymmetricInteraction {
 public:
  SymmetricInteraction(int dimension, std::vector<MatrixEntry> entries);

  int dimension() const { return n_; }
  const std::vector<MatrixEntry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  // Count of non-zero entries per row of the dense matrix.
  // include_diagonal follows the "<= d non-zero entries per row" reading.
  std::vector<int> row_support(bool include_diagonal = true) const;
  int max_row_support(bool include_diagonal = true) const;

  // Off-diagonal neighbor lists: adjacency()[i] = {(j, J_ij) : j != i, J_ij != 0}.
  const std::vector<std::vector<std::pair<int, double>>>& adjacency() const { return adj_; }

  double diagonal(int i) const { return diag_[static_cast<std::size_t>(i)]; }
  double diagonal_half_sum() const { return half_diag_sum_; }

  // Dense row-major materialization (exactly symmetric by construction).
  std::vector<double> dense_row_major() const;

  // Largest row sum of |J_ij| (including diagonal); scale for tolerances.
  double max_abs_row_sum() const;

 private:
  int n_;
  std::vector<MatrixEntry> entries_;            // sorted by (i, j), deduplicated
  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::vector<double> diag_;
  double half_diag_sum_ = 0.0;
};

// Spin vector with entries in {-1, +1}.
struct SpinConfiguration {
  std::vector<std::int8_t> spins;

  static SpinConfiguration all_plus(int n);
  static SpinConfiguration all_minus(int n);
  // bit i of `mask` set => spin i is +1.
  static SpinConfiguration from_mask(int n, std::uint64_t mask);

  int size() const { return static_cast<int>(spins.size()); }
  void validate() const;  // throws unless every entry is +-1
};

// 1/2 sigma^T J sigma = sum_{i<j} J_ij s_i s_j + 1/2 sum_i J_ii.
double energy(const SymmetricInteraction& J, const SpinConfiguration& sigma);

// Local field h_i = sum_{j != i} J_ij s_j (diagonal excluded).
double local_field(const SymmetricInteraction& J, const SpinConfiguration& sigma, int site);

// Complete-graph Ising matrix: J_ij = beta/n for i != j, zero diagonal.
// Its spectrum spans exactly beta.
SymmetricInteraction complete_graph_interaction(int n, double beta);

}  // namespace specising
