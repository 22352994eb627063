#include "specising/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specising {

SymmetricInteraction::SymmetricInteraction(int dimension, std::vector<MatrixEntry> entries)
    : n_(dimension), entries_(std::move(entries)) {
  if (n_ <= 0) throw std::invalid_argument("interaction dimension must be positive");
  std::sort(entries_.begin(), entries_.end(),
            [](const MatrixEntry& a, const MatrixEntry& b) {
              return std::tie(a.i, a.j) < std::tie(b.i, b.j);
            });
  diag_.assign(static_cast<std::size_t>(n_), 0.0);
  adj_.assign(static_cast<std::size_t>(n_), {});
  int prev_i = -1, prev_j = -1;
  for (const auto& e : entries_) {
    if (e.i < 0 || e.j < 0 || e.i >= n_ || e.j >= n_)
      throw std::invalid_argument("interaction entry index out of range");
    if (e.i > e.j)
      throw std::invalid_argument("interaction entries must have i <= j");
    if (e.i == prev_i && e.j == prev_j)
      throw std::invalid_argument("duplicate interaction entry (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + ")");
    if (!std::isfinite(e.w))
      throw std::invalid_argument("interaction weight must be finite");
    prev_i = e.i;
    prev_j = e.j;
    if (e.i == e.j) {
      diag_[static_cast<std::size_t>(e.i)] = e.w;
      half_diag_sum_ += 0.5 * e.w;
    } else if (e.w != 0.0) {
      adj_[static_cast<std::size_t>(e.i)].emplace_back(e.j, e.w);
      adj_[static_cast<std::size_t>(e.j)].emplace_back(e.i, e.w);
    }
  }
  for (auto& row : adj_) std::sort(row.begin(), row.end());
}

std::vector<int> SymmetricInteraction::row_support(bool include_diagonal) const {
  std::vector<int> support(static_cast<std::size_t>(n_), 0);
  for (const auto& e : entries_) {
    if (e.w == 0.0) continue;
    if (e.i == e.j) {
      if (include_diagonal) ++support[static_cast<std::size_t>(e.i)];
    } else {
      ++support[static_cast<std::size_t>(e.i)];
      ++support[static_cast<std::size_t>(e.j)];
    }
  }
  return support;
}

int SymmetricInteraction::max_row_support(bool include_diagonal) const {
  const auto s = row_support(include_diagonal);
  return *std::max_element(s.begin(), s.end());
}

std::vector<double> SymmetricInteraction::dense_row_major() const {
  std::vector<double> m(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0.0);
  const auto idx = [this](int r, int c) {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(c);
  };
  for (const auto& e : entries_) {
    m[idx(e.i, e.j)] = e.w;
    m[idx(e.j, e.i)] = e.w;
  }
  return m;
}

double SymmetricInteraction::max_abs_row_sum() const {
  std::vector<double> row(static_cast<std::size_t>(n_), 0.0);
  for (const auto& e : entries_) {
    row[static_cast<std::size_t>(e.i)] += std::abs(e.w);
    if (e.i != e.j) row[static_cast<std::size_t>(e.j)] += std::abs(e.w);
  }
  return *std::max_element(row.begin(), row.end());
}

SpinConfiguration SpinConfiguration::all_plus(int n) {
  return {std::vector<std::int8_t>(static_cast<std::size_t>(n), 1)};
}

SpinConfiguration SpinConfiguration::all_minus(int n) {
  return {std::vector<std::int8_t>(static_cast<std::size_t>(n), -1)};
}

SpinConfiguration SpinConfiguration::from_mask(int n, std::uint64_t mask) {
  SpinConfiguration sigma;
  sigma.spins.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    sigma.spins[static_cast<std::size_t>(i)] = (mask >> i) & 1u ? 1 : -1;
  return sigma;
}

void SpinConfiguration::validate() const {
  for (auto s : spins)
    if (s != 1 && s != -1) throw std::invalid_argument("spin entries must be +-1");
}

double energy(const SymmetricInteraction& J, const SpinConfiguration& sigma) {
  if (sigma.size() != J.dimension())
    throw std::invalid_argument("energy: spin configuration dimension mismatch");
  double e = J.diagonal_half_sum();
  for (const auto& entry : J.entries()) {
    if (entry.i != entry.j)
      e += entry.w * sigma.spins[static_cast<std::size_t>(entry.i)] *
           sigma.spins[static_cast<std::size_t>(entry.j)];
  }
  return e;
}

double local_field(const SymmetricInteraction& J, const SpinConfiguration& sigma, int site) {
  if (site < 0 || site >= J.dimension())
    throw std::invalid_argument("local_field: site index out of range");
  if (sigma.size() != J.dimension())
    throw std::invalid_argument("local_field: spin configuration dimension mismatch");
  double h = 0.0;
  for (const auto& [j, w] : J.adjacency()[static_cast<std::size_t>(site)])
    h += w * sigma.spins[static_cast<std::size_t>(j)];
  return h;
}

SymmetricInteraction complete_graph_interaction(int n, double beta) {
  if (n < 1) throw std::invalid_argument("complete_graph_interaction: n must be >= 1");
  std::vector<MatrixEntry> entries;
  entries.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  const double w = beta / static_cast<double>(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) entries.push_back({i, j, w});
  return SymmetricInteraction(n, std::move(entries));
}

}  // namespace specising
