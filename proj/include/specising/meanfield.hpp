#pragma once

#include <optional>
#include <vector>

namespace specising {

// Roots of ln((1-a)/a) + 2*beta*(2a - 1) = 0 on [0, 1].
struct MeanFieldSolution {
  double beta;
  std::vector<double> roots;  // sorted; {1/2} for beta <= 1, {q-, 1/2, q+} for beta > 1
  std::optional<double> q_minus;
  std::optional<double> q_plus;
  bool near_critical = false;  // q+ - 1/2 < 1e-4: phases barely separated
};

MeanFieldSolution solve_clique_fixed_points(double beta);

// Non-trivial fixed points of x = ((e^{2b} x + 1)/(x + e^{2b}))^{d-1} and the
// derived root marginals q+/q- on the d-regular tree.
struct TreeFixedPoint {
  int d;
  double beta;
  double tilde_q_plus;   // > 1
  double tilde_q_minus;  // = 1/tilde_q_plus
  double q_plus;         // in (1/2, 1)
  double q_minus;        // = 1 - q_plus
};

TreeFixedPoint solve_tree_fixed_points(int d, double beta);

// beta_d = (1/2) ln(1 + 2/(d-2)): tree uniqueness threshold, d >= 3.
double tree_uniqueness_beta(int d);
// lambda_d = d + 2 sqrt(d-1): Friedman spectral width, d >= 3.
double friedman_lambda(int d);

struct ThresholdConstants {
  int d;
  double beta_d;
  double lambda_d;
  // beta_{d-1} * lambda_{d-1}; defined for d >= 4, tends to 1 as d grows.
  std::optional<double> theorem2_threshold;
};

ThresholdConstants thresholds(int d);

}  // namespace specising
