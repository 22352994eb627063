#include "specising/meanfield.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace specising {

namespace {

double clique_g(double beta, double a) {
  return std::log((1.0 - a) / a) + 2.0 * beta * (2.0 * a - 1.0);
}

// Bisection of a bracketed sign change to absolute tolerance in x.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((flo > 0.0) == (fm > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double tree_map(int d, double beta, double x) {
  const double e2b = std::exp(2.0 * beta);
  return std::pow((e2b * x + 1.0) / (x + e2b), d - 1);
}

}  // namespace

MeanFieldSolution solve_clique_fixed_points(double beta) {
  if (beta <= 0.0) throw std::invalid_argument("solve_clique_fixed_points: beta must be positive");
  MeanFieldSolution sol;
  sol.beta = beta;
  if (beta <= 1.0) {
    // g'(a) = -1/(a(1-a)) + 4*beta <= 4(beta - 1) <= 0: strictly decreasing, only root 1/2
    sol.roots = {0.5};
    return sol;
  }

  // g has exactly one zero above 1/2 (at most three critical points of f);
  // scan to bracket it, robust as beta -> 1 where q+ -> 1/2.
  const int grid = 10000;
  const double lo_edge = 0.5 + 1e-12;
  const double hi_edge = 1.0 - 1e-12;
  double lo = lo_edge, hi = hi_edge;
  double prev_a = lo_edge;
  double prev_g = clique_g(beta, prev_a);  // > 0 just above 1/2 since g'(1/2) = 4(beta-1) > 0
  bool bracketed = false;
  for (int k = 1; k <= grid; ++k) {
    const double a = lo_edge + (hi_edge - lo_edge) * static_cast<double>(k) / grid;
    const double ga = clique_g(beta, a);
    if ((prev_g > 0.0) != (ga > 0.0)) {
      lo = prev_a;
      hi = a;
      bracketed = true;
      break;
    }
    prev_a = a;
    prev_g = ga;
  }
  if (!bracketed) throw std::runtime_error("solve_clique_fixed_points: no sign change found");

  const double q_plus = bisect([&](double a) { return clique_g(beta, a); }, lo, hi, 1e-13);
  const double q_minus = 1.0 - q_plus;
  sol.roots = {q_minus, 0.5, q_plus};
  sol.q_minus = q_minus;
  sol.q_plus = q_plus;
  sol.near_critical = (q_plus - 0.5) < 1e-4;
  return sol;
}

double tree_uniqueness_beta(int d) {
  if (d < 3) throw std::invalid_argument("tree_uniqueness_beta: d must be >= 3");
  return 0.5 * std::log1p(2.0 / (d - 2));
}

double friedman_lambda(int d) {
  if (d < 3) throw std::invalid_argument("friedman_lambda: d must be >= 3");
  return d + 2.0 * std::sqrt(static_cast<double>(d - 1));
}

TreeFixedPoint solve_tree_fixed_points(int d, double beta) {
  if (d < 3) throw std::invalid_argument("solve_tree_fixed_points: d must be >= 3");
  const double beta_d = tree_uniqueness_beta(d);
  if (beta <= beta_d + 1e-9)
    throw std::invalid_argument(
        "solve_tree_fixed_points: beta must exceed the uniqueness threshold " +
        std::to_string(beta_d) + " with margin");

  // h(x) = x - f(x) has h(1) = 0, h'(1) = 1 - (d-1)tanh(beta) < 0 above the
  // threshold, and h -> +inf; bracket the upper root by doubling the offset.
  const auto h = [&](double x) { return x - tree_map(d, beta, x); };
  double offset = 1e-12;
  double lo = 0.0;
  bool inside = false;
  for (; offset < 1e60; offset *= 2.0) {
    const double x = 1.0 + offset;
    const double hx = h(x);
    if (!inside) {
      if (hx < 0.0) {
        inside = true;
        lo = x;
      }
      continue;
    }
    if (hx > 0.0) break;
    lo = x;
  }
  if (!inside)
    throw std::runtime_error("solve_tree_fixed_points: no non-trivial fixed point found");
  const double hi = 1.0 + offset;
  const double x_plus = bisect(h, lo, hi, 1e-12);

  TreeFixedPoint fp;
  fp.d = d;
  fp.beta = beta;
  fp.tilde_q_plus = x_plus;
  fp.tilde_q_minus = 1.0 / x_plus;
  if (std::abs(h(fp.tilde_q_minus)) > 1e-10)
    throw std::runtime_error("solve_tree_fixed_points: reciprocal root failed its residual check");

  const double e2b = std::exp(2.0 * beta);
  const auto root_odds = [&](double x) { return x * (e2b * x + 1.0) / (x + e2b); };
  const double rp = root_odds(fp.tilde_q_plus);
  const double rm = root_odds(fp.tilde_q_minus);
  fp.q_plus = rp / (1.0 + rp);
  fp.q_minus = rm / (1.0 + rm);
  return fp;
}

ThresholdConstants thresholds(int d) {
  if (d < 3) throw std::invalid_argument("thresholds: d must be >= 3");
  ThresholdConstants c;
  c.d = d;
  c.beta_d = tree_uniqueness_beta(d);
  c.lambda_d = friedman_lambda(d);
  if (d >= 4) c.theorem2_threshold = tree_uniqueness_beta(d - 1) * friedman_lambda(d - 1);
  return c;
}

}  // namespace specising
