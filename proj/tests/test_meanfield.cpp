#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <vector>

#include "specising/meanfield.hpp"

using namespace specising;

namespace {

double g_equation(double beta, double a) {
  return std::log((1.0 - a) / a) + 2.0 * beta * (2.0 * a - 1.0);
}

// independent oracle: dense grid scan for sign changes, then repeated 10-point
// local scans to narrow each bracket (no bisection code shared with the solver)
std::vector<double> grid_scan_roots(double beta, int points = 1000000) {
  std::vector<double> roots;
  const double lo = 1e-9, hi = 1.0 - 1e-9;
  double prev_a = lo, prev_g = g_equation(beta, lo);
  for (int k = 1; k <= points; ++k) {
    const double a = lo + (hi - lo) * static_cast<double>(k) / points;
    const double ga = g_equation(beta, a);
    if (ga == 0.0) {
      roots.push_back(a);
    } else if ((prev_g > 0.0) != (ga > 0.0)) {
      double bl = prev_a, bh = a;
      for (int round = 0; round < 40; ++round) {
        const double gl = g_equation(beta, bl);
        for (int j = 1; j <= 10; ++j) {
          const double x = bl + (bh - bl) * j / 10.0;
          const double gx = g_equation(beta, x);
          if ((gl > 0.0) != (gx > 0.0)) {
            bl = bl + (bh - bl) * (j - 1) / 10.0;
            bh = x;
            break;
          }
        }
      }
      roots.push_back(0.5 * (bl + bh));
    }
    prev_a = a;
    prev_g = ga;
  }
  // a grid point landing exactly on a root records it twice (once as an exact
  // zero, once as the surrounding sign change); merge near-duplicates
  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double root : roots)
    if (merged.empty() || root - merged.back() > 1e-7) merged.push_back(root);
  return merged;
}

}  // namespace

TEST_CASE("clique solver matches the grid-scan oracle across the beta sweep") {
  for (double beta : {0.5, 0.99, 1.01, 1.1, 1.5, 2.0, 5.0}) {
    CAPTURE(beta);
    const auto sol = solve_clique_fixed_points(beta);
    const auto oracle = grid_scan_roots(beta);
    REQUIRE(sol.roots.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i)
      CHECK(std::abs(sol.roots[i] - oracle[i]) < 1e-6);
    if (beta > 1.0) {
      REQUIRE(sol.roots.size() == 3);
      CHECK(std::abs(*sol.q_plus - (1.0 - *sol.q_minus)) < 1e-12);
    } else {
      REQUIRE(sol.roots.size() == 1);
      CHECK(sol.roots[0] == 0.5);
    }
  }
}

TEST_CASE("clique solver: every root satisfies the defining equation") {
  for (double beta : {1.01, 1.2, 1.5, 3.0}) {
    const auto sol = solve_clique_fixed_points(beta);
    for (double root : sol.roots) CHECK(std::abs(g_equation(beta, root)) < 1e-10);
  }
}

TEST_CASE("clique solver: frozen oracle values") {
  CHECK(std::abs(*solve_clique_fixed_points(1.5).q_plus - 0.9292798183200552) < 1e-10);
  CHECK(std::abs(*solve_clique_fixed_points(1.01).q_plus - 0.5858308896396670) < 1e-10);
  CHECK(std::abs(*solve_clique_fixed_points(2.0).q_plus - 0.9787520120386344) < 1e-10);
  CHECK(std::abs(*solve_clique_fixed_points(5.0).q_plus - 0.9999545608576163) < 1e-10);
}

TEST_CASE("clique solver: near-critical flag") {
  CHECK(solve_clique_fixed_points(1.0 + 1e-9).near_critical);
  CHECK_FALSE(solve_clique_fixed_points(1.01).near_critical);
}

TEST_CASE("clique solver: rejects non-positive beta") {
  CHECK_THROWS_AS(solve_clique_fixed_points(0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_clique_fixed_points(-1.0), std::invalid_argument);
}

TEST_CASE("tree fixed points: residuals and symmetry") {
  for (auto [d, beta] :
       std::vector<std::pair<int, double>>{{3, 1.2}, {3, 1.0}, {4, 0.7}, {5, 0.6}}) {
    CAPTURE(d);
    CAPTURE(beta);
    const auto fp = solve_tree_fixed_points(d, beta);
    const double e2b = std::exp(2.0 * beta);
    const auto f = [&](double x) { return std::pow((e2b * x + 1.0) / (x + e2b), d - 1); };
    CHECK(fp.tilde_q_plus > 1.0);
    CHECK(std::abs(fp.tilde_q_plus - f(fp.tilde_q_plus)) <
          1e-10 * std::max(1.0, fp.tilde_q_plus));
    CHECK(std::abs(fp.tilde_q_minus - f(fp.tilde_q_minus)) < 1e-10);
    CHECK(std::abs(fp.tilde_q_minus - 1.0 / fp.tilde_q_plus) < 1e-10);
    CHECK(std::abs(fp.q_minus - (1.0 - fp.q_plus)) < 1e-10);
    CHECK(fp.q_plus > 0.5);
    CHECK(fp.q_plus < 1.0);
  }
}

TEST_CASE("tree fixed points: frozen oracle value at d=3, beta=1.2") {
  const auto fp = solve_tree_fixed_points(3, 1.2);
  CHECK(std::abs(fp.tilde_q_plus - 98.45390772028418) < 1e-6);
  CHECK(std::abs(fp.q_plus - 0.9989773989712874) < 1e-10);
}

TEST_CASE("tree fixed points: grid-scan oracle for the non-trivial root") {
  const int d = 3;
  const double beta = 1.2;
  const double e2b = std::exp(2.0 * beta);
  const auto h = [&](double x) { return x - std::pow((e2b * x + 1.0) / (x + e2b), d - 1); };
  // scan (1, e^{4 beta}) for the sign change back to positive
  const double hi = std::exp(4.0 * beta);
  const int points = 1000000;
  double bracket = -1.0, prev_x = 1.0 + 1e-9, prev_h = h(prev_x);
  int sign_changes = 0;
  for (int k = 1; k <= points; ++k) {
    const double x = 1.0 + (hi - 1.0) * static_cast<double>(k) / points;
    const double hx = h(x);
    if ((prev_h > 0.0) != (hx > 0.0)) {
      ++sign_changes;
      bracket = 0.5 * (prev_x + x);
    }
    prev_x = x;
    prev_h = hx;
  }
  CHECK(sign_changes == 1);
  const auto fp = solve_tree_fixed_points(d, beta);
  CHECK(std::abs(fp.tilde_q_plus - bracket) < 1e-3);  // grid spacing ~1e-4 over the range
}

TEST_CASE("tree fixed points: below-threshold rejection") {
  CHECK_THROWS_AS(solve_tree_fixed_points(3, 0.5), std::invalid_argument);  // beta_3 ~ 0.549
  CHECK_THROWS_AS(solve_tree_fixed_points(4, tree_uniqueness_beta(4)), std::invalid_argument);
  CHECK_THROWS_AS(solve_tree_fixed_points(2, 1.0), std::invalid_argument);
}

TEST_CASE("thresholds: closed forms at d=4") {
  const auto c = thresholds(4);
  CHECK(c.beta_d == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(c.lambda_d == doctest::Approx(4.0 + 2.0 * std::sqrt(3.0)).epsilon(1e-15));
  REQUIRE(c.theorem2_threshold.has_value());
  CHECK(*c.theorem2_threshold ==
        doctest::Approx(0.5 * std::log(3.0) * (3.0 + 2.0 * std::sqrt(2.0))).epsilon(1e-15));
  CHECK(std::abs(*c.theorem2_threshold - 3.201590831426351) < 1e-12);
}

TEST_CASE("thresholds: theorem-2 bound decreases toward 1") {
  // the bound behaves like 1 + 2/sqrt(d) for large d
  double prev = *thresholds(4).theorem2_threshold;
  for (int d : {1000, 10000, 100000}) {
    const double cur = *thresholds(d).theorem2_threshold;
    CHECK(cur < prev);
    CHECK(cur > 1.0);
    CHECK(cur < 1.0 + 3.0 / std::sqrt(static_cast<double>(d)));
    prev = cur;
  }
}

TEST_CASE("thresholds: domain validation") {
  CHECK_THROWS_AS(thresholds(2), std::invalid_argument);
  CHECK_FALSE(thresholds(3).theorem2_threshold.has_value());
}
