#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "specising/common.hpp"
#include "specising/exact_dos.hpp"
#include "specising/gadget.hpp"
#include "specising/gibbs.hpp"
#include "specising/meanfield.hpp"

using namespace specising;

TEST_CASE("phase_of basics") {
  const std::vector<int> no_terminals;
  CHECK(phase_of(SpinConfiguration::all_plus(5), no_terminals) == PhaseLabel::plus);
  CHECK(phase_of(SpinConfiguration::all_minus(5), no_terminals) == PhaseLabel::minus);

  SpinConfiguration sigma{{1, 1, -1, -1, -1}};
  CHECK(phase_of(sigma, no_terminals) == PhaseLabel::minus);
  SpinConfiguration flipped{{-1, -1, 1, 1, 1}};
  CHECK(phase_of(flipped, no_terminals) == PhaseLabel::plus);

  CHECK_THROWS_AS(phase_of(SpinConfiguration::all_plus(4), no_terminals),
                  std::invalid_argument);  // even count could tie
  CHECK(phase_of(SpinConfiguration::all_plus(4), {0}) == PhaseLabel::plus);
}

TEST_CASE("z_alpha_tau: closed form at alpha = 1, t = 0") {
  const CliqueGadget g(9, 0, 1.5);
  CHECK(z_alpha_tau(g, 9, 0) == doctest::Approx(0.5 * 1.5 * 9).epsilon(1e-14));
}

TEST_CASE("z_alpha_tau: global flip symmetry") {
  const CliqueGadget g(11, 3, 1.7);
  for (int k = 0; k <= g.r(); ++k)
    for (int s = -g.t; s <= g.t; s += 2)
      CHECK(z_alpha_tau(g, k, s) ==
            doctest::Approx(z_alpha_tau(g, g.r() - k, -s)).epsilon(1e-14));
}

TEST_CASE("z_alpha_tau: domain validation") {
  const CliqueGadget g(9, 2, 1.5);
  CHECK_THROWS_AS(z_alpha_tau(g, -1, 0), std::invalid_argument);
  CHECK_THROWS_AS(z_alpha_tau(g, 8, 0), std::invalid_argument);
  CHECK_THROWS_AS(z_alpha_tau(g, 3, 1), std::invalid_argument);  // parity
  CHECK_THROWS_AS(z_alpha_tau(g, 3, 4), std::invalid_argument);  // |s| > t
}

TEST_CASE("clique identity: summed Z^alpha(tau) reproduces the brute-force Z") {
  for (auto [n, t] : std::vector<std::pair<int, int>>{{9, 2}, {12, 3}, {14, 0}}) {
    const double beta = 1.5;
    const CliqueGadget g(n, t, beta);
    const auto log_w = clique_terminal_log_weights(g);
    LogSumAccumulator total;
    for (int j = 0; j <= t; ++j) total.add(log_binomial(t, j) + log_w[j]);
    const double brute = brute_force_log_z(g.interaction()).log_z;
    CHECK(std::abs(total.value() - brute) < 1e-9 * std::abs(brute));
  }
}

TEST_CASE("clique identity holds exactly in rational mode") {
  // group states by (k, tau count): C(r,k)*C(t,j) states at energy w/2*(2k-r+s)^2
  const int n = 12, t = 3;
  const double beta = 1.2;
  const CliqueGadget g(n, t, beta);
  const int r = g.r();
  const double w_dbl = beta / static_cast<double>(r);  // the exact double the matrix holds
  std::map<mpq_class, std::uint64_t> expected;
  std::vector<std::uint64_t> binom_r(r + 1, 1), binom_t(t + 1, 1);
  for (int k = 1; k <= r; ++k)
    binom_r[k] = binom_r[k - 1] * static_cast<std::uint64_t>(r - k + 1) / k;
  for (int j = 1; j <= t; ++j)
    binom_t[j] = binom_t[j - 1] * static_cast<std::uint64_t>(t - j + 1) / j;
  for (int k = 0; k <= r; ++k)
    for (int j = 0; j <= t; ++j) {
      const int total = (2 * k - r) + (2 * j - t);
      mpq_class e(w_dbl);
      e *= total;
      e *= total;
      e /= 2;
      expected[e] += binom_r[k] * binom_t[j];
    }
  const auto dos = exact_dos(g.interaction());
  CHECK(dos.counts == expected);
}

TEST_CASE("terminal_distribution: empty terminal set") {
  const CliqueGadget g(9, 0, 1.5);
  const auto dist = terminal_distribution(g, PhaseLabel::plus);
  REQUIRE(dist.probabilities.size() == 1);
  CHECK(dist.probabilities[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("terminal_distribution: normalization and flip symmetry") {
  for (auto [n, t] : std::vector<std::pair<int, int>>{{12, 3}, {17, 2}, {20, 1}}) {
    const CliqueGadget g(n, t, 1.3);
    const auto plus = terminal_distribution(g, PhaseLabel::plus);
    const auto minus = terminal_distribution(g, PhaseLabel::minus);
    double sum = 0.0;
    for (double p : plus.probabilities) sum += p;
    CHECK(std::abs(sum - 1.0) < 1e-10);
    const std::size_t flip = plus.probabilities.size() - 1;
    for (std::size_t tau = 0; tau < plus.probabilities.size(); ++tau)
      CHECK(std::abs(plus.probabilities[tau] - minus.probabilities[tau ^ flip]) < 1e-12);
  }
}

TEST_CASE("terminal_distribution matches full enumeration conditionals") {
  for (auto [n, t] : std::vector<std::pair<int, int>>{{9, 2}, {12, 3}, {15, 2}, {18, 3}}) {
    for (double beta : {1.2, 1.5}) {
      CAPTURE(n);
      CAPTURE(t);
      const CliqueGadget g(n, t, beta);
      const auto [brute_plus, brute_minus] =
          brute_force_terminal_distribution(g.interaction(), g.terminals());
      const auto struct_plus = terminal_distribution(g, PhaseLabel::plus);
      const auto struct_minus = terminal_distribution(g, PhaseLabel::minus);
      for (std::size_t tau = 0; tau < struct_plus.probabilities.size(); ++tau) {
        CHECK(std::abs(struct_plus.probabilities[tau] / brute_plus.probabilities[tau] - 1.0) <
              1e-9);
        CHECK(std::abs(struct_minus.probabilities[tau] / brute_minus.probabilities[tau] - 1.0) <
              1e-9);
      }
    }
  }
}

TEST_CASE("terminal_distribution: caps and parity enforced") {
  CHECK_THROWS_AS(terminal_distribution(CliqueGadget(30, 21, 1.5), PhaseLabel::plus, 20),
                  std::invalid_argument);
  // even r has no phase split
  CHECK_THROWS_AS(terminal_distribution(CliqueGadget(10, 2, 1.5), PhaseLabel::plus),
                  std::invalid_argument);
}

TEST_CASE("product measure") {
  CHECK(product_measure_prob(0.5, 3, 1) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(product_measure_prob(0.7, 4, 4) == doctest::Approx(std::pow(0.7, 4)).epsilon(1e-14));
  CHECK(product_measure_prob(0.9, 2, 0) == doctest::Approx(0.09).epsilon(1e-14));
  const auto table = product_measure_table(0.83, 5);
  double sum = 0.0;
  for (double p : table) sum += p;
  CHECK(std::abs(sum - 1.0) < 1e-12);
  CHECK_THROWS_AS(product_measure_prob(0.0, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(product_measure_prob(1.0, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(product_measure_prob(0.5, 2, 1), std::invalid_argument);
}

TEST_CASE("gadget_epsilon shrinks with n at fixed beta, t") {
  const double e41 = gadget_epsilon(CliqueGadget(41, 2, 1.5));
  const double e81 = gadget_epsilon(CliqueGadget(81, 2, 1.5));
  const double e161 = gadget_epsilon(CliqueGadget(161, 2, 1.5));
  CHECK(e41 > e81);
  CHECK(e81 > e161);
  CHECK(e161 > 0.0);
}

TEST_CASE("gadget_epsilon monotone along doubling n for several betas") {
  for (double beta : {1.2, 1.5, 2.0}) {
    CAPTURE(beta);
    double prev = gadget_epsilon(CliqueGadget(41, 2, beta));
    for (int n : {81, 161, 321}) {
      const double cur = gadget_epsilon(CliqueGadget(n, 2, beta));
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("f_alpha endpoints and center") {
  CHECK(f_alpha(1.5, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(f_alpha(1.5, 0.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(f_alpha(1.5, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_AS(f_alpha(1.5, -0.1), std::invalid_argument);
}

TEST_CASE("locate_maxima agrees with a 1e6-point grid argmax") {
  const double beta = 1.5;
  double best_a = 0.5, best_f = f_alpha(beta, 0.5);
  const int points = 1000000;
  for (int k = 0; k <= points; ++k) {
    const double a = 0.5 + 0.5 * static_cast<double>(k) / (points + 1);
    const double fa = f_alpha(beta, a);
    if (fa > best_f) {
      best_f = fa;
      best_a = a;
    }
  }
  const auto maxima = locate_maxima(beta);
  CHECK(std::abs(maxima.q_plus - best_a) < 1e-6);
}

TEST_CASE("locate_maxima coincides with the mean-field roots") {
  for (double beta : {1.1, 1.5, 2.0, 5.0}) {
    CAPTURE(beta);
    const auto maxima = locate_maxima(beta);
    const auto mf = solve_clique_fixed_points(beta);
    CHECK(std::abs(maxima.q_plus - *mf.q_plus) < 1e-8);
    CHECK(std::abs(maxima.q_minus - *mf.q_minus) < 1e-8);
    CHECK(f_alpha(beta, maxima.q_plus) > f_alpha(beta, 0.5));
  }
  CHECK_THROWS_AS(locate_maxima(1.0), std::invalid_argument);
}

TEST_CASE("stirling gap is o(r) at fixed alpha") {
  double prev_ratio = 1.0;
  for (int r : {100, 1000, 10000}) {
    const double gap = std::abs(stirling_log_binomial_gap(r, r / 2));
    const double ratio = gap / r;
    CHECK(ratio < prev_ratio);
    prev_ratio = ratio;
  }
  CHECK(prev_ratio < 1e-3);
}

TEST_CASE("build_regular_graph: K4 is the unique simple 3-regular graph on 4 vertices") {
  const auto g = build_regular_graph(4, 3, 7);
  REQUIRE(g.edges.size() == 6);
  std::set<std::pair<int, int>> expected{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  CHECK(std::set<std::pair<int, int>>(g.edges.begin(), g.edges.end()) == expected);
}

TEST_CASE("build_regular_graph: odd d*n rejected") {
  CHECK_THROWS_AS(build_regular_graph(5, 3, 1), std::invalid_argument);
}

TEST_CASE("build_regular_graph: degrees exact, simple, deterministic under seed") {
  const auto g1 = build_regular_graph(100, 4, 12345);
  const auto g2 = build_regular_graph(100, 4, 12345);
  CHECK(g1.edges == g2.edges);
  std::vector<int> deg(100, 0);
  std::set<std::pair<int, int>> seen;
  for (const auto& [u, v] : g1.edges) {
    CHECK(u != v);
    CHECK(seen.insert({u, v}).second);
    ++deg[u];
    ++deg[v];
  }
  for (int v = 0; v < 100; ++v) CHECK(deg[v] == 4);
  const auto g3 = build_regular_graph(100, 4, 54321);
  CHECK(g3.edges != g1.edges);
}

TEST_CASE("verify_regular_gadget: exact path, deviation shrinks with n") {
  // d=3, t=1, beta=1.0 (above beta_3 ~ 0.549)
  RegularVerifyOptions opts;
  const RegularGadget small(build_regular_graph(16, 3, 3), 1, 1.0);
  const RegularGadget large(build_regular_graph(24, 3, 3), 1, 1.0);
  const auto rep_small = verify_regular_gadget(small, opts);
  const auto rep_large = verify_regular_gadget(large, opts);
  CHECK(rep_small.exact);
  CHECK(rep_large.exact);
  CHECK(rep_small.flip_symmetry_gap < 1e-12);
  CHECK(rep_large.flip_symmetry_gap < 1e-12);
  CHECK(rep_large.max_deviation < rep_small.max_deviation);
  CHECK(rep_small.phase_balance_structural);
}

TEST_CASE("verify_regular_gadget: sampling path tracks the exact conditionals") {
  const auto graph = build_regular_graph(15, 4, 9);
  const RegularGadget gadget(graph, 2, 0.8);  // beta_4 ~ 0.3466
  RegularVerifyOptions exact_opts;
  const auto exact_rep = verify_regular_gadget(gadget, exact_opts);
  REQUIRE(exact_rep.exact);

  RegularVerifyOptions sampled_opts;
  sampled_opts.exact_max_dimension = 10;  // force the chain path
  sampled_opts.samples = 150000;
  sampled_opts.burn_in_sweeps = 5000;
  sampled_opts.seed = 42;
  const auto sampled_rep = verify_regular_gadget(gadget, sampled_opts);
  CHECK_FALSE(sampled_rep.exact);
  CHECK(sampled_rep.samples_used == 150000);
  // empirical Pr[tau|+] and Pr[-tau|-] agree in law; allow generous sampling slack
  CHECK(sampled_rep.flip_symmetry_gap < 12.0 * sampled_rep.max_std_error);
  // cell probabilities track the exact conditionals (ratio metrics explode on
  // ~1e-5 cells, so compare absolute masses)
  for (std::size_t tau = 0; tau < exact_rep.conditional_plus.size(); ++tau) {
    CHECK(std::abs(sampled_rep.conditional_plus[tau] - exact_rep.conditional_plus[tau]) <
          6.0 * sampled_rep.max_std_error + 0.004);
    CHECK(std::abs(sampled_rep.conditional_minus[tau] - exact_rep.conditional_minus[tau]) <
          6.0 * sampled_rep.max_std_error + 0.004);
  }
}

TEST_CASE("verify_regular_gadget: below-threshold beta rejected") {
  const RegularGadget gadget(build_regular_graph(12, 3, 5), 1, 0.5);
  CHECK_THROWS_AS(verify_regular_gadget(gadget), std::invalid_argument);
}

TEST_CASE("regular gadget type validation") {
  CHECK_THROWS_AS(RegularGadget(build_regular_graph(12, 3, 5), 2, 1.0),
                  std::invalid_argument);  // n - t even
  auto broken = build_regular_graph(12, 3, 5);
  broken.edges.pop_back();
  CHECK_THROWS_AS(RegularGadget(broken, 1, 1.0), std::invalid_argument);
}
