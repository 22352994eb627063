#include "specising/gadget.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "specising/common.hpp"
#include "specising/detail/gray_enumerate.hpp"
#include "specising/meanfield.hpp"
#include "specising/spectral.hpp"

namespace specising {

namespace {

// cumulative log-factorials, grown on demand; Kahan-built so the table stays
// accurate out to r in the thousands
const std::vector<double>& log_factorials(int up_to) {
  thread_local std::vector<double> table{0.0, 0.0};  // log 0!, log 1!
  thread_local double comp = 0.0;
  while (static_cast<int>(table.size()) <= up_to) {
    const double x = std::log(static_cast<double>(table.size()));
    const double y = x - comp;
    const double t = table.back() + y;
    comp = (t - table.back()) - y;
    table.push_back(t);
  }
  return table;
}

int tau_index_bits(std::uint64_t mask, const std::vector<int>& terminals) {
  int bits = 0;
  for (std::size_t p = 0; p < terminals.size(); ++p)
    if ((mask >> terminals[p]) & 1u) bits |= 1 << p;
  return bits;
}

}  // namespace

double log_binomial(int r, int k) {
  if (k < 0 || k > r) throw std::invalid_argument("log_binomial: k out of range");
  const auto& lf = log_factorials(r);
  return lf[static_cast<std::size_t>(r)] - lf[static_cast<std::size_t>(k)] -
         lf[static_cast<std::size_t>(r - k)];
}

double stirling_log_binomial_gap(int r, int k) {
  return log_binomial(r, k) - r * binary_entropy(static_cast<double>(k) / r);
}

CliqueGadget::CliqueGadget(int n_, int t_, double beta_) : n(n_), t(t_), beta(beta_) {
  if (t < 0 || n <= t) throw std::invalid_argument("CliqueGadget: need n > t >= 0");
  if (beta <= 1.0) throw std::invalid_argument("CliqueGadget: beta must exceed 1");
}

std::vector<int> CliqueGadget::terminals() const {
  std::vector<int> s(static_cast<std::size_t>(t));
  std::iota(s.begin(), s.end(), 0);
  return s;
}

SymmetricInteraction CliqueGadget::interaction() const {
  const double w = beta / static_cast<double>(r());
  std::vector<MatrixEntry> entries;
  entries.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) entries.push_back({i, j, w});
  return SymmetricInteraction(n, std::move(entries));
}

PhaseLabel phase_of(const SpinConfiguration& sigma, const std::vector<int>& terminals) {
  const int n = sigma.size();
  std::vector<char> is_terminal(static_cast<std::size_t>(n), 0);
  for (int s : terminals) {
    if (s < 0 || s >= n) throw std::invalid_argument("phase_of: terminal index out of range");
    is_terminal[static_cast<std::size_t>(s)] = 1;
  }
  const int free_count = n - static_cast<int>(terminals.size());
  if (free_count % 2 == 0)
    throw std::invalid_argument("phase_of: non-terminal count must be odd (phase could tie)");
  int sum = 0;
  for (int i = 0; i < n; ++i)
    if (!is_terminal[static_cast<std::size_t>(i)]) sum += sigma.spins[static_cast<std::size_t>(i)];
  return sum > 0 ? PhaseLabel::plus : PhaseLabel::minus;
}

double z_alpha_tau(const CliqueGadget& g, int k, int tau_sum) {
  const int r = g.r();
  if (k < 0 || k > r) throw std::invalid_argument("z_alpha_tau: k out of range");
  if (std::abs(tau_sum) > g.t || ((tau_sum + g.t) % 2 != 0))
    throw std::invalid_argument("z_alpha_tau: tau_sum incompatible with t");
  const double total = static_cast<double>(2 * k - r + tau_sum);
  return log_binomial(r, k) + g.beta / (2.0 * r) * total * total;
}

namespace {

std::vector<double> clique_log_weights_range(const CliqueGadget& g, int k_lo, int k_hi) {
  std::vector<double> log_w(static_cast<std::size_t>(g.t) + 1);
  for (int j = 0; j <= g.t; ++j) {
    const int s = 2 * j - g.t;
    LogSumAccumulator acc;
    for (int k = k_lo; k <= k_hi; ++k) acc.add(z_alpha_tau(g, k, s));
    log_w[static_cast<std::size_t>(j)] = acc.value();
  }
  return log_w;
}

}  // namespace

std::vector<double> clique_terminal_log_weights(const CliqueGadget& g) {
  return clique_log_weights_range(g, 0, g.r());
}

std::vector<double> clique_terminal_log_weights(const CliqueGadget& g, PhaseLabel phase) {
  const int r = g.r();
  if (r % 2 == 0) throw std::invalid_argument("phase-restricted clique sums require odd r");
  if (phase == PhaseLabel::plus) return clique_log_weights_range(g, (r + 1) / 2, r);
  return clique_log_weights_range(g, 0, (r - 1) / 2);
}

TerminalDistribution terminal_distribution(const CliqueGadget& g, PhaseLabel phase, int t_cap) {
  if (g.t > t_cap)
    throw std::invalid_argument("terminal_distribution: t exceeds cap " + std::to_string(t_cap));
  const auto log_w = clique_terminal_log_weights(g, phase);
  LogSumAccumulator total;
  for (int j = 0; j <= g.t; ++j)
    total.add(log_binomial(g.t, j) + log_w[static_cast<std::size_t>(j)]);
  const double log_total = total.value();

  TerminalDistribution dist;
  dist.phase = phase;
  dist.t = g.t;
  dist.probabilities.resize(std::size_t{1} << g.t);
  for (std::uint64_t mask = 0; mask < dist.probabilities.size(); ++mask) {
    const int j = std::popcount(mask);
    dist.probabilities[mask] = std::exp(log_w[static_cast<std::size_t>(j)] - log_total);
  }
  return dist;
}

double product_measure_prob(double q, int t, int tau_sum) {
  if (q <= 0.0 || q >= 1.0) throw std::invalid_argument("product_measure_prob: q must be in (0,1)");
  if (std::abs(tau_sum) > t || (tau_sum + t) % 2 != 0)
    throw std::invalid_argument("product_measure_prob: tau_sum incompatible with t");
  const int plus = (tau_sum + t) / 2;
  return std::pow(q, plus) * std::pow(1.0 - q, t - plus);
}

std::vector<double> product_measure_table(double q, int t) {
  std::vector<double> table(std::size_t{1} << t);
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    const int plus = std::popcount(mask);
    table[mask] = product_measure_prob(q, t, 2 * plus - t);
  }
  return table;
}

double gadget_epsilon(const CliqueGadget& g) {
  const auto mf = solve_clique_fixed_points(g.beta);
  const double q_plus = mf.q_plus.value();
  double eps = 0.0;
  for (PhaseLabel phase : {PhaseLabel::plus, PhaseLabel::minus}) {
    const auto dist = terminal_distribution(g, phase);
    const double q = phase == PhaseLabel::plus ? q_plus : 1.0 - q_plus;
    const auto product = product_measure_table(q, g.t);
    for (std::size_t mask = 0; mask < product.size(); ++mask)
      eps = std::max(eps, std::abs(dist.probabilities[mask] / product[mask] - 1.0));
  }
  return eps;
}

double f_alpha(double beta, double alpha) {
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("f_alpha: alpha must be in [0,1]");
  const double m = 2.0 * alpha - 1.0;
  return binary_entropy(alpha) + 0.5 * beta * m * m;
}

MaximaPair locate_maxima(double beta) {
  if (beta <= 1.0)
    throw std::invalid_argument("locate_maxima: beta must exceed 1 (single flat maximum below)");
  const auto f = [beta](double a) { return f_alpha(beta, a); };

  // coarse argmax on (1/2, 1), then golden-section (f is unimodal there)
  const int grid = 4096;
  double best_a = 0.5, best_f = f(0.5);
  for (int k = 1; k <= grid; ++k) {
    const double a = 0.5 + 0.5 * static_cast<double>(k) / (grid + 1);
    const double fa = f(a);
    if (fa > best_f) {
      best_f = fa;
      best_a = a;
    }
  }
  double lo = std::max(0.5, best_a - 0.5 / grid);
  double hi = std::min(1.0 - 1e-15, best_a + 0.5 / grid);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-7) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    }
  }
  // one parabolic refinement beats the sqrt(eps) plateau limit of pure search;
  // h balances the cubic bias f'''h^2/(6 f'') against eval noise / (f'' h)
  const double x0 = 0.5 * (lo + hi);
  const double h = 3e-7;
  const double fm = f(x0 - h), f0 = f(x0), fp = f(x0 + h);
  const double denom = fm - 2.0 * f0 + fp;
  double q_plus = x0;
  if (denom < 0.0) q_plus = x0 + 0.5 * h * (fm - fp) / denom;
  return {1.0 - q_plus, q_plus};
}

RegularGraph build_regular_graph(int n, int d, std::uint64_t seed, int max_attempts) {
  if (d < 3) throw std::invalid_argument("build_regular_graph: d must be >= 3");
  if (n <= d) throw std::invalid_argument("build_regular_graph: need n > d");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw std::invalid_argument("build_regular_graph: d*n must be even");

  std::mt19937_64 rng(seed);
  std::vector<int> stubs(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < d; ++k) stubs[static_cast<std::size_t>(v) * d + k] = v;

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (std::size_t i = stubs.size() - 1; i > 0; --i) {
      const std::size_t j = uniform_below(rng, i + 1);
      std::swap(stubs[i], stubs[j]);
    }
    bool simple = true;
    std::vector<std::pair<int, int>> edges;
    edges.reserve(stubs.size() / 2);
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i + 1 < stubs.size() && simple; i += 2) {
      const int u = stubs[i], v = stubs[i + 1];
      if (u == v) {
        simple = false;
        break;
      }
      auto& row = adj[static_cast<std::size_t>(std::min(u, v))];
      const int other = std::max(u, v);
      if (std::find(row.begin(), row.end(), other) != row.end()) {
        simple = false;
        break;
      }
      row.push_back(other);
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    if (simple) {
      std::sort(edges.begin(), edges.end());
      return {n, d, std::move(edges)};
    }
  }
  throw std::runtime_error("build_regular_graph: rejection cap exceeded (" +
                           std::to_string(max_attempts) + " attempts)");
}

RegularGadget::RegularGadget(RegularGraph g, int t_, double beta_)
    : graph(std::move(g)), t(t_), beta(beta_) {
  if (t < 0 || graph.n <= t) throw std::invalid_argument("RegularGadget: need n > t >= 0");
  if ((graph.n - t) % 2 == 0)
    throw std::invalid_argument("RegularGadget: n - t must be odd");
  std::vector<int> deg(static_cast<std::size_t>(graph.n), 0);
  for (const auto& [u, v] : graph.edges) {
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  }
  for (int v = 0; v < graph.n; ++v)
    if (deg[static_cast<std::size_t>(v)] != graph.d)
      throw std::invalid_argument("RegularGadget: vertex " + std::to_string(v) +
                                  " has degree " + std::to_string(deg[static_cast<std::size_t>(v)]));
}

std::vector<int> RegularGadget::terminals() const {
  std::vector<int> s(static_cast<std::size_t>(t));
  std::iota(s.begin(), s.end(), 0);
  return s;
}

SymmetricInteraction RegularGadget::interaction() const {
  std::vector<MatrixEntry> entries;
  entries.reserve(graph.edges.size());
  for (const auto& [u, v] : graph.edges) entries.push_back({u, v, beta});
  return SymmetricInteraction(graph.n, std::move(entries));
}

std::pair<TerminalDistribution, TerminalDistribution> brute_force_terminal_distribution(
    const SymmetricInteraction& J, const std::vector<int>& terminals, int threads,
    int max_dimension) {
  const int n = J.dimension();
  const int t = static_cast<int>(terminals.size());
  if (n > max_dimension)
    throw std::invalid_argument("brute_force_terminal_distribution: N exceeds cap " +
                                std::to_string(max_dimension));
  if (t > 16) throw std::invalid_argument("brute_force_terminal_distribution: t too large");
  if ((n - t) % 2 == 0)
    throw std::invalid_argument(
        "brute_force_terminal_distribution: non-terminal count must be odd");

  std::uint64_t terminal_mask = 0;
  for (int s : terminals) terminal_mask |= std::uint64_t{1} << s;
  const std::uint64_t all_mask = (std::uint64_t{1} << n) - 1;
  const std::uint64_t free_mask = all_mask & ~terminal_mask;
  const int free_count = n - t;

  const int chunks = 1 << detail::enumeration_chunk_bits(n);
  const std::size_t cells = std::size_t{2} << t;  // [phase][tau]
  std::vector<std::vector<LogSumAccumulator>> partial(
      static_cast<std::size_t>(chunks), std::vector<LogSumAccumulator>(cells));

  std::vector<int> terms_sorted = terminals;
  std::sort(terms_sorted.begin(), terms_sorted.end());

  detail::gray_enumerate_chunked(J, threads, [&](int chunk) {
    auto* grid = partial[static_cast<std::size_t>(chunk)].data();
    return [grid, free_mask, free_count, &terms_sorted, t](std::uint64_t mask, double e) {
      const int plus = std::popcount(mask & free_mask);
      const int phase_cell = (2 * plus > free_count) ? 0 : 1;
      const int tau = tau_index_bits(mask, terms_sorted);
      grid[(static_cast<std::size_t>(phase_cell) << t) | static_cast<std::size_t>(tau)].add(e);
    };
  });

  std::pair<TerminalDistribution, TerminalDistribution> result;
  for (int phase_cell = 0; phase_cell < 2; ++phase_cell) {
    auto& dist = phase_cell == 0 ? result.first : result.second;
    dist.phase = phase_cell == 0 ? PhaseLabel::plus : PhaseLabel::minus;
    dist.t = t;
    std::vector<double> log_mass(std::size_t{1} << t);
    LogSumAccumulator total;
    for (std::uint64_t tau = 0; tau < log_mass.size(); ++tau) {
      LogSumAccumulator cell;
      for (int c = 0; c < chunks; ++c)
        cell.merge(partial[static_cast<std::size_t>(c)]
                          [(static_cast<std::size_t>(phase_cell) << t) | tau]);
      log_mass[tau] = cell.value();
      total.add(log_mass[tau]);
    }
    const double log_total = total.value();
    dist.probabilities.resize(log_mass.size());
    for (std::size_t tau = 0; tau < log_mass.size(); ++tau)
      dist.probabilities[tau] = std::exp(log_mass[tau] - log_total);
  }
  return result;
}

namespace {

// Heat-bath chain restricted to one phase: proposals that would flip the sign
// of the non-terminal spin sum are rejected, so the stationary law is the
// Gibbs measure conditioned on the phase.
class PhaseRestrictedChain {
 public:
  PhaseRestrictedChain(const SymmetricInteraction& J, const std::vector<int>& terminals,
                       PhaseLabel phase, std::uint64_t seed)
      : J_(J), rng_(seed), phase_sign_(static_cast<int>(phase)) {
    const int n = J.dimension();
    is_terminal_.assign(static_cast<std::size_t>(n), 0);
    for (int s : terminals) is_terminal_[static_cast<std::size_t>(s)] = 1;
    const std::int8_t fill = phase_sign_ > 0 ? 1 : -1;
    spins_.assign(static_cast<std::size_t>(n), fill);
    h_.assign(static_cast<std::size_t>(n), 0.0);
    free_sum_ = 0;
    for (int i = 0; i < n; ++i) {
      if (!is_terminal_[static_cast<std::size_t>(i)]) free_sum_ += fill;
      for (const auto& [j, w] : J.adjacency()[static_cast<std::size_t>(i)])
        h_[static_cast<std::size_t>(i)] += w * spins_[static_cast<std::size_t>(j)];
    }
  }

  void sweep() {
    const int n = J_.dimension();
    for (int u = 0; u < n; ++u) {
      const auto i = static_cast<std::size_t>(uniform_below(rng_, static_cast<std::uint64_t>(n)));
      const double p_plus = sigmoid(2.0 * h_[i]);
      const std::int8_t next = uniform_unit(rng_) < p_plus ? 1 : -1;
      if (next == spins_[i]) continue;
      if (!is_terminal_[i]) {
        const int new_sum = free_sum_ + 2 * next;
        if ((new_sum > 0 ? 1 : -1) != phase_sign_) continue;  // would leave the phase
        free_sum_ = new_sum;
      }
      spins_[i] = next;
      const double delta = 2.0 * next;
      for (const auto& [j, w] : J_.adjacency()[i]) h_[static_cast<std::size_t>(j)] += delta * w;
    }
  }

  std::uint64_t terminal_mask(const std::vector<int>& terminals) const {
    std::uint64_t tau = 0;
    for (std::size_t p = 0; p < terminals.size(); ++p)
      if (spins_[static_cast<std::size_t>(terminals[p])] > 0) tau |= std::uint64_t{1} << p;
    return tau;
  }

 private:
  const SymmetricInteraction& J_;
  std::mt19937_64 rng_;
  int phase_sign_;
  std::vector<std::int8_t> spins_;
  std::vector<double> h_;
  std::vector<char> is_terminal_;
  int free_sum_;
};

}  // namespace

RegularGadgetReport verify_regular_gadget(const RegularGadget& g,
                                          const RegularVerifyOptions& opts) {
  const int d = g.d();
  const double beta = g.beta;
  const double beta_d = tree_uniqueness_beta(d);
  if (beta <= beta_d + 1e-9)
    throw std::invalid_argument("verify_regular_gadget: beta must exceed the tree threshold " +
                                std::to_string(beta_d) + " with margin");

  RegularGadgetReport report{};
  report.epsilon_target = opts.epsilon_target;

  const auto J = g.interaction();
  const auto spectrum = extreme_eigenvalues(J);
  report.gap = spectrum.gap;
  report.friedman_bound = beta * friedman_lambda(d) + opts.epsilon_target;
  report.gap_ok = report.gap <= report.friedman_bound;

  report.phase_balance_structural = (g.r() % 2 == 1);

  const auto tree = solve_tree_fixed_points(d, beta);
  report.tree_q_plus = tree.q_plus;
  const auto q_table_plus = product_measure_table(tree.q_plus, g.t);
  const auto q_table_minus = product_measure_table(tree.q_minus, g.t);

  std::vector<double> emp_plus, emp_minus;
  if (g.n() <= opts.exact_max_dimension) {
    report.exact = true;
    auto [dist_plus, dist_minus] =
        brute_force_terminal_distribution(J, g.terminals(), opts.threads);
    emp_plus = std::move(dist_plus.probabilities);
    emp_minus = std::move(dist_minus.probabilities);
    report.samples_used = 0;
  } else {
    report.exact = false;
    const auto terminals = g.terminals();
    std::vector<std::uint64_t> counts_plus(std::size_t{1} << g.t, 0),
        counts_minus(std::size_t{1} << g.t, 0);
    auto run = [&](PhaseLabel phase, std::vector<std::uint64_t>& counts, std::uint64_t seed) {
      PhaseRestrictedChain chain(J, terminals, phase, seed);
      for (std::uint64_t s = 0; s < opts.burn_in_sweeps; ++s) chain.sweep();
      for (std::uint64_t s = 0; s < opts.samples; ++s) {
        chain.sweep();
        ++counts[chain.terminal_mask(terminals)];
      }
    };
    run(PhaseLabel::plus, counts_plus, opts.seed);
    run(PhaseLabel::minus, counts_minus, opts.seed + 0x9e3779b97f4a7c15ull);
    emp_plus.resize(counts_plus.size());
    emp_minus.resize(counts_minus.size());
    for (std::size_t i = 0; i < counts_plus.size(); ++i) {
      emp_plus[i] = static_cast<double>(counts_plus[i]) / static_cast<double>(opts.samples);
      emp_minus[i] = static_cast<double>(counts_minus[i]) / static_cast<double>(opts.samples);
      const double se_p = std::sqrt(emp_plus[i] * (1.0 - emp_plus[i]) /
                                    static_cast<double>(opts.samples));
      const double se_m = std::sqrt(emp_minus[i] * (1.0 - emp_minus[i]) /
                                    static_cast<double>(opts.samples));
      report.max_std_error = std::max({report.max_std_error, se_p, se_m});
    }
    report.samples_used = opts.samples;
  }

  const std::size_t table = std::size_t{1} << g.t;
  const std::size_t flip = table - 1;
  for (std::size_t tau = 0; tau < table; ++tau) {
    report.max_deviation = std::max(
        report.max_deviation, std::abs(emp_plus[tau] / q_table_plus[tau] - 1.0));
    report.max_deviation = std::max(
        report.max_deviation, std::abs(emp_minus[tau] / q_table_minus[tau] - 1.0));
    report.flip_symmetry_gap =
        std::max(report.flip_symmetry_gap, std::abs(emp_plus[tau] - emp_minus[tau ^ flip]));
  }
  report.conditional_plus = std::move(emp_plus);
  report.conditional_minus = std::move(emp_minus);
  report.epsilon_met = report.max_deviation <= opts.epsilon_target;
  return report;
}

}  // namespace specising
