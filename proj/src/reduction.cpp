#include "specising/reduction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "specising/common.hpp"
#include "specising/detail/gray_enumerate.hpp"
#include "specising/meanfield.hpp"

namespace specising {

namespace {

void check_reduction_t(int t) {
  if (t < 3 || t % 3 != 0)
    throw std::invalid_argument("reduction requires t to be a positive multiple of 3");
}

double dense_admissibility_limit(double gamma) {
  return (6.0 * gamma + 4.0) / (5.0 * gamma + 5.0);
}

}  // namespace

double ReductionParams::matching_exponent(int m) const {
  const double base = static_cast<double>(m) * static_cast<double>(t) / 2.0;
  return exponent == MatchExponent::per_matching_edge ? base : 3.0 * base;
}

int dense_admissible_n(double gamma, int t) {
  if (gamma <= 1.0) throw std::invalid_argument("dense_admissible_n: gamma must exceed 1");
  check_reduction_t(t);
  const double limit = dense_admissibility_limit(gamma);
  for (int n = t + 2;; ++n) {
    const int r = n - t;
    if (r % 2 == 0) continue;
    if (static_cast<double>(n) / static_cast<double>(r) < limit) return n;
  }
}

double default_sparse_eta(double gamma, int d) {
  const auto c = thresholds(d);
  if (!c.theorem2_threshold)
    throw std::invalid_argument("default_sparse_eta: d must be >= 4");
  const double slack = gamma - *c.theorem2_threshold;
  if (slack <= 0.0)
    throw std::invalid_argument("default_sparse_eta: gamma must exceed the Theorem-2 bound " +
                                std::to_string(*c.theorem2_threshold));
  const double beta_dm1 = tree_uniqueness_beta(d - 1);
  const double lambda_dm1 = friedman_lambda(d - 1);
  return std::min(0.01, slack / (lambda_dm1 + beta_dm1 + 3.0));
}

ReductionParams dense_reduction_params(double gamma, int t, std::optional<int> n) {
  if (gamma <= 1.0)
    throw std::invalid_argument("dense_reduction_params: gamma must exceed 1 "
                                "(beta = (1+gamma)/2 must exceed 1)");
  check_reduction_t(t);
  ReductionParams p;
  p.variant = ReductionVariant::dense;
  p.gamma = gamma;
  p.beta = 0.5 * (1.0 + gamma);
  p.w_minus = (1.0 - gamma) / 5.0;
  p.t = t;
  p.n = n ? *n : dense_admissible_n(gamma, t);
  if (p.n <= t) throw std::invalid_argument("dense_reduction_params: need n > t");
  p.admissible = static_cast<double>(p.n) / static_cast<double>(p.n - t) <
                 dense_admissibility_limit(gamma);
  return p;
}

ReductionParams sparse_reduction_params(double gamma, int d, int t, int n,
                                        std::optional<double> eta, std::uint64_t seed) {
  if (d < 4) throw std::invalid_argument("sparse_reduction_params: d must be >= 4");
  check_reduction_t(t);
  ReductionParams p;
  p.variant = ReductionVariant::sparse;
  p.gamma = gamma;
  p.d = d;
  p.t = t;
  p.n = n;
  p.seed = seed;
  p.eta = eta ? *eta : default_sparse_eta(gamma, d);
  if (p.eta <= 0.0) throw std::invalid_argument("sparse_reduction_params: eta must be positive");
  p.beta = tree_uniqueness_beta(d - 1) + p.eta;
  p.w_minus = -p.eta;
  const double lambda = friedman_lambda(d - 1) + p.eta;
  if (p.beta * lambda + 2.0 * p.eta >= gamma)
    throw std::invalid_argument(
        "sparse_reduction_params: beta*lambda + 2*eta must stay below gamma; decrease eta");
  if (n <= t) throw std::invalid_argument("sparse_reduction_params: need n > t");
  if ((n - t) % 2 == 0)
    throw std::invalid_argument("sparse_reduction_params: n - t must be odd");
  if ((static_cast<long long>(n) * (d - 1)) % 2 != 0)
    throw std::invalid_argument("sparse_reduction_params: (d-1)*n must be even");
  p.admissible = false;
  return p;
}

MaxCutInstance MaxCutInstance::from_graph(const GraphFile& g) {
  MaxCutInstance inst;
  inst.m = g.n;
  inst.edges = g.edges;
  std::vector<int> deg(static_cast<std::size_t>(g.n), 0);
  for (const auto& [u, v] : inst.edges) {
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  }
  inst.three_regular =
      std::all_of(deg.begin(), deg.end(), [](int x) { return x == 3; });
  return inst;
}

std::vector<std::vector<int>> MaxCutInstance::sorted_neighbors() const {
  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(m));
  for (const auto& [u, v] : edges) {
    nbr[static_cast<std::size_t>(u)].push_back(v);
    nbr[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& row : nbr) std::sort(row.begin(), row.end());
  return nbr;
}

std::vector<int> ReducedInstance::block_terminals(int v) const {
  std::vector<int> s(static_cast<std::size_t>(params.t));
  std::iota(s.begin(), s.end(), v * params.n);
  return s;
}

namespace {

ReducedInstance assemble_reduction(const MaxCutInstance& H, const ReductionParams& p,
                                   std::optional<RegularGraph> gadget_graph) {
  if (!H.three_regular)
    throw std::invalid_argument("build_reduction: H must be 3-regular");
  check_reduction_t(p.t);
  const int n = p.n, t = p.t, m = H.m;
  if (n <= t) throw std::invalid_argument("build_reduction: need n > t");

  // block-diagonal part D: one gadget copy per vertex of H
  std::vector<MatrixEntry> d_entries;
  if (p.variant == ReductionVariant::dense) {
    const double w_plus = p.beta / static_cast<double>(n - t);
    d_entries.reserve(static_cast<std::size_t>(m) * n * (n + 1) / 2);
    for (int v = 0; v < m; ++v) {
      const int base = v * n;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) d_entries.push_back({base + i, base + j, w_plus});
    }
  } else {
    if (!gadget_graph) throw std::invalid_argument("build_reduction: sparse variant needs a gadget");
    d_entries.reserve(static_cast<std::size_t>(m) * gadget_graph->edges.size());
    for (int v = 0; v < m; ++v) {
      const int base = v * n;
      for (const auto& [a, b] : gadget_graph->edges)
        d_entries.push_back({base + a, base + b, p.beta});
    }
  }

  // matching part E: each H-edge contributes t/3 edges between the paired
  // terminal thirds, k-th terminal to k-th terminal
  const auto nbr = H.sorted_neighbors();
  const int third = t / 3;
  std::vector<MatchingEdge> matching;
  matching.reserve(static_cast<std::size_t>(m) * t / 2);
  for (const auto& [u, v] : H.edges) {
    const auto& nu = nbr[static_cast<std::size_t>(u)];
    const auto& nv = nbr[static_cast<std::size_t>(v)];
    const int i = static_cast<int>(std::find(nu.begin(), nu.end(), v) - nu.begin());
    const int j = static_cast<int>(std::find(nv.begin(), nv.end(), u) - nv.begin());
    for (int k = 0; k < third; ++k) {
      const int a = u * n + i * third + k;
      const int b = v * n + j * third + k;
      matching.push_back({std::min(a, b), std::max(a, b), p.w_minus});
    }
  }

  // audit: every terminal matched exactly once, non-terminals untouched
  std::vector<int> match_count(static_cast<std::size_t>(m) * n, 0);
  for (const auto& e : matching) {
    ++match_count[static_cast<std::size_t>(e.i)];
    ++match_count[static_cast<std::size_t>(e.j)];
  }
  for (int g = 0; g < m * n; ++g) {
    const int expected = (g % n) < t ? 1 : 0;
    if (match_count[static_cast<std::size_t>(g)] != expected)
      throw std::runtime_error("build_reduction: matching audit failed at vertex " +
                               std::to_string(g));
  }

  std::vector<MatrixEntry> j_entries = d_entries;
  for (const auto& e : matching) j_entries.push_back({e.i, e.j, e.w});

  ReducedInstance inst{p, H, SymmetricInteraction(n * m, std::move(j_entries)),
                       SymmetricInteraction(n * m, std::move(d_entries)), std::move(matching),
                       std::move(gadget_graph)};
  return inst;
}

}  // namespace

ReducedInstance build_reduction(const MaxCutInstance& H, const ReductionParams& p) {
  std::optional<RegularGraph> gadget;
  if (p.variant == ReductionVariant::sparse)
    gadget = build_regular_graph(p.n, p.d - 1, p.seed);
  return assemble_reduction(H, p, std::move(gadget));
}

double reduction_q_plus(const ReductionParams& p) {
  if (p.variant == ReductionVariant::dense) {
    const auto mf = solve_clique_fixed_points(p.beta);
    return mf.q_plus.value();
  }
  return solve_tree_fixed_points(p.d - 1, p.beta).q_plus;
}

RatioConstants compute_ab(const ReductionParams& p, double q_plus) {
  if (q_plus < 0.5 || q_plus >= 1.0)
    throw std::invalid_argument("compute_ab: q_plus must lie in [1/2, 1)");
  const auto psi = [&](double x, double y) { return std::exp(p.psi_c * p.w_minus * x * y); };
  const double agree = q_plus * q_plus + (1.0 - q_plus) * (1.0 - q_plus);
  const double differ = 2.0 * q_plus * (1.0 - q_plus);
  RatioConstants c{};
  c.a = agree * psi(1, 1) + differ * psi(1, -1);
  c.b = agree * psi(-1, 1) + differ * psi(1, 1);
  c.q_plus = q_plus;
  c.psi_c = p.psi_c;
  return c;
}

namespace {

// per-tau log weights of a single sparse gadget: W(tau) = sum over the
// non-terminal spins of exp(energy), by full enumeration
std::vector<double> sparse_gadget_log_weights(const ReducedInstance& inst,
                                              const StructuredZOptions& opts) {
  const auto& p = inst.params;
  if (p.n > opts.sparse_gadget_max_n)
    throw std::invalid_argument("structured_log_z: sparse gadget too large for exact enumeration");
  RegularGadget gadget(*inst.gadget_graph, p.t, p.beta);
  const auto J = gadget.interaction();
  const int t = p.t;

  const int chunks = 1 << detail::enumeration_chunk_bits(p.n);
  std::vector<std::vector<LogSumAccumulator>> partial(
      static_cast<std::size_t>(chunks), std::vector<LogSumAccumulator>(std::size_t{1} << t));
  const std::uint64_t t_mask = (std::uint64_t{1} << t) - 1;
  detail::gray_enumerate_chunked(J, opts.threads, [&](int chunk) {
    auto* cells = partial[static_cast<std::size_t>(chunk)].data();
    return [cells, t_mask](std::uint64_t mask, double e) { cells[mask & t_mask].add(e); };
  });

  std::vector<double> log_w(std::size_t{1} << t);
  for (std::uint64_t tau = 0; tau < log_w.size(); ++tau) {
    LogSumAccumulator acc;
    for (int c = 0; c < chunks; ++c) acc.merge(partial[static_cast<std::size_t>(c)][tau]);
    log_w[tau] = acc.value();
  }
  return log_w;
}

struct TerminalLayout {
  std::vector<int> partner;    // global terminal-bit index of the matched end
  std::vector<double> weight;  // matching weight on that edge
};

TerminalLayout terminal_layout(const ReducedInstance& inst) {
  const int n = inst.params.n, t = inst.params.t;
  TerminalLayout layout;
  const int bits = t * inst.maxcut_instance.m;
  layout.partner.assign(static_cast<std::size_t>(bits), -1);
  layout.weight.assign(static_cast<std::size_t>(bits), 0.0);
  const auto bit_of = [&](int global) { return (global / n) * t + (global % n); };
  for (const auto& e : inst.matching) {
    const int a = bit_of(e.i), b = bit_of(e.j);
    layout.partner[static_cast<std::size_t>(a)] = b;
    layout.partner[static_cast<std::size_t>(b)] = a;
    layout.weight[static_cast<std::size_t>(a)] = e.w;
    layout.weight[static_cast<std::size_t>(b)] = e.w;
  }
  return layout;
}

}  // namespace

double structured_log_z(const ReducedInstance& inst, bool include_matchings,
                        const StructuredZOptions& opts) {
  const auto& p = inst.params;
  const int m = inst.maxcut_instance.m, t = p.t;
  const bool dense = p.variant == ReductionVariant::dense;

  // single-gadget terminal weight tables
  std::vector<double> dense_log_w;   // indexed by (s+t)/2
  std::vector<double> sparse_log_w;  // indexed by tau mask
  if (dense) {
    dense_log_w = clique_terminal_log_weights(CliqueGadget(p.n, t, p.beta));
  } else {
    sparse_log_w = sparse_gadget_log_weights(inst, opts);
  }

  if (!include_matchings) {
    // disjoint union factorizes: log Z = m * log Z_gadget
    LogSumAccumulator z_gadget;
    if (dense) {
      for (int j = 0; j <= t; ++j)
        z_gadget.add(log_binomial(t, j) + dense_log_w[static_cast<std::size_t>(j)]);
    } else {
      for (double lw : sparse_log_w) z_gadget.add(lw);
    }
    return static_cast<double>(m) * z_gadget.value();
  }

  const int bits = t * m;
  if (bits > opts.outer_cap_bits)
    throw std::invalid_argument("structured_log_z: t*m = " + std::to_string(bits) +
                                " exceeds the outer enumeration cap " +
                                std::to_string(opts.outer_cap_bits));
  const auto layout = terminal_layout(inst);

  const int chunk_bits = bits >= 20 ? 6 : 0;
  const int low_bits = bits - chunk_bits;
  const int chunks = 1 << chunk_bits;
  std::vector<LogSumAccumulator> partial(static_cast<std::size_t>(chunks));

  parallel_chunks(chunks, opts.threads, [&](int chunk) {
    auto& acc = partial[static_cast<std::size_t>(chunk)];
    const std::uint64_t base_mask = static_cast<std::uint64_t>(chunk) << low_bits;

    std::vector<std::int8_t> tau(static_cast<std::size_t>(bits));
    for (int b = 0; b < bits; ++b)
      tau[static_cast<std::size_t>(b)] = (base_mask >> b) & 1u ? 1 : -1;

    // per-block state and the running log gadget product
    std::vector<int> plus_count(static_cast<std::size_t>(m), 0);
    std::vector<std::uint64_t> tau_mask(static_cast<std::size_t>(m), 0);
    double log_gadgets = 0.0;
    for (int v = 0; v < m; ++v) {
      for (int q = 0; q < t; ++q)
        if (tau[static_cast<std::size_t>(v * t + q)] > 0) {
          ++plus_count[static_cast<std::size_t>(v)];
          tau_mask[static_cast<std::size_t>(v)] |= std::uint64_t{1} << q;
        }
      log_gadgets += dense ? dense_log_w[static_cast<std::size_t>(plus_count[v])]
                           : sparse_log_w[tau_mask[static_cast<std::size_t>(v)]];
    }
    double match_sum = 0.0;  // sum over matching edges of w * tau_i * tau_j
    for (int b = 0; b < bits; ++b) {
      const int q = layout.partner[static_cast<std::size_t>(b)];
      if (q > b)
        match_sum += layout.weight[static_cast<std::size_t>(b)] *
                     tau[static_cast<std::size_t>(b)] * tau[static_cast<std::size_t>(q)];
    }

    acc.add(log_gadgets + match_sum);
    const std::uint64_t count = std::uint64_t{1} << low_bits;
    for (std::uint64_t idx = 1; idx < count; ++idx) {
      const int b = std::countr_zero(idx);
      const std::size_t bs = static_cast<std::size_t>(b);
      const int v = b / t;
      const std::size_t vs = static_cast<std::size_t>(v);
      tau[bs] = static_cast<std::int8_t>(-tau[bs]);
      if (dense) {
        const int next = plus_count[vs] + tau[bs];
        log_gadgets += dense_log_w[static_cast<std::size_t>(next)] -
                       dense_log_w[static_cast<std::size_t>(plus_count[vs])];
        plus_count[vs] = next;
      } else {
        const std::uint64_t next = tau_mask[vs] ^ (std::uint64_t{1} << (b % t));
        log_gadgets += sparse_log_w[next] - sparse_log_w[tau_mask[vs]];
        tau_mask[vs] = next;
      }
      match_sum += 2.0 * layout.weight[bs] * tau[bs] *
                   tau[static_cast<std::size_t>(layout.partner[bs])];
      acc.add(log_gadgets + match_sum);
    }
  });

  LogSumAccumulator total;
  for (const auto& acc : partial) total.merge(acc);
  return total.value();
}

double reduction_gadget_epsilon(const ReducedInstance& inst, const StructuredZOptions& opts) {
  const auto& p = inst.params;
  if (p.variant == ReductionVariant::dense)
    return gadget_epsilon(CliqueGadget(p.n, p.t, p.beta));

  RegularGadget gadget(*inst.gadget_graph, p.t, p.beta);
  const auto tree = solve_tree_fixed_points(p.d - 1, p.beta);
  auto [dist_plus, dist_minus] = brute_force_terminal_distribution(
      gadget.interaction(), gadget.terminals(), opts.threads, opts.sparse_gadget_max_n);
  const auto q_plus_table = product_measure_table(tree.q_plus, p.t);
  const auto q_minus_table = product_measure_table(tree.q_minus, p.t);
  double eps = 0.0;
  for (std::size_t tau = 0; tau < q_plus_table.size(); ++tau) {
    eps = std::max(eps, std::abs(dist_plus.probabilities[tau] / q_plus_table[tau] - 1.0));
    eps = std::max(eps, std::abs(dist_minus.probabilities[tau] / q_minus_table[tau] - 1.0));
  }
  return eps;
}

MaxCutResult brute_force_maxcut(const MaxCutInstance& H, int max_vertices) {
  if (H.m > max_vertices)
    throw std::invalid_argument("brute_force_maxcut: m exceeds cap " +
                                std::to_string(max_vertices));
  if (H.m < 1) throw std::invalid_argument("brute_force_maxcut: empty graph");
  int best = 0;
  const std::uint64_t half = std::uint64_t{1} << (H.m - 1);  // fix the last vertex's side
  for (std::uint64_t mask = 0; mask < half; ++mask) {
    int cut = 0;
    for (const auto& [u, v] : H.edges)
      cut += static_cast<int>(((mask >> u) & 1u) != ((mask >> v) & 1u));
    best = std::max(best, cut);
  }
  MaxCutResult res{};
  res.maxcut = best;
  res.edge_count = static_cast<int>(H.edges.size());
  res.random_cut_floor = static_cast<double>(res.edge_count) / 2.0;
  res.floor_ok = best >= res.random_cut_floor;
  return res;
}

RatioReport lemma4_check(const ReducedInstance& inst, const StructuredZOptions& opts,
                         std::optional<double> epsilon_override) {
  const auto& p = inst.params;
  const int m = inst.maxcut_instance.m;

  RatioReport rep{};
  rep.psi_c = p.psi_c;
  rep.epsilon = epsilon_override ? *epsilon_override : reduction_gadget_epsilon(inst, opts);
  rep.maxcut = brute_force_maxcut(inst.maxcut_instance).maxcut;
  rep.log_z_full = structured_log_z(inst, true, opts);
  rep.log_z_hat = structured_log_z(inst, false, opts);
  rep.log_ratio = rep.log_z_full - rep.log_z_hat;

  const auto ab = compute_ab(p, reduction_q_plus(p));
  rep.a = ab.a;
  rep.b = ab.b;
  rep.e_match = p.matching_exponent(m);
  rep.log_center = rep.e_match * std::log(ab.a) +
                   static_cast<double>(rep.maxcut) * (p.t / 3.0) * std::log(ab.b / ab.a);
  rep.ratio_over_center = std::exp(rep.log_ratio - rep.log_center);

  rep.window_upper = std::pow(1.0 + 4.0 * rep.epsilon, m);
  rep.lower_vacuous = rep.epsilon >= 0.25;
  rep.window_lower =
      rep.lower_vacuous ? 0.0 : std::pow(1.0 - 4.0 * rep.epsilon, m) * std::pow(2.0, -m);
  rep.pass = rep.ratio_over_center <= rep.window_upper * (1.0 + 1e-9) &&
             (rep.lower_vacuous || rep.ratio_over_center >= rep.window_lower * (1.0 - 1e-9));
  return rep;
}

MaxCutBounds maxcut_bounds(double log_z_ratio, const ReductionParams& p, double epsilon, int m,
                           double delta, std::optional<double> q_plus) {
  if (epsilon >= 0.25)
    throw std::invalid_argument("maxcut_bounds: epsilon must be below 1/4 for a usable window");
  if (delta < 0.0) throw std::invalid_argument("maxcut_bounds: delta must be non-negative");
  const auto ab = compute_ab(p, q_plus ? *q_plus : reduction_q_plus(p));
  if (ab.a >= ab.b)
    throw std::invalid_argument("maxcut_bounds: requires B > A (w_minus < 0 and q_plus > 1/2)");

  const double log_ba = std::log(ab.b / ab.a);
  const double e_match = p.matching_exponent(m);
  const double oracle = delta * static_cast<double>(m) * static_cast<double>(p.n);
  const double denom = static_cast<double>(p.t) * log_ba;
  MaxCutBounds bounds{};
  bounds.lower = 3.0 *
                 (log_z_ratio - oracle - e_match * std::log(ab.a) -
                  m * std::log1p(4.0 * epsilon)) /
                 denom;
  bounds.upper = 3.0 *
                 (log_z_ratio + oracle - e_match * std::log(ab.a) + m * std::log(2.0) -
                  m * std::log1p(-4.0 * epsilon)) /
                 denom;
  return bounds;
}

void write_instance_meta(const std::string& path, const ReducedInstance& inst) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "reduced_instance";
  const auto& p = inst.params;
  doc["params"] = {
      {"variant", p.variant == ReductionVariant::dense ? "dense" : "sparse"},
      {"gamma", p.gamma},
      {"beta", p.beta},
      {"w_minus", p.w_minus},
      {"eta", p.eta},
      {"t", p.t},
      {"n", p.n},
      {"d", p.d},
      {"seed", p.seed},
      {"psi_c", p.psi_c},
      {"exponent", p.exponent == MatchExponent::per_matching_edge ? "mt/2" : "3mt/2"},
      {"admissible", p.admissible},
  };
  doc["maxcut_graph"] = {{"m", inst.maxcut_instance.m}};
  auto& he = doc["maxcut_graph"]["edges"] = nlohmann::json::array();
  for (const auto& [u, v] : inst.maxcut_instance.edges) he.push_back({u, v});
  if (inst.gadget_graph) {
    doc["gadget_graph"] = {{"n", inst.gadget_graph->n}, {"d", inst.gadget_graph->d}};
    auto& ge = doc["gadget_graph"]["edges"] = nlohmann::json::array();
    for (const auto& [u, v] : inst.gadget_graph->edges) ge.push_back({u, v});
  }
  doc["matching_edges"] = inst.matching.size();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << "\n";
}

ReducedInstance read_instance_meta(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path, 0, std::string("invalid JSON: ") + e.what());
  }
  if (doc.value("kind", "") != "reduced_instance")
    throw ParseError(path, 0, "not a reduced-instance meta file");
  const auto& jp = doc.at("params");

  ReductionParams p;
  p.variant = jp.at("variant").get<std::string>() == "dense" ? ReductionVariant::dense
                                                             : ReductionVariant::sparse;
  p.gamma = jp.at("gamma").get<double>();
  p.beta = jp.at("beta").get<double>();
  p.w_minus = jp.at("w_minus").get<double>();
  p.eta = jp.at("eta").get<double>();
  p.t = jp.at("t").get<int>();
  p.n = jp.at("n").get<int>();
  p.d = jp.at("d").get<int>();
  p.seed = jp.at("seed").get<std::uint64_t>();
  p.psi_c = jp.value("psi_c", 1.0);
  p.exponent = jp.value("exponent", "mt/2") == std::string("mt/2")
                   ? MatchExponent::per_matching_edge
                   : MatchExponent::three_halves_mt;
  p.admissible = jp.value("admissible", false);

  GraphFile g;
  g.n = doc.at("maxcut_graph").at("m").get<int>();
  for (const auto& e : doc.at("maxcut_graph").at("edges"))
    g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  const auto H = MaxCutInstance::from_graph(g);

  std::optional<RegularGraph> gadget;
  if (doc.contains("gadget_graph")) {
    RegularGraph rg;
    rg.n = doc["gadget_graph"].at("n").get<int>();
    rg.d = doc["gadget_graph"].at("d").get<int>();
    for (const auto& e : doc["gadget_graph"].at("edges"))
      rg.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    gadget = std::move(rg);
  }

  // re-assemble from the stored pieces; the matching layout is deterministic
  if (p.variant == ReductionVariant::sparse && !gadget)
    throw ParseError(path, 0, "sparse meta requires gadget_graph");
  auto inst = assemble_reduction(H, p, std::move(gadget));

  const auto declared = doc.value("matching_edges", std::size_t{0});
  if (declared != inst.matching.size())
    throw ParseError(path, 0, "matching count mismatch: meta says " + std::to_string(declared) +
                                  ", reconstruction has " + std::to_string(inst.matching.size()));
  return inst;
}

}  // namespace specising
