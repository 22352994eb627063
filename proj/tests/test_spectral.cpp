#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "specising/gadget.hpp"
#include "specising/interaction.hpp"
#include "specising/reduction.hpp"
#include "specising/spectral.hpp"

using namespace specising;

namespace {

SymmetricInteraction clique_block(int n, int t, double beta) {
  const double w = beta / static_cast<double>(n - t);
  std::vector<MatrixEntry> entries;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) entries.push_back({i, j, w});
  return SymmetricInteraction(n, std::move(entries));
}

SymmetricInteraction random_sparse(int n, int nnz, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  std::vector<MatrixEntry> entries;
  std::set<std::pair<int, int>> used;
  while (static_cast<int>(entries.size()) < nnz) {
    int i = static_cast<int>(rng() % n);
    int j = static_cast<int>(rng() % n);
    if (i > j) std::swap(i, j);
    if (!used.insert({i, j}).second) continue;
    entries.push_back({i, j, weight(rng)});
  }
  return SymmetricInteraction(n, std::move(entries));
}

// characteristic-polynomial oracle for 3x3 symmetric matrices: the roots of
// det(A - x I) isolated by sign scanning + interval narrowing
std::vector<double> cubic_eigen_oracle(const std::vector<double>& a) {
  const auto det = [&](double x) {
    const double m[9] = {a[0] - x, a[1], a[2], a[1], a[4] - x, a[5], a[2], a[5], a[8] - x};
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
  };
  double bound = 0.0;
  for (int i = 0; i < 3; ++i)
    bound = std::max(bound, std::abs(a[i * 3]) + std::abs(a[i * 3 + 1]) + std::abs(a[i * 3 + 2]));
  bound += 1.0;
  std::vector<double> roots;
  const int points = 200000;
  double prev_x = -bound, prev_d = det(prev_x);
  for (int k = 1; k <= points; ++k) {
    const double x = -bound + 2.0 * bound * k / points;
    const double dx = det(x);
    if ((prev_d > 0.0) != (dx > 0.0)) {
      double lo = prev_x, hi = x, flo = prev_d;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = det(mid);
        if ((flo > 0.0) == (fm > 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_x = x;
    prev_d = dx;
  }
  return roots;
}

}  // namespace

TEST_CASE("extreme eigenvalues: rank-1 clique block closed form") {
  const int n = 50, t = 3;
  const double beta = 1.25;
  const auto s = extreme_eigenvalues(clique_block(n, t, beta));
  const double top = beta * n / static_cast<double>(n - t);
  CHECK(std::abs(s.lambda_max - top) < 1e-10);
  CHECK(std::abs(s.lambda_min - 0.0) < 1e-10);
  CHECK(std::abs(s.gap - top) < 1e-10);
}

TEST_CASE("extreme eigenvalues: diagonal matrix") {
  SymmetricInteraction J(3, {{0, 0, -1.0}, {1, 1, 0.0}, {2, 2, 2.0}});
  const auto s = extreme_eigenvalues(J);
  CHECK(std::abs(s.lambda_min - (-1.0)) < 1e-12);
  CHECK(std::abs(s.lambda_max - 2.0) < 1e-12);
}

TEST_CASE("extreme eigenvalues: random 3x3 vs characteristic-polynomial oracle") {
  for (std::uint64_t seed : {5, 6, 7}) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> weight(-2.0, 2.0);
    std::vector<MatrixEntry> entries;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) entries.push_back({i, j, weight(rng)});
    SymmetricInteraction J(3, entries);
    const auto dense = J.dense_row_major();
    const auto roots = cubic_eigen_oracle(dense);
    REQUIRE(roots.size() == 3);
    const auto s = extreme_eigenvalues(J);
    CHECK(std::abs(s.lambda_min - roots.front()) < 1e-9);
    CHECK(std::abs(s.lambda_max - roots.back()) < 1e-9);
  }
}

TEST_CASE("iterative path agrees with the dense reference") {
  for (std::uint64_t seed : {11, 12, 13}) {
    const auto J = random_sparse(300, 1200, seed);
    const auto dense = extreme_eigenvalues(J);
    SpectralOptions iter;
    iter.force_iterative = true;
    const auto lanczos = extreme_eigenvalues(J, iter);
    CHECK(std::abs(dense.lambda_min - lanczos.lambda_min) < 1e-7);
    CHECK(std::abs(dense.lambda_max - lanczos.lambda_max) < 1e-7);
  }
}

TEST_CASE("validate_instance: zero matrix passes any gamma") {
  SymmetricInteraction J(5, {});
  const auto v = validate_instance(J, 0.5);
  CHECK(v.gap_ok);
  CHECK(v.pass);
  CHECK(v.spectrum.gap == doctest::Approx(0.0));
}

TEST_CASE("validate_instance: lone clique gadget fails when beta n/r >= gamma") {
  const auto J = clique_block(20, 3, 1.25);  // gap = 1.25 * 20/17 ~ 1.47
  CHECK_FALSE(validate_instance(J, 1.2).gap_ok);
  CHECK(validate_instance(J, 1.5).gap_ok);
}

TEST_CASE("validate_instance: row support verdict") {
  const auto g = build_regular_graph(20, 4, 3);
  std::vector<MatrixEntry> entries;
  for (const auto& [u, v] : g.edges) entries.push_back({u, v, 0.2});
  SymmetricInteraction J(20, entries);
  const auto v = validate_instance(J, 10.0, 4);
  REQUIRE(v.row_support_ok.has_value());
  CHECK(*v.row_support_ok);
  CHECK(*v.max_row_support == 4);
  const auto v3 = validate_instance(J, 10.0, 3);
  CHECK_FALSE(*v3.row_support_ok);
}

TEST_CASE("weyl certificate: dense instance") {
  const double gamma = 1.5;
  const auto params = dense_reduction_params(gamma, 3);
  const auto H = MaxCutInstance::from_graph(GraphFile{
      4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}});
  const auto inst = build_reduction(H, params);
  const auto cert = weyl_certificate(inst);

  const double n_over_r = static_cast<double>(params.n) / (params.n - params.t);
  CHECK(cert.e_norm == doctest::Approx((gamma - 1.0) / 5.0).epsilon(1e-12));
  CHECK(cert.d_gap == doctest::Approx(n_over_r * (1.0 + gamma) / 2.0).epsilon(1e-12));
  CHECK(cert.certified_bound ==
        doctest::Approx(2.0 * (gamma - 1.0) / 5.0 + n_over_r * (1.0 + gamma) / 2.0)
            .epsilon(1e-12));
  CHECK(cert.certified_bound < gamma);
  CHECK(cert.measured_gap <= cert.certified_bound + 1e-9);
  CHECK(cert.bound_holds);
  CHECK(cert.dense_admissible);
}

TEST_CASE("weyl certificate: ||E|| equals the eigensolver's norm of E alone") {
  const auto params = dense_reduction_params(1.5, 3, 20);
  const auto H = MaxCutInstance::from_graph(GraphFile{
      4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}});
  const auto inst = build_reduction(H, params);
  std::vector<MatrixEntry> e_entries;
  for (const auto& e : inst.matching) e_entries.push_back({e.i, e.j, e.w});
  SymmetricInteraction E(inst.total_dimension(), e_entries);
  const auto s = extreme_eigenvalues(E);
  const double norm = std::max(std::abs(s.lambda_min), std::abs(s.lambda_max));
  const auto cert = weyl_certificate(inst);
  CHECK(std::abs(cert.e_norm - norm) < 1e-10);
  // single matching edge of weight w has spectral norm |w|
  SymmetricInteraction single(4, {{0, 2, -0.3}});
  const auto s1 = extreme_eigenvalues(single);
  CHECK(std::abs(std::max(std::abs(s1.lambda_min), s1.lambda_max) - 0.3) < 1e-12);
}

TEST_CASE("weyl certificate: measured gap within bound for several gammas") {
  const auto H = MaxCutInstance::from_graph(GraphFile{
      4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}});
  for (double gamma : {1.2, 1.5, 2.0}) {
    CAPTURE(gamma);
    const auto params = dense_reduction_params(gamma, 3);
    const auto inst = build_reduction(H, params);
    const auto cert = weyl_certificate(inst);
    CHECK(cert.dense_admissible);
    CHECK(cert.certified_bound < gamma);
    CHECK(cert.measured_gap <= cert.certified_bound + 1e-9);
    CHECK(validate_instance(inst.coupling, gamma).gap_ok);
  }
}
