#include "specising/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "specising/common.hpp"
#include "specising/reduction.hpp"

namespace specising {

namespace {

Eigen::MatrixXd to_eigen(const SymmetricInteraction& J) {
  const int n = J.dimension();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : J.entries()) {
    m(e.i, e.j) = e.w;
    m(e.j, e.i) = e.w;
  }
  return m;
}

void matvec(const SymmetricInteraction& J, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  const int n = J.dimension();
  y.setZero(n);
  for (int i = 0; i < n; ++i) y(i) = J.diagonal(i) * x(i);
  const auto& adj = J.adjacency();
  for (int i = 0; i < n; ++i)
    for (const auto& [j, w] : adj[static_cast<std::size_t>(i)]) y(i) += w * x(j);
}

// Lanczos with full reorthogonalization; converges the extreme Ritz pairs to
// residual <= tol_abs or throws.
std::pair<double, double> lanczos_extremes(const SymmetricInteraction& J, double tol_abs,
                                           int cap) {
  const int n = J.dimension();
  const int m_max = std::min(n, cap);
  std::vector<Eigen::VectorXd> basis;
  basis.reserve(static_cast<std::size_t>(m_max));

  std::mt19937_64 rng(0x5ca1ab1edecafull);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = 2.0 * uniform_unit(rng) - 1.0;
  v.normalize();
  basis.push_back(v);

  std::vector<double> alpha, beta;  // tridiagonal coefficients
  Eigen::VectorXd w(n);

  for (int k = 0; k < m_max; ++k) {
    matvec(J, basis[static_cast<std::size_t>(k)], w);
    if (k > 0) w -= beta[static_cast<std::size_t>(k - 1)] * basis[static_cast<std::size_t>(k - 1)];
    const double a = basis[static_cast<std::size_t>(k)].dot(w);
    alpha.push_back(a);
    w -= a * basis[static_cast<std::size_t>(k)];
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= q.dot(w) * q;
    double b = w.norm();

    const int dim = k + 1;
    const bool check = (dim >= 2 && dim % 8 == 0) || dim == m_max || b < 1e-12;
    if (check) {
      Eigen::Map<const Eigen::VectorXd> diag(alpha.data(), dim);
      Eigen::VectorXd sub(dim > 1 ? dim - 1 : 0);
      for (int i = 0; i + 1 < dim; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const auto& vals = es.eigenvalues();
      const auto& vecs = es.eigenvectors();
      const double res_lo = std::abs(b * vecs(dim - 1, 0));
      const double res_hi = std::abs(b * vecs(dim - 1, dim - 1));
      if ((res_lo <= tol_abs && res_hi <= tol_abs) || dim == n)
        return {vals(0), vals(dim - 1)};
      if (dim == m_max)
        throw std::runtime_error("extreme_eigenvalues: Lanczos did not converge within cap");
    }

    if (b < 1e-12) {
      // invariant subspace: continue with a fresh direction
      for (int i = 0; i < n; ++i) w(i) = 2.0 * uniform_unit(rng) - 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) w -= q.dot(w) * q;
      b = w.norm();
      if (b < 1e-12) break;  // space exhausted
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  throw std::runtime_error("extreme_eigenvalues: Lanczos did not converge within cap");
}

}  // namespace

SpectrumSummary extreme_eigenvalues(const SymmetricInteraction& J, const SpectralOptions& opts) {
  if (opts.tol <= 0.0) throw std::invalid_argument("extreme_eigenvalues: tol must be positive");
  const int n = J.dimension();
  const double scale = std::max(1.0, J.max_abs_row_sum());
  const double tol_abs = opts.tol * scale;

  SpectrumSummary s{};
  s.tolerance = tol_abs;
  if (n <= opts.dense_max_dimension && !opts.force_iterative) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(J), Eigen::EigenvaluesOnly);
    s.lambda_min = es.eigenvalues()(0);
    s.lambda_max = es.eigenvalues()(n - 1);
  } else {
    auto [lo, hi] = lanczos_extremes(J, tol_abs, opts.lanczos_cap);
    s.lambda_min = lo;
    s.lambda_max = hi;
  }
  s.gap = s.lambda_max - s.lambda_min;
  return s;
}

InstanceValidation validate_instance(const SymmetricInteraction& J, double gamma,
                                     std::optional<int> d, const SpectralOptions& opts) {
  if (gamma <= 0.0) throw std::invalid_argument("validate_instance: gamma must be positive");
  InstanceValidation v{};
  v.spectrum = extreme_eigenvalues(J, opts);
  v.gamma = gamma;
  v.gap_ok = v.spectrum.gap < gamma;
  v.pass = v.gap_ok;
  if (d) {
    v.d = d;
    v.max_row_support = J.max_row_support(true);
    v.row_support_ok = *v.max_row_support <= *d;
    v.pass = v.pass && *v.row_support_ok;
  }
  return v;
}

WeylCertificate weyl_certificate(const ReducedInstance& inst, const SpectralOptions& opts) {
  const auto& p = inst.params;

  // E must be a disjoint union of 2x2 off-diagonal blocks: then ||E|| is the
  // largest |weight| over the matching.
  std::vector<char> seen(static_cast<std::size_t>(inst.total_dimension()), 0);
  double e_norm = 0.0;
  for (const auto& edge : inst.matching) {
    if (seen[static_cast<std::size_t>(edge.i)] || seen[static_cast<std::size_t>(edge.j)])
      throw std::invalid_argument("weyl_certificate: matching edges are not disjoint");
    seen[static_cast<std::size_t>(edge.i)] = seen[static_cast<std::size_t>(edge.j)] = 1;
    e_norm = std::max(e_norm, std::abs(edge.w));
  }

  WeylCertificate cert{};
  cert.e_norm = e_norm;
  if (p.variant == ReductionVariant::dense) {
    // rank-1 block (beta/r) * ones: eigenvalues {beta*n/r, 0}
    cert.d_gap = p.beta * static_cast<double>(p.n) / static_cast<double>(p.n - p.t);
    const double ratio = static_cast<double>(p.n) / static_cast<double>(p.n - p.t);
    cert.dense_admissible = ratio < (6.0 * p.gamma + 4.0) / (5.0 * p.gamma + 5.0);
  } else {
    // identical blocks: measure one
    RegularGadget gadget(*inst.gadget_graph, p.t, p.beta);
    cert.d_gap = extreme_eigenvalues(gadget.interaction(), opts).gap;
    cert.dense_admissible = false;
  }
  cert.certified_bound = 2.0 * e_norm + cert.d_gap;
  cert.measured_gap = extreme_eigenvalues(inst.coupling, opts).gap;
  cert.bound_holds = cert.measured_gap <= cert.certified_bound + 1e-9;
  return cert;
}

}  // namespace specising
