#pragma once

#include <optional>

#include "specising/interaction.hpp"

namespace specising {

struct ReducedInstance;  // reduction.hpp

struct SpectrumSummary {
  double lambda_min;
  double lambda_max;
  double gap;        // lambda_max - lambda_min
  double tolerance;  // absolute accuracy actually targeted
};

struct SpectralOptions {
  double tol = 1e-9;
  int dense_max_dimension = 2000;  // full symmetric solve up to here, Lanczos above
  bool force_iterative = false;
  int lanczos_cap = 400;
};

// Extreme eigenvalues of the symmetric matrix to absolute accuracy
// tol * max(1, max row sum of |J|).
SpectrumSummary extreme_eigenvalues(const SymmetricInteraction& J,
                                    const SpectralOptions& opts = {});

struct InstanceValidation {
  SpectrumSummary spectrum;
  double gamma;
  bool gap_ok;  // gap < gamma
  std::optional<int> d;
  std::optional<int> max_row_support;
  std::optional<bool> row_support_ok;
  bool pass;
};

// SpectralIsing / BoundedSpectralIsing membership check.
InstanceValidation validate_instance(const SymmetricInteraction& J, double gamma,
                                     std::optional<int> d = std::nullopt,
                                     const SpectralOptions& opts = {});

struct WeylCertificate {
  double e_norm;           // ||E||: max |weight| over the disjoint matching
  double d_gap;            // spectral width of the block-diagonal part
  double certified_bound;  // 2||E|| + gap(D) >= gap(J)
  double measured_gap;     // gap of the full J
  bool bound_holds;        // measured_gap <= certified_bound + 1e-9
  bool dense_admissible;   // dense variant only: n/r < (6g+4)/(5g+5)
};

// Eigenvalue-interval certificate for a constructed instance via its J = D + E
// decomposition; ||E|| is exact because E is a disjoint union of 2x2 blocks.
WeylCertificate weyl_certificate(const ReducedInstance& inst, const SpectralOptions& opts = {});

}  // namespace specising
