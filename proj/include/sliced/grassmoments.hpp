#pragma once

#include "sliced/core.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace sliced {

struct MomentEstimate {
  std::string name;
  double value = 0.0;
  double std_err = 0.0;
  double target = 0.0;

  double z_score() const { return std_err > 0.0 ? (value - target) / std_err : (value == target ? 0.0 : INFINITY); }
};

struct MomentReport {
  int d = 0;
  int k = 0;
  std::size_t n_samples = 0;
  std::vector<MomentEstimate> estimates;

  const MomentEstimate& at(const std::string& name) const;
};

/// Haar moments of the projector entries p_ij of P_E, E in G(d, k).
struct GrassmannTargets {
  double mean_diag;      // E p_11 = k/d
  double diag_sq;        // E p_11^2 = k(k+2)/(d(d+2))
  double offdiag_sq;     // E p_12^2 = B = k(d-k)/(d(d-1)(d+2))
  double diag_product;   // E p_11 p_22 = A = k((d+1)k-2)/(d(d-1)(d+2))
  double offdiag_norm;   // C(d,k) = k(d-k)/((d-1)(d+2))
};

GrassmannTargets grassmann_targets(int d, int k);

/// Monte-Carlo estimates of E p_11, E p_11^2, E p_12^2, E p_11 p_22.
/// k == d is accepted as a diagnostic (P_E = I).
MomentReport projection_moments(int d, int k, std::size_t n_samples, Seed seed);

struct OffdiagonalNorm {
  double estimate = 0.0;
  double std_err = 0.0;
  double target = 0.0;
  /// max over samples of | ||P M (I-P)||^2 - (Tr(P M^2 P) - Tr(P M P M P)) |
  double identity_residual = 0.0;
};

/// E ||P_E M (I - P_E)||_HS^2 against C(d,k) ||M - (Tr M / d) I||_HS^2.
OffdiagonalNorm offdiagonal_norm(const Matrix& m, int k, std::size_t n_samples, Seed seed);

}  // namespace sliced
