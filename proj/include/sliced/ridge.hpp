#pragma once

#include "sliced/core.hpp"
#include "sliced/fields.hpp"
#include "sliced/frame.hpp"
#include "sliced/measures.hpp"

#include <map>
#include <vector>

namespace sliced {

/// Least-squares projection of u onto {x -> lambda x + b}.
struct AffineFit {
  double lambda = 0.0;
  Vector b;
  double residual_sq = 0.0;
};

/// Closed-form moments for (Gaussian, Affine) and (standard Gaussian,
/// PolyGradient); sample averages over the atoms of an empirical measure.
AffineFit dist_to_affine(const VectorField& u, const Measure& mu);

enum class RidgeEstimator {
  closed_form,  // exact conditional variance per direction
  binned,       // equal-count quantile bins on an empirical measure
};

struct RidgeOptions {
  RidgeEstimator estimator = RidgeEstimator::closed_form;
  /// Bin count for the binned estimator; 0 selects ceil(n^{1/3}).
  std::size_t bins = 0;
};

struct RidgeDefect {
  double value = 0.0;
  double std_err = 0.0;  // Monte-Carlo error over directions (0 for quadrature grids)
  std::vector<double> per_direction;
};

/// Direction average of E[Var(theta . u(X) | theta . X)].
RidgeDefect ridge_defect(const VectorField& u, const Measure& mu, const DirectionSet& frames, RidgeOptions options = {});

/// Exact ridge defect under an isotropic Gaussian N(a, s^2 I) for affine u,
/// or under N(0, I) for polynomial gradients, with the spherical integral
/// taken from the trace decomposition and the eigenvalue law.
double ridge_defect_spectral(const VectorField& u, const GaussianMeasure& mu);

/// Per-direction conditional variance: equal-count bins in z, residual
/// variance of a least-squares line in each bin, averaged with bin weights.
double binned_conditional_variance(const Vector& z, const Vector& y, std::size_t bins);

struct SpkRatio {
  double ridge = 0.0;
  double dist_sq = 0.0;
  double ratio = 0.0;
  double std_err = 0.0;
  bool excluded = false;  // zero distance to the affine family
};

inline constexpr double kSpkZeroDenominator = 1e-10;

SpkRatio spk_ratio(const VectorField& u, const Measure& mu, const DirectionSet& frames, RidgeOptions options = {});
SpkRatio spk_ratio_spectral(const VectorField& u, const GaussianMeasure& mu);

struct StabilityCheck {
  double lhs = 0.0;  // dist^2(T, affine family)
  double rhs = 0.0;  // (Lambda / kappa) * deficit
  double lambda = 0.0;
  double deficit = 0.0;
  double deficit_std_err = 0.0;
  bool holds = false;
};

/// dist^2(T, A_d) <= (Lambda / kappa) D(mu, T_# mu), with Lambda the largest
/// Lipschitz constant of the projected monotone maps over the frames.
StabilityCheck stability_check(const Measure& mu, const VectorField& transport, const DirectionSet& frames, double kappa,
                               double se_multiplier = 3.0);

/// Affine u = Ax + b written as a Wick polynomial gradient: terms b (degree 1)
/// and A/2 (degree 2).
PolyGradientField to_poly_gradient(const AffineField& f);

/// Sums terms of equal degree.
std::map<int, SymTensor> combine_by_degree(const std::vector<SymTensor>& terms);

}  // namespace sliced
