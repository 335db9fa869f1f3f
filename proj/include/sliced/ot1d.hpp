#pragma once

#include "sliced/core.hpp"

#include <span>
#include <variant>
#include <vector>

namespace sliced {

/// Discrete measure on the line: sorted positions with positive weights summing to one.
class Atoms1D {
 public:
  Atoms1D(std::vector<double> positions, std::vector<double> weights);
  /// Uniform weights 1/n; positions need not be sorted.
  static Atoms1D uniform(std::span<const double> samples);
  static Atoms1D uniform(const Vector& samples);

  const std::vector<double>& positions() const { return positions_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return positions_.size(); }
  double mean() const;
  double variance() const;

 private:
  std::vector<double> positions_;
  std::vector<double> weights_;
};

struct Gaussian1D {
  double mean = 0.0;
  double variance = 0.0;
};

using Weighted1DMeasure = std::variant<Atoms1D, Gaussian1D>;

/// Nondecreasing map given by its values at the source atoms; extended
/// linearly between breakpoints and constantly outside them.
struct PiecewiseMonotoneMap {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

struct AffineMonotoneMap {
  double slope = 1.0;
  double intercept = 0.0;
};

using MonotoneMap1D = std::variant<PiecewiseMonotoneMap, AffineMonotoneMap>;

/// W2^2 by the quantile coupling (two-pointer merge of cumulative weights),
/// or in closed form for two Gaussians.
double w2_1d(const Weighted1DMeasure& a, const Weighted1DMeasure& b);
double w2_1d(const Atoms1D& a, const Atoms1D& b);
double w2_1d(const Gaussian1D& a, const Gaussian1D& b);

/// F_b^{-1} o F_a.  Throws NumericalError when a is degenerate and b is not.
MonotoneMap1D monotone_map(const Weighted1DMeasure& a, const Weighted1DMeasure& b);

double apply(const MonotoneMap1D& map, double s);

/// Lipschitz constant; +infinity when a breakpoint carries two distinct values.
double lipschitz(const MonotoneMap1D& map);
/// Maximum Lipschitz constant over a non-empty family.
double lipschitz_scale(std::span<const MonotoneMap1D> maps);

struct FenchelGapCheck {
  double lhs = 0.0;         // mean |B - tau(A)|^2
  double rhs = 0.0;         // Lambda * (mean |A - B|^2 - W2^2(law A, law B))
  double lipschitz = 0.0;   // Lip of the empirical tau
  bool holds = false;
};

/// Evaluates both sides of the one-dimensional Fenchel-gap bound for paired
/// samples (A_i, B_i), with tau the rank-pairing monotone map between the
/// empirical laws of A and B.
FenchelGapCheck fenchel_gap_bound_check(std::span<const double> a_samples, std::span<const double> b_samples, double lambda);

}  // namespace sliced
