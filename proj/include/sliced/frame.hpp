#pragma once

#include "sliced/core.hpp"

#include <vector>

namespace sliced {

/// Orthonormal d x k basis of a subspace E; k == 1 is a direction theta.
class Frame {
 public:
  static constexpr double kGramTolerance = 1e-10;

  explicit Frame(Matrix basis);
  static Frame direction(const Vector& theta);

  const Matrix& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.rows()); }
  int rank() const { return static_cast<int>(basis_.cols()); }
  /// theta for k == 1.
  Vector direction() const { return basis_.col(0); }
  /// P_E = F F^T.
  Matrix projector() const { return basis_ * basis_.transpose(); }

 private:
  Matrix basis_;
};

/// Frames with quadrature weights summing to one.  Monte-Carlo sets use
/// equal weights; the planar grid uses trapezoid weights.
struct DirectionSet {
  std::vector<Frame> frames;
  std::vector<double> weights;

  static DirectionSet equal_weights(std::vector<Frame> frames);
  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
  int dim() const { return frames.empty() ? 0 : frames.front().dim(); }
  int rank() const { return frames.empty() ? 0 : frames.front().rank(); }
  /// True when the set is an equal-weight Monte-Carlo sample, so a sample
  /// standard error is meaningful.
  bool monte_carlo = true;
};

}  // namespace sliced
