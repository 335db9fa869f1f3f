#pragma once

#include "sliced/core.hpp"
#include "sliced/fields.hpp"
#include "sliced/frame.hpp"

#include <variant>

namespace sliced {

/// Uniform-weight point cloud; row i is atom x_i.
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(Matrix points);

  const Matrix& points() const { return points_; }
  Eigen::Index size() const { return points_.rows(); }
  int dim() const { return static_cast<int>(points_.cols()); }

  Vector mean() const;
  /// Population (1/n) covariance.
  Matrix covariance() const;

 private:
  Matrix points_;
};

class GaussianMeasure {
 public:
  static constexpr double kPsdTolerance = 1e-12;

  GaussianMeasure(Vector mean, Matrix cov);
  static GaussianMeasure standard(int dim);

  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }
  int dim() const { return static_cast<int>(mean_.size()); }

  /// L with L L^T = cov; negative round-off eigenvalues clipped to zero.
  Matrix factor() const;
  bool is_standard(double tol = 1e-12) const;

 private:
  Vector mean_;
  Matrix cov_;
};

using Measure = std::variant<EmpiricalMeasure, GaussianMeasure>;

int dim(const Measure& m);

/// n i.i.d. draws (bootstrap resample for empirical input).  Row i is drawn
/// from stream (seed, i), so the cloud does not depend on thread count.
EmpiricalMeasure sample(const Measure& m, Eigen::Index n, Seed seed);

/// (F^T)_# m.
Measure project(const Measure& m, const Frame& frame);
EmpiricalMeasure project(const EmpiricalMeasure& m, const Frame& frame);
GaussianMeasure project(const GaussianMeasure& m, const Frame& frame);

/// u_# m, atom by atom.
EmpiricalMeasure pushforward(const EmpiricalMeasure& m, const VectorField& u);
/// (Ax+b)_# N(m, S) = N(Am+b, A S A^T).
GaussianMeasure pushforward(const GaussianMeasure& m, const AffineField& u);

/// Symmetric PSD square root by eigen-decomposition, clipping eigenvalues
/// below -tol * ||S|| to zero and failing below that.
Matrix psd_sqrt(const Matrix& s, double tol = 1e-10);

}  // namespace sliced
