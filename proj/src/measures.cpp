#include "sliced/measures.hpp"

#include "sliced/parallel.hpp"
#include "sliced/rng.hpp"

#include <cmath>

namespace sliced {

EmpiricalMeasure::EmpiricalMeasure(Matrix points) : points_(std::move(points)) {
  require(points_.rows() >= 1, "empirical measure needs at least one atom");
  require(points_.cols() >= 1, "empirical measure needs dimension >= 1");
  require(points_.allFinite(), "empirical measure has non-finite coordinates");
}

Vector EmpiricalMeasure::mean() const { return points_.colwise().mean().transpose(); }

Matrix EmpiricalMeasure::covariance() const {
  const Matrix centered = points_.rowwise() - points_.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(points_.rows());
}

GaussianMeasure::GaussianMeasure(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  require(cov_.rows() == cov_.cols() && cov_.rows() == mean_.size(), "Gaussian mean/covariance shapes differ");
  require(mean_.allFinite() && cov_.allFinite(), "Gaussian parameters must be finite");
  const double scale = std::max(cov_.cwiseAbs().maxCoeff(), 1e-300);
  require((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() <= kPsdTolerance * scale, "covariance is not symmetric");
  cov_ = 0.5 * (cov_ + cov_.transpose());
  const double trace_scale = std::max(std::abs(cov_.trace()), 1e-300);
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(cov_, Eigen::EigenvaluesOnly);
  require(eig.eigenvalues().minCoeff() >= -kPsdTolerance * trace_scale, "covariance is not positive semidefinite");
}

GaussianMeasure GaussianMeasure::standard(int dim) { return {Vector::Zero(dim), Matrix::Identity(dim, dim)}; }

Matrix GaussianMeasure::factor() const {
  const Eigen::LLT<Matrix> llt(cov_);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(cov_);
  if (eig.info() != Eigen::Success) throw NumericalError("covariance factorization failed");
  const double trace_scale = std::max(std::abs(cov_.trace()), 1e-300);
  if (eig.eigenvalues().minCoeff() < -kPsdTolerance * trace_scale) throw NumericalError("covariance is not positive semidefinite");
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

bool GaussianMeasure::is_standard(double tol) const {
  return mean_.cwiseAbs().maxCoeff() <= tol && (cov_ - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff() <= tol;
}

int dim(const Measure& m) {
  return std::visit([](const auto& x) { return x.dim(); }, m);
}

EmpiricalMeasure sample(const Measure& m, Eigen::Index n, Seed seed) {
  require(n >= 1, "sample size must be >= 1");
  const int d = dim(m);
  Matrix out(n, d);
  if (const auto* g = std::get_if<GaussianMeasure>(&m)) {
    const Matrix l = g->factor();
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      Stream s(seed, i);
      Vector z(d);
      for (int k = 0; k < d; ++k) z[k] = standard_normal(s);
      out.row(static_cast<Eigen::Index>(i)) = (g->mean() + l * z).transpose();
    });
  } else {
    const auto& e = std::get<EmpiricalMeasure>(m);
    const auto atoms = static_cast<std::uint64_t>(e.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      Stream s(seed, static_cast<std::uint64_t>(i));
      const auto pick = static_cast<Eigen::Index>(s() % atoms);
      out.row(i) = e.points().row(pick);
    }
  }
  return EmpiricalMeasure(std::move(out));
}

EmpiricalMeasure project(const EmpiricalMeasure& m, const Frame& frame) {
  require(frame.dim() == m.dim(), "frame dimension does not match measure");
  return EmpiricalMeasure(m.points() * frame.basis());
}

GaussianMeasure project(const GaussianMeasure& m, const Frame& frame) {
  require(frame.dim() == m.dim(), "frame dimension does not match measure");
  const Matrix& f = frame.basis();
  Matrix c = f.transpose() * m.cov() * f;
  c = 0.5 * (c + c.transpose());
  return {f.transpose() * m.mean(), std::move(c)};
}

Measure project(const Measure& m, const Frame& frame) {
  return std::visit([&](const auto& x) -> Measure { return project(x, frame); }, m);
}

EmpiricalMeasure pushforward(const EmpiricalMeasure& m, const VectorField& u) {
  require(u.dim() == m.dim(), "field dimension does not match measure");
  Matrix out = u.evaluate_rows(m.points());
  if (!out.allFinite()) throw NumericalError("vector field produced non-finite values on the measure's atoms");
  return EmpiricalMeasure(std::move(out));
}

GaussianMeasure pushforward(const GaussianMeasure& m, const AffineField& u) {
  require(u.A.rows() == m.dim(), "field dimension does not match measure");
  Matrix c = u.A * m.cov() * u.A.transpose();
  c = 0.5 * (c + c.transpose());
  return {u.A * m.mean() + u.b, std::move(c)};
}

Matrix psd_sqrt(const Matrix& s, double tol) {
  require(s.rows() == s.cols(), "matrix square root needs a square matrix");
  const Matrix sym = 0.5 * (s + s.transpose());
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) throw NumericalError("eigen-decomposition failed");
  const double norm = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  if (eig.eigenvalues().minCoeff() < -tol * norm) throw NumericalError("matrix is not positive semidefinite");
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace sliced
