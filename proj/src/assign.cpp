#include "sliced/assign.hpp"

#include "sliced/parallel.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sliced {

Matrix squared_distance_matrix(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols(), "point clouds have different dimensions");
  Matrix c(a.rows(), b.rows());
  parallel_for(static_cast<std::size_t>(a.rows()), [&](std::size_t i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (Eigen::Index j = 0; j < b.rows(); ++j) c(r, j) = (a.row(r) - b.row(j)).squaredNorm();
  });
  return c;
}

std::vector<Eigen::Index> solve_assignment(const Matrix& cost) {
  require(cost.rows() == cost.cols(), "assignment needs a square cost matrix");
  require(cost.allFinite(), "assignment cost matrix has non-finite entries");
  const Eigen::Index n = cost.rows();
  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; column 0 is the virtual source of each augmentation.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_slack(n + 1);
  std::vector<Eigen::Index> row_of(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (Eigen::Index i = 1; i <= n; ++i) {
    row_of[0] = i;
    Eigen::Index j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Eigen::Index i0 = row_of[j0];
      double delta = inf;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const Eigen::Index j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index j = 1; j <= n; ++j) perm[static_cast<std::size_t>(row_of[j] - 1)] = j - 1;
  return perm;
}

Assignment w2_exact_empirical(const EmpiricalMeasure& a, const EmpiricalMeasure& b, Eigen::Index cap) {
  require(a.dim() == b.dim(), "point clouds have different dimensions");
  require(a.size() == b.size(), "exact W2 needs equal-size clouds");
  require(a.size() <= cap, "cloud size " + std::to_string(a.size()) + " exceeds assignment cap " + std::to_string(cap));
  const Matrix c = squared_distance_matrix(a.points(), b.points());
  Assignment out;
  out.permutation = solve_assignment(c);
  double s = 0.0;
  for (std::size_t i = 0; i < out.permutation.size(); ++i) s += c(static_cast<Eigen::Index>(i), out.permutation[i]);
  out.cost = s / static_cast<double>(a.size());
  return out;
}

double w2_gaussian(const GaussianMeasure& a, const GaussianMeasure& b) {
  require(a.dim() == b.dim(), "Gaussians have different dimensions");
  const Matrix ra = psd_sqrt(a.cov());
  const Matrix cross = psd_sqrt(ra * b.cov() * ra);
  const double tr = a.cov().trace() + b.cov().trace() - 2.0 * cross.trace();
  return (a.mean() - b.mean()).squaredNorm() + std::max(tr, 0.0);
}

AffineField gaussian_transport_map(const GaussianMeasure& a, const GaussianMeasure& b) {
  require(a.dim() == b.dim(), "Gaussians have different dimensions");
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(a.cov());
  const double top = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  if (eig.eigenvalues().minCoeff() <= 1e-12 * top) throw NumericalError("Gaussian transport map needs a non-degenerate source");
  const Vector root = eig.eigenvalues().cwiseSqrt();
  const Matrix ra = eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
  const Matrix ra_inv = eig.eigenvectors() * root.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  Matrix m = ra_inv * psd_sqrt(ra * b.cov() * ra) * ra_inv;
  m = 0.5 * (m + m.transpose());
  return AffineField{m, b.mean() - m * a.mean()};
}

}  // namespace sliced
