#pragma once

#include "sliced/core.hpp"
#include "sliced/measures.hpp"

#include <vector>

namespace sliced {

inline constexpr Eigen::Index kDefaultAssignmentCap = 4096;

struct Assignment {
  double cost = 0.0;                     // (1/n) sum |x_i - y_{perm[i]}|^2
  std::vector<Eigen::Index> permutation;  // atom i of a goes to atom perm[i] of b
};

/// Squared Euclidean distances between rows of a and rows of b.
Matrix squared_distance_matrix(const Matrix& a, const Matrix& b);

/// Minimum-cost perfect matching on a square cost matrix by shortest
/// augmenting paths with dual potentials (Jonker-Volgenant style), O(n^3).
/// Returns row -> column.
std::vector<Eigen::Index> solve_assignment(const Matrix& cost);

/// Exact W2^2 between equal-size uniform clouds.
Assignment w2_exact_empirical(const EmpiricalMeasure& a, const EmpiricalMeasure& b, Eigen::Index cap = kDefaultAssignmentCap);

/// Bures closed form |ma - mb|^2 + Tr(Sa + Sb - 2 (Sa^{1/2} Sb Sa^{1/2})^{1/2}).
double w2_gaussian(const GaussianMeasure& a, const GaussianMeasure& b);

/// Optimal affine map x -> M x + c pushing a onto b.  Requires Sa invertible.
AffineField gaussian_transport_map(const GaussianMeasure& a, const GaussianMeasure& b);

}  // namespace sliced
