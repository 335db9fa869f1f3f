#pragma once

#include "sliced/assign.hpp"
#include "sliced/core.hpp"
#include "sliced/fields.hpp"
#include "sliced/frame.hpp"
#include "sliced/measures.hpp"

#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace sliced {

/// i.i.d. uniform directions on S^{d-1}: normalized Gaussian vectors, one
/// counter stream per direction.
std::vector<Frame> sample_directions(int d, std::size_t n, Seed seed);

/// Haar-distributed k-planes: thin QR of a d x k Gaussian matrix with the
/// diagonal of R made positive.
std::vector<Frame> sample_subspaces(int d, int k, std::size_t n, Seed seed);

/// Equispaced t_i = i pi / n in [0, pi), theta = (cos t, sin t), equal
/// (periodic trapezoid) weights.  Only for d == 2.
DirectionSet planar_grid(std::size_t n);

DirectionSet monte_carlo_directions(int d, std::size_t n, Seed seed);
DirectionSet monte_carlo_subspaces(int d, int k, std::size_t n, Seed seed);

/// A transport plan between mu and nu, used both for the full-space cost
/// and as a control variate for the sliced cost.
struct PermutationCoupling {
  std::vector<Eigen::Index> permutation;  // x_i -> y_{perm[i]}
};
struct MapCoupling {
  VectorField map;  // x -> T(x)
};
using Coupling = std::variant<std::monostate, PermutationCoupling, MapCoupling>;

struct W2Result {
  double w2_sq = 0.0;
  Coupling coupling;
};

using W2Backend = std::function<W2Result(const Measure&, const Measure&)>;

/// Exact full-space W2: assignment for equal-size clouds, Bures for Gaussians.
W2Backend exact_w2_backend(Eigen::Index cap = kDefaultAssignmentCap);
/// nu is the push-forward of mu by the Brenier map T; W2^2 = int |T(x) - x|^2 dmu.
W2Backend map_w2_backend(VectorField transport);

struct DirectionGap {
  std::size_t frame_index = 0;
  double gap = 0.0;
};

struct DeficitReport {
  int d = 0;
  int k = 0;
  double w2_sq = 0.0;
  double sw2_sq = 0.0;
  double deficit = 0.0;      // (k/d) w2_sq - sw2_sq
  double mc_std_err = 0.0;   // standard error of sw2_sq (and of deficit)
  std::size_t n_directions = 0;
  Seed seed = 0;
  bool control_variate = false;
  std::vector<double> frame_costs;
  std::vector<DirectionGap> per_direction_gaps;
};

/// W2^2(F^T_# mu, F^T_# nu): quantile coupling for k == 1, assignment or
/// Bures for k >= 2.
double projected_w2(const Measure& mu, const Measure& nu, const Frame& frame, Eigen::Index cap = kDefaultAssignmentCap);

/// Sliced cost over the given frames and the (Grassmannian) deficit.
///
/// When the backend reports a coupling, each frame also yields the gap
/// g_F = int |F^T (y - x)|^2 dcoupling - W2^2(projections) >= 0, and the
/// sliced cost is estimated as (k/d) w2_sq - sum_F w_F g_F.  This uses the
/// exact identity int F F^T dF = (k/d) I as a control variate; the deficit
/// is then the weighted mean of the gaps.
DeficitReport sw2(const Measure& mu, const Measure& nu, const DirectionSet& frames, const W2Backend& backend, Seed seed = 0);

/// g_F(T) for nu = T_# mu.  Gaussian mu requires an affine T.
double directional_gap(const Measure& mu, const VectorField& transport, const Frame& frame);

}  // namespace sliced
