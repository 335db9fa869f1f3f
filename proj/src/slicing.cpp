#include "sliced/slicing.hpp"

#include "sliced/ot1d.hpp"
#include "sliced/parallel.hpp"
#include "sliced/rng.hpp"

#include <cmath>
#include <numbers>

namespace sliced {

std::vector<Frame> sample_directions(int d, std::size_t n, Seed seed) {
  require(d >= 2, "directions need d >= 2");
  require(n >= 1, "need at least one direction");
  std::vector<Matrix> raw(n);
  parallel_for(n, [&](std::size_t i) {
    Stream s(seed, i);
    Vector g(d);
    double norm = 0.0;
    while (norm == 0.0) {
      for (int k = 0; k < d; ++k) g[k] = standard_normal(s);
      norm = g.norm();
    }
    raw[i] = g / norm;
  });
  std::vector<Frame> out;
  out.reserve(n);
  for (auto& m : raw) out.emplace_back(std::move(m));
  return out;
}

std::vector<Frame> sample_subspaces(int d, int k, std::size_t n, Seed seed) {
  require(d >= 2, "subspaces need d >= 2");
  require(k >= 1 && k <= d - 1, "subspace dimension k must satisfy 1 <= k <= d-1");
  require(n >= 1, "need at least one subspace");
  std::vector<Matrix> raw(n);
  parallel_for(n, [&](std::size_t i) {
    Stream s(seed, i);
    const Matrix g = standard_normal_matrix(s, d, k);
    const Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(d, k);
    const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (int c = 0; c < k; ++c)
      if (r(c, c) < 0.0) q.col(c) = -q.col(c);
    raw[i] = std::move(q);
  });
  std::vector<Frame> out;
  out.reserve(n);
  for (auto& m : raw) out.emplace_back(std::move(m));
  return out;
}

DirectionSet planar_grid(std::size_t n) {
  require(n >= 1, "grid needs at least one node");
  std::vector<Frame> frames;
  frames.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    Vector theta(2);
    theta << std::cos(t), std::sin(t);
    frames.push_back(Frame::direction(theta));
  }
  auto set = DirectionSet::equal_weights(std::move(frames));
  set.monte_carlo = false;
  return set;
}

DirectionSet monte_carlo_directions(int d, std::size_t n, Seed seed) { return DirectionSet::equal_weights(sample_directions(d, n, seed)); }

DirectionSet monte_carlo_subspaces(int d, int k, std::size_t n, Seed seed) {
  return DirectionSet::equal_weights(sample_subspaces(d, k, n, seed));
}

W2Backend exact_w2_backend(Eigen::Index cap) {
  return [cap](const Measure& mu, const Measure& nu) -> W2Result {
    if (const auto* a = std::get_if<EmpiricalMeasure>(&mu)) {
      const auto* b = std::get_if<EmpiricalMeasure>(&nu);
      require(b != nullptr, "exact W2 needs both measures empirical or both Gaussian");
      auto as = w2_exact_empirical(*a, *b, cap);
      return {as.cost, PermutationCoupling{std::move(as.permutation)}};
    }
    const auto& a = std::get<GaussianMeasure>(mu);
    const auto* b = std::get_if<GaussianMeasure>(&nu);
    require(b != nullptr, "exact W2 needs both measures empirical or both Gaussian");
    W2Result r{w2_gaussian(a, *b), std::monostate{}};
    try {
      r.coupling = MapCoupling{VectorField(gaussian_transport_map(a, *b))};
    } catch (const NumericalError&) {
      // degenerate source: no map, plain Monte-Carlo
    }
    return r;
  };
}

W2Backend map_w2_backend(VectorField transport) {
  return [t = std::move(transport)](const Measure& mu, const Measure& nu) -> W2Result {
    require(t.dim() == dim(mu) && dim(nu) == dim(mu), "transport map dimension mismatch");
    if (const auto* e = std::get_if<EmpiricalMeasure>(&mu)) {
      const Matrix disp = t.evaluate_rows(e->points()) - e->points();
      return {disp.rowwise().squaredNorm().mean(), MapCoupling{t}};
    }
    const auto& g = std::get<GaussianMeasure>(mu);
    const auto* a = t.affine();
    require(a != nullptr, "Gaussian source needs an affine transport map; sample the measure first");
    const Matrix shift = a->A - Matrix::Identity(g.dim(), g.dim());
    const double w2 = (shift * g.cov() * shift.transpose()).trace() + (shift * g.mean() + a->b).squaredNorm();
    return {w2, MapCoupling{t}};
  };
}

double projected_w2(const Measure& mu, const Measure& nu, const Frame& frame, Eigen::Index cap) {
  require(dim(mu) == dim(nu) && frame.dim() == dim(mu), "dimension mismatch between measures and frame");
  if (const auto* a = std::get_if<GaussianMeasure>(&mu)) {
    const auto* b = std::get_if<GaussianMeasure>(&nu);
    require(b != nullptr, "projected W2 needs both measures in the same representation");
    const auto pa = project(*a, frame);
    const auto pb = project(*b, frame);
    if (frame.rank() == 1) return w2_1d(Gaussian1D{pa.mean()[0], pa.cov()(0, 0)}, Gaussian1D{pb.mean()[0], pb.cov()(0, 0)});
    return w2_gaussian(pa, pb);
  }
  const auto& a = std::get<EmpiricalMeasure>(mu);
  const auto* b = std::get_if<EmpiricalMeasure>(&nu);
  require(b != nullptr, "projected W2 needs both measures in the same representation");
  const auto pa = project(a, frame);
  const auto pb = project(*b, frame);
  if (frame.rank() == 1) {
    const Vector xa = pa.points().col(0);
    const Vector xb = pb.points().col(0);
    return w2_1d(Atoms1D::uniform(xa), Atoms1D::uniform(xb));
  }
  return w2_exact_empirical(pa, pb, cap).cost;
}

namespace {

// int |F^T (y - x)|^2 d(coupling)
double projected_displacement(const Measure& mu, const Measure& nu, const Coupling& coupling, const Frame& frame) {
  const Matrix& f = frame.basis();
  if (const auto* p = std::get_if<PermutationCoupling>(&coupling)) {
    const auto& x = std::get<EmpiricalMeasure>(mu).points();
    const auto& y = std::get<EmpiricalMeasure>(nu).points();
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      s += ((y.row(p->permutation[static_cast<std::size_t>(i)]) - x.row(i)) * f).squaredNorm();
    return s / static_cast<double>(x.rows());
  }
  const auto& t = std::get<MapCoupling>(coupling).map;
  if (const auto* e = std::get_if<EmpiricalMeasure>(&mu)) {
    const Matrix disp = (t.evaluate_rows(e->points()) - e->points()) * f;
    return disp.rowwise().squaredNorm().mean();
  }
  const auto& g = std::get<GaussianMeasure>(mu);
  const auto* a = t.affine();
  require(a != nullptr, "Gaussian source needs an affine transport map");
  const Matrix shift = f.transpose() * (a->A - Matrix::Identity(g.dim(), g.dim()));
  return (shift * g.cov() * shift.transpose()).trace() + (shift * g.mean() + f.transpose() * a->b).squaredNorm();
}

}  // namespace

DeficitReport sw2(const Measure& mu, const Measure& nu, const DirectionSet& frames, const W2Backend& backend, Seed seed) {
  require(!frames.empty(), "sw2 needs at least one frame");
  require(frames.weights.size() == frames.size(), "frame weights missing");
  const int d = dim(mu);
  require(dim(nu) == d && frames.dim() == d, "dimension mismatch between measures and frames");
  const int k = frames.rank();

  DeficitReport rep;
  rep.d = d;
  rep.k = k;
  rep.seed = seed;
  rep.n_directions = frames.size();
  const W2Result full = backend(mu, nu);
  rep.w2_sq = full.w2_sq;
  rep.control_variate = !std::holds_alternative<std::monostate>(full.coupling);

  const std::size_t n = frames.size();
  rep.frame_costs.assign(n, 0.0);
  std::vector<double> gaps(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const Frame& f = frames.frames[i];
    rep.frame_costs[i] = projected_w2(mu, nu, f);
    if (rep.control_variate) gaps[i] = projected_displacement(mu, nu, full.coupling, f) - rep.frame_costs[i];
  });

  const std::vector<double>& series = rep.control_variate ? gaps : rep.frame_costs;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += frames.weights[i] * series[i];
  if (frames.monte_carlo && n > 1) {
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (series[i] - mean) * (series[i] - mean);
    rep.mc_std_err = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  }
  const double ratio = static_cast<double>(k) / static_cast<double>(d);
  if (rep.control_variate) {
    rep.deficit = mean;
    rep.sw2_sq = ratio * rep.w2_sq - mean;
    rep.per_direction_gaps.reserve(n);
    for (std::size_t i = 0; i < n; ++i) rep.per_direction_gaps.push_back({i, gaps[i]});
  } else {
    rep.sw2_sq = mean;
    rep.deficit = ratio * rep.w2_sq - mean;
  }
  return rep;
}

double directional_gap(const Measure& mu, const VectorField& transport, const Frame& frame) {
  require(transport.dim() == dim(mu) && frame.dim() == dim(mu), "dimension mismatch");
  if (const auto* e = std::get_if<EmpiricalMeasure>(&mu)) {
    const Measure nu = pushforward(*e, transport);
    const Coupling c = MapCoupling{transport};
    return projected_displacement(mu, nu, c, frame) - projected_w2(mu, nu, frame);
  }
  const auto* a = transport.affine();
  if (a == nullptr) throw ContractError("directional gap on a Gaussian needs an affine map; sample the measure first");
  const Measure nu = pushforward(std::get<GaussianMeasure>(mu), *a);
  return projected_displacement(mu, nu, MapCoupling{transport}, frame) - projected_w2(mu, nu, frame);
}

}  // namespace sliced
