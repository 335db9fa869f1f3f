#include "sliced/ridge.hpp"

#include "sliced/chaos.hpp"
#include "sliced/ot1d.hpp"
#include "sliced/parallel.hpp"
#include "sliced/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sliced {

std::map<int, SymTensor> combine_by_degree(const std::vector<SymTensor>& terms) {
  std::map<int, SymTensor> out;
  for (const auto& t : terms) {
    auto it = out.find(t.degree());
    if (it == out.end()) out.emplace(t.degree(), t);
    else it->second += t;
  }
  return out;
}

PolyGradientField to_poly_gradient(const AffineField& f) {
  return PolyGradientField({SymTensor::from_vector(f.b), SymTensor::from_matrix(0.5 * f.A)});
}

namespace {

AffineFit fit_samples(const Matrix& x, const Matrix& u) {
  const double n = static_cast<double>(x.rows());
  const Vector mx = x.colwise().mean().transpose();
  const Vector mu = u.colwise().mean().transpose();
  const Matrix xc = x.rowwise() - mx.transpose();
  const Matrix uc = u.rowwise() - mu.transpose();
  const double var = xc.squaredNorm() / n;
  const double cov = (xc.array() * uc.array()).sum() / n;
  AffineFit fit;
  fit.lambda = var > 0.0 ? cov / var : 0.0;
  fit.b = mu - fit.lambda * mx;
  fit.residual_sq = (uc - fit.lambda * xc).squaredNorm() / n;
  return fit;
}

double poly_direction_variance(const std::map<int, SymTensor>& by_degree, const Vector& theta) {
  double v = 0.0;
  for (const auto& [n, a] : by_degree) {
    const double c = a.contract(theta);
    const double full = a.contract_one(theta).norm_sq();
    v += n * std::tgamma(n + 1.0) * std::max(0.0, full - c * c);
  }
  return v;
}

}  // namespace

AffineFit dist_to_affine(const VectorField& u, const Measure& mu) {
  require(u.dim() == dim(mu), "field and measure dimensions differ");
  if (const auto* e = std::get_if<EmpiricalMeasure>(&mu)) return fit_samples(e->points(), u.evaluate_rows(e->points()));

  const auto& g = std::get<GaussianMeasure>(mu);
  const int d = g.dim();
  if (const auto* a = u.affine()) {
    const Matrix& s = g.cov();
    const double tr = s.trace();
    AffineFit fit;
    fit.lambda = tr > 0.0 ? (a->A * s).trace() / tr : 0.0;
    const Matrix shift = a->A - fit.lambda * Matrix::Identity(d, d);
    fit.b = a->A * g.mean() + a->b - fit.lambda * g.mean();
    fit.residual_sq = std::max(0.0, (shift * s * shift.transpose()).trace());
    return fit;
  }
  if (const auto* p = u.poly()) {
    require(g.is_standard(), "closed-form polynomial-gradient moments need the standard Gaussian; sample the measure instead");
    AffineFit fit;
    fit.b = Vector::Zero(d);
    double energy = 0.0;
    double trace2 = 0.0;
    for (const auto& [n, a] : combine_by_degree(p->terms())) {
      energy += wick_gradient_norm_sq(a);
      if (n == 1) fit.b = a.values();
      if (n == 2) trace2 = a.trace()[0];
    }
    fit.lambda = 2.0 * trace2 / d;
    fit.residual_sq = std::max(0.0, energy - fit.b.squaredNorm() - fit.lambda * fit.lambda * d);
    return fit;
  }
  throw ContractError("tabulated fields need an empirical measure on the tabulation points");
}

double binned_conditional_variance(const Vector& z, const Vector& y, std::size_t bins) {
  const auto n = static_cast<std::size_t>(z.size());
  require(n >= 1 && static_cast<std::size_t>(y.size()) == n, "binned estimator needs aligned non-empty samples");
  bins = std::clamp<std::size_t>(bins, 1, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return z[i] < z[j]; });
  // Residuals of a least-squares line inside each bin, so the drift of
  // E[Y|Z] across a bin is not counted as conditional variance.
  double total = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t lo = b * n / bins;
    const std::size_t hi = (b + 1) * n / bins;
    if (hi <= lo) continue;
    const auto m = static_cast<double>(hi - lo);
    double mz = 0.0, my = 0.0;
    for (std::size_t r = lo; r < hi; ++r) {
      mz += z[order[r]];
      my += y[order[r]];
    }
    mz /= m;
    my /= m;
    double szz = 0.0, szy = 0.0, syy = 0.0;
    for (std::size_t r = lo; r < hi; ++r) {
      const double dz = z[order[r]] - mz, dy = y[order[r]] - my;
      szz += dz * dz;
      szy += dz * dy;
      syy += dy * dy;
    }
    if (hi - lo > 2 && szz > 0.0) {
      total += std::max(0.0, syy - szy * szy / szz) * m / (m - 2.0);
    } else if (hi - lo > 1) {
      total += syy * m / (m - 1.0);
    }
  }
  return total / static_cast<double>(n);
}

RidgeDefect ridge_defect(const VectorField& u, const Measure& mu, const DirectionSet& frames, RidgeOptions options) {
  require(!frames.empty(), "ridge defect needs at least one direction");
  require(frames.rank() == 1, "ridge defect uses one-dimensional directions");
  require(u.dim() == dim(mu) && frames.dim() == dim(mu), "dimension mismatch between field, measure and directions");
  const std::size_t count = frames.size();
  RidgeDefect out;
  out.per_direction.assign(count, 0.0);

  if (options.estimator == RidgeEstimator::binned) {
    const auto* e = std::get_if<EmpiricalMeasure>(&mu);
    if (e == nullptr) throw ContractError("binned ridge estimator needs an empirical measure");
    const Matrix values = u.evaluate_rows(e->points());
    const std::size_t bins =
        options.bins > 0 ? options.bins : static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(e->size())) - 1e-9));
    parallel_for(count, [&](std::size_t i) {
      const Vector theta = frames.frames[i].direction();
      out.per_direction[i] = binned_conditional_variance(e->points() * theta, values * theta, bins);
    });
  } else {
    const auto* g = std::get_if<GaussianMeasure>(&mu);
    if (g == nullptr) throw ContractError("closed-form ridge defect needs a Gaussian measure");
    if (const auto* a = u.affine()) {
      const Matrix& s = g->cov();
      parallel_for(count, [&](std::size_t i) {
        const Vector theta = frames.frames[i].direction();
        const Vector at = a->A * theta;  // A symmetric: theta . A x = (A theta) . x
        const double var_y = at.dot(s * at);
        const double var_z = theta.dot(s * theta);
        const double cov = at.dot(s * theta);
        out.per_direction[i] = var_z > 0.0 ? std::max(0.0, var_y - cov * cov / var_z) : var_y;
      });
    } else if (const auto* p = u.poly()) {
      if (!g->is_standard()) throw ContractError("closed-form polynomial ridge defect needs the standard Gaussian");
      const auto by_degree = combine_by_degree(p->terms());
      parallel_for(count, [&](std::size_t i) { out.per_direction[i] = poly_direction_variance(by_degree, frames.frames[i].direction()); });
    } else {
      throw ContractError("closed-form ridge defect does not apply to tabulated fields");
    }
  }

  for (std::size_t i = 0; i < count; ++i) out.value += frames.weights[i] * out.per_direction[i];
  if (frames.monte_carlo && count > 1) {
    double ss = 0.0;
    for (double v : out.per_direction) ss += (v - out.value) * (v - out.value);
    out.std_err = std::sqrt(ss / static_cast<double>(count - 1) / static_cast<double>(count));
  }
  return out;
}

double ridge_defect_spectral(const VectorField& u, const GaussianMeasure& mu) {
  const int d = mu.dim();
  require(u.dim() == d, "field and measure dimensions differ");
  if (const auto* a = u.affine()) {
    const double s2 = mu.cov().trace() / d;
    require((mu.cov() - s2 * Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, s2),
            "spectral affine ridge defect needs an isotropic Gaussian");
    const double tr = a->A.trace();
    return s2 * (d * (a->A * a->A).trace() - tr * tr) / (d * (d + 2.0));
  }
  const auto* p = u.poly();
  if (p == nullptr) throw ContractError("spectral ridge defect needs an affine or polynomial-gradient field");
  require(mu.is_standard(), "spectral polynomial ridge defect needs the standard Gaussian");
  double r = 0.0;
  for (const auto& [n, a] : combine_by_degree(p->terms())) {
    const double nf = n * std::tgamma(n + 1.0);
    r += nf * (a.norm_sq() / d - spherical_quadratic_spectral(a));
  }
  return std::max(0.0, r);
}

namespace {

SpkRatio make_ratio(double ridge, double ridge_se, double dist_sq) {
  SpkRatio out;
  out.ridge = ridge;
  out.dist_sq = dist_sq;
  if (dist_sq <= kSpkZeroDenominator) {
    out.excluded = true;
    out.ratio = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.ratio = ridge / dist_sq;
  out.std_err = ridge_se / dist_sq;
  return out;
}

}  // namespace

SpkRatio spk_ratio(const VectorField& u, const Measure& mu, const DirectionSet& frames, RidgeOptions options) {
  const auto fit = dist_to_affine(u, mu);
  if (fit.residual_sq <= kSpkZeroDenominator) return make_ratio(0.0, 0.0, fit.residual_sq);
  const auto r = ridge_defect(u, mu, frames, options);
  return make_ratio(r.value, r.std_err, fit.residual_sq);
}

SpkRatio spk_ratio_spectral(const VectorField& u, const GaussianMeasure& mu) {
  const auto fit = dist_to_affine(u, Measure(mu));
  if (fit.residual_sq <= kSpkZeroDenominator) return make_ratio(0.0, 0.0, fit.residual_sq);
  return make_ratio(ridge_defect_spectral(u, mu), 0.0, fit.residual_sq);
}

StabilityCheck stability_check(const Measure& mu, const VectorField& transport, const DirectionSet& frames, double kappa,
                               double se_multiplier) {
  if (!(kappa > 0.0)) throw ContractError("SPK constant kappa must be positive");
  require(frames.rank() == 1, "stability check uses one-dimensional directions");
  StabilityCheck out;
  out.lhs = dist_to_affine(transport, mu).residual_sq;

  Measure nu = mu;
  if (const auto* e = std::get_if<EmpiricalMeasure>(&mu)) {
    nu = pushforward(*e, transport);
  } else {
    const auto* a = transport.affine();
    if (a == nullptr) throw ContractError("stability check on a Gaussian needs an affine map; sample the measure first");
    nu = pushforward(std::get<GaussianMeasure>(mu), *a);
  }

  std::vector<MonotoneMap1D> maps(frames.size());
  parallel_for(frames.size(), [&](std::size_t i) {
    const Frame& f = frames.frames[i];
    if (const auto* g = std::get_if<GaussianMeasure>(&mu)) {
      const auto pa = project(*g, f);
      const auto pb = project(std::get<GaussianMeasure>(nu), f);
      maps[i] = monotone_map(Gaussian1D{pa.mean()[0], pa.cov()(0, 0)}, Gaussian1D{pb.mean()[0], pb.cov()(0, 0)});
    } else {
      const Vector za = std::get<EmpiricalMeasure>(mu).points() * f.direction();
      const Vector zb = std::get<EmpiricalMeasure>(nu).points() * f.direction();
      maps[i] = monotone_map(Atoms1D::uniform(za), Atoms1D::uniform(zb));
    }
  });
  out.lambda = lipschitz_scale(maps);

  const auto rep = sw2(mu, nu, frames, map_w2_backend(transport));
  out.deficit = rep.deficit;
  out.deficit_std_err = rep.mc_std_err;
  out.rhs = (out.lambda / kappa) * out.deficit;
  const double rel = out.deficit > 0.0 ? rep.mc_std_err / out.deficit : 0.0;
  const double floor = 1e-12 * (1.0 + rep.w2_sq);
  out.holds = out.lhs <= out.rhs * (1.0 + se_multiplier * rel) + floor;
  return out;
}

}  // namespace sliced
