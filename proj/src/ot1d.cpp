#include "sliced/ot1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sliced {

namespace {

constexpr double kWeightTolerance = 1e-12;

// F_b^{-1}(u) = first atom whose cumulative weight reaches u.
double quantile(const Atoms1D& b, double u) {
  double cum = 0.0;
  const auto& w = b.weights();
  for (std::size_t j = 0; j < w.size(); ++j) {
    cum += w[j];
    if (cum >= u - kWeightTolerance) return b.positions()[j];
  }
  return b.positions().back();
}

}  // namespace

Atoms1D::Atoms1D(std::vector<double> positions, std::vector<double> weights)
    : positions_(std::move(positions)), weights_(std::move(weights)) {
  require(!positions_.empty(), "1-D measure needs at least one atom");
  require(positions_.size() == weights_.size(), "positions and weights differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    require(std::isfinite(positions_[i]), "1-D atom position is not finite");
    require(weights_[i] > 0.0, "1-D atom weights must be positive");
    total += weights_[i];
  }
  require(std::abs(total - 1.0) <= kWeightTolerance * static_cast<double>(weights_.size()), "1-D weights must sum to one");
  if (!std::is_sorted(positions_.begin(), positions_.end())) {
    std::vector<std::size_t> order(positions_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return positions_[i] < positions_[j]; });
    std::vector<double> p(order.size()), w(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      p[k] = positions_[order[k]];
      w[k] = weights_[order[k]];
    }
    positions_ = std::move(p);
    weights_ = std::move(w);
  }
}

Atoms1D Atoms1D::uniform(std::span<const double> samples) {
  std::vector<double> p(samples.begin(), samples.end());
  std::stable_sort(p.begin(), p.end());
  std::vector<double> w(p.size(), 1.0 / static_cast<double>(p.size()));
  return Atoms1D(std::move(p), std::move(w));
}

Atoms1D Atoms1D::uniform(const Vector& samples) { return uniform(std::span<const double>(samples.data(), static_cast<std::size_t>(samples.size()))); }

double Atoms1D::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) m += weights_[i] * positions_[i];
  return m;
}

double Atoms1D::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < size(); ++i) v += weights_[i] * (positions_[i] - m) * (positions_[i] - m);
  return v;
}

double w2_1d(const Atoms1D& a, const Atoms1D& b) {
  const auto& xa = a.positions();
  const auto& xb = b.positions();
  const auto& wa = a.weights();
  const auto& wb = b.weights();
  // Equal-size uniform clouds pair ranks directly.
  if (xa.size() == xb.size() && wa == wb) {
    double s = 0.0;
    for (std::size_t i = 0; i < xa.size(); ++i) s += wa[i] * (xa[i] - xb[i]) * (xa[i] - xb[i]);
    return s;
  }
  std::size_t i = 0, j = 0;
  double ra = wa[0], rb = wb[0];
  double cost = 0.0;
  while (i < xa.size() && j < xb.size()) {
    const double m = std::min(ra, rb);
    cost += m * (xa[i] - xb[j]) * (xa[i] - xb[j]);
    ra -= m;
    rb -= m;
    if (ra <= kWeightTolerance) {
      if (++i < xa.size()) ra = wa[i];
    }
    if (rb <= kWeightTolerance) {
      if (++j < xb.size()) rb = wb[j];
    }
  }
  return cost;
}

double w2_1d(const Gaussian1D& a, const Gaussian1D& b) {
  require(a.variance >= 0.0 && b.variance >= 0.0, "Gaussian variance must be non-negative");
  const double dm = a.mean - b.mean;
  // (sqrt(vb) - sqrt(va))^2 written without cancellation
  const double sa = std::sqrt(a.variance), sb = std::sqrt(b.variance);
  const double ds = (sa + sb) > 0.0 ? (b.variance - a.variance) / (sa + sb) : 0.0;
  return dm * dm + ds * ds;
}

double w2_1d(const Weighted1DMeasure& a, const Weighted1DMeasure& b) {
  if (const auto* ga = std::get_if<Gaussian1D>(&a)) {
    const auto* gb = std::get_if<Gaussian1D>(&b);
    require(gb != nullptr, "w2_1d needs both measures in the same representation");
    return w2_1d(*ga, *gb);
  }
  const auto* ab = std::get_if<Atoms1D>(&b);
  require(ab != nullptr, "w2_1d needs both measures in the same representation");
  return w2_1d(std::get<Atoms1D>(a), *ab);
}

MonotoneMap1D monotone_map(const Weighted1DMeasure& a, const Weighted1DMeasure& b) {
  if (const auto* ga = std::get_if<Gaussian1D>(&a)) {
    const auto* gb = std::get_if<Gaussian1D>(&b);
    require(gb != nullptr, "monotone_map needs both measures in the same representation");
    if (ga->variance <= 0.0) {
      if (gb->variance > 0.0) throw NumericalError("monotone map undefined: degenerate source, non-degenerate target");
      return AffineMonotoneMap{0.0, gb->mean};
    }
    const double slope = std::sqrt(gb->variance / ga->variance);
    return AffineMonotoneMap{slope, gb->mean - slope * ga->mean};
  }
  const auto* ab = std::get_if<Atoms1D>(&b);
  require(ab != nullptr, "monotone_map needs both measures in the same representation");
  const auto& aa = std::get<Atoms1D>(a);
  const bool source_point = aa.positions().front() == aa.positions().back();
  const bool target_point = ab->positions().front() == ab->positions().back();
  if (source_point && !target_point) throw NumericalError("monotone map undefined: degenerate source, non-degenerate target");
  PiecewiseMonotoneMap map;
  map.breakpoints = aa.positions();
  map.values.reserve(aa.size());
  if (aa.size() == ab->size() && aa.weights() == ab->weights()) {
    map.values = ab->positions();
  } else {
    double cum = 0.0;
    for (std::size_t i = 0; i < aa.size(); ++i) {
      cum += aa.weights()[i];
      map.values.push_back(quantile(*ab, cum));
    }
  }
  return map;
}

double apply(const MonotoneMap1D& map, double s) {
  if (const auto* af = std::get_if<AffineMonotoneMap>(&map)) return af->slope * s + af->intercept;
  const auto& pw = std::get<PiecewiseMonotoneMap>(map);
  const auto& x = pw.breakpoints;
  if (s <= x.front()) return pw.values.front();
  if (s >= x.back()) return pw.values.back();
  const auto it = std::lower_bound(x.begin(), x.end(), s);
  const auto k = static_cast<std::size_t>(it - x.begin());
  if (*it == s) return pw.values[k];
  const double t = (s - x[k - 1]) / (x[k] - x[k - 1]);
  return pw.values[k - 1] + t * (pw.values[k] - pw.values[k - 1]);
}

double lipschitz(const MonotoneMap1D& map) {
  if (const auto* af = std::get_if<AffineMonotoneMap>(&map)) return std::abs(af->slope);
  const auto& pw = std::get<PiecewiseMonotoneMap>(map);
  double lip = 0.0;
  for (std::size_t k = 1; k < pw.breakpoints.size(); ++k) {
    const double dx = pw.breakpoints[k] - pw.breakpoints[k - 1];
    const double dv = pw.values[k] - pw.values[k - 1];
    if (dx == 0.0) {
      if (dv != 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    lip = std::max(lip, std::abs(dv) / dx);
  }
  return lip;
}

double lipschitz_scale(std::span<const MonotoneMap1D> maps) {
  require(!maps.empty(), "lipschitz_scale needs at least one map");
  double s = 0.0;
  for (const auto& m : maps) s = std::max(s, lipschitz(m));
  return s;
}

FenchelGapCheck fenchel_gap_bound_check(std::span<const double> a_samples, std::span<const double> b_samples, double lambda) {
  if (!(lambda > 0.0)) throw ContractError("Lipschitz scale must be positive");
  require(a_samples.size() == b_samples.size() && !a_samples.empty(), "paired samples must be non-empty and of equal length");
  const auto law_a = Atoms1D::uniform(a_samples);
  const auto law_b = Atoms1D::uniform(b_samples);
  const auto tau = monotone_map(Weighted1DMeasure(law_a), Weighted1DMeasure(law_b));
  const auto& pw = std::get<PiecewiseMonotoneMap>(tau);

  // tau(A_i) by rank so that tied A values keep their own pairing
  const std::size_t n = a_samples.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a_samples[i] < a_samples[j]; });
  double lhs = 0.0, paired = 0.0, scale = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = order[r];
    const double diff = b_samples[i] - pw.values[r];
    lhs += diff * diff;
  }
  for (std::size_t i = 0; i < n; ++i) {
    paired += (a_samples[i] - b_samples[i]) * (a_samples[i] - b_samples[i]);
    scale += a_samples[i] * a_samples[i] + b_samples[i] * b_samples[i];
  }
  const double inv = 1.0 / static_cast<double>(n);
  FenchelGapCheck out;
  out.lhs = lhs * inv;
  out.rhs = lambda * (paired * inv - w2_1d(law_a, law_b));
  out.lipschitz = lipschitz(tau);
  out.holds = out.lhs <= out.rhs + 1e-9 * (1.0 + scale * inv);
  return out;
}

}  // namespace sliced
