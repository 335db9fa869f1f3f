#include "sliced/grassmoments.hpp"

#include "sliced/slicing.hpp"

#include <cmath>

namespace sliced {

namespace {

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
  }
  std::pair<double, double> mean_se(std::size_t n) const {
    const double dn = static_cast<double>(n);
    const double mean = sum / dn;
    if (n < 2) return {mean, 0.0};
    const double var = std::max(0.0, (sum_sq - dn * mean * mean) / (dn - 1.0));
    return {mean, std::sqrt(var / dn)};
  }
};

std::vector<Matrix> projectors(int d, int k, std::size_t n, Seed seed) {
  std::vector<Matrix> out;
  out.reserve(n);
  if (k == d) {
    out.assign(n, Matrix::Identity(d, d));
    return out;
  }
  for (const auto& f : sample_subspaces(d, k, n, seed)) out.push_back(f.projector());
  return out;
}

}  // namespace

const MomentEstimate& MomentReport::at(const std::string& name) const {
  for (const auto& e : estimates)
    if (e.name == name) return e;
  throw ContractError("no moment named " + name);
}

GrassmannTargets grassmann_targets(int d, int k) {
  require(d >= 2 && k >= 1 && k <= d, "Grassmannian targets need 1 <= k <= d, d >= 2");
  const double dd = d, kk = k;
  GrassmannTargets t{};
  t.mean_diag = kk / dd;
  t.diag_sq = kk * (kk + 2.0) / (dd * (dd + 2.0));
  t.offdiag_sq = kk * (dd - kk) / (dd * (dd - 1.0) * (dd + 2.0));
  t.diag_product = kk * ((dd + 1.0) * kk - 2.0) / (dd * (dd - 1.0) * (dd + 2.0));
  t.offdiag_norm = kk * (dd - kk) / ((dd - 1.0) * (dd + 2.0));
  return t;
}

MomentReport projection_moments(int d, int k, std::size_t n_samples, Seed seed) {
  require(d >= 2, "projection moments need d >= 2");
  require(k >= 1 && k <= d, "subspace dimension k out of range");
  require(n_samples >= 1, "need at least one sample");
  const auto t = grassmann_targets(d, k);
  Accumulator p11, p11sq, p12sq, p11p22;
  for (const auto& p : projectors(d, k, n_samples, seed)) {
    p11.add(p(0, 0));
    p11sq.add(p(0, 0) * p(0, 0));
    p12sq.add(p(0, 1) * p(0, 1));
    p11p22.add(p(0, 0) * p(1, 1));
  }
  MomentReport rep;
  rep.d = d;
  rep.k = k;
  rep.n_samples = n_samples;
  auto push = [&](const char* name, const Accumulator& acc, double target) {
    const auto [m, se] = acc.mean_se(n_samples);
    rep.estimates.push_back({name, m, se, target});
  };
  push("p11", p11, t.mean_diag);
  push("p11_sq", p11sq, t.diag_sq);
  push("p12_sq", p12sq, t.offdiag_sq);
  push("p11_p22", p11p22, t.diag_product);
  return rep;
}

OffdiagonalNorm offdiagonal_norm(const Matrix& m, int k, std::size_t n_samples, Seed seed) {
  require(m.rows() == m.cols() && m.rows() >= 2, "M must be a square matrix with d >= 2");
  const int d = static_cast<int>(m.rows());
  require(k >= 1 && k <= d, "subspace dimension k out of range");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  require((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "M must be symmetric");
  const Matrix id = Matrix::Identity(d, d);
  const Matrix trace_free = m - (m.trace() / d) * id;

  OffdiagonalNorm out;
  out.target = grassmann_targets(d, k).offdiag_norm * trace_free.squaredNorm();
  Accumulator acc;
  const Matrix m2 = m * m;
  for (const auto& p : projectors(d, k, n_samples, seed)) {
    const double v = (p * m * (id - p)).squaredNorm();
    const Matrix pmp = p * m * p;
    const double expanded = (p * m2 * p).trace() - (pmp * m * p).trace();
    out.identity_residual = std::max(out.identity_residual, std::abs(v - expanded));
    acc.add(v);
  }
  const auto [mean, se] = acc.mean_se(n_samples);
  out.estimate = mean;
  out.std_err = se;
  return out;
}

}  // namespace sliced
