#include "sliced/chaos.hpp"

#include "sliced/rng.hpp"
#include "sliced/slicing.hpp"

#include <cmath>

namespace sliced {

double hermite(int n, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> hermite_all(int nmax, double x) {
  std::vector<double> h(static_cast<std::size_t>(nmax) + 1);
  h[0] = 1.0;
  if (nmax >= 1) h[1] = x;
  for (int k = 1; k < nmax; ++k) h[k + 1] = x * h[k] - k * h[k - 1];
  return h;
}

double wick_evaluate(const SymTensor& a, const Vector& x) {
  require(x.size() == a.dim(), "evaluation point has wrong dimension");
  const int n = a.degree();
  const int d = a.dim();
  std::vector<std::vector<double>> he(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) he[i] = hermite_all(n, x[i]);
  const auto& layout = a.layout();
  double s = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (a[p] == 0.0) continue;
    double term = layout.multiplicity(p) * a[p];
    const auto& k = layout.counts(p);
    for (int i = 0; i < d; ++i)
      if (k[i] > 0) term *= he[i][k[i]];
    s += term;
  }
  return s;
}

Vector wick_gradient(const SymTensor& a, const Vector& x) {
  const int d = a.dim();
  Vector g(d);
  if (a.degree() == 0) return Vector::Zero(d);
  for (int i = 0; i < d; ++i) g[i] = a.degree() * wick_evaluate(a.slice(i), x);
  return g;
}

double wick_gradient_norm_sq(const SymTensor& a) {
  const int n = a.degree();
  return n * std::tgamma(n + 1.0) * a.norm_sq();
}

double spectrum_eigenvalue(int m, int j, int d) {
  require(m >= 0 && j >= 0, "eigenvalue indices must be non-negative");
  require(d >= 2, "eigenvalue needs d >= 2");
  const int n = m + 2 * j;
  const double h = 0.5 * d;
  const double log_val = std::lgamma(n + 1.0) + std::lgamma(h) - n * std::log(2.0) - std::lgamma(j + 1.0) - std::lgamma(m + j + h);
  return std::exp(log_val);
}

double contract_sphere(const SymTensor& a, const Vector& theta) {
  require(theta.size() == a.dim(), "direction has wrong dimension");
  require(std::abs(theta.norm() - 1.0) <= 1e-10, "direction must be a unit vector");
  return a.contract(theta);
}

McEstimate spherical_quadratic(const SymTensor& a, std::size_t n_mc, Seed seed) {
  require(n_mc >= 2, "spherical_quadratic needs at least two samples");
  const auto dirs = sample_directions(a.dim(), n_mc, seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& f : dirs) {
    const double c = a.contract(f.direction());
    const double v = c * c;
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(n_mc);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

double spherical_quadratic_spectral(const SymTensor& a) {
  const auto comps = trace_components(a);
  double q = 0.0;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    const int m = a.degree() - 2 * static_cast<int>(j);
    q += spectrum_eigenvalue(m, static_cast<int>(j), a.dim()) * comps[j].norm_sq();
  }
  return q;
}

SymTensor extremizer_tensor(const Vector& v) {
  require(v.size() >= 2, "extremizer needs d >= 2");
  require(v.norm() > 0.0, "extremizer direction must be non-zero");
  return sym_identity_product(SymTensor::from_vector(v));
}

VectorField build_extremizer(int d, const Vector& v) {
  require(d >= 2, "extremizer needs d >= 2");
  require(v.size() == d, "extremizer vector has wrong dimension");
  return VectorField(PolyGradientField({extremizer_tensor(v)}));
}

ChaosProjectionCheck chaos_projection_check(const SymTensor& a, const Vector& theta, std::size_t n_samples, Seed seed,
                                            double se_multiplier) {
  const int n = a.degree();
  require(n >= 1, "chaos projection needs degree >= 1");
  require(theta.size() == a.dim() && std::abs(theta.norm() - 1.0) <= 1e-10, "theta must be a unit vector of matching dimension");
  require(n_samples > static_cast<std::size_t>(n) + 1, "too few samples for the regression");
  const int d = a.dim();
  std::vector<SymTensor> grad;
  for (int i = 0; i < d; ++i) grad.push_back(a.slice(i) * static_cast<double>(n));

  const auto rows = static_cast<Eigen::Index>(n_samples);
  Matrix design(rows, n);
  Vector target(rows);
  Stream stream(seed, 0);
  Vector x(d);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (int i = 0; i < d; ++i) x[i] = standard_normal(stream);
    const auto h = hermite_all(n - 1, theta.dot(x));
    for (int k = 0; k < n; ++k) design(r, k) = h[k];
    double y = 0.0;
    for (int i = 0; i < d; ++i) y += theta[i] * wick_evaluate(grad[i], x);
    target[r] = y;
  }
  const Matrix gram = design.transpose() * design;
  const Eigen::LDLT<Matrix> ldlt(gram);
  const Vector beta = ldlt.solve(design.transpose() * target);
  const Vector resid = target - design * beta;
  // heteroskedasticity-robust (HC0) covariance
  Matrix meat = Matrix::Zero(n, n);
  for (Eigen::Index r = 0; r < rows; ++r) meat += resid[r] * resid[r] * design.row(r).transpose() * design.row(r);
  const Matrix bread = ldlt.solve(Matrix::Identity(n, n));
  const Matrix cov = bread * meat * bread;

  ChaosProjectionCheck out;
  out.analytic = n * a.contract(theta);
  out.empirical = beta[n - 1];
  out.agree = true;
  for (int k = 0; k < n; ++k) {
    const double se = std::sqrt(std::max(0.0, cov(k, k)));
    out.coefficients.push_back(beta[k]);
    out.std_errs.push_back(se);
    const double expected = (k == n - 1) ? out.analytic : 0.0;
    // an exact zero residual gives se == 0; compare with a round-off floor
    const double tol = se_multiplier * se + 1e-9 * (1.0 + std::abs(expected));
    if (std::abs(beta[k] - expected) > tol) out.agree = false;
  }
  return out;
}

}  // namespace sliced
