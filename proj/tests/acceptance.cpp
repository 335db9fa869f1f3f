// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "oracles.hpp"

#include "sliced/assign.hpp"
#include "sliced/chaos.hpp"
#include "sliced/experiments.hpp"
#include "sliced/grassmoments.hpp"
#include "sliced/ot1d.hpp"
#include "sliced/ridge.hpp"
#include "sliced/slicing.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace sliced;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
  void fail(const std::string& why) {
    if (passed) detail = why;
    passed = false;
  }
};

char buf[512];

template <class... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SymTensor random_tensor(int d, int n, Stream& s) {
  SymTensor a(d, n);
  for (std::size_t p = 0; p < a.size(); ++p) a[p] = standard_normal(s);
  return a;
}

GaussianMeasure anisotropic(double eps) {
  Matrix cov = Matrix::Zero(2, 2);
  cov(0, 0) = eps * eps;
  cov(1, 1) = 1.0;
  return GaussianMeasure(Vector::Zero(2), cov);
}

Outcome eigenvalue_table() {
  Outcome o;
  double worst = 0.0;
  for (int d = 2; d <= 10; ++d) {
    const double dd = d;
    const double pairs[][3] = {{0, 1, 1.0 / dd}, {2, 0, 2.0 / (dd * (dd + 2))}, {1, 1, 3.0 / (dd * (dd + 2))}};
    for (const auto& p : pairs) {
      const double rel = std::abs(spectrum_eigenvalue(int(p[0]), int(p[1]), d) / p[2] - 1.0);
      worst = std::max(worst, rel);
      if (rel > 1e-12) o.fail(fmt("d=%d (m,j)=(%g,%g) rel err %.3g", d, p[0], p[1], rel));
    }
  }
  if (o.passed) o.detail = fmt("max rel err %.2g over d=2..10", worst);
  return o;
}

Outcome spherical_mc() {
  Outcome o;
  const int pairs[][2] = {{0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {4, 0}, {2, 1}};
  double worst = 0.0;
  int cases = 0;
  for (int d = 2; d <= 6; ++d)
    for (const auto& mj : pairs) {
      Stream s(21, static_cast<std::uint64_t>(100 * d + 10 * mj[0] + mj[1]));
      SymTensor a = mj[0] == 0 ? SymTensor::scalar(d, 1.0) : harmonic_part(random_tensor(d, mj[0], s));
      for (int j = 0; j < mj[1]; ++j) a = sym_identity_product(a);
      const auto start = std::chrono::steady_clock::now();
      const auto mc = spherical_quadratic(a, 1000000, static_cast<Seed>(1000 + cases));
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (secs > 60.0) o.fail(fmt("d=%d (m,j)=(%d,%d): %.1f s over the per-case limit", d, mj[0], mj[1], secs));
      const double lam = spectrum_eigenvalue(mj[0], mj[1], d);
      // I^j is constant on the sphere, so its sample variance is pure round-off.
      const double err = std::abs(mc.value / a.norm_sq() - lam);
      const double se = mc.std_err / a.norm_sq();
      const double floor = 1e-12 * lam;
      ++cases;
      if (err <= floor) continue;
      const double z = err / se;
      worst = std::max(worst, z);
      if (z > 3.0) o.fail(fmt("d=%d (m,j)=(%d,%d): |z| = %.2f", d, mj[0], mj[1], z));
    }
  if (o.passed) o.detail = fmt("%d components, max |z| %.2f", cases, worst);
  return o;
}

Outcome linear_law() {
  Outcome o;
  double worst_exact = 0.0, worst_binned = 0.0;
  for (int d : {2, 3, 5}) {
    for (int rep = 0; rep < 5; ++rep) {
      Stream s(31, static_cast<std::uint64_t>(10 * d + rep));
      const Matrix a = random_symmetric(d, s);
      const Vector b = standard_normal_matrix(s, d, 1).col(0);
      const double law = (d * (a * a).trace() - a.trace() * a.trace()) / (d * (d + 2.0));
      const double got = ridge_defect_spectral(VectorField(AffineField{a, b}), GaussianMeasure::standard(d));
      const double err = std::abs(got - law) / std::max(1.0, law);
      worst_exact = std::max(worst_exact, err);
      if (err > 1e-12) o.fail(fmt("d=%d exact law error %.3g", d, err));
    }
  }
  // Binned estimator on 2e5 samples against the closed form on the same directions.
  for (int rep = 0; rep < 3; ++rep) {
    Stream s(32, static_cast<std::uint64_t>(rep));
    const int d = 3;
    const Matrix a = random_symmetric(d, s);
    const VectorField u(AffineField{a, Vector::Ones(d)});
    const auto frames = monte_carlo_directions(d, 200, 33 + rep);
    const double exact = ridge_defect(u, Measure(GaussianMeasure::standard(d)), frames).value;
    const auto x = sample(GaussianMeasure::standard(d), 200000, 40 + rep);
    const double binned = ridge_defect(u, Measure(x), frames, {RidgeEstimator::binned, 0}).value;
    const double rel = std::abs(binned / exact - 1.0);
    worst_binned = std::max(worst_binned, rel);
    if (rel > 0.02) o.fail(fmt("binned rel err %.4f", rel));
  }
  if (o.passed) o.detail = fmt("exact max err %.2g, binned max rel err %.4f", worst_exact, worst_binned);
  return o;
}

Outcome sharp_constant() {
  Outcome o;
  std::string d_list;
  for (int d : {2, 3, 5, 10}) {
    const double target = (d - 1.0) / (d * (d + 2.0));
    const auto u = build_extremizer(d, Vector::Unit(d, 0));
    const double exact = spk_ratio_spectral(u, GaussianMeasure::standard(d)).ratio;
    if (std::abs(exact / target - 1.0) > 1e-12) o.fail(fmt("d=%d spectral %.15g vs %.15g", d, exact, target));
    const auto mc = spk_ratio(u, Measure(GaussianMeasure::standard(d)), monte_carlo_directions(d, 20000, 50 + d));
    const double rel = std::abs(mc.ratio / target - 1.0);
    if (rel > 0.01) o.fail(fmt("d=%d MC %.6f vs %.6f", d, mc.ratio, target));
    d_list += fmt(" d=%d:%.4f%%", d, 100.0 * rel);
  }
  if (o.passed) o.detail = "spectral exact, MC rel err" + d_list;
  return o;
}

Outcome spk_lower_bound() {
  Outcome o;
  const double kappa = 2.0 / 15.0;
  double min_margin = INFINITY;
  for (int i = 0; i < 200; ++i) {
    Stream s(61, static_cast<std::uint64_t>(i));
    const VectorField u(random_poly_gradient(3, 4, s));
    const auto r = spk_ratio(u, Measure(GaussianMeasure::standard(3)), monte_carlo_directions(3, 2000, 7000 + i));
    if (r.excluded) {
      o.fail(fmt("field %d unexpectedly affine", i));
      continue;
    }
    const double margin = (r.ratio - kappa) / std::max(r.std_err, 1e-300);
    min_margin = std::min(min_margin, (r.ratio - kappa) + 3.0 * r.std_err);
    if (r.ratio < kappa - 3.0 * r.std_err) o.fail(fmt("field %d: ratio %.6f se %.2g (%.1f se below)", i, r.ratio, r.std_err, -margin));
  }
  if (o.passed) o.detail = fmt("200 fields, min (ratio - 2/15 + 3se) = %.3g", min_margin);
  return o;
}

Outcome grassmann_moments() {
  Outcome o;
  double worst = 0.0;
  for (auto [d, k] : {std::pair{3, 1}, std::pair{4, 2}, std::pair{6, 3}}) {
    const auto rep = projection_moments(d, k, 100000, static_cast<Seed>(70 + d));
    for (const auto& e : rep.estimates) {
      worst = std::max(worst, std::abs(e.z_score()));
      if (std::abs(e.z_score()) > 3.0) o.fail(fmt("(d,k)=(%d,%d) %s z=%.2f", d, k, e.name.c_str(), e.z_score()));
    }
    Stream s(71, static_cast<std::uint64_t>(d));
    const auto off = offdiagonal_norm(random_symmetric(d, s), k, 100000, static_cast<Seed>(80 + d));
    const double target = k * (d - k) / ((d - 1.0) * (d + 2.0));
    if (std::abs(grassmann_targets(d, k).offdiag_norm - target) > 1e-15) o.fail("C(d,k) target mismatch");
    const double z = (off.estimate - off.target) / off.std_err;
    worst = std::max(worst, std::abs(z));
    if (std::abs(z) > 3.0) o.fail(fmt("(d,k)=(%d,%d) off-diagonal norm z=%.2f", d, k, z));
  }
  if (o.passed) o.detail = fmt("max |z| %.2f", worst);
  return o;
}

Outcome rigidity() {
  Outcome o;
  double worst_affine = 0.0, weakest_shear = INFINITY;
  for (int i = 0; i < 50; ++i) {
    Stream s(91, static_cast<std::uint64_t>(i));
    const int d = 2 + i % 4;
    const double lambda = std::exp(2.0 * uniform01(s) - 1.0);
    const Vector b = standard_normal_matrix(s, d, 1).col(0);
    const VectorField t = VectorField::homothety(lambda, b);
    const auto mu = sample(GaussianMeasure::standard(d), 2000, static_cast<Seed>(900 + i));
    const auto rep = sw2(mu, pushforward(mu, t), monte_carlo_directions(d, 200, static_cast<Seed>(950 + i)), map_w2_backend(t));
    const double floor = 1e-10 * (1.0 + rep.w2_sq);
    worst_affine = std::max(worst_affine, std::abs(rep.deficit));
    if (std::abs(rep.deficit) > 3.0 * rep.mc_std_err + floor) o.fail(fmt("affine case %d: deficit %.3g se %.3g", i, rep.deficit, rep.mc_std_err));
  }
  for (int d = 2; d <= 5; ++d) {
    const VectorField t(shear(d, 0.3));
    const auto mu = sample(GaussianMeasure::standard(d), 2000, static_cast<Seed>(990 + d));
    const auto rep = sw2(mu, pushforward(mu, t), monte_carlo_directions(d, 200, static_cast<Seed>(995 + d)), map_w2_backend(t));
    const double ratio = rep.deficit / rep.mc_std_err;
    weakest_shear = std::min(weakest_shear, ratio);
    if (!(ratio > 5.0)) o.fail(fmt("shear d=%d: deficit %.3g is only %.2f se", d, rep.deficit, ratio));
  }
  if (o.passed) o.detail = fmt("affine max |deficit| %.2g, shear min deficit/se %.1f", worst_affine, weakest_shear);
  return o;
}

Outcome counterexample() {
  Outcome o;
  std::string info;
  for (double eps : {0.1, 0.05, 0.01}) {
    const double r = counterexample_ridge(eps, 1u << 16);
    if (!(r <= eps)) o.fail(fmt("eps=%g: R=%.6g > eps", eps, r));
    Matrix sw = Matrix::Zero(2, 2);
    sw(0, 1) = sw(1, 0) = 1.0;
    const VectorField u(AffineField{sw, Vector::Zero(2)});
    const auto mu = anisotropic(eps);
    const double dist = dist_to_affine(u, Measure(mu)).residual_sq;
    if (std::abs(dist - (1.0 + eps * eps)) > 1e-12) o.fail(fmt("eps=%g: dist^2 %.15g", eps, dist));
    const double delta = eps / 100.0;
    const VectorField t(shear(2, delta));
    const auto rep = sw2(Measure(mu), Measure(pushforward(mu, *t.affine())), planar_grid(1u << 15), map_w2_backend(t));
    const double second = rep.deficit / (delta * delta);
    if (std::abs(second / r - 1.0) > 0.01) o.fail(fmt("eps=%g: deficit/delta^2 %.6g vs R %.6g", eps, second, r));
    const double blowup = delta * delta * dist / rep.deficit;
    const double bound = (1.0 + eps * eps) / (2.0 * eps) * 0.98;
    if (!(blowup >= bound)) o.fail(fmt("eps=%g: blow-up %.4g < %.4g", eps, blowup, bound));
    info += fmt(" eps=%g: R=%.5f ratio=%.1f", eps, r, blowup);
  }
  if (o.passed) o.detail = info.substr(1);
  return o;
}

Outcome assignment_exactness() {
  Outcome o;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    Stream s(101, static_cast<std::uint64_t>(i));
    const int n = 2 + i % 7, d = 1 + (i / 7) % 4;
    const Matrix a = standard_normal_matrix(s, n, d), b = standard_normal_matrix(s, n, d) * 2.0;
    const double exact = w2_exact_empirical(EmpiricalMeasure(a), EmpiricalMeasure(b)).cost;
    const double brute = oracle::brute_force_assignment(squared_distance_matrix(a, b));
    worst = std::max(worst, std::abs(exact - brute));
    if (std::abs(exact - brute) > 1e-9) o.fail(fmt("instance %d: %.15g vs %.15g", i, exact, brute));
  }
  if (o.passed) o.detail = fmt("100 instances, max |diff| %.2g", worst);
  return o;
}

Outcome global_inequality() {
  Outcome o;
  double worst = -INFINITY;
  for (int i = 0; i < 1000; ++i) {
    Stream s(111, static_cast<std::uint64_t>(i));
    const int d = 2 + i % 4, n = 5 + i % 26;
    const Matrix a = standard_normal_matrix(s, n, d);
    Matrix b = standard_normal_matrix(s, n, d) * (0.5 + 2.0 * uniform01(s));
    b.col(0).array() += uniform01(s);
    const auto rep = sw2(EmpiricalMeasure(a), EmpiricalMeasure(b), monte_carlo_directions(d, 100, static_cast<Seed>(2000 + i)),
                         exact_w2_backend());
    const double excess = rep.sw2_sq - rep.w2_sq / d - 3.0 * rep.mc_std_err - 1e-12 * (1.0 + rep.w2_sq);
    worst = std::max(worst, excess);
    if (excess > 0.0) o.fail(fmt("empirical pair %d violates by %.3g", i, excess));
  }
  for (int i = 0; i < 50; ++i) {
    Stream s(112, static_cast<std::uint64_t>(i));
    const int d = 2 + i % 4;
    const GaussianMeasure g(standard_normal_matrix(s, d, 1).col(0), random_spd(d, s));
    const GaussianMeasure h(standard_normal_matrix(s, d, 1).col(0), random_spd(d, s));
    const auto rep = sw2(g, h, monte_carlo_directions(d, 500, static_cast<Seed>(3000 + i)), exact_w2_backend());
    const double excess = rep.sw2_sq - rep.w2_sq / d - 3.0 * rep.mc_std_err - 1e-12 * (1.0 + rep.w2_sq);
    worst = std::max(worst, excess);
    if (excess > 0.0) o.fail(fmt("Gaussian pair %d violates by %.3g", i, excess));
  }
  int fenchel = 0;
  for (int i = 0; i < 100; ++i) {
    Stream s(113, static_cast<std::uint64_t>(i));
    const std::size_t n = 50 + 10 * static_cast<std::size_t>(i % 10);
    const double slope = 0.2 + 3.0 * uniform01(s), noise = uniform01(s);
    std::vector<double> x(n), y(n);
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = standard_normal(s);
      y[j] = slope * x[j] + noise * standard_normal(s);
    }
    const double lip = fenchel_gap_bound_check(x, y, 1.0).lipschitz;
    if (fenchel_gap_bound_check(x, y, lip).holds) ++fenchel;
    else o.fail(fmt("Fenchel instance %d fails", i));
  }
  if (o.passed) o.detail = fmt("1000 empirical + 50 Gaussian pairs (max excess %.2g), Fenchel %d/100", worst, fenchel);
  return o;
}

Outcome stability() {
  Outcome o;
  int total = 0, held = 0;
  double worst = 0.0;
  for (int d : {2, 3, 5}) {
    const double kappa = (d - 1.0) / (d * (d + 2.0));
    const auto frames = monte_carlo_directions(d, 2000, static_cast<Seed>(120 + d));
    Stream s(121, static_cast<std::uint64_t>(d));
    Matrix diag = Matrix::Zero(d, d);
    diag(0, 0) = 1.0;
    diag(1, 1) = -1.0;
    Matrix rnd = random_symmetric(d, s);
    rnd /= Eigen::SelfAdjointEigenSolver<Matrix>(rnd).eigenvalues().cwiseAbs().maxCoeff();
    const Matrix dirs[] = {shear(d, 1.0).A - Matrix::Identity(d, d), diag, rnd};
    for (const auto& bmat : dirs)
      for (double delta : {0.05, 0.1, 0.2, 0.4}) {
        const VectorField t(AffineField{Matrix::Identity(d, d) + delta * bmat, Vector::Ones(d) * delta});
        const auto chk = stability_check(Measure(GaussianMeasure::standard(d)), t, frames, kappa);
        ++total;
        worst = std::max(worst, chk.lhs / chk.rhs);
        if (chk.holds) ++held;
        else o.fail(fmt("d=%d delta=%g: lhs %.4g > rhs %.4g", d, delta, chk.lhs, chk.rhs));
      }
  }
  if (o.passed) o.detail = fmt("%d/%d perturbations, max lhs/rhs %.3f", held, total, worst);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    double limit_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"eigenvalue table", 1, eigenvalue_table},
      {"spherical Monte-Carlo", 35 * 60, spherical_mc},
      {"exact linear law", 30, linear_law},
      {"sharp constant", 120, sharp_constant},
      {"SPK lower bound", 300, spk_lower_bound},
      {"Grassmannian moments", 60, grassmann_moments},
      {"rigidity", 120, rigidity},
      {"counterexample", 60, counterexample},
      {"assignment exactness", 60, assignment_exactness},
      {"global inequality", 300, global_inequality},
      {"stability inequality", 300, stability},
  };
  int failures = 0, index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_s) out.fail(fmt("runtime %.1f s over limit %.0f s", secs, c.limit_s));
    if (!out.passed) ++failures;
    std::printf("criterion %2d %-22s %s  %s  [%.2f s]\n", index, c.title, out.passed ? "PASS" : "FAIL", out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
