#include "oracles.hpp"

#include "sliced/experiments.hpp"
#include "sliced/ot1d.hpp"
#include "sliced/slicing.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace sliced;

namespace {
GaussianMeasure anisotropic(double eps) {
  Matrix cov = Matrix::Zero(2, 2);
  cov(0, 0) = eps * eps;
  cov(1, 1) = 1.0;
  return GaussianMeasure(Vector::Zero(2), cov);
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    best = std::max(best, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return best;
}
}  // namespace

TEST_SUITE("slicing") {
  TEST_CASE("directions are unit vectors with isotropic second moment") {
    const auto one = sample_directions(5, 1, 123);
    CHECK(one.front().direction().norm() == doctest::Approx(1.0).epsilon(1e-15));

    const auto dirs = sample_directions(3, 1000000, 1);
    Matrix m = Matrix::Zero(3, 3);
    for (const auto& f : dirs) m += f.direction() * f.direction().transpose();
    m /= static_cast<double>(dirs.size());
    CHECK((m - Matrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 0.005);
  }

  TEST_CASE("fourth moment of a quadratic form") {
    const auto dirs = sample_directions(2, 1000000, 2);
    double s = 0.0, ss = 0.0;
    for (const auto& f : dirs) {
      const Vector t = f.direction();
      const double q = t[0] * t[0] - t[1] * t[1];
      s += q * q;
      ss += q * q * q * q;
    }
    const double n = static_cast<double>(dirs.size());
    const double mean = s / n, se = std::sqrt((ss / n - mean * mean) / n);
    CHECK(std::abs(mean - 0.5) <= 3.0 * se);
  }

  TEST_CASE("subspaces: orthonormal frames with mean projector k/d") {
    const auto subs = sample_subspaces(4, 2, 100000, 3);
    Matrix mean = Matrix::Zero(4, 4);
    for (const auto& f : subs) mean += f.projector();
    mean /= static_cast<double>(subs.size());
    CHECK((mean - 0.5 * Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.01);
    const Matrix b = subs.front().basis();
    CHECK((b.transpose() * b - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(sample_subspaces(4, 4, 1, 0), ContractError);
    CHECK_THROWS_AS(sample_subspaces(4, 0, 1, 0), ContractError);
  }

  TEST_CASE("k = 1 subspaces in d = 2 match directions in law") {
    const auto a = sample_directions(2, 20000, 4);
    const auto b = sample_subspaces(2, 1, 20000, 5);
    std::vector<double> xa, xb;
    for (const auto& f : a) xa.push_back(f.direction()[0]);
    for (const auto& f : b) xb.push_back(f.basis()(0, 0));
    // 1% critical value 1.63 * sqrt(2/n).
    CHECK(ks_statistic(xa, xb) < 1.63 * std::sqrt(2.0 / 20000.0));
  }

  TEST_CASE("equal measures give an all-zero report") {
    const auto mu = sample(GaussianMeasure::standard(3), 200, 6);
    const auto rep = sw2(mu, mu, monte_carlo_directions(3, 50, 7), exact_w2_backend());
    CHECK(rep.w2_sq == 0.0);
    CHECK(rep.sw2_sq == 0.0);
    CHECK(rep.deficit == 0.0);
  }

  TEST_CASE("translations have zero deficit") {
    Vector b(3);
    b << 1.0, -2.0, 0.5;
    const auto g = GaussianMeasure::standard(3);
    const GaussianMeasure h(b, Matrix::Identity(3, 3));
    const auto rep = sw2(g, h, monte_carlo_directions(3, 4000, 8), exact_w2_backend());
    CHECK(rep.w2_sq == doctest::Approx(b.squaredNorm()));
    CHECK(std::abs(rep.deficit) <= 3.0 * rep.mc_std_err + 1e-12);
    CHECK(std::abs(rep.sw2_sq - b.squaredNorm() / 3.0) <= 0.05 * b.squaredNorm());
  }

  TEST_CASE("second variation on the anisotropic Gaussian") {
    const double eps = 0.1, delta = 1e-3;
    const auto mu = anisotropic(eps);
    const VectorField t(shear(2, delta));
    const auto rep = sw2(mu, pushforward(mu, *t.affine()), planar_grid(1 << 14), map_w2_backend(t));
    CHECK(rep.deficit / (delta * delta) == doctest::Approx(counterexample_ridge(eps, 1 << 15)).epsilon(0.01));
  }

  TEST_CASE("directional gaps") {
    const auto g = GaussianMeasure::standard(3);
    const Frame f = Frame::direction(Vector::Ones(3).normalized());
    CHECK(directional_gap(g, VectorField::identity(3), f) == 0.0);
    CHECK(std::abs(directional_gap(g, VectorField::homothety(2.5, Vector::Ones(3)), f)) < 1e-10);

    const double eps = 0.2, delta = 0.05;
    const auto mu = anisotropic(eps);
    for (double t : {0.1, 0.7, 2.0}) {
      Vector th(2);
      th << std::cos(t), std::sin(t);
      CHECK(directional_gap(mu, VectorField(shear(2, delta)), Frame::direction(th)) ==
            doctest::Approx(counterexample_gap(eps, delta, t)).epsilon(1e-9));
    }
    Stream s(9, 0);
    CHECK_THROWS_AS(directional_gap(g, VectorField(random_poly_gradient(3, 3, s)), f), ContractError);
  }

  TEST_CASE("sliced cost never exceeds (k/d) W2^2 and gaps are non-negative") {
    for (int rep = 0; rep < 30; ++rep) {
      Stream s(10, rep);
      const int d = 2 + rep % 3, n = 20;
      const EmpiricalMeasure a(standard_normal_matrix(s, n, d));
      const EmpiricalMeasure b(standard_normal_matrix(s, n, d) * 1.5);
      for (int k = 1; k < d; ++k) {
        const auto r = sw2(a, b, k == 1 ? monte_carlo_directions(d, 100, rep) : monte_carlo_subspaces(d, k, 100, rep), exact_w2_backend());
        CHECK(r.sw2_sq <= double(k) / d * r.w2_sq + 3.0 * r.mc_std_err + 1e-12);
        for (const auto& g : r.per_direction_gaps) CHECK(g.gap >= -1e-9 * (1.0 + r.w2_sq));
      }
    }
  }

  TEST_CASE("deficit is the mean gap and matches plain slicing") {
    Stream s(11, 0);
    const auto mu = sample(GaussianMeasure::standard(3), 300, 12);
    const VectorField t(random_poly_gradient(3, 3, s));
    const auto nu = pushforward(mu, t);
    const auto frames = monte_carlo_directions(3, 200, 13);
    const auto rep = sw2(mu, nu, frames, map_w2_backend(t));
    double mean_gap = 0.0;
    for (const auto& g : rep.per_direction_gaps) mean_gap += g.gap;
    mean_gap /= static_cast<double>(rep.per_direction_gaps.size());
    CHECK(rep.deficit == doctest::Approx(mean_gap).epsilon(1e-12));
    // Plain slicing and the control-variate estimate differ only by the
    // Monte-Carlo error of the displacement term.
    double plain = 0.0, plain2 = 0.0, disp = 0.0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const double c = projected_w2(mu, nu, frames.frames[i]);
      CHECK(c == doctest::Approx(rep.frame_costs[i]).epsilon(1e-12));
      plain += c;
      plain2 += c * c;
      disp += c + rep.per_direction_gaps[i].gap;
    }
    const double n = static_cast<double>(frames.size());
    plain /= n;
    disp /= n;
    CHECK(rep.sw2_sq == doctest::Approx(plain + rep.w2_sq / 3.0 - disp).epsilon(1e-10));
    const double plain_se = std::sqrt((plain2 / n - plain * plain) / n);
    CHECK(std::abs(rep.sw2_sq - plain) <= 3.0 * plain_se);
  }

  TEST_CASE("rotating measures and frames together preserves frame costs") {
    Stream s(14, 0);
    const Matrix x = standard_normal_matrix(s, 40, 3), y = standard_normal_matrix(s, 40, 3) * 2.0;
    Eigen::HouseholderQR<Matrix> qr(standard_normal_matrix(s, 3, 3));
    const Matrix r = qr.householderQ();
    const auto frames = monte_carlo_subspaces(3, 2, 20, 15);
    std::vector<Frame> rotated;
    for (const auto& f : frames.frames) rotated.emplace_back(r * f.basis());
    const auto a = sw2(EmpiricalMeasure(x), EmpiricalMeasure(y), frames, exact_w2_backend());
    const auto b = sw2(EmpiricalMeasure(x * r.transpose()), EmpiricalMeasure(y * r.transpose()), DirectionSet::equal_weights(rotated),
                       exact_w2_backend());
    for (std::size_t i = 0; i < a.frame_costs.size(); ++i) CHECK(a.frame_costs[i] == doctest::Approx(b.frame_costs[i]).epsilon(1e-10));
  }

  TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(sw2(GaussianMeasure::standard(2), GaussianMeasure::standard(3), monte_carlo_directions(2, 5, 0), exact_w2_backend()),
                    ContractError);
  }
}
