#include "oracles.hpp"

#include "sliced/chaos.hpp"
#include "sliced/experiments.hpp"
#include "sliced/ridge.hpp"
#include "sliced/slicing.hpp"

#include <doctest.h>

#include <cmath>

using namespace sliced;

namespace {
GaussianMeasure anisotropic(double eps) {
  Matrix cov = Matrix::Zero(2, 2);
  cov(0, 0) = eps * eps;
  cov(1, 1) = 1.0;
  return GaussianMeasure(Vector::Zero(2), cov);
}
VectorField swap_field() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = s(1, 0) = 1.0;
  return VectorField(AffineField{s, Vector::Zero(2)});
}
Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}
double linear_law(const Matrix& a) {
  const double d = static_cast<double>(a.rows());
  return (d * (a * a).trace() - a.trace() * a.trace()) / (d * (d + 2.0));
}
}  // namespace

TEST_SUITE("ridge") {
  TEST_CASE("distance to the affine family") {
    Vector b(2);
    b << 1.0, 0.0;
    const auto fit = dist_to_affine(VectorField::homothety(3.0, b), Measure(anisotropic(0.4)));
    CHECK(fit.lambda == doctest::Approx(3.0));
    CHECK((fit.b - b).norm() < 1e-12);
    CHECK(fit.residual_sq == doctest::Approx(0.0).epsilon(1e-14));

    CHECK(dist_to_affine(VectorField(AffineField{diag2(1, -1), Vector::Zero(2)}), Measure(GaussianMeasure::standard(2))).residual_sq ==
          doctest::Approx(2.0));

    const auto aniso = dist_to_affine(swap_field(), Measure(anisotropic(0.1)));
    CHECK(aniso.residual_sq == doctest::Approx(1.01).epsilon(1e-14));
    CHECK(aniso.lambda == doctest::Approx(0.0));
    CHECK(aniso.b.norm() < 1e-14);
  }

  TEST_CASE("distance of polynomial fields matches quadrature") {
    for (int rep = 0; rep < 5; ++rep) {
      Stream s(1, rep);
      const int d = 2 + rep % 2;
      const VectorField u(random_poly_gradient(d, 4, s));
      const double exact = dist_to_affine(u, Measure(GaussianMeasure::standard(d))).residual_sq;
      CHECK(exact == doctest::Approx(oracle::gh_dist_to_affine(u, d, 6)).epsilon(1e-10));
    }
  }

  TEST_CASE("linear law of the ridge defect") {
    const auto g2 = GaussianMeasure::standard(2);
    const auto dirs = monte_carlo_directions(2, 2000, 2);
    CHECK(ridge_defect(VectorField::identity(2), Measure(g2), dirs).value == doctest::Approx(0.0));
    CHECK(ridge_defect_spectral(VectorField(AffineField{diag2(1, -1), Vector::Zero(2)}), g2) == doctest::Approx(0.5).epsilon(1e-14));

    Stream s(3, 0);
    for (int d : {2, 3, 5}) {
      const Matrix a = random_symmetric(d, s);
      const VectorField u(AffineField{a, Vector::Ones(d)});
      CHECK(ridge_defect_spectral(u, GaussianMeasure::standard(d)) == doctest::Approx(linear_law(a)).epsilon(1e-12));
    }
  }

  TEST_CASE("per-direction conditional variance matches nested quadrature") {
    for (int rep = 0; rep < 6; ++rep) {
      Stream s(4, rep);
      const int d = 2 + rep % 2;
      const VectorField u(random_poly_gradient(d, 4, s));
      const auto frames = monte_carlo_directions(d, 3, 100 + rep);
      const auto r = ridge_defect(u, Measure(GaussianMeasure::standard(d)), frames);
      for (std::size_t i = 0; i < frames.size(); ++i)
        CHECK(r.per_direction[i] == doctest::Approx(oracle::gh_conditional_variance(u, frames.frames[i].direction(), 8)).epsilon(1e-9));
    }
  }

  TEST_CASE("spectral ridge defect agrees with the direction average") {
    Stream s(5, 0);
    const VectorField u(random_poly_gradient(3, 4, s));
    const auto g = GaussianMeasure::standard(3);
    const auto mc = ridge_defect(u, Measure(g), monte_carlo_directions(3, 20000, 6));
    CHECK(std::abs(mc.value - ridge_defect_spectral(u, g)) <= 3.0 * mc.std_err);
  }

  TEST_CASE("anisotropic example") {
    const double eps = 0.1;
    const auto r = ridge_defect(swap_field(), Measure(anisotropic(eps)), planar_grid(1 << 12));
    CHECK(r.value <= eps);
    CHECK(r.value == doctest::Approx(counterexample_ridge(eps, 1 << 13)).epsilon(1e-12));
    const auto ratio = spk_ratio(swap_field(), Measure(anisotropic(eps)), planar_grid(1 << 12));
    CHECK(ratio.ratio <= eps / (1.0 + eps * eps));
  }

  TEST_CASE("SPK ratios under the standard Gaussian") {
    Stream s(7, 0);
    for (int d : {2, 3, 4}) {
      Matrix a = random_symmetric(d, s);
      a -= a.trace() / d * Matrix::Identity(d, d);
      CHECK(spk_ratio_spectral(VectorField(AffineField{a, Vector::Zero(d)}), GaussianMeasure::standard(d)).ratio ==
            doctest::Approx(1.0 / (d + 2.0)).epsilon(1e-12));
    }
    const auto ext = build_extremizer(3, Vector::Unit(3, 0));
    CHECK(spk_ratio_spectral(ext, GaussianMeasure::standard(3)).ratio == doctest::Approx(2.0 / 15.0).epsilon(1e-12));
    const auto mc = spk_ratio(ext, Measure(GaussianMeasure::standard(3)), monte_carlo_directions(3, 5000, 8));
    CHECK(mc.ratio == doctest::Approx(2.0 / 15.0).epsilon(0.01));

    const auto affine = spk_ratio_spectral(VectorField::homothety(2.0, Vector::Ones(3)), GaussianMeasure::standard(3));
    CHECK(affine.excluded);
  }

  TEST_CASE("ratio is invariant under translation and dilation of the Gaussian") {
    Stream s(9, 0);
    const int d = 3;
    const Matrix a = random_symmetric(d, s);
    const Vector b = Vector::Ones(d);
    const Vector m = Vector::LinSpaced(d, -1.0, 2.0);
    const double sigma = 1.7;
    // X = m + sigma Z turns u into sigma (A Z) + const, and the ratio ignores both.
    const auto lhs = spk_ratio_spectral(VectorField(AffineField{a, b}), GaussianMeasure(m, sigma * sigma * Matrix::Identity(d, d)));
    const auto rhs = spk_ratio_spectral(VectorField(AffineField{a, (a * m + b) / sigma}), GaussianMeasure::standard(d));
    CHECK(lhs.ratio == doctest::Approx(rhs.ratio).epsilon(1e-10));
  }

  TEST_CASE("continuity bound |R(u) - R(v)| <= (|u| + |v|) |u - v|") {
    const auto g = GaussianMeasure::standard(3);
    const auto norm = [&](const Matrix& a, const Vector& b) { return std::sqrt((a * a).trace() + b.squaredNorm()); };
    for (int rep = 0; rep < 50; ++rep) {
      Stream s(10, rep);
      const Matrix a = random_symmetric(3, s), c = random_symmetric(3, s);
      const Vector b = Vector::Random(3), e = Vector::Random(3);
      const double ru = ridge_defect_spectral(VectorField(AffineField{a, b}), g);
      const double rv = ridge_defect_spectral(VectorField(AffineField{c, e}), g);
      CHECK(std::abs(ru - rv) <= (norm(a, b) + norm(c, e)) * norm(a - c, b - e) + 1e-12);
    }
  }

  TEST_CASE("binned estimator") {
    // Affine fields are ridge in every direction for the binned estimator too.
    const auto mu = sample(GaussianMeasure::standard(3), 20000, 11);
    const auto r0 = ridge_defect(VectorField::homothety(2.0, Vector::Ones(3)), Measure(mu), monte_carlo_directions(3, 50, 12),
                                 {RidgeEstimator::binned, 0});
    CHECK(r0.value < 1e-14);

    Stream s(13, 0);
    const Matrix a = random_symmetric(3, s);
    const VectorField u(AffineField{a, Vector::Zero(3)});
    const auto frames = monte_carlo_directions(3, 200, 14);
    const auto exact = ridge_defect(u, Measure(GaussianMeasure::standard(3)), frames);
    const auto big = sample(GaussianMeasure::standard(3), 200000, 15);
    const auto binned = ridge_defect(u, Measure(big), frames, {RidgeEstimator::binned, 0});
    CHECK(binned.value == doctest::Approx(exact.value).epsilon(0.02));

    CHECK_THROWS_AS(ridge_defect(u, Measure(GaussianMeasure::standard(3)), frames, {RidgeEstimator::binned, 0}), ContractError);
    CHECK_THROWS_AS(ridge_defect(u, Measure(big), frames, {RidgeEstimator::closed_form, 0}), ContractError);
  }

  TEST_CASE("stability inequality") {
    const auto g = GaussianMeasure::standard(3);
    const auto frames = monte_carlo_directions(3, 4000, 16);
    const double kappa = 2.0 / 15.0;
    const auto affine = stability_check(Measure(g), VectorField::homothety(1.5, Vector::Ones(3)), frames, kappa);
    CHECK(affine.lhs == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::abs(affine.deficit) < 1e-12);
    CHECK(affine.holds);

    Matrix a = Matrix::Identity(3, 3);
    a(0, 0) += 0.1;
    a(1, 1) -= 0.1;
    const auto chk = stability_check(Measure(g), VectorField(AffineField{a, Vector::Zero(3)}), frames, kappa);
    const Matrix p = a - Matrix::Identity(3, 3);
    CHECK(chk.lhs == doctest::Approx((p * p).trace() - p.trace() * p.trace() / 3.0).epsilon(1e-12));
    CHECK(chk.holds);
    CHECK_THROWS_AS(stability_check(Measure(g), VectorField::identity(3), frames, 0.0), ContractError);
  }

  TEST_CASE("stability constant blows up on the anisotropic family") {
    double previous = 0.0;
    for (double eps : {0.2, 0.1, 0.05}) {
      const double delta = eps / 100.0;
      const auto mu = anisotropic(eps);
      Matrix a = Matrix::Identity(2, 2);
      a(0, 1) = a(1, 0) = delta;
      const auto chk = stability_check(Measure(mu), VectorField(AffineField{a, Vector::Zero(2)}), planar_grid(1 << 12), 1.0);
      const double ratio = chk.lhs / chk.deficit;
      CHECK(ratio >= (1.0 + eps * eps) / (2.0 * eps) * 0.98);
      CHECK(ratio > previous);
      previous = ratio;
    }
  }
}
