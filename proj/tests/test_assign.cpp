#include "oracles.hpp"

#include "sliced/assign.hpp"
#include "sliced/ot1d.hpp"
#include "sliced/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace sliced;

TEST_SUITE("assign") {
  TEST_CASE("identical and permuted clouds cost nothing") {
    Stream s(1, 0);
    const Matrix x = standard_normal_matrix(s, 30, 3);
    const auto same = w2_exact_empirical(EmpiricalMeasure(x), EmpiricalMeasure(x));
    CHECK(same.cost == doctest::Approx(0.0));
    Matrix y(30, 3);
    for (int i = 0; i < 30; ++i) y.row(i) = x.row((i * 7) % 30);
    CHECK(w2_exact_empirical(EmpiricalMeasure(x), EmpiricalMeasure(y)).cost == doctest::Approx(0.0).epsilon(1e-14));
  }

  TEST_CASE("matches the brute-force permutation minimum") {
    for (int rep = 0; rep < 40; ++rep) {
      Stream s(2, rep);
      const int n = 2 + static_cast<int>(s() % 7), d = 1 + static_cast<int>(s() % 4);
      const Matrix x = standard_normal_matrix(s, n, d), y = standard_normal_matrix(s, n, d);
      const auto a = w2_exact_empirical(EmpiricalMeasure(x), EmpiricalMeasure(y));
      CHECK(a.cost == doctest::Approx(oracle::brute_force_assignment(squared_distance_matrix(x, y))).epsilon(1e-9));
      double c = 0.0;
      for (int i = 0; i < n; ++i) c += (x.row(i) - y.row(a.permutation[i])).squaredNorm();
      CHECK(c / n == doctest::Approx(a.cost).epsilon(1e-12));
    }
  }

  TEST_CASE("rigid motions leave the cost unchanged") {
    Stream s(3, 0);
    const Matrix x = standard_normal_matrix(s, 40, 3), y = standard_normal_matrix(s, 40, 3);
    Eigen::HouseholderQR<Matrix> qr(standard_normal_matrix(s, 3, 3));
    const Matrix r = qr.householderQ();
    const Eigen::RowVectorXd shift = Eigen::RowVectorXd::Constant(3, 2.5);
    const Matrix xr = (x * r.transpose()).rowwise() + shift, yr = (y * r.transpose()).rowwise() + shift;
    const double c0 = w2_exact_empirical(EmpiricalMeasure(x), EmpiricalMeasure(y)).cost;
    CHECK(w2_exact_empirical(EmpiricalMeasure(xr), EmpiricalMeasure(yr)).cost == doctest::Approx(c0).epsilon(1e-9));
  }

  TEST_CASE("one-dimensional clouds agree with the quantile coupling") {
    Stream s(4, 0);
    const Matrix x = standard_normal_matrix(s, 60, 1), y = standard_normal_matrix(s, 60, 1);
    const Vector xv = x.col(0), yv = y.col(0);
    CHECK(w2_exact_empirical(EmpiricalMeasure(x), EmpiricalMeasure(y)).cost ==
          doctest::Approx(w2_1d(Atoms1D::uniform(xv), Atoms1D::uniform(yv))).epsilon(1e-12));
  }

  TEST_CASE("size mismatch and cap") {
    const Matrix a = Matrix::Zero(3, 2), b = Matrix::Zero(4, 2);
    CHECK_THROWS_AS(w2_exact_empirical(EmpiricalMeasure(a), EmpiricalMeasure(b)), ContractError);
    CHECK_THROWS_AS(w2_exact_empirical(EmpiricalMeasure(a), EmpiricalMeasure(a), 2), ContractError);
  }

  TEST_CASE("Bures formula") {
    const auto g = GaussianMeasure::standard(2);
    CHECK(w2_gaussian(g, g) == doctest::Approx(0.0));
    CHECK(w2_gaussian(g, GaussianMeasure(Vector::Zero(2), 4.0 * Matrix::Identity(2, 2))) == doctest::Approx(2.0));

    // Commuting covariances: sum of squared root differences.
    Matrix a = Matrix::Zero(3, 3), b = Matrix::Zero(3, 3);
    a.diagonal() << 1.0, 2.0, 0.5;
    b.diagonal() << 3.0, 0.1, 0.5;
    Vector m(3);
    m << 1, -1, 0;
    double expect = m.squaredNorm();
    for (int i = 0; i < 3; ++i) expect += std::pow(std::sqrt(a(i, i)) - std::sqrt(b(i, i)), 2);
    CHECK(w2_gaussian(GaussianMeasure(Vector::Zero(3), a), GaussianMeasure(m, b)) == doctest::Approx(expect).epsilon(1e-12));

    Stream s(5, 0);
    for (int rep = 0; rep < 20; ++rep) {
      const Matrix g1 = standard_normal_matrix(s, 4, 4), g2 = standard_normal_matrix(s, 4, 4);
      const GaussianMeasure p(Vector::Zero(4), g1 * g1.transpose()), q(Vector::Ones(4), g2 * g2.transpose());
      CHECK(w2_gaussian(p, q) == doctest::Approx(w2_gaussian(q, p)).epsilon(1e-10));
    }
  }

  TEST_CASE("Gaussian transport map pushes the source to the target") {
    Stream s(6, 0);
    const Matrix g1 = standard_normal_matrix(s, 3, 3), g2 = standard_normal_matrix(s, 3, 3);
    const GaussianMeasure p(Vector::Zero(3), g1 * g1.transpose() + 0.1 * Matrix::Identity(3, 3));
    const GaussianMeasure q(Vector::Ones(3), g2 * g2.transpose() + 0.1 * Matrix::Identity(3, 3));
    const auto t = gaussian_transport_map(p, q);
    CHECK((t.A - t.A.transpose()).norm() < 1e-10);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(t.A).eigenvalues().minCoeff() > 0.0);
    CHECK((t.A * p.cov() * t.A - q.cov()).norm() < 1e-9);
    // Its displacement cost is the Bures distance.
    const double cost = (t.A - Matrix::Identity(3, 3)).transpose().cwiseProduct(p.cov() * (t.A - Matrix::Identity(3, 3)).transpose()).sum();
    CHECK(cost + (t.A * p.mean() + t.b - p.mean()).squaredNorm() == doctest::Approx(w2_gaussian(p, q)).epsilon(1e-9));
  }

  TEST_CASE("Bures agrees with exact assignment on a pushed-forward sample") {
    // On the anisotropic pair the shear is optimal, so the identity coupling of
    // a sample and its image is optimal and its cost estimates the Bures value.
    const double eps = 0.3, delta = 0.2;
    Matrix cov = Matrix::Zero(2, 2);
    cov(0, 0) = eps * eps;
    cov(1, 1) = 1.0;
    const GaussianMeasure mu(Vector::Zero(2), cov);
    Matrix a = Matrix::Identity(2, 2);
    a(0, 1) = a(1, 0) = delta;
    const auto x = sample(mu, 400, 7);
    const auto y = pushforward(x, VectorField(AffineField{a, Vector::Zero(2)}));
    const auto exact = w2_exact_empirical(x, y);
    Vector disp(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) disp[i] = (y.points().row(i) - x.points().row(i)).squaredNorm();
    const double se = std::sqrt((disp.array() - disp.mean()).square().sum() / (disp.size() - 1) / disp.size());
    CHECK(exact.cost == doctest::Approx(disp.mean()).epsilon(1e-10));
    CHECK(std::abs(exact.cost - w2_gaussian(mu, GaussianMeasure(Vector::Zero(2), a * cov * a))) <= 3.0 * se);
  }
}
