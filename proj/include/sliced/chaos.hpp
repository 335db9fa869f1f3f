#pragma once

#include "sliced/core.hpp"
#include "sliced/fields.hpp"
#include "sliced/tensor.hpp"

#include <vector>

namespace sliced {

/// Probabilists' Hermite polynomial He_n(x).
double hermite(int n, double x);
/// He_0(x), ..., He_nmax(x).
std::vector<double> hermite_all(int nmax, double x);

/// <A, :x^{(x)n}:> using :x_{i1}...x_{in}: = prod_i He_{k_i}(x_i).
double wick_evaluate(const SymTensor& a, const Vector& x);
/// grad <A, :x^n:> = n <A(e_i, ...), :x^{n-1}:>.
Vector wick_gradient(const SymTensor& a, const Vector& x);
/// ||grad <A_n, :x^n:>||^2 in L^2(gamma_d) = n * n! * ||A_n||^2.
double wick_gradient_norm_sq(const SymTensor& a);

/// Eigenvalue of Q_n on the component I^j (.) H_m, n = m + 2j:
///   (m+2j)! Gamma(d/2) / (2^{m+2j} j! Gamma(m+j+d/2)).
double spectrum_eigenvalue(int m, int j, int d);

struct McEstimate {
  double value = 0.0;
  double std_err = 0.0;
};

/// A : theta^{(x)n} for a unit vector theta.
double contract_sphere(const SymTensor& a, const Vector& theta);

/// Monte-Carlo estimate of Q_n(A) = E_sigma[(A : theta^n)^2].
McEstimate spherical_quadratic(const SymTensor& a, std::size_t n_mc, Seed seed);
/// Q_n(A) from the irreducible trace decomposition and the eigenvalue law.
double spherical_quadratic_spectral(const SymTensor& a);

/// Sym(I (x) v): degree 3, (delta_ij v_k + delta_ik v_j + delta_jk v_i) / 3.
SymTensor extremizer_tensor(const Vector& v);
/// u = grad <Sym(I (x) v), :x^3:>.
VectorField build_extremizer(int d, const Vector& v);

struct ChaosProjectionCheck {
  std::vector<double> coefficients;  // OLS coefficients on He_0..He_{n-1}(theta.X)
  std::vector<double> std_errs;
  double analytic = 0.0;   // n (A : theta^n), the He_{n-1} coefficient
  double empirical = 0.0;  // fitted He_{n-1} coefficient
  bool agree = false;
};

/// Regresses theta . grad psi_n(X), X ~ N(0, I), on the one-dimensional
/// Hermite basis in theta . X and compares with n (A:theta^n) He_{n-1}.
ChaosProjectionCheck chaos_projection_check(const SymTensor& a, const Vector& theta, std::size_t n_samples, Seed seed,
                                            double se_multiplier = 3.0);

}  // namespace sliced
