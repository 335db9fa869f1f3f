#pragma once

#include "sliced/core.hpp"
#include "sliced/fields.hpp"
#include "sliced/measures.hpp"
#include "sliced/rng.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sliced {

struct TolerancePolicy {
  double absolute = 1e-10;   // round-off floor, scaled by (1 + problem size)
  double relative = 0.01;
  double se_multiplier = 3.0;
};

struct ExperimentConfig {
  std::string name;
  Seed seed = 0;
  std::vector<int> dims;
  std::vector<int> field_dims;     // sharpness: dimensions for random-field sweeps
  std::vector<int> k_values;
  std::size_t n_samples = 0;
  std::size_t n_directions = 0;
  std::size_t n_field_directions = 0;
  std::size_t n_cases = 0;
  std::size_t replicates = 0;        // perturbation: independent sample replicates
  std::vector<double> eps;
  std::vector<double> deltas;        // absolute perturbation sizes
  std::vector<double> delta_ratios;  // counterexample: delta = ratio * eps
  double tilt = 0.3;
  double lipschitz_constant = 1.0;   // counterexample: sup sqrt(b/a) <= 1 + C delta/eps
  double ratio_tolerance = 0.02;     // counterexample blow-up ratio slack
  std::size_t quadrature_nodes = 1u << 16;
  TolerancePolicy tol;
  std::filesystem::path output;

  /// Defaults for one of: rigidity, sharpness, counterexample, grassmann,
  /// perturbation, stability.
  static ExperimentConfig defaults(const std::string& name);
  /// Defaults for the file's `name`, overridden by its other keys.
  static ExperimentConfig load(const std::filesystem::path& path);
  void validate() const;
};

struct CaseRecord {
  std::string claim;
  std::string inputs;
  std::string quantity;
  double value = 0.0;
  double target = 0.0;
  double std_err = 0.0;
  std::string rule;
  bool passed = false;
};

struct LineSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string file;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<LineSeries> series;
  bool log_x = false;
  bool log_y = false;
};

struct ExperimentResult {
  std::string name;
  Seed seed = 0;
  std::vector<CaseRecord> cases;
  std::vector<std::string> warnings;
  std::vector<Chart> charts;
  bool verdict() const;
};

ExperimentResult run_rigidity(const ExperimentConfig& cfg);
ExperimentResult run_gaussian_sharpness(const ExperimentConfig& cfg);
ExperimentResult run_counterexample(const ExperimentConfig& cfg);
ExperimentResult run_grassmann_deficit(const ExperimentConfig& cfg);
ExperimentResult run_perturbation_bound(const ExperimentConfig& cfg);
ExperimentResult run_stability(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// <dir>/<name>.csv, <dir>/<name>_summary.txt and any charts.
void write_result(const ExperimentResult& result, const std::filesystem::path& dir);
std::string summary_text(const ExperimentResult& result);

// Shared generators, also used by the test suites.

Matrix random_symmetric(int d, Stream& s);
Matrix random_spd(int d, Stream& s);
/// x -> (I + delta S) x with S swapping the first two coordinates.
AffineField shear(int d, double delta);
/// Random gradient of a polynomial of degree <= max_degree + 1, at least one
/// term of degree >= 2 so the field is not affine.
PolyGradientField random_poly_gradient(int d, int max_degree, Stream& s);
/// Rejection sample from density proportional to (1 + c cos x_1) gamma_d.
EmpiricalMeasure sample_tilted_gaussian(int d, Eigen::Index n, double c, Seed seed);

/// Anisotropic pair of the counterexample: mu = N(0, diag(eps^2, 1)),
/// u(x) = (x_2, x_1), T_delta = I + delta u.
double counterexample_condvar(double eps, double t);
double counterexample_ridge(double eps, std::size_t nodes);
double counterexample_gap(double eps, double delta, double t);
double counterexample_deficit(double eps, double delta, std::size_t nodes);
double counterexample_lipschitz(double eps, double delta, std::size_t nodes);

void write_line_chart(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<LineSeries>& series, bool log_x, bool log_y);

}  // namespace sliced
