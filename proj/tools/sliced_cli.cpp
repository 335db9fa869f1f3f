// Command-line front end: sliced Wasserstein deficits, ridge defects, SPK
// ratios and the scripted experiments.

#include "sliced/chaos.hpp"
#include "sliced/experiments.hpp"
#include "sliced/grassmoments.hpp"
#include "sliced/io.hpp"
#include "sliced/ridge.hpp"
#include "sliced/slicing.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

using namespace sliced;

namespace {

constexpr int kFailedCheck = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) { return io::format_double(x); }

// A Gaussian file starts with a `mean:` key; anything else is a point cloud.
Measure load_measure(const std::string& flag, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(flag + ": cannot open file '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    const auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '#') continue;
    break;
  }
  try {
    if (line.find("mean") != std::string::npos) return io::read_gaussian(path);
    return EmpiricalMeasure(io::read_point_cloud(path));
  } catch (const std::exception& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

VectorField load_field(const std::string& flag, const std::string& path, const std::string& values) {
  try {
    if (!values.empty()) return io::read_tabulated(path, values);
    return io::read_field(path);
  } catch (const std::exception& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

DirectionSet directions(int d, int k, std::size_t n, Seed seed) {
  if (k < 1 || k >= d) throw UsageError("--k: must satisfy 1 <= k <= d-1 (d = " + std::to_string(d) + ")");
  if (n < 2) throw UsageError("--directions: need at least 2");
  return k == 1 ? monte_carlo_directions(d, n, seed) : monte_carlo_subspaces(d, k, n, seed);
}

RidgeOptions ridge_options(const std::string& estimator, std::size_t bins) {
  if (estimator == "closed") return {RidgeEstimator::closed_form, bins};
  if (estimator == "binned") return {RidgeEstimator::binned, bins};
  throw UsageError("--estimator: expected 'closed' or 'binned', got '" + estimator + "'");
}

struct TransportArgs {
  std::string mu, nu, map, out;
  std::size_t n_directions = 200;
  int k = 1;
  Seed seed = 0;
};

void add_transport_flags(CLI::App* sub, TransportArgs& a, const std::string& default_out) {
  sub->add_option("--mu", a.mu, "source measure: point-cloud CSV or Gaussian file (mean:/cov:)")->required();
  sub->add_option("--nu", a.nu, "target measure, same formats as --mu")->required();
  sub->add_option("--map", a.map, "transport field file (affine or poly); uses T as the coupling");
  sub->add_option("--directions", a.n_directions, "number of Monte-Carlo directions or subspaces")->capture_default_str();
  sub->add_option("--k", a.k, "subspace dimension (1 = directions)")->capture_default_str();
  sub->add_option("--seed", a.seed, "master random seed")->required();
  a.out = default_out;
  sub->add_option("--out", a.out, "report file (header block plus per-direction rows)")->capture_default_str();
}

DeficitReport run_transport(const TransportArgs& a) {
  const Measure mu = load_measure("--mu", a.mu);
  const Measure nu = load_measure("--nu", a.nu);
  if (dim(mu) != dim(nu)) throw UsageError("--mu/--nu: dimension mismatch");
  const auto frames = directions(dim(mu), a.k, a.n_directions, a.seed);
  W2Backend backend = exact_w2_backend();
  if (!a.map.empty()) backend = map_w2_backend(load_field("--map", a.map, ""));
  auto rep = sw2(mu, nu, frames, backend, a.seed);
  std::ofstream out(a.out);
  if (!out) throw UsageError("--out: cannot write '" + a.out + "'");
  io::write_deficit_report(out, rep);
  return rep;
}

struct ExperimentArgs {
  std::string config, out = "results";
  Seed seed = 0;
  std::vector<int> dims;
  std::vector<int> k;
  std::vector<double> eps;
  std::vector<double> deltas;
  std::optional<std::size_t> samples, n_directions, cases;
  std::optional<double> tilt;
};

CLI::App* add_experiment(CLI::App& app, const std::string& name, const std::string& help, ExperimentArgs& a) {
  auto* sub = app.add_subcommand(name, help);
  sub->add_option("--config", a.config, "key-value config file; flags below override it")->check(CLI::ExistingFile);
  sub->add_option("--seed", a.seed, "master random seed")->required();
  sub->add_option("--out", a.out, "output directory for CSV, summary and charts")->capture_default_str();
  return sub;
}

ExperimentConfig experiment_config(const std::string& name, const ExperimentArgs& a) {
  ExperimentConfig cfg;
  try {
    cfg = a.config.empty() ? ExperimentConfig::defaults(name) : ExperimentConfig::load(a.config);
  } catch (const std::exception& e) {
    throw UsageError("--config: " + std::string(e.what()));
  }
  if (cfg.name != name) throw UsageError("--config: file describes experiment '" + cfg.name + "', not '" + name + "'");
  cfg.seed = a.seed;
  cfg.output = a.out;
  if (!a.dims.empty()) {
    cfg.dims = a.dims;
    if (name == "sharpness") cfg.field_dims = a.dims;
  }
  if (!a.k.empty()) cfg.k_values = a.k;
  if (!a.eps.empty()) cfg.eps = a.eps;
  if (!a.deltas.empty()) cfg.deltas = a.deltas;
  if (a.samples) cfg.n_samples = *a.samples;
  if (a.n_directions) cfg.n_directions = *a.n_directions;
  if (a.cases) cfg.n_cases = *a.cases;
  if (a.tilt) cfg.tilt = *a.tilt;
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

int finish_experiment(const ExperimentResult& r, const std::filesystem::path& out) {
  write_result(r, out);
  std::cout << summary_text(r);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  return r.verdict() ? 0 : kFailedCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliced Wasserstein deficits, ridge defects and sliced Poincare-Korn ratios"};
  app.require_subcommand(1);

  TransportArgs sw2_args, deficit_args;
  auto* sw2_cmd = app.add_subcommand("sw2", "sliced W2^2 between two measures");
  add_transport_flags(sw2_cmd, sw2_args, "sw2_report.csv");
  auto* deficit_cmd = app.add_subcommand("deficit", "deficit (k/d) W2^2 - SW2^2 with per-direction gaps");
  add_transport_flags(deficit_cmd, deficit_args, "deficit_report.csv");

  struct FieldArgs {
    std::string field, values, mu, estimator = "closed";
    std::size_t n_directions = 500, bins = 0;
    Seed seed = 0;
    bool spectral = false;
  } ridge_args, spk_args;
  const auto add_field_flags = [](CLI::App* sub, FieldArgs& a) {
    sub->add_option("--field", a.field, "field file: affine block, poly gradient, or point cloud with --values")->required();
    sub->add_option("--values", a.values, "tabulated field values (rows aligned with --field points)");
    sub->add_option("--mu", a.mu, "measure: point-cloud CSV or Gaussian file")->required();
    sub->add_option("--directions", a.n_directions, "number of Monte-Carlo directions")->capture_default_str();
    sub->add_option("--estimator", a.estimator, "closed (Gaussian/affine exact) or binned (empirical)")->capture_default_str();
    sub->add_option("--bins", a.bins, "bins for the binned estimator (0 = ceil(n^(1/3)))")->capture_default_str();
    sub->add_option("--seed", a.seed, "master random seed")->required();
    sub->add_flag("--spectral", a.spectral, "exact eigenvalue path (Gaussian measures only), no directions sampled");
  };
  auto* ridge_cmd = app.add_subcommand("ridge", "ridge defect R_mu(u)");
  add_field_flags(ridge_cmd, ridge_args);
  auto* spk_cmd = app.add_subcommand("spk", "ratio R_mu(u) / dist^2(u, affine family)");
  add_field_flags(spk_cmd, spk_args);

  ExperimentArgs rig, sharp, counter, grass, pert, stab;
  auto* rig_cmd = add_experiment(app, "rigidity", "zero deficit for homotheties, positive deficit for shears", rig);
  rig_cmd->add_option("--d", rig.dims, "dimensions, comma separated")->delimiter(',');
  rig_cmd->add_option("--deltas", rig.deltas, "shear sizes")->delimiter(',');
  rig_cmd->add_option("--samples", rig.samples, "points per empirical measure");
  rig_cmd->add_option("--directions", rig.n_directions, "directions per deficit");
  rig_cmd->add_option("--cases", rig.cases, "random affine cases");

  auto* sharp_cmd = add_experiment(app, "sharpness", "Gaussian SPK constant (d-1)/(d(d+2)) and its extremizer", sharp);
  sharp_cmd->add_option("--d", sharp.dims, "dimensions, comma separated")->delimiter(',');
  sharp_cmd->add_option("--directions", sharp.n_directions, "directions for the extremizer Monte-Carlo estimate");
  sharp_cmd->add_option("--cases", sharp.cases, "random polynomial fields per dimension");

  auto* counter_cmd = add_experiment(app, "counterexample", "anisotropic Gaussian obstruction", counter);
  counter_cmd->add_option("--eps", counter.eps, "anisotropy values in (0,1), comma separated")->delimiter(',');

  auto* grass_cmd = add_experiment(app, "grassmann", "Grassmannian deficit on Gaussian pairs", grass);
  grass_cmd->add_option("--d", grass.dims, "dimensions, comma separated")->delimiter(',');
  grass_cmd->add_option("--k", grass.k, "subspace dimensions, comma separated")->delimiter(',');
  grass_cmd->add_option("--directions", grass.n_directions, "subspaces per deficit");
  grass_cmd->add_option("--cases", grass.cases, "random Gaussian pairs");

  auto* pert_cmd = add_experiment(app, "perturbation", "SPK bound for bounded perturbations of gamma_d", pert);
  pert_cmd->add_option("--d", pert.dims, "dimensions, comma separated")->delimiter(',');
  pert_cmd->add_option("--tilt", pert.tilt, "c in rho ~ 1 + c cos(x_1), in [0,1)");
  pert_cmd->add_option("--samples", pert.samples, "sample size");
  pert_cmd->add_option("--directions", pert.n_directions, "directions");
  pert_cmd->add_option("--cases", pert.cases, "random fields");

  auto* stab_cmd = add_experiment(app, "stability", "dist^2 <= (Lambda/kappa) deficit on gamma_d", stab);
  stab_cmd->add_option("--d", stab.dims, "dimensions, comma separated")->delimiter(',');
  stab_cmd->add_option("--deltas", stab.deltas, "perturbation sizes in (0,1)")->delimiter(',');
  stab_cmd->add_option("--directions", stab.n_directions, "directions");

  struct {
    int d = 4, k = 2;
    std::size_t samples = 100000;
    Seed seed = 0;
    std::string matrix, out;
  } mom;
  auto* mom_cmd = app.add_subcommand("moments", "Haar projection moments on the Grassmannian");
  mom_cmd->add_option("--d", mom.d, "ambient dimension")->capture_default_str();
  mom_cmd->add_option("--k", mom.k, "subspace dimension, 1 <= k <= d-1 (k = d allowed as a diagnostic)")->capture_default_str();
  mom_cmd->add_option("--samples", mom.samples, "Haar subspaces")->capture_default_str();
  mom_cmd->add_option("--matrix", mom.matrix, "symmetric matrix CSV for the off-diagonal norm (default diag(1,-1,0..)/sqrt 2)");
  mom_cmd->add_option("--seed", mom.seed, "master random seed")->required();
  mom_cmd->add_option("--out", mom.out, "moment report CSV (default: stdout only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*sw2_cmd) {
      const auto rep = run_transport(sw2_args);
      std::cout << "sw2_sq=" << fmt(rep.sw2_sq) << " se=" << fmt(rep.mc_std_err) << " d=" << rep.d << " k=" << rep.k
                << " directions=" << rep.n_directions << '\n';
      return 0;
    }
    if (*deficit_cmd) {
      const auto rep = run_transport(deficit_args);
      std::cout << "deficit=" << fmt(rep.deficit) << " se=" << fmt(rep.mc_std_err) << " w2_sq=" << fmt(rep.w2_sq)
                << " sw2_sq=" << fmt(rep.sw2_sq) << " report=" << deficit_args.out << '\n';
      return 0;
    }
    for (auto [cmd, a, want_ratio] : {std::tuple{ridge_cmd, &ridge_args, false}, std::tuple{spk_cmd, &spk_args, true}}) {
      if (!*cmd) continue;
      const Measure mu = load_measure("--mu", a->mu);
      const VectorField u = load_field("--field", a->field, a->values);
      if (u.dim() != dim(mu)) throw UsageError("--field/--mu: dimension mismatch");
      const auto opts = ridge_options(a->estimator, a->bins);
      if (a->spectral) {
        const auto* g = std::get_if<GaussianMeasure>(&mu);
        if (!g) throw UsageError("--spectral: needs a Gaussian --mu");
        if (want_ratio) {
          const auto r = spk_ratio_spectral(u, *g);
          std::cout << "ratio=" << fmt(r.ratio) << " ridge=" << fmt(r.ridge) << " dist_sq=" << fmt(r.dist_sq)
                    << (r.excluded ? " excluded=1" : "") << '\n';
        } else {
          std::cout << "ridge=" << fmt(ridge_defect_spectral(u, *g)) << '\n';
        }
        return 0;
      }
      const auto frames = directions(dim(mu), 1, a->n_directions, a->seed);
      if (want_ratio) {
        const auto r = spk_ratio(u, mu, frames, opts);
        std::cout << "ratio=" << fmt(r.ratio) << " se=" << fmt(r.std_err) << " ridge=" << fmt(r.ridge) << " dist_sq=" << fmt(r.dist_sq)
                  << (r.excluded ? " excluded=1" : "") << '\n';
      } else {
        const auto r = ridge_defect(u, mu, frames, opts);
        std::cout << "ridge=" << fmt(r.value) << " se=" << fmt(r.std_err) << '\n';
      }
      return 0;
    }
    if (*rig_cmd) return finish_experiment(run_rigidity(experiment_config("rigidity", rig)), rig.out);
    if (*sharp_cmd) {
      const auto cfg = experiment_config("sharpness", sharp);
      const auto r = run_gaussian_sharpness(cfg);
      for (int d : cfg.dims) {
        const double target = (d - 1.0) / (d * (d + 2.0));
        std::cout << "d=" << d << " target=" << fmt(target);
        for (const auto& c : r.cases)
          if (c.claim.rfind("extremizer", 0) == 0 && c.inputs == "d=" + std::to_string(d) + ";v=e1")
            std::cout << ' ' << (c.quantity == "MC ratio" ? "mc=" : "spectral=") << fmt(c.value)
                      << (c.quantity == "MC ratio" ? " se=" + fmt(c.std_err) : "");
        std::cout << '\n';
      }
      return finish_experiment(r, cfg.output);
    }
    if (*counter_cmd) return finish_experiment(run_counterexample(experiment_config("counterexample", counter)), counter.out);
    if (*grass_cmd) return finish_experiment(run_grassmann_deficit(experiment_config("grassmann", grass)), grass.out);
    if (*pert_cmd) return finish_experiment(run_perturbation_bound(experiment_config("perturbation", pert)), pert.out);
    if (*stab_cmd) return finish_experiment(run_stability(experiment_config("stability", stab)), stab.out);
    if (*mom_cmd) {
      if (mom.d < 2 || mom.k < 1 || mom.k > mom.d) throw UsageError("--d/--k: need d >= 2 and 1 <= k <= d");
      if (mom.samples < 2) throw UsageError("--samples: need at least 2");
      const auto rep = projection_moments(mom.d, mom.k, mom.samples, mom.seed);
      io::write_moment_report(std::cout, rep);
      if (!mom.out.empty()) {
        std::ofstream out(mom.out);
        if (!out) throw UsageError("--out: cannot write '" + mom.out + "'");
        io::write_moment_report(out, rep);
      }
      bool ok = true;
      for (const auto& e : rep.estimates) ok = ok && std::abs(e.z_score()) <= 3.0;
      if (mom.k < mom.d) {
        Matrix m = Matrix::Zero(mom.d, mom.d);
        if (mom.matrix.empty()) {
          m(0, 0) = 1.0 / std::sqrt(2.0);
          m(1, 1) = -1.0 / std::sqrt(2.0);
        } else {
          try {
            m = io::read_point_cloud(mom.matrix);
          } catch (const std::exception& e) {
            throw UsageError("--matrix: " + std::string(e.what()));
          }
          if (m.rows() != mom.d || m.cols() != mom.d) throw UsageError("--matrix: expected a d x d matrix");
        }
        const auto off = offdiagonal_norm(m, mom.k, mom.samples, mom.seed);
        const bool off_ok = std::abs(off.estimate - off.target) <= 3.0 * off.std_err + 1e-12;
        std::cout << "offdiagonal_norm," << fmt(off.estimate) << ',' << fmt(off.std_err) << ',' << fmt(off.target) << ','
                  << fmt(off.std_err > 0 ? (off.estimate - off.target) / off.std_err : 0.0) << '\n';
        ok = ok && off_ok;
      }
      std::cout << "verdict: " << (ok ? "PASS" : "FAIL") << '\n';
      return ok ? 0 : kFailedCheck;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kFailedCheck;
  }
  return kUsage;
}
