#include "sliced/experiments.hpp"

#include "sliced/chaos.hpp"
#include "sliced/io.hpp"
#include "sliced/parallel.hpp"
#include "sliced/ridge.hpp"
#include "sliced/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace sliced {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string kv(const std::string& k, double v) { return k + "=" + fmt(v); }

std::string join(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ";") + p;
  return out;
}

CaseRecord record(std::string claim, std::string inputs, std::string quantity, double value, double target, double se,
                  std::string rule, bool passed) {
  return CaseRecord{std::move(claim), std::move(inputs), std::move(quantity), value, target, se, std::move(rule), passed};
}

CaseRecord abs_close(std::string claim, std::string inputs, std::string q, double v, double t, double tol) {
  return record(std::move(claim), std::move(inputs), std::move(q), v, t, 0.0, "|value-target| <= " + fmt(tol),
                std::abs(v - t) <= tol);
}

CaseRecord rel_close(std::string claim, std::string inputs, std::string q, double v, double t, double rel, double se = 0.0) {
  return record(std::move(claim), std::move(inputs), std::move(q), v, t, se, "|value-target| <= " + fmt(rel) + "*|target|",
                std::abs(v - t) <= rel * std::abs(t));
}

CaseRecord within_se(std::string claim, std::string inputs, std::string q, double v, double t, double se, double mult,
                     double floor) {
  return record(std::move(claim), std::move(inputs), std::move(q), v, t, se,
                "|value-target| <= " + fmt(mult) + "*se + " + fmt(floor), std::abs(v - t) <= mult * se + floor);
}

CaseRecord at_most(std::string claim, std::string inputs, std::string q, double v, double bound, double slack, double se = 0.0) {
  return record(std::move(claim), std::move(inputs), std::move(q), v, bound, se, "value <= target + " + fmt(slack),
                v <= bound + slack);
}

CaseRecord at_least(std::string claim, std::string inputs, std::string q, double v, double bound, double slack, double se = 0.0) {
  return record(std::move(claim), std::move(inputs), std::move(q), v, bound, se, "value >= target - " + fmt(slack),
                v >= bound - slack);
}

CaseRecord exceeds_se(std::string claim, std::string inputs, std::string q, double v, double se, double mult) {
  return record(std::move(claim), std::move(inputs), std::move(q), v, 0.0, se, "value > " + fmt(mult) + "*se", v > mult * se && v > 0.0);
}

using CaseFn = std::function<std::vector<CaseRecord>()>;

// Runs cases in parallel and concatenates their records by case index.
std::vector<CaseRecord> run_cases(const std::vector<CaseFn>& cases) {
  std::vector<std::vector<CaseRecord>> out(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) { out[i] = cases[i](); });
  std::vector<CaseRecord> flat;
  for (auto& v : out) flat.insert(flat.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  return flat;
}

// Distinct per-purpose seeds derived from the master seed.
Seed derive(Seed master, std::uint64_t purpose, std::uint64_t index = 0) {
  Stream s = Stream(master, purpose).split(index);
  return s();
}

enum Purpose : std::uint64_t {
  kCaseDraw = 1,
  kSamples,
  kDirections,
  kSecondDirections,
  kFieldDraw,
};

double spk_kappa(int d) { return static_cast<double>(d - 1) / (static_cast<double>(d) * (d + 2)); }

Vector unit(int d, int i) {
  Vector v = Vector::Zero(d);
  v[i] = 1.0;
  return v;
}

Vector random_vector(int d, Stream& s) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = standard_normal(s);
  return v;
}

}  // namespace

// ---------------------------------------------------------------- config

ExperimentConfig ExperimentConfig::defaults(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.output = "results";
  if (name == "rigidity") {
    c.dims = {2, 3, 4, 5};
    c.k_values = {2};
    c.n_cases = 50;
    c.n_samples = 2000;
    c.n_directions = 200;
    c.deltas = {0.3};
  } else if (name == "sharpness") {
    c.dims = {2, 3, 5, 10};
    c.field_dims = {3};
    c.n_cases = 200;
    c.n_directions = 50000;
    c.n_field_directions = 2000;
  } else if (name == "counterexample") {
    c.eps = {0.1, 0.05, 0.01};
    c.delta_ratios = {0.1, 0.03, 0.01};
  } else if (name == "grassmann") {
    c.dims = {3, 4, 5};
    c.k_values = {1, 2};
    c.n_cases = 20;
    c.n_directions = 2000;
    c.deltas = {0.3};
  } else if (name == "perturbation") {
    c.dims = {3};
    c.n_cases = 5;
    c.n_samples = 10000;
    c.n_directions = 200;
    c.replicates = 8;
    c.tilt = 0.3;
  } else if (name == "stability") {
    c.dims = {2, 3, 5};
    c.n_cases = 3;
    c.n_directions = 2000;
    c.deltas = {0.05, 0.1, 0.2, 0.4};
  } else {
    throw ContractError("unknown experiment '" + name + "'");
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  const auto file = io::KeyValueFile::load(path);
  auto c = defaults(file.get("name"));
  const auto ints = [&](const std::string& key) {
    std::vector<int> out;
    for (double v : file.reals(key)) {
      if (v != std::floor(v)) throw io::ParseError(file.context() + ": key '" + key + "' expects integers");
      out.push_back(static_cast<int>(v));
    }
    return out;
  };
  const auto count = [&](const std::string& key) {
    const long v = file.integer(key);
    if (v < 0) throw io::ParseError(file.context() + ": key '" + key + "' must be non-negative");
    return static_cast<std::size_t>(v);
  };
  for (const auto& key : file.keys()) {
    if (key == "name") continue;
    else if (key == "seed") c.seed = static_cast<Seed>(count(key));
    else if (key == "dims") c.dims = ints(key);
    else if (key == "field_dims") c.field_dims = ints(key);
    else if (key == "k") c.k_values = ints(key);
    else if (key == "n_samples") c.n_samples = count(key);
    else if (key == "n_directions") c.n_directions = count(key);
    else if (key == "n_field_directions") c.n_field_directions = count(key);
    else if (key == "n_cases") c.n_cases = count(key);
    else if (key == "replicates") c.replicates = count(key);
    else if (key == "eps") c.eps = file.reals(key);
    else if (key == "deltas") c.deltas = file.reals(key);
    else if (key == "delta_ratios") c.delta_ratios = file.reals(key);
    else if (key == "tilt") c.tilt = file.real(key);
    else if (key == "lipschitz_constant") c.lipschitz_constant = file.real(key);
    else if (key == "ratio_tolerance") c.ratio_tolerance = file.real(key);
    else if (key == "quadrature_nodes") c.quadrature_nodes = count(key);
    else if (key == "abs_tol") c.tol.absolute = file.real(key);
    else if (key == "rel_tol") c.tol.relative = file.real(key);
    else if (key == "se_multiplier") c.tol.se_multiplier = file.real(key);
    else if (key == "output") c.output = file.get(key);
    else throw io::ParseError(file.context() + ": unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  const auto nonempty = [&](bool ok, const char* what) {
    if (!ok) throw ContractError(name + ": " + what + " must be nonempty");
  };
  if (!(tol.se_multiplier >= 1.0)) throw ContractError(name + ": se_multiplier must be >= 1");
  if (!(tol.absolute >= 0.0) || !(tol.relative >= 0.0)) throw ContractError(name + ": tolerances must be non-negative");
  for (int d : dims)
    if (d < 2) throw ContractError(name + ": dimensions must be >= 2");
  if (name == "rigidity") {
    nonempty(!dims.empty(), "dims");
    nonempty(!deltas.empty(), "deltas");
    require(n_samples >= 2 && n_directions >= 2, name + ": needs at least two samples and directions");
  } else if (name == "sharpness") {
    nonempty(!dims.empty(), "dims");
    require(n_directions >= 2 && n_field_directions >= 2, name + ": needs at least two directions");
    for (int d : field_dims) require(d >= 2, name + ": field dimensions must be >= 2");
  } else if (name == "counterexample") {
    nonempty(!eps.empty(), "eps");
    nonempty(!delta_ratios.empty(), "delta_ratios");
    for (double e : eps) require(e > 0.0 && e < 1.0, name + ": eps must lie in (0, 1)");
    for (double r : delta_ratios) require(r > 0.0 && r * *std::max_element(eps.begin(), eps.end()) < 1.0, name + ": delta must lie in (0, 1)");
    require(quadrature_nodes >= 8 && quadrature_nodes % 2 == 0, name + ": quadrature_nodes must be even and >= 8");
    require(lipschitz_constant > 0.0 && ratio_tolerance >= 0.0, name + ": bounds must be positive");
  } else if (name == "grassmann") {
    nonempty(!dims.empty(), "dims");
    nonempty(!k_values.empty(), "k");
    nonempty(!deltas.empty(), "deltas");
    for (int k : k_values) require(k >= 1, name + ": k must be >= 1");
    require(n_directions >= 2, name + ": needs at least two subspaces");
  } else if (name == "perturbation") {
    nonempty(!dims.empty(), "dims");
    require(tilt >= 0.0 && tilt < 1.0, name + ": tilt must lie in [0, 1)");
    require(n_samples >= 8 && n_directions >= 2, name + ": needs samples and directions");
    require(replicates >= 2, name + ": needs at least two replicates");
  } else if (name == "stability") {
    nonempty(!dims.empty(), "dims");
    nonempty(!deltas.empty(), "deltas");
    for (double d : deltas) require(d > 0.0 && d < 1.0, name + ": deltas must lie in (0, 1)");
    require(n_directions >= 2, name + ": needs at least two directions");
  } else {
    throw ContractError("unknown experiment '" + name + "'");
  }
}

bool ExperimentResult::verdict() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseRecord& c) { return c.passed; });
}

// ---------------------------------------------------------------- generators

Matrix random_symmetric(int d, Stream& s) {
  const Matrix g = standard_normal_matrix(s, d, d);
  return (g + g.transpose()) / 2.0;
}

Matrix random_spd(int d, Stream& s) {
  const Matrix g = standard_normal_matrix(s, d, d);
  return g * g.transpose() / static_cast<double>(d) + 0.2 * Matrix::Identity(d, d);
}

AffineField shear(int d, double delta) {
  require(d >= 2, "shear needs d >= 2");
  Matrix a = Matrix::Identity(d, d);
  a(0, 1) = a(1, 0) = delta;
  return AffineField{a, Vector::Zero(d)};
}

PolyGradientField random_poly_gradient(int d, int max_degree, Stream& s) {
  require(max_degree >= 2 && max_degree <= 6, "random field degree must lie in [2, 6]");
  std::vector<SymTensor> terms;
  bool nonlinear = false;
  for (int n = 1; n <= max_degree; ++n) {
    if (uniform01(s) < 0.5) continue;
    SymTensor t(d, n);
    const double scale = std::exp2(4.0 * uniform01(s) - 2.0);
    for (std::size_t p = 0; p < t.size(); ++p) t[p] = scale * standard_normal(s);
    // Now and then plant a near-extremal cubic term.
    if (n == 3 && uniform01(s) < 0.25) {
      SymTensor e = extremizer_tensor(random_vector(d, s));
      t *= 0.05;
      e += t;
      t = e;
    }
    nonlinear = nonlinear || n >= 2;
    terms.push_back(std::move(t));
  }
  if (!nonlinear) {
    SymTensor t(d, 2);
    for (std::size_t p = 0; p < t.size(); ++p) t[p] = standard_normal(s);
    terms.push_back(std::move(t));
  }
  return PolyGradientField(std::move(terms));
}

EmpiricalMeasure sample_tilted_gaussian(int d, Eigen::Index n, double c, Seed seed) {
  require(d >= 1 && n >= 1, "tilted sample needs d >= 1 and n >= 1");
  require(c >= 0.0 && c < 1.0, "tilt must lie in [0, 1)");
  Matrix pts(n, d);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    Stream s(seed, i);
    for (;;) {
      const Vector x = random_vector(d, s);
      if (uniform01(s) * (1.0 + c) < 1.0 + c * std::cos(x[0])) {
        pts.row(static_cast<Eigen::Index>(i)) = x.transpose();
        return;
      }
    }
  });
  return EmpiricalMeasure(std::move(pts));
}

double counterexample_condvar(double eps, double t) {
  const double c2 = std::cos(2.0 * t);
  const double c = std::cos(t), s = std::sin(t);
  return eps * eps * c2 * c2 / (eps * eps * c * c + s * s);
}

double counterexample_ridge(double eps, std::size_t nodes) {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes; ++i)
    sum += counterexample_condvar(eps, 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(nodes));
  return sum / static_cast<double>(nodes);
}

double counterexample_gap(double eps, double delta, double t) {
  const double c = std::cos(t), s = std::sin(t);
  const double a = eps * eps * c * c + s * s;
  const double cov = (1.0 + eps * eps) * s * c;
  const double var_y = c * c + eps * eps * s * s;
  const double db = 2.0 * delta * cov + delta * delta * var_y;  // b - a
  const double diff = db / (std::sqrt(a + db) + std::sqrt(a));
  return delta * delta * var_y - diff * diff;
}

double counterexample_deficit(double eps, double delta, std::size_t nodes) {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes; ++i)
    sum += counterexample_gap(eps, delta, 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(nodes));
  return sum / static_cast<double>(nodes);
}

double counterexample_lipschitz(double eps, double delta, std::size_t nodes) {
  double best = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(nodes);
    const double c = std::cos(t), s = std::sin(t);
    const double a = eps * eps * c * c + s * s;
    const double b = a + 2.0 * delta * (1.0 + eps * eps) * s * c + delta * delta * (c * c + eps * eps * s * s);
    best = std::max(best, std::sqrt(b / a));
  }
  return best;
}

// ---------------------------------------------------------------- runners

ExperimentResult run_rigidity(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& tol = cfg.tol;
  std::vector<CaseFn> cases;

  for (std::size_t i = 0; i < cfg.n_cases; ++i) {
    cases.push_back([&cfg, &tol, i] {
      Stream s(cfg.seed, kCaseDraw);
      s = s.split(i);
      const int d = cfg.dims[static_cast<std::size_t>(s() % cfg.dims.size())];
      const double lambda = 3.0 * uniform01(s);
      const Vector b = random_vector(d, s);
      const auto mu = sample(GaussianMeasure::standard(d), static_cast<Eigen::Index>(cfg.n_samples), derive(cfg.seed, kSamples, i));
      const auto t = VectorField::homothety(lambda, b);
      const Seed dir_seed = derive(cfg.seed, kDirections, i);
      const auto rep = sw2(mu, pushforward(mu, t), monte_carlo_directions(d, cfg.n_directions, dir_seed), map_w2_backend(t), dir_seed);
      const std::string in = join({kv("d", d), kv("lambda", lambda), kv("|b|", b.norm()), kv("n", double(cfg.n_samples))});
      const double floor = tol.absolute * (1.0 + rep.w2_sq);
      double worst = 0.0;
      for (const auto& g : rep.per_direction_gaps) worst = std::max(worst, std::abs(g.gap));
      return std::vector<CaseRecord>{
          within_se("affine maps have zero deficit", in, "deficit", rep.deficit, 0.0, rep.mc_std_err, tol.se_multiplier, floor),
          at_most("affine maps have zero directional gaps", in, "max |g_theta|", worst, 0.0, floor)};
    });
  }

  // Fixed example: lambda = 2, b = (1, ..., 1), n = 10^4, 500 directions.
  cases.push_back([&cfg, &tol] {
    const int d = cfg.dims.back();
    const auto mu = sample(GaussianMeasure::standard(d), 10000, derive(cfg.seed, kSamples, 1u << 20));
    const auto t = VectorField::homothety(2.0, Vector::Ones(d));
    const Seed dir_seed = derive(cfg.seed, kDirections, 1u << 20);
    const auto rep = sw2(mu, pushforward(mu, t), monte_carlo_directions(d, 500, dir_seed), map_w2_backend(t), dir_seed);
    return std::vector<CaseRecord>{within_se("affine maps have zero deficit", join({kv("d", d), "lambda=2", "b=1", "n=10000"}),
                                             "deficit", rep.deficit, 0.0, rep.mc_std_err, tol.se_multiplier,
                                             tol.absolute * (1.0 + rep.w2_sq))};
  });

  // Identity: exactly zero.
  cases.push_back([&cfg] {
    const int d = cfg.dims.front();
    const auto mu = sample(GaussianMeasure::standard(d), static_cast<Eigen::Index>(cfg.n_samples), derive(cfg.seed, kSamples, 1u << 21));
    const auto t = VectorField::identity(d);
    const auto rep = sw2(mu, mu, monte_carlo_directions(d, cfg.n_directions, 1), map_w2_backend(t));
    return std::vector<CaseRecord>{abs_close("identity has zero deficit", kv("d", d), "deficit", rep.deficit, 0.0, 0.0)};
  });

  // Grassmannian gaps g_E on the Gaussian path.
  for (int d : cfg.dims) {
    for (int k : cfg.k_values) {
      if (k >= d) continue;
      cases.push_back([&cfg, &tol, d, k] {
        Stream s(cfg.seed, kCaseDraw);
        s = s.split(1000 + static_cast<std::uint64_t>(d * 10 + k));
        const double lambda = 0.5 + 2.0 * uniform01(s);
        const auto t = VectorField::homothety(lambda, random_vector(d, s));
        const auto g = GaussianMeasure::standard(d);
        const auto nu = pushforward(g, *t.affine());
        const Seed dir_seed = derive(cfg.seed, kDirections, 2000 + static_cast<std::uint64_t>(d * 10 + k));
        const auto rep = sw2(g, nu, monte_carlo_subspaces(d, k, cfg.n_directions, dir_seed), exact_w2_backend(), dir_seed);
        double worst = 0.0;
        for (const auto& gap : rep.per_direction_gaps) worst = std::max(worst, std::abs(gap.gap));
        const std::string in = join({kv("d", d), kv("k", k), kv("lambda", lambda), "gaussian"});
        const double floor = tol.absolute * (1.0 + rep.w2_sq);
        return std::vector<CaseRecord>{
            within_se("affine maps have zero Grassmannian deficit", in, "deficit_k", rep.deficit, 0.0, rep.mc_std_err,
                      tol.se_multiplier, floor),
            at_most("affine maps have zero Grassmannian gaps", in, "max |g_E|", worst, 0.0, floor)};
      });
    }
  }

  // Shears are detected.
  for (int d : cfg.dims) {
    for (std::size_t j = 0; j < cfg.deltas.size(); ++j) {
      const double delta = cfg.deltas[j];
      cases.push_back([&cfg, d, delta, j] {
        const std::uint64_t tag = 3000 + static_cast<std::uint64_t>(d) * 100 + j;
        const auto mu = sample(GaussianMeasure::standard(d), static_cast<Eigen::Index>(cfg.n_samples), derive(cfg.seed, kSamples, tag));
        const VectorField t(shear(d, delta));
        const Seed dir_seed = derive(cfg.seed, kDirections, tag);
        const auto rep = sw2(mu, pushforward(mu, t), monte_carlo_directions(d, cfg.n_directions, dir_seed), map_w2_backend(t), dir_seed);
        return std::vector<CaseRecord>{exceeds_se("shear has positive deficit", join({kv("d", d), kv("delta", delta)}), "deficit",
                                                  rep.deficit, rep.mc_std_err, 5.0)};
      });
    }
  }

  ExperimentResult out;
  out.name = "rigidity";
  out.seed = cfg.seed;
  out.cases = run_cases(cases);
  return out;
}

ExperimentResult run_gaussian_sharpness(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& tol = cfg.tol;
  std::vector<CaseFn> cases;

  for (int d : cfg.dims) {
    cases.push_back([&cfg, &tol, d] {
      std::vector<CaseRecord> recs;
      const auto g = GaussianMeasure::standard(d);
      const Measure gm = g;
      const std::string in = kv("d", d);

      // Trace-free affine modes sit at 1/(d+2).
      Stream s = Stream(cfg.seed, kFieldDraw).split(static_cast<std::uint64_t>(d));
      Matrix a = random_symmetric(d, s);
      a -= (a.trace() / d) * Matrix::Identity(d, d);
      const VectorField affine(AffineField{a, random_vector(d, s)});
      const double affine_target = 1.0 / (d + 2.0);
      recs.push_back(rel_close("trace-free affine ratio is 1/(d+2)", in, "spectral ratio", spk_ratio_spectral(affine, g).ratio,
                               affine_target, 1e-12));
      const auto affine_mc = spk_ratio(affine, gm, monte_carlo_directions(d, cfg.n_field_directions, derive(cfg.seed, kDirections, d)));
      recs.push_back(within_se("trace-free affine ratio is 1/(d+2)", in, "MC ratio", affine_mc.ratio, affine_target,
                               affine_mc.std_err, tol.se_multiplier, 1e-12));

      // The cubic extremizer attains the sharp constant.
      const double kappa = spk_kappa(d);
      const auto ext = build_extremizer(d, unit(d, 0));
      recs.push_back(rel_close("extremizer ratio is (d-1)/(d(d+2))", in + ";v=e1", "spectral ratio", spk_ratio_spectral(ext, g).ratio,
                               kappa, 1e-12));
      const auto ext_rand = build_extremizer(d, random_vector(d, s));
      recs.push_back(rel_close("extremizer ratio is (d-1)/(d(d+2))", in + ";v=random", "spectral ratio",
                               spk_ratio_spectral(ext_rand, g).ratio, kappa, 1e-12));
      const auto ext_mc = spk_ratio(ext, gm, monte_carlo_directions(d, cfg.n_directions, derive(cfg.seed, kSecondDirections, d)));
      recs.push_back(rel_close("extremizer ratio is (d-1)/(d(d+2))", in + ";v=e1", "MC ratio", ext_mc.ratio, kappa, tol.relative,
                               ext_mc.std_err));
      return recs;
    });
  }

  for (int d : cfg.field_dims) {
    for (std::size_t i = 0; i < cfg.n_cases; ++i) {
      cases.push_back([&cfg, &tol, d, i] {
        Stream s = Stream(cfg.seed, kFieldDraw).split(100000 + static_cast<std::uint64_t>(d) * 10000 + i);
        const VectorField u(random_poly_gradient(d, 4, s));
        const auto g = GaussianMeasure::standard(d);
        const double kappa = spk_kappa(d);
        const std::string in = join({kv("d", d), kv("field", double(i))});
        const auto exact = spk_ratio_spectral(u, g);
        const auto mc = spk_ratio(u, Measure(g),
                                  monte_carlo_directions(d, cfg.n_field_directions, derive(cfg.seed, kDirections, 100000 + d * 10000 + i)));
        return std::vector<CaseRecord>{
            at_least("random fields satisfy ratio >= (d-1)/(d(d+2))", in, "spectral ratio", exact.ratio, kappa, 1e-12),
            at_least("random fields satisfy ratio >= (d-1)/(d(d+2))", in, "MC ratio", mc.ratio, kappa,
                     tol.se_multiplier * mc.std_err, mc.std_err)};
      });
    }
  }

  ExperimentResult out;
  out.name = "sharpness";
  out.seed = cfg.seed;
  out.cases = run_cases(cases);
  return out;
}

ExperimentResult run_counterexample(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& tol = cfg.tol;
  const std::size_t nodes = cfg.quadrature_nodes;
  ExperimentResult out;
  out.name = "counterexample";
  out.seed = cfg.seed;

  std::vector<double> ratios = cfg.delta_ratios;
  std::sort(ratios.begin(), ratios.end(), std::greater<>());
  for (double r : ratios)
    if (r >= 1.0) out.warnings.push_back("delta/eps = " + fmt(r) + " >= 1 is outside the asymptotic regime delta = o(eps)");

  struct EpsData {
    std::vector<double> deltas, scaled, blowup;
    double ridge = 0.0;
  };
  std::vector<EpsData> data(cfg.eps.size());
  std::vector<CaseFn> cases;

  for (std::size_t e = 0; e < cfg.eps.size(); ++e) {
    cases.push_back([&, e] {
      const double eps = cfg.eps[e];
      std::vector<CaseRecord> recs;
      const std::string in = kv("eps", eps);
      Matrix cov = Matrix::Zero(2, 2);
      cov(0, 0) = eps * eps;
      cov(1, 1) = 1.0;
      const GaussianMeasure mu(Vector::Zero(2), cov);
      const auto grid = planar_grid(nodes / 2);  // integrands are pi-periodic
      const VectorField u(AffineField{shear(2, 1.0).A - Matrix::Identity(2, 2), Vector::Zero(2)});  // u(x) = (x_2, x_1)

      // (a) ridge defect by quadrature, two paths, and the bound R <= eps.
      const double ridge = counterexample_ridge(eps, nodes);
      data[e].ridge = ridge;
      recs.push_back(at_most("ridge defect R <= eps", in, "R quadrature", ridge, eps, 0.0));
      const double ridge_lib = ridge_defect(u, Measure(mu), grid).value;
      recs.push_back(rel_close("ridge defect R <= eps", in, "R via conditional variance", ridge_lib, ridge, 1e-12));

      // (b) dist^2 = 1 + eps^2.
      const double dist = dist_to_affine(u, Measure(mu)).residual_sq;
      recs.push_back(abs_close("dist^2 = 1 + eps^2", in, "dist^2", dist, 1.0 + eps * eps, 1e-12));

      // (c) second variation, (d) Lipschitz scale, (e) blow-up.
      std::vector<double> errors;
      for (double r : ratios) {
        const double delta = r * eps;
        const std::string ind = join({in, kv("delta", delta)});
        const VectorField t(shear(2, delta));
        const auto rep = sw2(Measure(mu), Measure(pushforward(mu, *t.affine())), grid, map_w2_backend(t));
        const double explicit_deficit = counterexample_deficit(eps, delta, nodes);
        recs.push_back(rel_close("second variation deficit/delta^2 -> R", ind, "deficit (library vs explicit)", rep.deficit,
                                 explicit_deficit, 1e-6));
        const double scaled = rep.deficit / (delta * delta);
        errors.push_back(std::abs(scaled - ridge));
        data[e].deltas.push_back(delta);
        data[e].scaled.push_back(scaled);

        const double lip = counterexample_lipschitz(eps, delta, nodes);
        recs.push_back(at_most("Lipschitz scale sup sqrt(b/a) <= 1 + C delta/eps", ind, "Lipschitz scale", lip,
                               1.0 + cfg.lipschitz_constant * delta / eps, 0.0));

        const double blowup = delta * delta * (1.0 + eps * eps) / rep.deficit;
        data[e].blowup.push_back(blowup);
        recs.push_back(at_least("blow-up dist^2/deficit >= (1+eps^2)/(2eps)", ind, "dist^2/deficit", blowup,
                                (1.0 + eps * eps) / (2.0 * eps) * (1.0 - cfg.ratio_tolerance), 0.0));
      }
      const std::string ind = join({in, kv("delta", ratios.back() * eps)});
      recs.push_back(rel_close("second variation deficit/delta^2 -> R", ind, "deficit/delta^2 at smallest delta",
                               data[e].scaled.back(), ridge, tol.relative));
      if (ratios.size() >= 2) {
        bool monotone = true;
        for (std::size_t j = 1; j < errors.size(); ++j) monotone = monotone && errors[j] <= errors[j - 1];
        recs.push_back(record("second variation deficit/delta^2 -> R", in, "error decreases along the delta grid",
                              monotone ? 1.0 : 0.0, 1.0, 0.0, "value == target", monotone));
        // Richardson step assuming an O(delta^2) error.
        const std::size_t m = ratios.size();
        const double h1 = data[e].deltas[m - 2], h2 = data[e].deltas[m - 1];
        const double extrap = (data[e].scaled[m - 1] * h1 * h1 - data[e].scaled[m - 2] * h2 * h2) / (h1 * h1 - h2 * h2);
        recs.push_back(rel_close("second variation deficit/delta^2 -> R", in, "Richardson extrapolation", extrap, ridge, tol.relative));
      }

      const VectorField id = VectorField::identity(2);
      const auto zero = sw2(Measure(mu), Measure(mu), grid, map_w2_backend(id));
      recs.push_back(abs_close("delta = 0 gives zero deficit", in, "deficit", zero.deficit, 0.0, 0.0));
      return recs;
    });
  }
  out.cases = run_cases(cases);

  Chart second{"counterexample_second_variation.svg", "deficit / delta^2 against delta", "delta", "deficit / delta^2", {}, true, true};
  Chart blow{"counterexample_blowup.svg", "dist^2 / deficit against eps (smallest delta)", "eps", "dist^2 / deficit", {}, true, true};
  LineSeries measured{"dist^2/deficit", {}, {}}, bound{"(1+eps^2)/(2eps)", {}, {}};
  for (std::size_t e = 0; e < cfg.eps.size(); ++e) {
    LineSeries s{"eps=" + fmt(cfg.eps[e]), data[e].deltas, data[e].scaled};
    LineSeries r{"R, eps=" + fmt(cfg.eps[e]), data[e].deltas, std::vector<double>(data[e].deltas.size(), data[e].ridge)};
    second.series.push_back(std::move(s));
    second.series.push_back(std::move(r));
    measured.x.push_back(cfg.eps[e]);
    measured.y.push_back(data[e].blowup.back());
    bound.x.push_back(cfg.eps[e]);
    bound.y.push_back((1.0 + cfg.eps[e] * cfg.eps[e]) / (2.0 * cfg.eps[e]));
  }
  blow.series = {measured, bound};
  out.charts = {second, blow};
  return out;
}

ExperimentResult run_grassmann_deficit(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& tol = cfg.tol;
  std::vector<CaseFn> cases;

  // Affine homothety on gamma_d: zero deficit for every k.
  for (int d : cfg.dims) {
    for (int k : cfg.k_values) {
      if (k >= d) continue;
      cases.push_back([&cfg, &tol, d, k] {
        Stream s = Stream(cfg.seed, kCaseDraw).split(static_cast<std::uint64_t>(d * 10 + k));
        const auto t = VectorField::homothety(0.5 + 2.0 * uniform01(s), random_vector(d, s));
        const auto g = GaussianMeasure::standard(d);
        const Seed dir_seed = derive(cfg.seed, kDirections, static_cast<std::uint64_t>(d * 10 + k));
        const auto rep = sw2(g, pushforward(g, *t.affine()), monte_carlo_subspaces(d, k, cfg.n_directions, dir_seed), exact_w2_backend(), dir_seed);
        return std::vector<CaseRecord>{within_se("affine maps have D_k = 0", join({kv("d", d), kv("k", k)}), "deficit_k", rep.deficit, 0.0,
                                                 rep.mc_std_err, tol.se_multiplier, tol.absolute * (1.0 + rep.w2_sq))};
      });
    }
  }

  // Shears are detected for every k.
  for (int d : cfg.dims) {
    for (int k : cfg.k_values) {
      if (k >= d) continue;
      for (double delta : cfg.deltas) {
        cases.push_back([&cfg, d, k, delta] {
          const auto g = GaussianMeasure::standard(d);
          const auto t = shear(d, delta);
          const Seed dir_seed = derive(cfg.seed, kSecondDirections, static_cast<std::uint64_t>(d * 10 + k));
          const auto rep = sw2(g, pushforward(g, t), monte_carlo_subspaces(d, k, cfg.n_directions, dir_seed), exact_w2_backend(), dir_seed);
          return std::vector<CaseRecord>{exceeds_se("shear has D_k > 0", join({kv("d", d), kv("k", k), kv("delta", delta)}), "deficit_k",
                                                    rep.deficit, rep.mc_std_err, 5.0)};
        });
      }
    }
  }

  // Random Gaussian pairs: D_k >= 0.
  for (std::size_t i = 0; i < cfg.n_cases; ++i) {
    cases.push_back([&cfg, &tol, i] {
      Stream s = Stream(cfg.seed, kFieldDraw).split(i);
      const int d = cfg.dims[static_cast<std::size_t>(s() % cfg.dims.size())];
      const GaussianMeasure a(random_vector(d, s), random_spd(d, s));
      const GaussianMeasure b(random_vector(d, s), random_spd(d, s));
      std::vector<CaseRecord> recs;
      for (int k : cfg.k_values) {
        if (k >= d) continue;
        const Seed dir_seed = derive(cfg.seed, kDirections, 10000 + i * 16 + static_cast<std::uint64_t>(k));
        const auto rep = sw2(a, b, monte_carlo_subspaces(d, k, cfg.n_directions, dir_seed), exact_w2_backend(), dir_seed);
        recs.push_back(at_least("random Gaussian pairs have D_k >= 0", join({kv("d", d), kv("k", k), kv("pair", double(i))}), "deficit_k",
                                rep.deficit, 0.0, tol.se_multiplier * rep.mc_std_err + tol.absolute * (1.0 + rep.w2_sq), rep.mc_std_err));
      }
      return recs;
    });
  }

  // k = 1 subspaces agree with direction slicing.
  for (int d : cfg.dims) {
    cases.push_back([&cfg, &tol, d] {
      Stream s = Stream(cfg.seed, kFieldDraw).split(50000 + static_cast<std::uint64_t>(d));
      const GaussianMeasure a(random_vector(d, s), random_spd(d, s));
      const GaussianMeasure b(random_vector(d, s), random_spd(d, s));
      const Seed s1 = derive(cfg.seed, kDirections, 50000 + static_cast<std::uint64_t>(d));
      const Seed s2 = derive(cfg.seed, kSecondDirections, 50000 + static_cast<std::uint64_t>(d));
      const auto r1 = sw2(a, b, monte_carlo_directions(d, cfg.n_directions, s1), exact_w2_backend(), s1);
      const auto r2 = sw2(a, b, monte_carlo_subspaces(d, 1, cfg.n_directions, s2), exact_w2_backend(), s2);
      const double se = std::hypot(r1.mc_std_err, r2.mc_std_err);
      return std::vector<CaseRecord>{within_se("k = 1 matches direction slicing", kv("d", d), "deficit_1 - deficit", r2.deficit - r1.deficit,
                                               0.0, se, tol.se_multiplier, tol.absolute)};
    });
  }

  ExperimentResult out;
  out.name = "grassmann";
  out.seed = cfg.seed;
  out.cases = run_cases(cases);
  return out;
}

ExperimentResult run_perturbation_bound(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& tol = cfg.tol;
  std::vector<CaseFn> cases;
  const RidgeOptions binned{RidgeEstimator::binned, 0};

  for (int d : cfg.dims) {
    for (double c : {cfg.tilt, 0.0}) {
      const double bound = (1.0 - c) / (1.0 + c) * spk_kappa(d);
      const std::uint64_t tag = static_cast<std::uint64_t>(d) * 2 + (c == 0.0 ? 1 : 0);
      if (c == 0.0) {
        cases.push_back([d, bound] {
          return std::vector<CaseRecord>{abs_close("c = 0 reduces to the Gaussian constant", kv("d", d), "bound", bound, spk_kappa(d), 0.0)};
        });
      }
      // Field family: two extremizers plus random gradients.
      const std::size_t n_fields = 2 + (c == 0.0 ? 0 : cfg.n_cases);
      for (std::size_t f = 0; f < n_fields; ++f) {
        cases.push_back([&cfg, &tol, d, c, bound, tag, f, binned] {
          std::string label;
          VectorField u = VectorField::identity(d);
          if (f < 2) {
            u = build_extremizer(d, unit(d, static_cast<int>(f)));
            label = f == 0 ? "extremizer v=e1" : "extremizer v=e2";
          } else {
            Stream s = Stream(cfg.seed, kFieldDraw).split(tag * 1000 + f);
            u = VectorField(random_poly_gradient(d, 4, s));
            label = "random field " + std::to_string(f - 2);
          }
          // Replicates redraw both the sample and the directions, so the
          // spread covers sampling noise as well as direction noise.
          std::vector<double> reps(cfg.replicates);
          for (std::size_t r = 0; r < cfg.replicates; ++r) {
            const std::uint64_t rt = (tag * 1000 + f) * 1024 + r;
            const auto mu = sample_tilted_gaussian(d, static_cast<Eigen::Index>(cfg.n_samples), c, derive(cfg.seed, kSamples, rt));
            reps[r] = spk_ratio(u, Measure(mu), monte_carlo_directions(d, cfg.n_directions, derive(cfg.seed, kDirections, rt)), binned).ratio;
          }
          double mean = 0.0, ss = 0.0;
          for (double v : reps) mean += v;
          mean /= static_cast<double>(reps.size());
          for (double v : reps) ss += (v - mean) * (v - mean);
          const double se = std::sqrt(ss / static_cast<double>(reps.size() - 1) / static_cast<double>(reps.size()));
          const struct {
            double ratio, std_err;
          } r{mean, se};
          const std::string in = join({kv("d", d), kv("c", c), kv("m/M", (1.0 - c) / (1.0 + c)), label});
          return std::vector<CaseRecord>{at_least("ratio >= (m/M)(d-1)/(d(d+2))", in, "binned ratio", r.ratio, bound,
                                                  tol.se_multiplier * r.std_err, r.std_err)};
        });
      }
    }
  }

  ExperimentResult out;
  out.name = "perturbation";
  out.seed = cfg.seed;
  out.cases = run_cases(cases);
  return out;
}

ExperimentResult run_stability(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& tol = cfg.tol;
  std::vector<CaseFn> cases;

  for (int d : cfg.dims) {
    // Perturbation directions B with unit operator norm.
    std::vector<std::pair<std::string, Matrix>> shapes;
    shapes.emplace_back("shear", shear(d, 1.0).A - Matrix::Identity(d, d));
    Matrix diag = Matrix::Zero(d, d);
    diag(0, 0) = 1.0;
    diag(1, 1) = -1.0;
    shapes.emplace_back("diag(1 -1)", diag);
    for (std::size_t i = 0; i < cfg.n_cases; ++i) {
      Stream s = Stream(cfg.seed, kFieldDraw).split(static_cast<std::uint64_t>(d) * 1000 + i);
      Matrix b = random_symmetric(d, s);
      b /= Eigen::SelfAdjointEigenSolver<Matrix>(b).eigenvalues().cwiseAbs().maxCoeff();
      shapes.emplace_back("random " + std::to_string(i), b);
    }
    for (std::size_t j = 0; j < shapes.size(); ++j) {
      for (std::size_t q = 0; q < cfg.deltas.size(); ++q) {
        const double delta = cfg.deltas[q];
        const auto label = shapes[j].first;
        const Matrix a = Matrix::Identity(d, d) + delta * shapes[j].second;
        cases.push_back([&cfg, &tol, d, delta, label, a, j, q] {
          const std::uint64_t tag = static_cast<std::uint64_t>(d) * 100000 + j * 100 + q;
          Stream s = Stream(cfg.seed, kCaseDraw).split(tag);
          const VectorField t(AffineField{a, 0.3 * random_vector(d, s)});
          const auto chk = stability_check(Measure(GaussianMeasure::standard(d)), t,
                                           monte_carlo_directions(d, cfg.n_directions, derive(cfg.seed, kDirections, tag)), spk_kappa(d),
                                           tol.se_multiplier);
          const double rel = chk.deficit > 0.0 ? chk.deficit_std_err / chk.deficit : 0.0;
          return std::vector<CaseRecord>{record("dist^2 <= (Lambda/kappa) * deficit", join({kv("d", d), kv("delta", delta), label}),
                                                "dist^2", chk.lhs, chk.rhs * (1.0 + tol.se_multiplier * rel), chk.deficit_std_err,
                                                "value <= target (target includes the se allowance)", chk.holds)};
        });
      }
    }
  }

  ExperimentResult out;
  out.name = "stability";
  out.seed = cfg.seed;
  out.cases = run_cases(cases);
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.name == "rigidity") return run_rigidity(cfg);
  if (cfg.name == "sharpness") return run_gaussian_sharpness(cfg);
  if (cfg.name == "counterexample") return run_counterexample(cfg);
  if (cfg.name == "grassmann") return run_grassmann_deficit(cfg);
  if (cfg.name == "perturbation") return run_perturbation_bound(cfg);
  if (cfg.name == "stability") return run_stability(cfg);
  throw ContractError("unknown experiment '" + cfg.name + "'");
}

// ---------------------------------------------------------------- output

std::string summary_text(const ExperimentResult& result) {
  struct Tally {
    std::size_t total = 0, passed = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Tally> tally;
  for (const auto& c : result.cases) {
    if (!tally.count(c.claim)) order.push_back(c.claim);
    auto& t = tally[c.claim];
    ++t.total;
    t.passed += c.passed ? 1 : 0;
  }
  std::ostringstream out;
  out << "experiment: " << result.name << "\nseed: " << result.seed << '\n';
  std::size_t width = 5;
  for (const auto& c : order) width = std::max(width, c.size());
  for (const auto& c : order) {
    const auto& t = tally[c];
    char buf[64];
    std::snprintf(buf, sizeof buf, "  %4zu/%-4zu  %s", t.passed, t.total, t.passed == t.total ? "PASS" : "FAIL");
    out << c << std::string(width - c.size(), ' ') << buf << '\n';
  }
  for (const auto& c : result.cases) {
    if (c.passed) continue;
    out << "  failed: " << c.claim << " [" << c.inputs << "] " << c.quantity << " = " << fmt(c.value) << ", target " << fmt(c.target)
        << ", se " << fmt(c.std_err) << ", rule " << c.rule << '\n';
  }
  for (const auto& w : result.warnings) out << "warning: " << w << '\n';
  out << "verdict: " << (result.verdict() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

namespace {
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}
}  // namespace

void write_result(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / (result.name + ".csv"));
  if (!csv) throw io::ParseError("cannot write '" + (dir / (result.name + ".csv")).string() + "'");
  csv << "case,claim,inputs,quantity,value,target,std_err,rule,pass\n";
  for (std::size_t i = 0; i < result.cases.size(); ++i) {
    const auto& c = result.cases[i];
    csv << i << ',' << csv_field(c.claim) << ',' << csv_field(c.inputs) << ',' << csv_field(c.quantity) << ',' << io::format_double(c.value) << ','
        << io::format_double(c.target) << ',' << io::format_double(c.std_err) << ',' << csv_field(c.rule) << ',' << (c.passed ? 1 : 0) << '\n';
  }
  std::ofstream txt(dir / (result.name + "_summary.txt"));
  txt << summary_text(result);
  for (const auto& ch : result.charts) write_line_chart(dir / ch.file, ch.title, ch.x_label, ch.y_label, ch.series, ch.log_x, ch.log_y);
}

void write_line_chart(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<LineSeries>& series, bool log_x, bool log_y) {
  const double W = 640, H = 420, L = 80, R = 180, T = 40, B = 60;
  const auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  const auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    require(s.x.size() == s.y.size(), "chart series needs matching x and y");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((log_x && !(s.x[i] > 0)) || (log_y && !(s.y[i] > 0)) || !std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
  if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  std::ofstream out(path);
  if (!out) throw io::ParseError("cannot write '" + path.string() + "'");
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n", L, T, W - L - R, H - T - B);
  out << buf;
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    const double vx = log_x ? std::pow(10.0, fx) : fx, vy = log_y ? std::pow(10.0, fy) : fy;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%.3g</text>\n", px(vx), H - B + 18, vx);
    out << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.3g</text>\n", L - 6, py(vy) + 4, vy);
    out << buf;
  }
  out << "<text x=\"" << L + (W - L - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << T + (H - T - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << T + (H - T - B) / 2
      << ")\">" << y_label << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* col = colors[k % 8];
    out << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[k].x.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(series[k].x[i]), py(series[k].y[i]));
      out << buf;
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < series[k].x.size(); ++i) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"%s\"/>\n", px(series[k].x[i]), py(series[k].y[i]), col);
      out << buf;
    }
    const double ly = T + 14 + 18.0 * static_cast<double>(k);
    std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" stroke-width=\"2\"/>\n", W - R + 10, ly, W - R + 30, ly, col);
    out << buf;
    out << "<text x=\"" << W - R + 36 << "\" y=\"" << ly + 4 << "\">" << series[k].label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace sliced
