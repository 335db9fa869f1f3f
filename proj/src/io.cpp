#include "sliced/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

namespace sliced::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool skippable(const std::string& line) {
  const auto t = trim(line);
  return t.empty() || t[0] == '#';
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file '" + path.string() + "'");
  return out;
}

// Next non-comment, non-blank line.
bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (!skippable(line)) return true;
  }
  return false;
}

std::string where(const std::string& context, std::size_t lineno) { return context + " line " + std::to_string(lineno); }

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_reals(const std::string& line, const std::string& context) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto t = trim(tok);
    if (t.empty()) throw ParseError(context + ": empty numeric field");
    double v = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) throw ParseError(context + ": malformed number '" + t + "'");
    if (!std::isfinite(v)) throw ParseError(context + ": non-finite number '" + t + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError(context + ": no numbers found");
  return out;
}

Matrix read_point_cloud(std::istream& in, const std::string& context) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (next_line(in, line, lineno)) {
    rows.push_back(parse_reals(line, where(context, lineno)));
    if (rows.back().size() != rows.front().size()) throw ParseError(where(context, lineno) + ": inconsistent column count");
  }
  if (rows.empty()) throw ParseError(context + ": no atoms");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

Matrix read_point_cloud(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_point_cloud(in, "'" + path.string() + "'");
}

void write_point_cloud(std::ostream& out, const Matrix& points, const std::string& header) {
  if (!header.empty()) out << "# " << header << '\n';
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) out << (j ? "," : "") << format_double(points(i, j));
    out << '\n';
  }
}

void write_point_cloud(const std::filesystem::path& path, const Matrix& points, const std::string& header) {
  auto out = open_output(path);
  write_point_cloud(out, points, header);
}

KeyValueFile KeyValueFile::parse(std::istream& in, const std::string& context) {
  static const std::regex key_line(R"(^\s*([A-Za-z_][A-Za-z0-9_\-]*)\s*[:=]\s*(.*)$)");
  KeyValueFile kv;
  kv.context_ = context;
  std::string line, current;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::smatch m;
    if (std::regex_match(line, m, key_line)) {
      current = m[1];
      if (kv.values_.count(current)) throw ParseError(where(context, lineno) + ": duplicate key '" + current + "'");
      kv.values_[current] = trim(m[2]);
      kv.order_.push_back(current);
      continue;
    }
    if (current.empty() || !kv.values_[current].empty())
      throw ParseError(where(context, lineno) + ": expected 'key: value', got '" + trim(line) + "'");
    kv.blocks_[current].push_back(trim(line));
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse(in, "'" + path.string() + "'");
}

const std::string& KeyValueFile::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ParseError(context_ + ": missing key '" + key + "'");
  return it->second;
}

const std::vector<std::string>& KeyValueFile::block(const std::string& key) const {
  get(key);
  const auto it = blocks_.find(key);
  if (it == blocks_.end()) throw ParseError(context_ + ": key '" + key + "' needs a block of lines");
  return it->second;
}

std::vector<std::string> KeyValueFile::keys() const { return order_; }

double KeyValueFile::real(const std::string& key) const {
  const auto v = parse_reals(get(key), context_ + " key '" + key + "'");
  if (v.size() != 1) throw ParseError(context_ + ": key '" + key + "' expects one number");
  return v[0];
}

long KeyValueFile::integer(const std::string& key) const {
  const double v = real(key);
  if (v != std::floor(v)) throw ParseError(context_ + ": key '" + key + "' expects an integer");
  return static_cast<long>(v);
}

std::vector<double> KeyValueFile::reals(const std::string& key) const { return parse_reals(get(key), context_ + " key '" + key + "'"); }

GaussianMeasure parse_gaussian(const KeyValueFile& kv) {
  const auto mean = kv.reals("mean");
  const auto& rows = kv.block("cov");
  const auto d = static_cast<Eigen::Index>(mean.size());
  if (static_cast<Eigen::Index>(rows.size()) != d) throw ParseError(kv.context() + ": cov needs " + std::to_string(d) + " rows");
  Matrix cov(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto r = parse_reals(rows[static_cast<std::size_t>(i)], kv.context() + " cov row " + std::to_string(i + 1));
    if (static_cast<Eigen::Index>(r.size()) != d) throw ParseError(kv.context() + ": cov row " + std::to_string(i + 1) + " has wrong length");
    for (Eigen::Index j = 0; j < d; ++j) cov(i, j) = r[static_cast<std::size_t>(j)];
  }
  try {
    return GaussianMeasure(Eigen::Map<const Vector>(mean.data(), d), cov);
  } catch (const ContractError& e) {
    throw ParseError(kv.context() + ": " + e.what());
  }
}

GaussianMeasure read_gaussian(const std::filesystem::path& path) { return parse_gaussian(KeyValueFile::load(path)); }

void write_gaussian(std::ostream& out, const GaussianMeasure& g) {
  out << "mean: ";
  for (int i = 0; i < g.dim(); ++i) out << (i ? ", " : "") << format_double(g.mean()[i]);
  out << "\ncov:\n";
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = 0; j < g.dim(); ++j) out << (j ? ", " : "") << format_double(g.cov()(i, j));
    out << '\n';
  }
}

Atoms1D read_atoms_1d(std::istream& in, const std::string& context) {
  const Matrix m = read_point_cloud(in, context);
  if (m.cols() != 2) throw ParseError(context + ": expected two columns (position, weight)");
  std::vector<double> p(static_cast<std::size_t>(m.rows())), w(p.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    p[static_cast<std::size_t>(i)] = m(i, 0);
    w[static_cast<std::size_t>(i)] = m(i, 1);
  }
  try {
    return Atoms1D(std::move(p), std::move(w));
  } catch (const ContractError& e) {
    throw ParseError(context + ": " + e.what());
  }
}

void write_atoms_1d(std::ostream& out, const Atoms1D& m) {
  for (std::size_t i = 0; i < m.size(); ++i) out << format_double(m.positions()[i]) << ',' << format_double(m.weights()[i]) << '\n';
}

AffineField read_affine(std::istream& in, const std::string& context) {
  const Matrix m = read_point_cloud(in, context);
  if (m.rows() != m.cols() + 1) throw ParseError(context + ": affine field needs d+1 rows of d values");
  return AffineField{m.topRows(m.cols()), m.row(m.cols()).transpose()};
}

void write_affine(std::ostream& out, const AffineField& f) {
  Matrix m(f.A.rows() + 1, f.A.cols());
  m.topRows(f.A.rows()) = f.A;
  m.row(f.A.rows()) = f.b.transpose();
  write_point_cloud(out, m, "field: affine (rows of A, then b)");
}

SymTensor read_tensor(std::istream& in, const std::string& context) {
  std::string line;
  std::size_t lineno = 0;
  if (!next_line(in, line, lineno)) throw ParseError(context + ": empty tensor file");
  const auto head = parse_reals(line, where(context, lineno));
  if (head.size() != 2 || head[0] < 1 || head[1] < 0 || head[0] != std::floor(head[0]) || head[1] != std::floor(head[1]))
    throw ParseError(where(context, lineno) + ": header must be 'd, n'");
  const int d = static_cast<int>(head[0]);
  const int n = static_cast<int>(head[1]);
  SymTensor t(d, n);
  std::vector<char> seen(t.size(), 0);
  while (next_line(in, line, lineno)) {
    const auto row = parse_reals(line, where(context, lineno));
    if (static_cast<int>(row.size()) != n + 1) throw ParseError(where(context, lineno) + ": expected " + std::to_string(n) + " indices and a value");
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      if (row[k] < 0 || row[k] >= d || row[k] != std::floor(row[k])) throw ParseError(where(context, lineno) + ": bad index");
      idx[k] = static_cast<int>(row[k]);
      if (k > 0 && idx[k] < idx[k - 1]) throw ParseError(where(context, lineno) + ": multi-index must be sorted");
    }
    const auto pos = t.layout().position(idx);
    if (seen[pos]) throw ParseError(where(context, lineno) + ": duplicate multi-index");
    seen[pos] = 1;
    t[pos] = row[static_cast<std::size_t>(n)];
  }
  return t;
}

void write_tensor(std::ostream& out, const SymTensor& t) {
  out << "# symmetric tensor; each sorted multi-index stands for all its permutations\n";
  out << t.dim() << ',' << t.degree() << '\n';
  for (std::size_t p = 0; p < t.size(); ++p) {
    for (int i : t.layout().index(p)) out << i << ',';
    out << format_double(t[p]) << '\n';
  }
}

PolyGradientField read_poly_gradient(std::istream& in, const std::string& context) {
  std::string line;
  std::size_t lineno = 0;
  if (!next_line(in, line, lineno)) throw ParseError(context + ": empty file");
  const auto head = parse_reals(line, where(context, lineno));
  if (head.size() != 1 || head[0] < 1 || head[0] != std::floor(head[0])) throw ParseError(where(context, lineno) + ": first line must be the dimension d");
  const int d = static_cast<int>(head[0]);
  std::vector<SymTensor> terms;
  while (next_line(in, line, lineno)) {
    const auto row = parse_reals(line, where(context, lineno));
    if (row[0] < 1 || row[0] > 6 || row[0] != std::floor(row[0])) throw ParseError(where(context, lineno) + ": degree must be an integer in [1, 6]");
    const int n = static_cast<int>(row[0]);
    SymTensor t(d, n);
    if (row.size() != t.size() + 1)
      throw ParseError(where(context, lineno) + ": degree " + std::to_string(n) + " needs " + std::to_string(t.size()) + " values");
    for (std::size_t p = 0; p < t.size(); ++p) t[p] = row[p + 1];
    terms.push_back(std::move(t));
  }
  if (terms.empty()) throw ParseError(context + ": no terms");
  return PolyGradientField(std::move(terms));
}

void write_poly_gradient(std::ostream& out, const PolyGradientField& f) {
  out << "# field: poly\n# degree, values per sorted multi-index in lexicographic order\n" << f.dim() << '\n';
  for (const auto& t : f.terms()) {
    out << t.degree();
    for (std::size_t p = 0; p < t.size(); ++p) out << ',' << format_double(t[p]);
    out << '\n';
  }
}

VectorField read_field(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string first;
  std::getline(in, first);
  const auto t = trim(first);
  in.clear();
  in.seekg(0);
  const std::string ctx = "'" + path.string() + "'";
  try {
    if (t.rfind("# field: poly", 0) == 0) return VectorField(read_poly_gradient(in, ctx));
    return VectorField(read_affine(in, ctx));
  } catch (const ContractError& e) {
    throw ParseError(ctx + ": " + e.what());
  }
}

VectorField read_tabulated(const std::filesystem::path& points, const std::filesystem::path& values) {
  try {
    return VectorField(TabulatedField{read_point_cloud(points), read_point_cloud(values)});
  } catch (const ContractError& e) {
    throw ParseError("'" + points.string() + "' / '" + values.string() + "': " + e.what());
  }
}

void write_deficit_report(std::ostream& out, const DeficitReport& rep) {
  out << "# d: " << rep.d << '\n'
      << "# k: " << rep.k << '\n'
      << "# w2_sq: " << format_double(rep.w2_sq) << '\n'
      << "# sw2_sq: " << format_double(rep.sw2_sq) << '\n'
      << "# deficit: " << format_double(rep.deficit) << '\n'
      << "# mc_std_err: " << format_double(rep.mc_std_err) << '\n'
      << "# n_directions: " << rep.n_directions << '\n'
      << "# seed: " << rep.seed << '\n'
      << "# control_variate: " << (rep.control_variate ? 1 : 0) << '\n';
  if (rep.control_variate) {
    out << "frame_index,gap\n";
    for (const auto& g : rep.per_direction_gaps) out << g.frame_index << ',' << format_double(g.gap) << '\n';
  } else {
    out << "frame_index,cost\n";
    for (std::size_t i = 0; i < rep.frame_costs.size(); ++i) out << i << ',' << format_double(rep.frame_costs[i]) << '\n';
  }
}

void write_moment_report(std::ostream& out, const MomentReport& rep) {
  out << "# d: " << rep.d << "\n# k: " << rep.k << "\n# n_samples: " << rep.n_samples << '\n';
  out << "name,estimate,std_err,target,z_score\n";
  for (const auto& e : rep.estimates)
    out << e.name << ',' << format_double(e.value) << ',' << format_double(e.std_err) << ',' << format_double(e.target) << ','
        << format_double(e.z_score()) << '\n';
}

}  // namespace sliced::io
