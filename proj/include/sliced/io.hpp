#pragma once

#include "sliced/core.hpp"
#include "sliced/fields.hpp"
#include "sliced/grassmoments.hpp"
#include "sliced/measures.hpp"
#include "sliced/ot1d.hpp"
#include "sliced/slicing.hpp"
#include "sliced/tensor.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace sliced::io {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, round-trips every double.
std::string format_double(double x);

/// Comma-separated reals; throws ParseError naming `context` on bad input.
std::vector<double> parse_reals(const std::string& line, const std::string& context);

/// Point cloud: one atom per line, comma-separated, optional '#' header lines.
Matrix read_point_cloud(std::istream& in, const std::string& context = "point cloud");
Matrix read_point_cloud(const std::filesystem::path& path);
void write_point_cloud(std::ostream& out, const Matrix& points, const std::string& header = "");
void write_point_cloud(const std::filesystem::path& path, const Matrix& points, const std::string& header = "");

/// key: value text with optional multi-line blocks (a key with an empty
/// value followed by non-key lines).  '#' starts a comment line.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::istream& in, const std::string& context);
  static KeyValueFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  const std::vector<std::string>& block(const std::string& key) const;
  std::vector<std::string> keys() const;

  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;

  const std::string& context() const { return context_; }

 private:
  std::string context_;
  std::map<std::string, std::string> values_;
  std::map<std::string, std::vector<std::string>> blocks_;
  std::vector<std::string> order_;
};

/// Gaussian file: `mean: m1, m2, ...` and a `cov:` block, one row per line.
GaussianMeasure read_gaussian(const std::filesystem::path& path);
GaussianMeasure parse_gaussian(const KeyValueFile& kv);
void write_gaussian(std::ostream& out, const GaussianMeasure& g);

/// Two columns (position, weight).
Atoms1D read_atoms_1d(std::istream& in, const std::string& context = "1-D measure");
void write_atoms_1d(std::ostream& out, const Atoms1D& m);

/// Affine field as a (d+1) x d block: rows of A, then b.
AffineField read_affine(std::istream& in, const std::string& context = "affine field");
void write_affine(std::ostream& out, const AffineField& f);

/// Tensor file: first line `d, n`, then one line per sorted multi-index
/// `i1, ..., in, value` (i1 <= ... <= in, 0-based).  The value stands for
/// every permutation of the multi-index.
SymTensor read_tensor(std::istream& in, const std::string& context = "tensor");
void write_tensor(std::ostream& out, const SymTensor& t);

/// Polynomial gradient: first line `d`, then one line per term
/// `degree, v_1, ..., v_m` with values in lexicographic sorted multi-index
/// order (the order of MultiIndexLayout).
PolyGradientField read_poly_gradient(std::istream& in, const std::string& context = "polynomial gradient");
void write_poly_gradient(std::ostream& out, const PolyGradientField& f);

/// Dispatches on a `# field: affine|poly` first line; tabulated fields are
/// read from two aligned point clouds instead.
VectorField read_field(const std::filesystem::path& path);
VectorField read_tabulated(const std::filesystem::path& points, const std::filesystem::path& values);

/// Header block of `# key: value` scalars, then `frame_index,gap` rows
/// (or `frame_index,cost` when no coupling was available).
void write_deficit_report(std::ostream& out, const DeficitReport& rep);

/// name,estimate,std_err,target,z_score
void write_moment_report(std::ostream& out, const MomentReport& rep);

}  // namespace sliced::io
