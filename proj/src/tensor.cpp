#include "sliced/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace sliced {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

void enumerate(int dim, int degree, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == degree) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < dim; ++i) {
    cur.push_back(i);
    enumerate(dim, degree, i, cur, out);
    cur.pop_back();
  }
}

}  // namespace

MultiIndexLayout::MultiIndexLayout(int dim, int degree) : dim_(dim), degree_(degree) {
  require(dim >= 1, "tensor dimension must be >= 1");
  require(degree >= 0, "tensor degree must be >= 0");
  std::vector<int> cur;
  enumerate(dim, degree, 0, cur, indices_);
  counts_.reserve(indices_.size());
  multiplicity_.reserve(indices_.size());
  for (std::size_t p = 0; p < indices_.size(); ++p) {
    std::vector<int> k(dim, 0);
    for (int i : indices_[p]) ++k[i];
    double m = factorial(degree);
    for (int c : k) m /= factorial(c);
    counts_.push_back(std::move(k));
    multiplicity_.push_back(m);
    lookup_.emplace(code(indices_[p]), p);
  }
}

std::shared_ptr<const MultiIndexLayout> MultiIndexLayout::get(int dim, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MultiIndexLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, degree}];
  if (!slot) slot = std::make_shared<const MultiIndexLayout>(dim, degree);
  return slot;
}

std::uint64_t MultiIndexLayout::code(std::span<const int> sorted) const {
  std::uint64_t c = 0;
  for (int i : sorted) c = c * static_cast<std::uint64_t>(dim_) + static_cast<std::uint64_t>(i);
  return c;
}

std::size_t MultiIndexLayout::position(std::span<const int> idx) const {
  require(static_cast<int>(idx.size()) == degree_, "multi-index length does not match tensor degree");
  std::vector<int> s(idx.begin(), idx.end());
  std::sort(s.begin(), s.end());
  for (int i : s) require(i >= 0 && i < dim_, "multi-index entry out of range");
  return lookup_.at(code(s));
}

SymTensor::SymTensor(int dim, int degree)
    : layout_(MultiIndexLayout::get(dim, degree)), values_(Vector::Zero(static_cast<Eigen::Index>(layout_->size()))) {}

SymTensor::SymTensor(int dim, int degree, Vector values) : layout_(MultiIndexLayout::get(dim, degree)), values_(std::move(values)) {
  require(static_cast<std::size_t>(values_.size()) == layout_->size(), "tensor value count does not match (d, n)");
}

SymTensor SymTensor::scalar(int dim, double value) {
  SymTensor t(dim, 0);
  t.values_[0] = value;
  return t;
}

SymTensor SymTensor::from_vector(const Vector& v) { return SymTensor(static_cast<int>(v.size()), 1, v); }

SymTensor SymTensor::from_matrix(const Matrix& m) {
  require(m.rows() == m.cols(), "matrix must be square");
  const int d = static_cast<int>(m.rows());
  SymTensor t(d, 2);
  for (std::size_t p = 0; p < t.size(); ++p) {
    const auto& ix = t.layout().index(p);
    t.values_[p] = 0.5 * (m(ix[0], ix[1]) + m(ix[1], ix[0]));
  }
  return t;
}

SymTensor SymTensor::identity(int dim) { return from_matrix(Matrix::Identity(dim, dim)); }

double SymTensor::at(std::initializer_list<int> idx) const {
  return at(std::span<const int>(idx.begin(), idx.size()));
}

double SymTensor::dot(const SymTensor& other) const {
  require(dim() == other.dim() && degree() == other.degree(), "tensor shape mismatch");
  double s = 0.0;
  for (std::size_t p = 0; p < size(); ++p) s += layout_->multiplicity(p) * values_[p] * other.values_[p];
  return s;
}

double SymTensor::contract(const Vector& theta) const {
  require(theta.size() == dim(), "contraction vector has wrong dimension");
  double s = 0.0;
  for (std::size_t p = 0; p < size(); ++p) {
    double term = layout_->multiplicity(p) * values_[p];
    for (int i : layout_->index(p)) term *= theta[i];
    s += term;
  }
  return s;
}

SymTensor SymTensor::contract_one(const Vector& theta) const {
  require(degree() >= 1, "cannot contract a degree-0 tensor");
  require(theta.size() == dim(), "contraction vector has wrong dimension");
  SymTensor out(dim(), degree() - 1);
  std::vector<int> buf;
  for (std::size_t p = 0; p < out.size(); ++p) {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
      buf = out.layout().index(p);
      buf.push_back(i);
      s += theta[i] * at(std::span<const int>(buf));
    }
    out.values_[p] = s;
  }
  return out;
}

SymTensor SymTensor::slice(int i) const {
  Vector e = Vector::Zero(dim());
  e[i] = 1.0;
  return contract_one(e);
}

SymTensor SymTensor::trace() const {
  require(degree() >= 2, "trace needs degree >= 2");
  SymTensor out(dim(), degree() - 2);
  std::vector<int> buf;
  for (std::size_t p = 0; p < out.size(); ++p) {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
      buf = out.layout().index(p);
      buf.push_back(i);
      buf.push_back(i);
      s += at(std::span<const int>(buf));
    }
    out.values_[p] = s;
  }
  return out;
}

Matrix SymTensor::to_matrix() const {
  require(degree() == 2, "to_matrix needs degree 2");
  Matrix m(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) m(i, j) = at({i, j});
  return m;
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
  require(dim() == o.dim() && degree() == o.degree(), "tensor shape mismatch");
  values_ += o.values_;
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& o) {
  require(dim() == o.dim() && degree() == o.degree(), "tensor shape mismatch");
  values_ -= o.values_;
  return *this;
}

SymTensor& SymTensor::operator*=(double s) {
  values_ *= s;
  return *this;
}

SymTensor sym_identity_product(const SymTensor& b) {
  const int n = b.degree() + 2;
  SymTensor out(b.dim(), n);
  const double pairs = 0.5 * n * (n - 1);
  std::vector<int> rest;
  for (std::size_t p = 0; p < out.size(); ++p) {
    const auto& ix = out.layout().index(p);
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int c = a + 1; c < n; ++c) {
        if (ix[a] != ix[c]) continue;
        rest.clear();
        for (int k = 0; k < n; ++k)
          if (k != a && k != c) rest.push_back(ix[k]);
        s += b.at(std::span<const int>(rest));
      }
    }
    out[p] = s / pairs;
  }
  return out;
}

namespace {

// Least-squares B minimizing ||A - Sym(I (x) B)||_HS.
SymTensor trace_preimage(const SymTensor& a) {
  const int d = a.dim();
  const int n = a.degree();
  SymTensor basis(d, n - 2);
  const auto cols = static_cast<Eigen::Index>(basis.size());
  const auto rows = static_cast<Eigen::Index>(a.size());
  Matrix lift(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    basis.values().setZero();
    basis[static_cast<std::size_t>(c)] = 1.0;
    lift.col(c) = sym_identity_product(basis).values();
  }
  Vector w(rows);
  for (Eigen::Index r = 0; r < rows; ++r) w[r] = std::sqrt(a.layout().multiplicity(static_cast<std::size_t>(r)));
  const Matrix weighted = w.asDiagonal() * lift;
  const Vector rhs = w.asDiagonal() * a.values();
  Vector coeffs = weighted.colPivHouseholderQr().solve(rhs);
  return SymTensor(d, n - 2, std::move(coeffs));
}

}  // namespace

SymTensor harmonic_part(const SymTensor& a) {
  if (a.degree() < 2) return a;
  return a - sym_identity_product(trace_preimage(a));
}

std::vector<SymTensor> trace_components(const SymTensor& a) {
  if (a.degree() < 2) return {a};
  const SymTensor b = trace_preimage(a);
  std::vector<SymTensor> out;
  out.push_back(a - sym_identity_product(b));
  for (const auto& c : trace_components(b)) out.push_back(sym_identity_product(c));
  return out;
}

}  // namespace sliced
