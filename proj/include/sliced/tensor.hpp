#pragma once

#include "sliced/core.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

namespace sliced {

/// Enumeration of the sorted multi-indices i1 <= ... <= in over {0..d-1}
/// in lexicographic order, with multinomial multiplicities.  Shared by all
/// tensors of the same (d, n).
class MultiIndexLayout {
 public:
  using Index = std::vector<int>;

  static std::shared_ptr<const MultiIndexLayout> get(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return indices_.size(); }

  const Index& index(std::size_t pos) const { return indices_[pos]; }
  /// n! / prod_i k_i!  where k_i counts occurrences of i.
  double multiplicity(std::size_t pos) const { return multiplicity_[pos]; }
  /// Occurrence counts (k_0, ..., k_{d-1}) of the multi-index at pos.
  const std::vector<int>& counts(std::size_t pos) const { return counts_[pos]; }

  /// Position of an arbitrary (not necessarily sorted) index tuple.
  std::size_t position(std::span<const int> idx) const;

  MultiIndexLayout(int dim, int degree);

 private:
  std::uint64_t code(std::span<const int> sorted) const;

  int dim_;
  int degree_;
  std::vector<Index> indices_;
  std::vector<std::vector<int>> counts_;
  std::vector<double> multiplicity_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

/// Dense symmetric n-tensor on R^d stored once per sorted multi-index.
class SymTensor {
 public:
  SymTensor(int dim, int degree);
  SymTensor(int dim, int degree, Vector values);

  static SymTensor zero(int dim, int degree) { return SymTensor(dim, degree); }
  /// Degree-0 tensor holding a scalar.
  static SymTensor scalar(int dim, double value);
  static SymTensor from_vector(const Vector& v);
  /// Symmetric part of a square matrix as a degree-2 tensor.
  static SymTensor from_matrix(const Matrix& m);
  static SymTensor identity(int dim);

  int dim() const { return layout_->dim(); }
  int degree() const { return layout_->degree(); }
  std::size_t size() const { return values_.size(); }
  const MultiIndexLayout& layout() const { return *layout_; }

  const Vector& values() const { return values_; }
  Vector& values() { return values_; }
  double operator[](std::size_t pos) const { return values_[pos]; }
  double& operator[](std::size_t pos) { return values_[pos]; }
  double at(std::span<const int> idx) const { return values_[layout_->position(idx)]; }
  double at(std::initializer_list<int> idx) const;

  /// Hilbert-Schmidt inner product over all n-tuples.
  double dot(const SymTensor& other) const;
  double norm_sq() const { return dot(*this); }

  /// A : theta^{(x)n}.
  double contract(const Vector& theta) const;
  /// A(theta, ., ..., .) as a tensor of degree n-1.
  SymTensor contract_one(const Vector& theta) const;
  /// A(e_i, ., ..., .).
  SymTensor slice(int i) const;
  /// Contraction of two slots: (tr A)_{beta} = sum_i A_{beta i i}.
  SymTensor trace() const;

  Matrix to_matrix() const;

  SymTensor& operator+=(const SymTensor& o);
  SymTensor& operator-=(const SymTensor& o);
  SymTensor& operator*=(double s);
  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend SymTensor operator*(SymTensor a, double s) { return a *= s; }
  friend SymTensor operator*(double s, SymTensor a) { return a *= s; }

 private:
  std::shared_ptr<const MultiIndexLayout> layout_;
  Vector values_;
};

/// Sym(I (x) B): symmetrization of the identity times B, degree deg(B)+2.
/// Normalized so that Sym(I (x) B) : theta^{n} = B : theta^{n-2} on the sphere.
SymTensor sym_identity_product(const SymTensor& b);

/// Orthogonal projection onto the trace-free (harmonic) tensors.
SymTensor harmonic_part(const SymTensor& a);

/// Irreducible decomposition A = sum_j Sym(I^j (x) H_{n-2j}).
/// Entry j holds the component tensor Sym(I^j (x) H_{n-2j}) (degree n).
std::vector<SymTensor> trace_components(const SymTensor& a);

}  // namespace sliced
