#pragma once

#include "sliced/core.hpp"
#include "sliced/tensor.hpp"

#include <variant>
#include <vector>

namespace sliced {

/// x -> A x + b with A symmetric (a gradient field).
struct AffineField {
  Matrix A;
  Vector b;
};

/// u = grad sum_n <A_n, :x^{(x)n}:>, Wick monomials w.r.t. the standard Gaussian.
class PolyGradientField {
 public:
  explicit PolyGradientField(std::vector<SymTensor> terms);

  const std::vector<SymTensor>& terms() const { return terms_; }
  int dim() const { return dim_; }
  Vector evaluate(const Vector& x) const;

 private:
  int dim_ = 0;
  std::vector<SymTensor> terms_;
  // gradient_[t][i] = n * A_n(e_i, ...), so du_i = sum_t <gradient_[t][i], :x^{n-1}:>
  std::vector<std::vector<SymTensor>> gradient_;
};

/// Field values known only on a fixed set of points.
struct TabulatedField {
  Matrix points;  // n x d
  Matrix values;  // n x d
};

class VectorField {
 public:
  using Variant = std::variant<AffineField, PolyGradientField, TabulatedField>;

  VectorField(AffineField f);
  VectorField(PolyGradientField f) : field_(std::move(f)) {}
  VectorField(TabulatedField f);

  static VectorField identity(int dim);
  /// x -> scale * x + shift.
  static VectorField homothety(double scale, const Vector& shift);

  const Variant& variant() const { return field_; }
  int dim() const;

  const AffineField* affine() const { return std::get_if<AffineField>(&field_); }
  const PolyGradientField* poly() const { return std::get_if<PolyGradientField>(&field_); }
  const TabulatedField* tabulated() const { return std::get_if<TabulatedField>(&field_); }

  Vector evaluate(const Vector& x) const;
  /// Row-wise evaluation.  Tabulated fields require the exact tabulation points.
  Matrix evaluate_rows(const Matrix& points) const;

 private:
  Variant field_;
};

}  // namespace sliced
