#include "sliced/fields.hpp"

#include "sliced/chaos.hpp"

#include <cmath>

namespace sliced {

PolyGradientField::PolyGradientField(std::vector<SymTensor> terms) : terms_(std::move(terms)) {
  require(!terms_.empty(), "polynomial gradient needs at least one term");
  dim_ = terms_.front().dim();
  for (const auto& t : terms_) {
    require(t.dim() == dim_, "polynomial gradient terms have mixed dimensions");
    require(t.degree() >= 1, "polynomial gradient terms need degree >= 1");
    std::vector<SymTensor> g;
    g.reserve(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) g.push_back(t.slice(i) * static_cast<double>(t.degree()));
    gradient_.push_back(std::move(g));
  }
}

Vector PolyGradientField::evaluate(const Vector& x) const {
  require(x.size() == dim_, "evaluation point has wrong dimension");
  Vector u = Vector::Zero(dim_);
  for (const auto& g : gradient_)
    for (int i = 0; i < dim_; ++i) u[i] += wick_evaluate(g[static_cast<std::size_t>(i)], x);
  return u;
}

VectorField::VectorField(AffineField f) {
  require(f.A.rows() == f.A.cols(), "affine matrix must be square");
  require(f.b.size() == f.A.rows(), "affine offset has wrong dimension");
  require(f.A.allFinite() && f.b.allFinite(), "affine field has non-finite entries");
  const double scale = std::max(1.0, f.A.cwiseAbs().maxCoeff());
  require((f.A - f.A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "affine matrix must be symmetric (gradient field)");
  field_ = std::move(f);
}

VectorField::VectorField(TabulatedField f) {
  require(f.points.rows() == f.values.rows() && f.points.cols() == f.values.cols(), "tabulated field shapes differ");
  require(f.points.rows() >= 1, "tabulated field is empty");
  field_ = std::move(f);
}

VectorField VectorField::identity(int dim) { return VectorField(AffineField{Matrix::Identity(dim, dim), Vector::Zero(dim)}); }

VectorField VectorField::homothety(double scale, const Vector& shift) {
  const auto d = shift.size();
  return VectorField(AffineField{scale * Matrix::Identity(d, d), shift});
}

int VectorField::dim() const {
  return std::visit(
      [](const auto& f) -> int {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, AffineField>) return static_cast<int>(f.A.rows());
        else if constexpr (std::is_same_v<F, PolyGradientField>) return f.dim();
        else return static_cast<int>(f.points.cols());
      },
      field_);
}

Vector VectorField::evaluate(const Vector& x) const {
  require(x.size() == dim(), "evaluation point has wrong dimension");
  if (const auto* a = affine()) return a->A * x + a->b;
  if (const auto* p = poly()) return p->evaluate(x);
  const auto& t = std::get<TabulatedField>(field_);
  for (Eigen::Index r = 0; r < t.points.rows(); ++r)
    if (t.points.row(r).transpose() == x) return t.values.row(r).transpose();
  throw ContractError("tabulated field is not defined at the requested point");
}

Matrix VectorField::evaluate_rows(const Matrix& points) const {
  require(points.cols() == dim(), "point cloud dimension does not match field");
  if (const auto* a = affine()) return (points * a->A.transpose()).rowwise() + a->b.transpose();
  if (const auto* t = tabulated()) {
    require(t->points.rows() == points.rows() && t->points == points, "tabulated field must be evaluated on its own points");
    return t->values;
  }
  Matrix out(points.rows(), points.cols());
  for (Eigen::Index r = 0; r < points.rows(); ++r) out.row(r) = poly()->evaluate(points.row(r).transpose()).transpose();
  return out;
}

}  // namespace sliced
