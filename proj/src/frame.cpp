#include "sliced/frame.hpp"

#include <cmath>

namespace sliced {

Frame::Frame(Matrix basis) : basis_(std::move(basis)) {
  require(basis_.rows() >= 1 && basis_.cols() >= 1, "frame must be non-empty");
  require(basis_.cols() <= basis_.rows(), "frame rank exceeds ambient dimension");
  require(basis_.allFinite(), "frame has non-finite entries");
  const Matrix gram = basis_.transpose() * basis_ - Matrix::Identity(basis_.cols(), basis_.cols());
  require(gram.cwiseAbs().maxCoeff() <= kGramTolerance, "frame columns are not orthonormal");
}

Frame Frame::direction(const Vector& theta) { return Frame(Matrix(theta)); }

DirectionSet DirectionSet::equal_weights(std::vector<Frame> frames) {
  DirectionSet s;
  const double w = frames.empty() ? 0.0 : 1.0 / static_cast<double>(frames.size());
  s.weights.assign(frames.size(), w);
  s.frames = std::move(frames);
  return s;
}

}  // namespace sliced
