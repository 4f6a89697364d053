#include "cwy/householder.hpp"

#include <cmath>
#include <string>

namespace cwy {

HouseholderStack::HouseholderStack(Matrix vectors) : vectors_(std::move(vectors)) {
  if (vectors_.cols() < 1) throw Error(ErrorKind::InvalidInput, "stack needs at least one vector");
  if (vectors_.cols() > vectors_.rows()) {
    throw Error(ErrorKind::InvalidInput, "stack has more vectors than dimensions");
  }
  for (Eigen::Index i = 0; i < vectors_.cols(); ++i) {
    const double norm = vectors_.col(i).norm();
    if (!(norm >= kMinVectorNorm)) {
      throw Error(ErrorKind::ZeroVector, "vector " + std::to_string(i) + " has norm " +
                                             std::to_string(norm));
    }
  }
}

Matrix reflect(const Vector& v, const Matrix& x) {
  if (v.size() != x.rows()) throw Error(ErrorKind::DimensionMismatch, "reflect: v and x rows");
  const double sq = v.squaredNorm();
  if (!(std::sqrt(sq) >= kMinVectorNorm)) throw Error(ErrorKind::ZeroVector, "reflect");
  const Eigen::RowVectorXd w = (2.0 / sq) * (v.transpose() * x);
  Matrix out = x;
  out.noalias() -= v * w;
  return out;
}

Matrix apply_stack(const HouseholderStack& stack, const Matrix& x, FlopCounter* counter) {
  if (x.rows() != stack.n()) throw Error(ErrorKind::DimensionMismatch, "apply_stack: x rows != n");
  const auto n = static_cast<std::uint64_t>(stack.n());
  const auto cols = static_cast<std::uint64_t>(x.cols());
  Matrix out = x;
  Eigen::RowVectorXd w(x.cols());
  for (Eigen::Index i = stack.l() - 1; i >= 0; --i) {
    const auto v = stack.vector(i);
    const double scale = 2.0 / v.squaredNorm();
    w.noalias() = v.transpose() * out;
    w *= scale;
    out.noalias() -= v * w;
    // ||v||^2 (2n) + scale (1) + v^T X (2n per column) + scaling (1 per
    // column) + rank-one update (2n per column).
    count(counter, 2 * n + 1 + cols * (4 * n + 1));
  }
  return out;
}

namespace detail {

Vector column_reflector(const Eigen::Ref<const Vector>& q) {
  const Eigen::Index n = q.size();
  Vector v = Vector::Zero(n);
  if (std::abs(q(0)) >= 1.0 - 1e-12) {
    if (q(0) > 0.0) {
      v(n - 1) = 1.0;
    } else {
      v(0) = 1.0;
    }
    return v;
  }
  v = q;
  v(0) -= 1.0;
  v /= v.norm();
  return v;
}

}  // namespace detail

HouseholderStack decompose(const Matrix& q) {
  if (q.rows() != q.cols() || q.rows() == 0) {
    throw Error(ErrorKind::ShapeMismatch, "decompose needs a nonempty square matrix");
  }
  const Eigen::Index n = q.rows();
  const double ortho = (q.transpose() * q - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(ortho <= 1e-10)) {
    throw Error(ErrorKind::NotOrthogonal, "max |Q^T Q - I| = " + std::to_string(ortho));
  }
  const double expected = (n % 2 == 0) ? 1.0 : -1.0;
  const double det = determinant(q);
  if (!(std::abs(det - expected) <= 1e-6)) {
    throw Error(ErrorKind::WrongDeterminant,
                "det(Q) = " + std::to_string(det) + ", N reflections reach only " +
                    std::to_string(static_cast<int>(expected)));
  }

  Matrix work = q;
  Matrix vectors = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const Eigen::Index m = n - k;
    auto block = work.bottomRightCorner(m, m);
    const Vector v = detail::column_reflector(block.col(0));
    const Eigen::RowVectorXd w = 2.0 * (v.transpose() * block);
    block.noalias() -= v * w;

    Vector e1 = Vector::Zero(m);
    e1(0) = 1.0;
    const double drift = (block.col(0) - e1).cwiseAbs().maxCoeff();
    if (!(drift <= 1e-10)) {
      throw Error(ErrorKind::DecompositionDrift,
                  "column " + std::to_string(k) + " not reduced to e1 (error " +
                      std::to_string(drift) + ")");
    }
    vectors.col(k).tail(m) = v;
  }
  // The remaining 1x1 block is [-1] when det(Q) = (-1)^N.
  const double last = work(n - 1, n - 1);
  if (!(std::abs(last + 1.0) <= 1e-6)) {
    throw Error(ErrorKind::DecompositionDrift,
                "trailing 1x1 block is " + std::to_string(last) + ", expected -1");
  }
  vectors(n - 1, n - 1) = -1.0;
  return HouseholderStack(std::move(vectors));
}

}  // namespace cwy
