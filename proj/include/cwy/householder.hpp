#pragma once

#include "cwy/linalg.hpp"

namespace cwy {

/// Reflection vectors below this norm are rejected.
inline constexpr double kMinVectorNorm = 1e-12;

/// L unnormalized reflection vectors v^(1..L) in R^N, stored as the columns
/// of an N x L matrix. Every column has norm >= kMinVectorNorm and L <= N.
class HouseholderStack {
 public:
  HouseholderStack() = default;
  explicit HouseholderStack(Matrix vectors);

  Eigen::Index n() const noexcept { return vectors_.rows(); }
  Eigen::Index l() const noexcept { return vectors_.cols(); }
  const Matrix& vectors() const noexcept { return vectors_; }
  auto vector(Eigen::Index i) const { return vectors_.col(i); }
  Vector norms() const { return vectors_.colwise().norm().transpose(); }

 private:
  Matrix vectors_;
};

/// H(v) x = x - (2 v^T x / ||v||^2) v, without forming H(v).
Matrix reflect(const Vector& v, const Matrix& x);

/// H(v^(1)) ... H(v^(L)) x by L sequential reflections (the HR baseline).
Matrix apply_stack(const HouseholderStack& stack, const Matrix& x,
                   FlopCounter* counter = nullptr);

/// Writes exactly N vectors with H(v^(1)) ... H(v^(N)) = Q. Requires
/// det(Q) = (-1)^N; the other component is not reachable by N reflections.
HouseholderStack decompose(const Matrix& q);

namespace detail {

/// First-column reflection rule shared by the orthogonal and Stiefel
/// decompositions. `q` is the first column of the current trailing block.
Vector column_reflector(const Eigen::Ref<const Vector>& q);

}  // namespace detail

}  // namespace cwy
