#pragma once

#include "cwy/householder.hpp"

#include <vector>

namespace cwy {

/// Compact WY factors of H(v^(1)) ... H(v^(L)) = I - U S^{-1} U^T.
///
/// U holds the normalized reflection vectors as columns and
/// S = I/2 + striu(U^T U) is upper triangular with every diagonal entry
/// exactly 1/2. Immutable once built.
struct CwyFactors {
  Matrix u;
  UpperTriangular s;
  Vector source_norms;

  Eigen::Index n() const noexcept { return u.rows(); }
  Eigen::Index l() const noexcept { return u.cols(); }
};

CwyFactors build_factors(const HouseholderStack& stack, FlopCounter* counter = nullptr);

/// Q x = x - U S^{-1} (U^T x), batched over the columns of x. Q is never formed.
Matrix apply(const CwyFactors& f, const Matrix& x, FlopCounter* counter = nullptr);

/// I - U (S^{-1} U^T).
Matrix materialize(const CwyFactors& f);

enum class Nonlinearity { Tanh, Relu, Abs, Identity };

/// Hidden states of h_t = sigma(Q h_{t-1} + b + V x_t) for t = 1..T, returned
/// as a T x N matrix (row t-1 is h_t). Each step goes through the factored
/// product: u_t = U^T h, v_t = S^{-1} u_t, y_t = h - U v_t + b, with S^{-1}
/// formed once per rollout.
Matrix rollout(const CwyFactors& f, const Vector& h0, const Matrix& inputs, const Matrix& v_in,
               const Vector& bias, Nonlinearity sigma);

/// Gradient of f(Q) with respect to every raw vector v^(l), given
/// upstream = df/dQ at Q = H(v^(1)) ... H(v^(L)). Column l of the result is
/// df/dv^(l).
Matrix grad(const HouseholderStack& stack, const Matrix& upstream);

/// Reflection vectors reproducing an orthogonal Q with det(Q) = (-1)^N.
HouseholderStack init_from_orthogonal(const Matrix& q);

namespace detail {

/// Reverse-mode adjoint shared with the truncated parametrization: gradient
/// of <upstream, E - U S^{-1} U_1^T> with U_1 the top `cols` rows of U.
Matrix truncated_adjoint(const HouseholderStack& stack, const Matrix& upstream);

}  // namespace detail

}  // namespace cwy
