#include "cwy/cwy.hpp"

#include <cmath>

namespace cwy {

CwyFactors build_factors(const HouseholderStack& stack, FlopCounter* counter) {
  const Eigen::Index n = stack.n();
  const Eigen::Index l = stack.l();
  CwyFactors f;
  f.source_norms = stack.norms();
  for (Eigen::Index i = 0; i < l; ++i) {
    if (!(f.source_norms(i) >= kMinVectorNorm)) throw Error(ErrorKind::ZeroVector, "build_factors");
  }
  f.u = stack.vectors() * f.source_norms.cwiseInverse().asDiagonal();
  // norm (2n) and division (n) per column.
  count(counter, static_cast<std::uint64_t>(3 * n * l));

  const Matrix gram = gemm(f.u.transpose(), f.u, counter);
  Matrix s = gram.triangularView<Eigen::StrictlyUpper>();
  s.diagonal().setConstant(0.5);
  f.s = UpperTriangular(s);
  return f;
}

Matrix apply(const CwyFactors& f, const Matrix& x, FlopCounter* counter) {
  if (x.rows() != f.n()) throw Error(ErrorKind::DimensionMismatch, "apply: x rows != N");
  const Matrix projected = gemm(f.u.transpose(), x, counter);
  const Matrix solved = triangular_solve(f.s, projected, counter);
  Matrix out = x;
  out.noalias() -= f.u * solved;
  count(counter, static_cast<std::uint64_t>(2 * f.n() * f.l() * x.cols()));
  return out;
}

Matrix materialize(const CwyFactors& f) {
  Matrix q = Matrix::Identity(f.n(), f.n());
  const Matrix y = triangular_solve(f.s, f.u.transpose());
  q.noalias() -= f.u * y;
  return q;
}

namespace {

double activate(double x, Nonlinearity sigma) {
  switch (sigma) {
    case Nonlinearity::Tanh: return std::tanh(x);
    case Nonlinearity::Relu: return x > 0.0 ? x : 0.0;
    case Nonlinearity::Abs: return std::abs(x);
    case Nonlinearity::Identity: return x;
  }
  return x;
}

}  // namespace

Matrix rollout(const CwyFactors& f, const Vector& h0, const Matrix& inputs, const Matrix& v_in,
               const Vector& bias, Nonlinearity sigma) {
  const Eigen::Index n = f.n();
  if (h0.size() != n || bias.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "rollout: h0/bias length != N");
  }
  if (v_in.rows() != n || v_in.cols() != inputs.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "rollout: input projection is not N x N_in");
  }
  const Eigen::Index steps = inputs.rows();
  const Matrix s_inv = triangular_solve(f.s, Matrix::Identity(f.l(), f.l()));
  const Matrix ut = f.u.transpose();

  Matrix states(steps, n);
  Vector h = h0;
  Vector ucoef(f.l());
  Vector vcoef(f.l());
  Vector y(n);
  for (Eigen::Index t = 0; t < steps; ++t) {
    ucoef.noalias() = ut * h;
    vcoef.noalias() = s_inv.triangularView<Eigen::Upper>() * ucoef;
    y = h + bias;
    y.noalias() -= f.u * vcoef;
    if (inputs.cols() > 0) y.noalias() += v_in * inputs.row(t).transpose();
    h = y.unaryExpr([sigma](double x) { return activate(x, sigma); });
    states.row(t) = h.transpose();
  }
  return states;
}

namespace detail {

Matrix truncated_adjoint(const HouseholderStack& stack, const Matrix& upstream) {
  const Eigen::Index n = stack.n();
  const Eigen::Index cols = upstream.cols();
  if (upstream.rows() != n || cols < stack.l() || cols > n) {
    throw Error(ErrorKind::DimensionMismatch, "gradient upstream has the wrong shape");
  }
  const CwyFactors f = build_factors(stack);
  const Matrix& u = f.u;
  const Matrix& g = upstream;

  // With W = S^{-1}:  y = W U_1^T (L x cols), zt = W^T U^T (L x N).
  const Matrix y = triangular_solve(f.s, u.topRows(cols).transpose());
  const Matrix zt = triangular_solve_transposed(f.s, u.transpose());

  Matrix du(n, stack.l());
  du.noalias() = -g * y.transpose();
  du.topRows(cols).noalias() -= g.transpose() * zt.transpose();

  // d<G, -U W U_1^T>/dS, restricted to the strict upper triangle that S
  // actually depends on.
  const Matrix p = zt * g * y.transpose();
  const Matrix ps = p.triangularView<Eigen::StrictlyUpper>();
  du.noalias() += u * (ps + ps.transpose());

  // Chain rule through u = v / ||v||: (I - u u^T) du / ||v||.
  Matrix dv(n, stack.l());
  for (Eigen::Index i = 0; i < stack.l(); ++i) {
    const auto ui = u.col(i);
    dv.col(i) = (du.col(i) - ui * ui.dot(du.col(i))) / f.source_norms(i);
  }
  return dv;
}

}  // namespace detail

Matrix grad(const HouseholderStack& stack, const Matrix& upstream) {
  if (upstream.rows() != stack.n() || upstream.cols() != stack.n()) {
    throw Error(ErrorKind::DimensionMismatch, "grad: upstream must be N x N");
  }
  return detail::truncated_adjoint(stack, upstream);
}

HouseholderStack init_from_orthogonal(const Matrix& q) { return decompose(q); }

}  // namespace cwy
