#include "cwy/riemannian.hpp"

#include <string>

namespace cwy {

ProjectedGradient project_gradient(const StiefelPoint& omega, const Matrix& g, Metric metric) {
  const Matrix& w = omega.omega();
  const Eigen::Index n = omega.n();
  const Eigen::Index m = omega.m();
  if (g.rows() != n || g.cols() != m) {
    throw Error(ErrorKind::DimensionMismatch, "euclidean gradient must match Omega's shape");
  }

  LowRankSkew factors;
  if (metric == Metric::Canonical) {
    factors.b.resize(n, 2 * m);
    factors.c.resize(n, 2 * m);
    factors.b << g, w;
    factors.c << w, -g;
  } else {
    const Matrix e = g.transpose() * w - w.transpose() * g;
    factors.b.resize(n, 3 * m);
    factors.c.resize(n, 3 * m);
    factors.b << g, w, 0.5 * (w * e);
    factors.c << w, -g, w;
  }
  Matrix z = factors.b * (factors.c.transpose() * w);
  return {TangentVector{std::move(z), omega}, std::move(factors)};
}

StiefelPoint cayley_retract_smw(const StiefelPoint& omega, const LowRankSkew& factors,
                                double eta) {
  const Matrix& w = omega.omega();
  if (factors.b.rows() != omega.n() || factors.c.rows() != omega.n() ||
      factors.b.cols() != factors.c.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "low-rank factors do not match Omega");
  }
  const Eigen::Index d = factors.rank();
  const Matrix b = eta * factors.b;
  const Matrix ct_omega = factors.c.transpose() * w;
  const Matrix inner = Matrix::Identity(d, d) + 0.5 * (factors.c.transpose() * b);

  const Eigen::PartialPivLU<Matrix> lu(inner);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    throw Error(ErrorKind::SolveFailure,
                "I + C^T B / 2 is numerically singular (rcond " + std::to_string(rcond) + ")");
  }
  Matrix out = w;
  out.noalias() -= b * lu.solve(ct_omega);
  return StiefelPoint(std::move(out));
}

StiefelPoint qr_retract(const StiefelPoint& omega, const Matrix& direction, double eta) {
  if (direction.rows() != omega.n() || direction.cols() != omega.m()) {
    throw Error(ErrorKind::DimensionMismatch, "direction must match Omega's shape");
  }
  return StiefelPoint(qf(omega.omega() + eta * direction).q);
}

StiefelPoint rgd_step(const StiefelPoint& omega, const Matrix& euclid_grad, Metric metric,
                      Retraction retraction, double eta) {
  const ProjectedGradient pg = project_gradient(omega, euclid_grad, metric);
  if (retraction == Retraction::Cayley) return cayley_retract_smw(omega, pg.factors, eta);
  return qr_retract(omega, -pg.tangent.z, eta);
}

double canonical_inner(const StiefelPoint& omega, const Matrix& z1, const Matrix& z2) {
  const Matrix& w = omega.omega();
  return (z1.transpose() * z2).trace() - 0.5 * ((z1.transpose() * w) * (w.transpose() * z2)).trace();
}

}  // namespace cwy
