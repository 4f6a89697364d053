#pragma once

#include "cwy/tcwy.hpp"

namespace cwy {

enum class Metric { Canonical, Euclidean };
enum class Retraction { Cayley, Qr };

/// Z = A Omega for a skew A; Z^T Omega + Omega^T Z = 0.
struct TangentVector {
  Matrix z;
  StiefelPoint base;
};

/// Skew A = B C^T kept in factored form. D = 2M (canonical) or 3M
/// (Euclidean). The step size is not folded in yet.
struct LowRankSkew {
  Matrix b;
  Matrix c;

  Eigen::Index rank() const noexcept { return b.cols(); }
  /// Dense B C^T, for small-scale checks only.
  Matrix dense() const { return b * c.transpose(); }
};

struct ProjectedGradient {
  TangentVector tangent;
  LowRankSkew factors;
};

/// Riemannian gradient Z = A Omega with A = Ahat - Ahat^T, where
/// Ahat = G Omega^T (canonical) or G Omega^T - Omega Omega^T G Omega^T / 2
/// (Euclidean). A is returned only through its low-rank factors.
ProjectedGradient project_gradient(const StiefelPoint& omega, const Matrix& euclid_grad,
                                   Metric metric);

/// Cayley(eta A) Omega = Omega - B (I + C^T B / 2)^{-1} (C^T Omega) with
/// B = eta [..] scaled on entry. Only a D x D system is solved.
StiefelPoint cayley_retract_smw(const StiefelPoint& omega, const LowRankSkew& factors,
                                double eta);

/// qf(Omega + eta * direction).
StiefelPoint qr_retract(const StiefelPoint& omega, const Matrix& direction, double eta);

/// One descent step. Both retractions follow the curve whose velocity at
/// eta = 0 is -Z, so a positive eta decreases f.
StiefelPoint rgd_step(const StiefelPoint& omega, const Matrix& euclid_grad, Metric metric,
                      Retraction retraction, double eta);

/// Tr(Z1^T (I - Omega Omega^T / 2) Z2).
double canonical_inner(const StiefelPoint& omega, const Matrix& z1, const Matrix& z2);

}  // namespace cwy
