#pragma once

#include "cwy/tcwy.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

namespace cwy {

/// Smooth objective accessed through a stochastic gradient proxy. The proxy
/// adds iid N(0, sigma^2) noise to every gradient entry, so E[proxy] is the
/// exact gradient. The noise stream is seeded and owned by the objective.
class Objective {
 public:
  Objective(double noise_sigma, std::uint64_t seed) : sigma_(noise_sigma), rng_(seed) {}
  virtual ~Objective() = default;

  virtual double value(const Matrix& x) const = 0;
  virtual Matrix gradient(const Matrix& x) const = 0;

  Matrix stochastic_gradient(const Matrix& x);
  double noise_sigma() const noexcept { return sigma_; }

 private:
  double sigma_;
  Rng rng_;
};

/// f(Q) = ||Q A - B||_F^2, grad = 2 (Q A - B) A^T.
class ProcrustesObjective final : public Objective {
 public:
  ProcrustesObjective(Matrix a, Matrix b, double noise_sigma, std::uint64_t seed);

  double value(const Matrix& q) const override;
  Matrix gradient(const Matrix& q) const override;

 private:
  Matrix a_;
  Matrix b_;
};

/// f(Omega) = -Tr(T^T Omega), grad = -T. Minimum over St(N, M) is the
/// negated sum of T's singular values.
class TraceObjective final : public Objective {
 public:
  TraceObjective(Matrix target, double noise_sigma, std::uint64_t seed);

  double value(const Matrix& omega) const override;
  Matrix gradient(const Matrix& omega) const override;

 private:
  Matrix target_;
};

ProcrustesObjective procrustes_objective(const Matrix& a, const Matrix& b, double noise_sigma,
                                         std::uint64_t seed);

enum class Parametrization { Orthogonal, Stiefel };

struct SgdOptions {
  /// Step size is eta0 * k^{-1/2}. eta0 = 1 is the schedule the
  /// convergence guarantee is stated for; other values are a demo mode.
  double eta0 = 1.0;
  Parametrization parametrization = Parametrization::Orthogonal;
};

struct SgdState {
  HouseholderStack stack;
  std::uint64_t k = 1;
  double min_sum_sq = std::numeric_limits<double>::infinity();
};

/// One simultaneous update of all L vectors from a single forward pass and
/// a single noise draw: v^(l) -= eta0 k^{-1/2} df~/dv^(l); k is incremented.
SgdState sgd_step(const SgdState& state, Objective& objective, const SgdOptions& options = {});

/// T-CWY analogue of sgd_step.
SgdState stiefel_sgd_step(const SgdState& state, Objective& objective, double eta0 = 1.0);

struct StepRecord {
  std::uint64_t k = 0;
  double objective = 0.0;
  double sum_sq_grad_norm = 0.0;
  double min_so_far = 0.0;
  double min_vector_norm = 0.0;
};

struct Report {
  std::vector<StepRecord> rows;
  SgdState final_state;
  bool converged = false;
};

/// Iterates until the running minimum of sum_l ||df/dv^(l)||^2 (exact
/// gradient) drops below grad_tol or max_iters iterations were recorded.
Report run(SgdState state, Objective& objective, std::uint64_t max_iters, double grad_tol,
           const SgdOptions& options = {});

/// run() with the truncated parametrization.
Report stiefel_sgd(SgdState state, Objective& objective, std::uint64_t max_iters,
                   double grad_tol, double eta0 = 1.0);

/// Least-squares slope of log(min_so_far) against log(k) over k in [k_lo, k_hi].
double loglog_slope(const Report& report, std::uint64_t k_lo, std::uint64_t k_hi);

void write_report_csv(std::ostream& out, const Report& report);

/// L iid standard normal vectors, redrawn while ||v|| < 0.1 sqrt(N).
HouseholderStack random_stack(Eigen::Index n, Eigen::Index l, Rng& rng);

/// exp(X - X^T) decomposed into N reflections. Only even N reach det = +1.
HouseholderStack stack_from_skew_exp(Eigen::Index n, Rng& rng);

}  // namespace cwy
