#include "cwy/optim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace cwy {

Matrix Objective::stochastic_gradient(const Matrix& x) {
  Matrix g = gradient(x);
  if (sigma_ > 0.0) g += sigma_ * standard_normal(g.rows(), g.cols(), rng_);
  return g;
}

ProcrustesObjective::ProcrustesObjective(Matrix a, Matrix b, double noise_sigma, std::uint64_t seed)
    : Objective(noise_sigma, seed), a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() != b_.rows() || a_.cols() != b_.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "Procrustes A and B must have the same shape");
  }
}

double ProcrustesObjective::value(const Matrix& q) const { return (q * a_ - b_).squaredNorm(); }

Matrix ProcrustesObjective::gradient(const Matrix& q) const {
  if (q.cols() != a_.rows()) throw Error(ErrorKind::ShapeMismatch, "Procrustes: Q cols != A rows");
  return 2.0 * (q * a_ - b_) * a_.transpose();
}

ProcrustesObjective procrustes_objective(const Matrix& a, const Matrix& b, double noise_sigma,
                                         std::uint64_t seed) {
  return ProcrustesObjective(a, b, noise_sigma, seed);
}

TraceObjective::TraceObjective(Matrix target, double noise_sigma, std::uint64_t seed)
    : Objective(noise_sigma, seed), target_(std::move(target)) {}

double TraceObjective::value(const Matrix& omega) const {
  return -(target_.transpose() * omega).trace();
}

Matrix TraceObjective::gradient(const Matrix& omega) const {
  if (omega.rows() != target_.rows() || omega.cols() != target_.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "trace objective: shape mismatch");
  }
  return -target_;
}

namespace {

Matrix forward(const HouseholderStack& stack, Parametrization p) {
  if (p == Parametrization::Orthogonal) return materialize(build_factors(stack));
  return gamma(stack).omega();
}

Matrix adjoint(const HouseholderStack& stack, const Matrix& upstream, Parametrization p) {
  if (p == Parametrization::Orthogonal) return grad(stack, upstream);
  return gamma_grad(stack, upstream);
}

SgdState apply_update(const SgdState& state, const Matrix& vector_grads, double eta0) {
  const double eta = eta0 / std::sqrt(static_cast<double>(state.k));
  SgdState next;
  next.stack = HouseholderStack(state.stack.vectors() - eta * vector_grads);
  next.k = state.k + 1;
  next.min_sum_sq = state.min_sum_sq;
  return next;
}

Report run_impl(SgdState state, Objective& objective, std::uint64_t max_iters, double grad_tol,
                const SgdOptions& options) {
  Report report;
  const bool noisy = objective.noise_sigma() > 0.0;
  for (std::uint64_t it = 0; it < max_iters; ++it) {
    const Matrix x = forward(state.stack, options.parametrization);
    const Matrix exact = adjoint(state.stack, objective.gradient(x), options.parametrization);

    StepRecord row;
    row.k = state.k;
    row.objective = objective.value(x);
    row.sum_sq_grad_norm = exact.squaredNorm();
    state.min_sum_sq = std::min(state.min_sum_sq, row.sum_sq_grad_norm);
    row.min_so_far = state.min_sum_sq;
    row.min_vector_norm = state.stack.norms().minCoeff();
    report.rows.push_back(row);

    if (state.min_sum_sq < grad_tol) {
      report.converged = true;
      break;
    }
    const Matrix step_grad =
        noisy ? adjoint(state.stack, objective.stochastic_gradient(x), options.parametrization)
              : exact;
    state = apply_update(state, step_grad, options.eta0);
  }
  report.final_state = std::move(state);
  return report;
}

}  // namespace

SgdState sgd_step(const SgdState& state, Objective& objective, const SgdOptions& options) {
  const Matrix x = forward(state.stack, options.parametrization);
  const Matrix g = objective.stochastic_gradient(x);
  return apply_update(state, adjoint(state.stack, g, options.parametrization), options.eta0);
}

SgdState stiefel_sgd_step(const SgdState& state, Objective& objective, double eta0) {
  return sgd_step(state, objective, SgdOptions{eta0, Parametrization::Stiefel});
}

Report run(SgdState state, Objective& objective, std::uint64_t max_iters, double grad_tol,
           const SgdOptions& options) {
  return run_impl(std::move(state), objective, max_iters, grad_tol, options);
}

Report stiefel_sgd(SgdState state, Objective& objective, std::uint64_t max_iters, double grad_tol,
                   double eta0) {
  return run_impl(std::move(state), objective, max_iters, grad_tol,
                  SgdOptions{eta0, Parametrization::Stiefel});
}

double loglog_slope(const Report& report, std::uint64_t k_lo, std::uint64_t k_hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (const StepRecord& r : report.rows) {
    if (r.k < k_lo || r.k > k_hi || !(r.min_so_far > 0.0)) continue;
    const double x = std::log(static_cast<double>(r.k));
    const double y = std::log(r.min_so_far);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(count);
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_report_csv(std::ostream& out, const Report& report) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "k,objective,sum_sq_grad_norm,min_so_far,min_vector_norm\n";
  out << std::setprecision(17);
  for (const StepRecord& r : report.rows) {
    out << r.k << ',' << r.objective << ',' << r.sum_sq_grad_norm << ',' << r.min_so_far << ','
        << r.min_vector_norm << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

HouseholderStack random_stack(Eigen::Index n, Eigen::Index l, Rng& rng) {
  Matrix vectors(n, l);
  const double floor = 0.1 * std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < l; ++i) {
    Vector v;
    do {
      v = standard_normal(n, 1, rng);
    } while (v.norm() < floor);
    vectors.col(i) = v;
  }
  return HouseholderStack(std::move(vectors));
}

HouseholderStack stack_from_skew_exp(Eigen::Index n, Rng& rng) {
  if (n % 2 != 0) {
    throw Error(ErrorKind::WrongDeterminant,
                "exp of a skew matrix has det +1; odd N needs det -1 for N reflections");
  }
  return decompose(matrix_exp(SkewParam::random(n, rng)));
}

}  // namespace cwy
