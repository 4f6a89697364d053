#include "cwy/optim.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace cwy;

namespace {

// f(Q) = Q(0, 0), optionally with gradient noise.
class CornerObjective final : public Objective {
 public:
  explicit CornerObjective(double sigma = 0.0, std::uint64_t seed = 0) : Objective(sigma, seed) {}
  double value(const Matrix& q) const override { return q(0, 0); }
  Matrix gradient(const Matrix& q) const override {
    Matrix g = Matrix::Zero(q.rows(), q.cols());
    g(0, 0) = 1.0;
    return g;
  }
};

class ZeroObjective final : public Objective {
 public:
  ZeroObjective() : Objective(0.0, 0) {}
  double value(const Matrix&) const override { return 0.0; }
  Matrix gradient(const Matrix& q) const override { return Matrix::Zero(q.rows(), q.cols()); }
};

}  // namespace

TEST(SgdStep, ZeroGradientOnlyAdvancesCounter) {
  Rng rng(1);
  const SgdState s0{random_stack(6, 4, rng)};
  ZeroObjective obj;
  const SgdState s1 = sgd_step(s0, obj);
  EXPECT_EQ(s1.k, 2u);
  EXPECT_EQ(s1.stack.vectors(), s0.stack.vectors());
  const SgdState st0{random_stack(6, 2, rng)};
  const SgdState st1 = stiefel_sgd_step(st0, obj);
  EXPECT_EQ(st1.stack.vectors(), st0.stack.vectors());
}

TEST(SgdStep, SingleStepReplay) {
  Rng rng(2);
  SgdState s0{random_stack(5, 5, rng)};
  s0.k = 4;
  CornerObjective obj;
  const SgdState s1 = sgd_step(s0, obj);
  Matrix upstream = Matrix::Zero(5, 5);
  upstream(0, 0) = 1.0;
  const Matrix want = s0.stack.vectors() - 0.5 * grad(s0.stack, upstream);
  EXPECT_EQ(s1.stack.vectors(), want);
  EXPECT_EQ(s1.k, 5u);
}

TEST(SgdStep, ScaledStepMode) {
  Rng rng(3);
  const SgdState s0{random_stack(5, 3, rng)};
  CornerObjective obj;
  const SgdState s1 = sgd_step(s0, obj, SgdOptions{0.25});
  Matrix upstream = Matrix::Zero(5, 5);
  upstream(0, 0) = 1.0;
  EXPECT_EQ(s1.stack.vectors(), Matrix(s0.stack.vectors() - 0.25 * grad(s0.stack, upstream)));
}

TEST(SgdStep, NormsNeverShrink) {
  Rng rng(4);
  const Matrix a = qf(standard_normal(8, 8, rng)).q;
  ProcrustesObjective obj(a, standard_normal(8, 8, rng), 0.5, 7);
  SgdState s{random_stack(8, 8, rng)};
  for (int step = 0; step < 200; ++step) {
    const SgdState next = sgd_step(s, obj);
    for (Eigen::Index l = 0; l < 8; ++l) {
      ASSERT_GE(next.stack.vector(l).norm(), s.stack.vector(l).norm() - 1e-12);
    }
    s = next;
  }
  TraceObjective trace(standard_normal(10, 3, rng), 0.5, 8);
  SgdState t{random_stack(10, 3, rng)};
  for (int step = 0; step < 200; ++step) {
    const SgdState next = stiefel_sgd_step(t, trace);
    for (Eigen::Index l = 0; l < 3; ++l) {
      ASSERT_GE(next.stack.vector(l).norm(), t.stack.vector(l).norm() - 1e-12);
    }
    t = next;
  }
}

TEST(SgdStep, DeterministicTrajectories) {
  auto trajectory = [] {
    Rng rng(5);
    ProcrustesObjective obj(Matrix::Identity(6, 6), qf(standard_normal(6, 6, rng)).q, 0.1, 99);
    SgdState s{random_stack(6, 6, rng)};
    for (int step = 0; step < 50; ++step) s = sgd_step(s, obj);
    return s.stack.vectors();
  };
  EXPECT_EQ(trajectory(), trajectory());
}

TEST(Objective, NoiseIsUnbiased) {
  const double sigma = 0.3;
  CornerObjective obj(sigma, 11);
  const Matrix x = Matrix::Identity(3, 3);
  const Matrix exact = obj.gradient(x);
  Matrix sum = Matrix::Zero(3, 3);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) sum += obj.stochastic_gradient(x) - exact;
  EXPECT_LT((sum / draws).cwiseAbs().maxCoeff(), 4.0 * sigma / 100.0);
}

TEST(Objective, NoiselessProxyIsExact) {
  CornerObjective obj;
  const Matrix x = Matrix::Identity(3, 3);
  EXPECT_EQ(obj.stochastic_gradient(x), obj.gradient(x));
}

TEST(Procrustes, IdentityOptimum) {
  const ProcrustesObjective obj = procrustes_objective(Matrix::Identity(4, 4), Matrix::Identity(4, 4), 0.0, 1);
  EXPECT_EQ(obj.value(Matrix::Identity(4, 4)), 0.0);
  EXPECT_EQ(obj.gradient(Matrix::Identity(4, 4)), Matrix(Matrix::Zero(4, 4)));
}

TEST(Procrustes, GradientFormula) {
  const ProcrustesObjective obj(Matrix::Identity(3, 3), Matrix::Zero(3, 3), 0.0, 1);
  EXPECT_EQ(obj.gradient(Matrix::Identity(3, 3)), Matrix(2.0 * Matrix::Identity(3, 3)));
}

TEST(Procrustes, GradientFiniteDifference) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const ProcrustesObjective obj(standard_normal(5, 3, rng), standard_normal(5, 3, rng), 0.0, 1);
    const Matrix q = standard_normal(5, 5, rng);
    const Matrix fd = oracle::finite_difference(q, [&](const Matrix& x) { return obj.value(x); });
    EXPECT_LT(oracle::relative_error(obj.gradient(q), fd), 1e-6);
  }
  EXPECT_THROW(ProcrustesObjective(Matrix::Zero(3, 2), Matrix::Zero(3, 3), 0.0, 1), Error);
}

TEST(Run, CriticalStartStopsImmediately) {
  Rng rng(7);
  ZeroObjective obj;
  const Report r = run(SgdState{random_stack(5, 5, rng)}, obj, 100, 1e-6);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].k, 1u);
  EXPECT_TRUE(r.converged);
}

TEST(Run, PlantedProcrustes) {
  Rng rng(8);
  const Matrix q_star = materialize(build_factors(random_stack(8, 8, rng)));
  ProcrustesObjective obj(Matrix::Identity(8, 8), q_star, 0.0, 1);
  // Tighter tolerance than the 1e-6 target so the objective keeps falling
  // after the gradient target is met.
  const Report r = run(SgdState{random_stack(8, 8, rng)}, obj, 20000, 1e-12);
  EXPECT_LE(r.rows.size(), 20000u);
  EXPECT_LT(r.rows.back().min_so_far, 1e-6);
  const Matrix q = materialize(build_factors(r.final_state.stack));
  EXPECT_LT(obj.value(q), 1e-5);
}

TEST(Run, ReportIsConsistent) {
  Rng rng(9);
  CornerObjective obj(0.05, 3);
  const Report r = run(SgdState{random_stack(6, 6, rng)}, obj, 300, 0.0);
  ASSERT_EQ(r.rows.size(), 300u);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(r.rows[i].k, i + 1);
    if (i > 0) {
      EXPECT_LE(r.rows[i].min_so_far, r.rows[i - 1].min_so_far);
      EXPECT_GE(r.rows[i].min_vector_norm, r.rows[i - 1].min_vector_norm - 1e-12);
    }
  }
  std::ostringstream csv;
  write_report_csv(csv, r);
  const std::string text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "k,objective,sum_sq_grad_norm,min_so_far,min_vector_norm");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 301);
}

TEST(Run, LogLogSlopeOfPowerLaw) {
  Report r;
  for (std::uint64_t k = 1; k <= 1000; ++k) {
    StepRecord row;
    row.k = k;
    row.min_so_far = 3.0 * std::pow(static_cast<double>(k), -0.75);
    r.rows.push_back(row);
  }
  EXPECT_NEAR(loglog_slope(r, 10, 1000), -0.75, 1e-12);
  EXPECT_TRUE(std::isnan(loglog_slope(r, 5000, 6000)));
}

TEST(StiefelSgd, TraceObjectiveReachesOptimum) {
  Rng rng(10);
  const Matrix target = standard_normal(12, 3, rng);
  TraceObjective obj(target, 0.0, 1);
  const Report r = stiefel_sgd(SgdState{random_stack(12, 3, rng)}, obj, 20000, 1e-14);
  const double optimum = -oracle::singular_values(target).sum();
  EXPECT_NEAR(obj.value(gamma(r.final_state.stack).omega()), optimum, 1e-4);
}

TEST(Initialization, RandomStackRejectsShortVectors) {
  Rng rng(11);
  const HouseholderStack s = random_stack(50, 20, rng);
  EXPECT_GE(s.norms().minCoeff(), 0.1 * std::sqrt(50.0));
}

TEST(Initialization, SkewExponential) {
  Rng rng(12);
  const HouseholderStack s = stack_from_skew_exp(10, rng);
  EXPECT_EQ(s.l(), 10);
  EXPECT_NEAR(determinant(materialize(build_factors(s))), 1.0, 1e-9);
  EXPECT_THROW(stack_from_skew_exp(7, rng), Error);
}
