#include "cwy/householder.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace cwy;

namespace {

Vector unit(Eigen::Index n, Eigen::Index i) { return Vector::Unit(n, i); }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST(Reflect, NegatesItsAxis) {
  EXPECT_EQ(reflect(unit(3, 0), unit(3, 0)), Matrix(-unit(3, 0)));
}

TEST(Reflect, TwoByTwoByHand) {
  Vector v(2);
  v << 1, 1;
  Vector want(2);
  want << 0, -1;
  EXPECT_LT((reflect(v, unit(2, 0)) - want).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Reflect, Involution) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector v = standard_normal(32, 1, rng);
    const Matrix x = standard_normal(32, 1, rng);
    EXPECT_LT((reflect(v, reflect(v, x)) - x).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Reflect, ScaleInvariant) {
  Rng rng(2);
  const Vector v = standard_normal(16, 1, rng);
  const Matrix x = standard_normal(16, 3, rng);
  EXPECT_LT((reflect(v, x) - reflect(3.7 * v, x)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Reflect, Errors) {
  EXPECT_EQ(kind_of([] { reflect(Vector::Zero(3), Matrix::Ones(3, 1)); }), ErrorKind::ZeroVector);
  EXPECT_THROW(reflect(unit(3, 0), Matrix::Ones(2, 1)), Error);
}

TEST(Stack, ConstructionChecks) {
  EXPECT_EQ(kind_of([] { HouseholderStack(Matrix::Zero(3, 1)); }), ErrorKind::ZeroVector);
  EXPECT_THROW(HouseholderStack(Matrix::Ones(2, 3)), Error);
  EXPECT_THROW(HouseholderStack(Matrix(3, 0)), Error);
  const HouseholderStack s(Matrix::Identity(4, 2) * 2.0);
  EXPECT_EQ(s.n(), 4);
  EXPECT_EQ(s.l(), 2);
  EXPECT_DOUBLE_EQ(s.norms()(1), 2.0);
}

TEST(ApplyStack, TwoAxesGiveMinusIdentity) {
  const HouseholderStack s(Matrix::Identity(2, 2));
  EXPECT_EQ(apply_stack(s, Matrix::Identity(2, 2)), Matrix(-Matrix::Identity(2, 2)));
}

TEST(ApplyStack, SingleVectorMatchesReflect) {
  Rng rng(3);
  const Matrix v = standard_normal(9, 1, rng);
  const Matrix x = standard_normal(9, 4, rng);
  EXPECT_EQ(apply_stack(HouseholderStack(v), x), reflect(v.col(0), x));
}

TEST(ApplyStack, MatchesDenseProduct) {
  Rng rng(4);
  const Matrix v = standard_normal(12, 5, rng);
  const Matrix want = oracle::dense_reflection_product(v);
  EXPECT_LT((apply_stack(HouseholderStack(v), Matrix::Identity(12, 12)) - want).cwiseAbs().maxCoeff(),
            1e-13);
}

TEST(ApplyStack, DeterminantSign) {
  Rng rng(5);
  const Matrix q = apply_stack(HouseholderStack(standard_normal(16, 16, rng)), Matrix::Identity(16, 16));
  EXPECT_NEAR(determinant(q), 1.0, 1e-9);
  const Matrix q7 = apply_stack(HouseholderStack(standard_normal(16, 7, rng)), Matrix::Identity(16, 16));
  EXPECT_NEAR(determinant(q7), -1.0, 1e-9);
}

TEST(ApplyStack, Orthogonality) {
  Rng rng(6);
  for (Eigen::Index n : {3, 10, 40}) {
    for (Eigen::Index l : {Eigen::Index{1}, n / 2, n}) {
      const Matrix q = apply_stack(HouseholderStack(standard_normal(n, l, rng)), Matrix::Identity(n, n));
      EXPECT_LT(orthogonality_residual(q), 1e-11 * static_cast<double>(l));
    }
  }
}

TEST(ApplyStack, CountsFlops) {
  Rng rng(7);
  FlopCounter c;
  apply_stack(HouseholderStack(standard_normal(10, 3, rng)), standard_normal(10, 2, rng), &c);
  EXPECT_EQ(c.flops, 3u * (2 * 10 + 1 + 2 * (4 * 10 + 1)));
}

TEST(Decompose, OneByOneMinusOne) {
  const HouseholderStack s = decompose(Matrix::Constant(1, 1, -1.0));
  ASSERT_EQ(s.l(), 1);
  EXPECT_DOUBLE_EQ(s.vectors()(0, 0), -1.0);
}

TEST(Decompose, MinusIdentity) {
  const Matrix q = -Matrix::Identity(2, 2);
  const HouseholderStack s = decompose(q);
  EXPECT_EQ(s.l(), 2);
  EXPECT_LT((apply_stack(s, Matrix::Identity(2, 2)) - q).norm(), 1e-12);
}

TEST(Decompose, IdentityHitsPlusOneCase) {
  for (Eigen::Index n : {2, 4, 6}) {
    const Matrix q = Matrix::Identity(n, n);
    EXPECT_LT((apply_stack(decompose(q), q) - q).norm(), 1e-12);
  }
}

TEST(Decompose, SkewExponential) {
  Rng rng(8);
  for (Eigen::Index n : {2, 8, 20}) {
    const Matrix q = matrix_exp(SkewParam::random(n, rng));
    const HouseholderStack s = decompose(q);
    EXPECT_EQ(s.l(), n);
    EXPECT_LT((apply_stack(s, Matrix::Identity(n, n)) - q).norm(), 1e-9 * static_cast<double>(n));
  }
}

TEST(Decompose, RandomRoundTrip) {
  Rng rng(9);
  std::uniform_int_distribution<int> dim(1, 64);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = dim(rng);
    const Matrix q = oracle::random_orthogonal(n, n % 2 == 0 ? 1.0 : -1.0, rng);
    const HouseholderStack s = decompose(q);
    ASSERT_LT((apply_stack(s, Matrix::Identity(n, n)) - q).norm(), 1e-9 * static_cast<double>(n))
        << "n = " << n;
  }
}

TEST(Decompose, VectorsAreZeroPadded) {
  Rng rng(10);
  const HouseholderStack s = decompose(oracle::random_orthogonal(6, 1.0, rng));
  for (Eigen::Index k = 1; k < 6; ++k) {
    EXPECT_EQ(s.vectors().col(k).head(k), Vector::Zero(k)) << "k = " << k;
  }
}

TEST(Decompose, Errors) {
  Rng rng(11);
  EXPECT_EQ(kind_of([&] { decompose(oracle::random_orthogonal(4, -1.0, rng)); }),
            ErrorKind::WrongDeterminant);
  EXPECT_EQ(kind_of([] { decompose(Matrix::Identity(3, 3)); }), ErrorKind::WrongDeterminant);
  EXPECT_EQ(kind_of([] { decompose(Matrix::Identity(2, 2) * 1.1); }), ErrorKind::NotOrthogonal);
  EXPECT_THROW(decompose(Matrix::Identity(3, 2)), Error);
}

TEST(ColumnReflector, CaseBoundary) {
  Vector q = unit(3, 0);
  EXPECT_EQ(detail::column_reflector(q), unit(3, 2));
  q(0) = -1.0;
  EXPECT_EQ(detail::column_reflector(q), unit(3, 0));
  Vector r(3);
  r << 0.6, 0.8, 0.0;
  const Vector v = detail::column_reflector(r);
  EXPECT_LT((reflect(v, r) - unit(3, 0)).norm(), 1e-15);
}
