#include "cwy/tcwy.hpp"

#include <cmath>
#include <string>

namespace cwy {

StiefelPoint::StiefelPoint(Matrix omega) : omega_(std::move(omega)) {
  if (omega_.rows() < omega_.cols() || omega_.cols() == 0) {
    throw Error(ErrorKind::ShapeMismatch, "Stiefel point needs N >= M >= 1");
  }
  const double residual = orthogonality_residual(omega_);
  if (!(residual <= 1e-10 * static_cast<double>(omega_.cols()))) {
    throw Error(ErrorKind::NotOnManifold, "||Omega^T Omega - I||_F = " + std::to_string(residual));
  }
}

StiefelPoint StiefelPoint::canonical(Eigen::Index n, Eigen::Index m) {
  return StiefelPoint(Matrix::Identity(n, m));
}

StiefelPoint StiefelPoint::random(Eigen::Index n, Eigen::Index m, Rng& rng) {
  return StiefelPoint(qf(standard_normal(n, m, rng)).q);
}

StiefelPoint gamma(const HouseholderStack& stack, FlopCounter* counter) {
  const Eigen::Index n = stack.n();
  const Eigen::Index m = stack.l();
  if (m >= n) throw Error(ErrorKind::RequiresStrictTruncation, "gamma needs M < N");
  const CwyFactors f = build_factors(stack, counter);
  const Matrix y = triangular_solve(f.s, f.u.topRows(m).transpose(), counter);
  Matrix omega = Matrix::Identity(n, m);
  omega.noalias() -= f.u * y;
  count(counter, static_cast<std::uint64_t>(2 * n * m * m));
  return StiefelPoint(std::move(omega));
}

HouseholderStack decompose_stiefel(const StiefelPoint& point) {
  const Eigen::Index n = point.n();
  const Eigen::Index m = point.m();
  if (m >= n) throw Error(ErrorKind::RequiresStrictTruncation, "decompose_stiefel needs M < N");

  Matrix work = point.omega();
  Matrix vectors = Matrix::Zero(n, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    auto block = work.bottomRightCorner(n - k, m - k);
    const Vector v = detail::column_reflector(block.col(0));
    const Eigen::RowVectorXd w = 2.0 * (v.transpose() * block);
    block.noalias() -= v * w;

    // H(v) Omega' must have the block shape [1 0; 0 Omega''].
    double drift = std::abs(block(0, 0) - 1.0);
    if (block.rows() > 1) drift = std::max(drift, block.col(0).tail(block.rows() - 1).cwiseAbs().maxCoeff());
    if (block.cols() > 1) drift = std::max(drift, block.row(0).tail(block.cols() - 1).cwiseAbs().maxCoeff());
    if (!(drift <= 1e-9)) {
      throw Error(ErrorKind::DecompositionDrift,
                  "column " + std::to_string(k) + " not reduced (error " + std::to_string(drift) + ")");
    }
    vectors.col(k).tail(n - k) = v;
  }
  return HouseholderStack(std::move(vectors));
}

Matrix gamma_grad(const HouseholderStack& stack, const Matrix& upstream) {
  if (stack.l() >= stack.n()) throw Error(ErrorKind::RequiresStrictTruncation, "gamma_grad needs M < N");
  if (upstream.rows() != stack.n() || upstream.cols() != stack.l()) {
    throw Error(ErrorKind::DimensionMismatch, "gamma_grad: upstream must be N x M");
  }
  return detail::truncated_adjoint(stack, upstream);
}

ConvKernel::ConvKernel(int q, int f_in, int f_out)
    : q_(q), f_in_(f_in), f_out_(f_out) {
  if (q < 1 || q % 2 == 0 || f_in < 1 || f_out < 1) {
    throw Error(ErrorKind::ShapeMismatch, "kernel needs odd q >= 1 and positive channel counts");
  }
  data_.assign(static_cast<std::size_t>(q) * q * f_in * f_out, 0.0);
}

ConvKernel ConvKernel::from_reshaped(const Matrix& khat, int q) {
  const auto f = static_cast<int>(khat.cols());
  if (khat.rows() != static_cast<Eigen::Index>(q) * q * f) {
    throw Error(ErrorKind::ShapeMismatch, "reshaped kernel must be q^2 f x f");
  }
  ConvKernel k(q, f, f);
  for (int l = 0; l < q; ++l)
    for (int p = 0; p < q; ++p)
      for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j) k(l, p, i, j) = khat(l * q * f + p * f + i, j);
  return k;
}

double FeatureMap::squared_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return s;
}

FeatureMap FeatureMap::random(int h, int w, int f, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  FeatureMap g(h, w, f);
  for (int a = 0; a < h; ++a)
    for (int b = 0; b < w; ++b)
      for (int c = 0; c < f; ++c) g(a, b, c) = dist(rng);
  return g;
}

Matrix reshape_kernel(const ConvKernel& k) {
  if (k.f_in() != k.f_out()) throw Error(ErrorKind::ShapeMismatch, "reshape needs f_in == f_out");
  const int q = k.q();
  const int f = k.f_out();
  Matrix khat(static_cast<Eigen::Index>(q) * q * f, f);
  for (int l = 0; l < q; ++l)
    for (int p = 0; p < q; ++p)
      for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j) khat(l * q * f + p * f + i, j) = k(l, p, i, j);
  return khat;
}

FeatureMap convolve(const ConvKernel& k, const FeatureMap& g) {
  if (g.f() != k.f_in()) throw Error(ErrorKind::ShapeMismatch, "feature channels != kernel f_in");
  const int half = (k.q() - 1) / 2;
  FeatureMap out(g.h(), g.w(), k.f_out());
  for (int a = 0; a < g.h(); ++a) {
    for (int b = 0; b < g.w(); ++b) {
      for (int l = 0; l < k.q(); ++l) {
        const int row = a + l - half;
        if (row < 0 || row >= g.h()) continue;
        for (int p = 0; p < k.q(); ++p) {
          const int col = b + p - half;
          if (col < 0 || col >= g.w()) continue;
          for (int i = 0; i < k.f_in(); ++i) {
            const double x = g(row, col, i);
            for (int j = 0; j < k.f_out(); ++j) out(a, b, j) += k(l, p, i, j) * x;
          }
        }
      }
    }
  }
  return out;
}

ConvBound check_conv_bound(const ConvKernel& k, const FeatureMap& g) {
  const Matrix khat = reshape_kernel(k);
  ConvBound bound;
  bound.lhs = convolve(k, g).squared_norm();
  const double norm2 = spectral_norm(khat).value;
  bound.rhs = static_cast<double>(k.q()) * k.q() * norm2 * norm2 * g.squared_norm();
  bound.holds = bound.lhs <= bound.rhs * (1.0 + 1e-9) + 1e-300;
  return bound;
}

ConvKernel random_stiefel_kernel(int q, int f, Rng& rng) {
  const Eigen::Index rows = static_cast<Eigen::Index>(q) * q * f;
  Matrix scaled;
  if (q == 1) {
    scaled = materialize(build_factors(HouseholderStack(standard_normal(f, f, rng))));
  } else {
    scaled = gamma(HouseholderStack(standard_normal(rows, f, rng))).omega();
  }
  return ConvKernel::from_reshaped(scaled / static_cast<double>(q), q);
}

std::vector<FeatureMap> convneru_rollout(const ConvKernel& k, const ConvKernel& k_in,
                                         const Vector& bias, const FeatureMap& g0,
                                         const std::vector<FeatureMap>& inputs,
                                         Nonlinearity sigma) {
  if (k.f_in() != k.f_out() || k_in.f_out() != k.f_out() || bias.size() != k.f_out() ||
      g0.f() != k.f_out()) {
    throw Error(ErrorKind::ShapeMismatch, "convneru: channel counts disagree");
  }
  std::vector<FeatureMap> states;
  states.reserve(inputs.size());
  FeatureMap g = g0;
  for (const FeatureMap& x : inputs) {
    if (x.h() != g.h() || x.w() != g.w()) throw Error(ErrorKind::ShapeMismatch, "convneru: frame size");
    const FeatureMap y = convolve(k, g);
    const FeatureMap z = convolve(k_in, x);
    FeatureMap next(g.h(), g.w(), g.f());
    for (int a = 0; a < g.h(); ++a)
      for (int b = 0; b < g.w(); ++b)
        for (int c = 0; c < g.f(); ++c) {
          const double pre = y(a, b, c) + bias(c) + z(a, b, c);
          switch (sigma) {
            case Nonlinearity::Tanh: next(a, b, c) = std::tanh(pre); break;
            case Nonlinearity::Relu: next(a, b, c) = pre > 0.0 ? pre : 0.0; break;
            case Nonlinearity::Abs: next(a, b, c) = std::abs(pre); break;
            case Nonlinearity::Identity: next(a, b, c) = pre; break;
          }
        }
    g = next;
    states.push_back(g);
  }
  return states;
}

}  // namespace cwy
