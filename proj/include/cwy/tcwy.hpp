#pragma once

#include "cwy/cwy.hpp"

#include <array>

namespace cwy {

/// N x M matrix with orthonormal columns (N >= M), checked to 1e-10 * M.
class StiefelPoint {
 public:
  StiefelPoint() = default;
  explicit StiefelPoint(Matrix omega);

  Eigen::Index n() const noexcept { return omega_.rows(); }
  Eigen::Index m() const noexcept { return omega_.cols(); }
  const Matrix& omega() const noexcept { return omega_; }

  /// [I; 0] in St(N, M).
  static StiefelPoint canonical(Eigen::Index n, Eigen::Index m);
  /// qf of an N x M standard normal matrix.
  static StiefelPoint random(Eigen::Index n, Eigen::Index m, Rng& rng);

 private:
  Matrix omega_;
};

/// Truncated CWY map: [I; 0] - U S^{-1} U_1^T for a stack of M < N vectors.
/// The N x N orthogonal matrix is never formed.
StiefelPoint gamma(const HouseholderStack& stack, FlopCounter* counter = nullptr);

/// M vectors whose truncated CWY image is omega.
HouseholderStack decompose_stiefel(const StiefelPoint& omega);

/// df/dv^(l) for upstream = df/dOmega (N x M) at Omega = gamma(stack).
Matrix gamma_grad(const HouseholderStack& stack, const Matrix& upstream);

/// Convolution kernel K of shape q x q x f_in x f_out, entry K(l, p, i, j).
class ConvKernel {
 public:
  ConvKernel(int q, int f_in, int f_out);

  int q() const noexcept { return q_; }
  int f_in() const noexcept { return f_in_; }
  int f_out() const noexcept { return f_out_; }

  double& operator()(int l, int p, int i, int j) { return data_[index(l, p, i, j)]; }
  double operator()(int l, int p, int i, int j) const { return data_[index(l, p, i, j)]; }

  /// Inverse of reshape_kernel: K(l, p, i, j) = Khat(l q f + p f + i, j).
  static ConvKernel from_reshaped(const Matrix& khat, int q);

 private:
  std::size_t index(int l, int p, int i, int j) const {
    return ((static_cast<std::size_t>(l) * q_ + p) * f_in_ + i) * f_out_ + j;
  }

  int q_;
  int f_in_;
  int f_out_;
  std::vector<double> data_;
};

/// Feature map of shape h x w x f, entry G(a, b, c).
class FeatureMap {
 public:
  FeatureMap(int h, int w, int f) : h_(h), w_(w), f_(f), data_(static_cast<std::size_t>(h) * w * f) {}

  int h() const noexcept { return h_; }
  int w() const noexcept { return w_; }
  int f() const noexcept { return f_; }

  double& operator()(int a, int b, int c) { return data_[(static_cast<std::size_t>(a) * w_ + b) * f_ + c]; }
  double operator()(int a, int b, int c) const { return data_[(static_cast<std::size_t>(a) * w_ + b) * f_ + c]; }

  double squared_norm() const;
  static FeatureMap random(int h, int w, int f, Rng& rng);

 private:
  int h_;
  int w_;
  int f_;
  std::vector<double> data_;
};

/// Khat in R^{q^2 f_out x f_out} with Khat(l q f_out + p f_out + i, j) = K(l, p, i, j).
/// Only defined for transition kernels (f_in == f_out).
Matrix reshape_kernel(const ConvKernel& k);

/// Same-size convolution with zero padding (odd q):
/// (K * G)(a, b, j) = sum_{l,p,i} K(l, p, i, j) G(a + l - (q-1)/2, b + p - (q-1)/2, i).
FeatureMap convolve(const ConvKernel& k, const FeatureMap& g);

struct ConvBound {
  double lhs = 0.0;  // ||K * G||_F^2
  double rhs = 0.0;  // q^2 ||Khat||_2^2 ||G||_F^2
  bool holds = false;
};

/// Evaluates both sides of ||K * G||_F^2 <= q^2 ||Khat||_2^2 ||G||_F^2.
ConvBound check_conv_bound(const ConvKernel& k, const FeatureMap& g);

/// Transition kernel with q Khat on St(q^2 f, f), drawn through the truncated
/// CWY map (or the full CWY map when q = 1).
ConvKernel random_stiefel_kernel(int q, int f, Rng& rng);

/// G_t = sigma(K * G_{t-1} + B + K_in * X_t), where B broadcasts the
/// per-channel bias b over every spatial position. Returns G_1..G_T.
std::vector<FeatureMap> convneru_rollout(const ConvKernel& k, const ConvKernel& k_in,
                                         const Vector& bias, const FeatureMap& g0,
                                         const std::vector<FeatureMap>& inputs,
                                         Nonlinearity sigma);

}  // namespace cwy
