#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwy {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

enum class ErrorKind {
  DimensionMismatch,
  ShapeMismatch,
  SingularDiagonal,
  RankDeficient,
  NoConvergence,
  ZeroVector,
  NotOrthogonal,
  WrongDeterminant,
  DecompositionDrift,
  RequiresStrictTruncation,
  NotOnManifold,
  SolveFailure,
  UnknownMethod,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Per-invocation floating point operation counter. Kernels that accept a
/// counter add the exact number of scalar multiplications, additions and
/// divisions they perform; passing nullptr disables counting.
struct FlopCounter {
  std::uint64_t flops = 0;
  void add(std::uint64_t n) noexcept { flops += n; }
};

inline void count(FlopCounter* counter, std::uint64_t n) noexcept {
  if (counter != nullptr) counter->add(n);
}

/// Dense upper-triangular matrix. Entries below the diagonal are exactly
/// zero; the diagonal is checked before every solve.
class UpperTriangular {
 public:
  UpperTriangular() = default;
  /// Takes the upper triangle of `m`; the strictly lower part is discarded.
  explicit UpperTriangular(const Matrix& m);

  Eigen::Index dim() const noexcept { return data_.rows(); }
  const Matrix& dense() const noexcept { return data_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

 private:
  Matrix data_;
};

/// Skew-symmetric matrix stored through its strictly upper triangle, packed
/// row by row. The materialized matrix is antisymmetric to the last bit.
class SkewParam {
 public:
  SkewParam() = default;
  SkewParam(Eigen::Index dim, Vector upper);

  /// A = X - X^T.
  static SkewParam from_generator(const Matrix& x);
  /// Reads the strictly upper triangle of `a`, which is assumed skew.
  static SkewParam from_upper(const Matrix& a);
  static SkewParam zero(Eigen::Index dim);
  /// X - X^T with iid standard normal X.
  static SkewParam random(Eigen::Index dim, Rng& rng);

  Eigen::Index dim() const noexcept { return dim_; }
  const Vector& params() const noexcept { return upper_; }
  Matrix matrix() const;

 private:
  Eigen::Index dim_ = 0;
  Vector upper_;
};

/// Solves S X = rhs by back-substitution over all right-hand sides.
Matrix triangular_solve(const UpperTriangular& s, const Matrix& rhs,
                        FlopCounter* counter = nullptr);

/// Solves S^T X = rhs (forward substitution with the transpose).
Matrix triangular_solve_transposed(const UpperTriangular& s, const Matrix& rhs,
                                   FlopCounter* counter = nullptr);

struct QrFactors {
  Matrix q;
  UpperTriangular r;
};

/// Thin QR with the sign convention diag(R) > 0.
QrFactors qf(const Matrix& x);

/// (I + A/2)^{-1} (I - A/2).
Matrix cayley(const SkewParam& a);
Matrix cayley(const Matrix& skew);

/// Scaling and squaring with the degree-13 Pade approximant.
Matrix matrix_exp(const SkewParam& a);
Matrix matrix_exp(const Matrix& skew);

struct SpectralNorm {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest singular value by power iteration on X^T X.
SpectralNorm spectral_norm(const Matrix& x, double rel_tol = 1e-10,
                           int max_iter = 10000);

/// ||X^T X - I||_F.
double orthogonality_residual(const Matrix& x);

/// Determinant through partial-pivot LU.
double determinant(const Matrix& x);

/// GEMM with exact 2*d1*d2*d3 accounting.
Matrix gemm(const Matrix& a, const Matrix& b, FlopCounter* counter = nullptr);

Matrix standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng);

// Plain-text matrix format: "rows cols" on the first line followed by one
// line of whitespace-separated values per row.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Matrix& m);

}  // namespace cwy
