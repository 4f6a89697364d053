#pragma once

#include "cwy/linalg.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cwy {

using Rational = boost::rational<std::int64_t>;

enum class FlopMethod { RgdCQr, RgdEQr, RgdCC, RgdEC, Own, Tcwy, CwyApply, HrApply };

const char* to_string(FlopMethod method);
FlopMethod parse_flop_method(const std::string& name);

/// The six Stiefel-manifold step methods compared against each other.
inline constexpr FlopMethod kStiefelMethods[] = {FlopMethod::RgdCQr, FlopMethod::RgdEQr,
                                                 FlopMethod::RgdCC,  FlopMethod::RgdEC,
                                                 FlopMethod::Own,    FlopMethod::Tcwy};

/// For Stiefel methods `m` is the column count M; for the CWY/HR apply rows
/// `m` is the reflection count L and `t` the number of applied columns.
struct FlopDims {
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::int64_t t = 1;
};

struct FlopEstimate {
  FlopMethod method;
  FlopDims dims;
  Rational flops;

  /// Nearest integer, halves rounded up.
  std::int64_t rounded() const;
};

/// Leading-term FLOP model of a forward step:
///   RGD-C-QR 10NM^2 - 2M^3/3      RGD-E-QR 14NM^2 - 2M^3/3
///   RGD-C-C  28NM^2 + 16M^3       RGD-E-C  72NM^2 + 25M^3
///   OWN      4NM^2 + 14M^3/3      T-CWY    4NM^2 + 7M^3/3
///   CWY apply (T columns, L reflections) 4TLN + 2L^2N + L^3/3
///   HR apply 4TLN
FlopEstimate estimate(FlopMethod method, const FlopDims& dims);

enum class FlopKernel { Gemm, TriangularSolve, Tcwy, CwyApply, HrApply };

struct KernelDims {
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;
  std::int64_t d3 = 0;
};

/// Runs the implemented kernel on seeded random data with a FlopCounter.
/// Dims: Gemm (d1, d2, d3); TriangularSolve (M, -, -) with one right-hand
/// side; Tcwy (N, M, -); CwyApply and HrApply (N, L, T).
std::uint64_t count_empirical(FlopKernel kernel, const KernelDims& dims);

/// Table of every Stiefel method over the (n, m) grid with m <= n, as CSV
/// "method,n,m,flops_num,flops_den,flops_rounded".
void write_flop_grid_csv(std::ostream& out, const std::vector<std::int64_t>& ns,
                         const std::vector<std::int64_t>& ms);

}  // namespace cwy
