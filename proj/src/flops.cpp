#include "cwy/flops.hpp"

#include "cwy/tcwy.hpp"

#include <ostream>

namespace cwy {

const char* to_string(FlopMethod method) {
  switch (method) {
    case FlopMethod::RgdCQr: return "RGD-C-QR";
    case FlopMethod::RgdEQr: return "RGD-E-QR";
    case FlopMethod::RgdCC: return "RGD-C-C";
    case FlopMethod::RgdEC: return "RGD-E-C";
    case FlopMethod::Own: return "OWN";
    case FlopMethod::Tcwy: return "T-CWY";
    case FlopMethod::CwyApply: return "CWY-apply";
    case FlopMethod::HrApply: return "HR-apply";
  }
  return "?";
}

FlopMethod parse_flop_method(const std::string& name) {
  for (FlopMethod m : {FlopMethod::RgdCQr, FlopMethod::RgdEQr, FlopMethod::RgdCC, FlopMethod::RgdEC,
                       FlopMethod::Own, FlopMethod::Tcwy, FlopMethod::CwyApply, FlopMethod::HrApply}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorKind::UnknownMethod, name);
}

std::int64_t FlopEstimate::rounded() const {
  const Rational twice = flops * 2 + 1;
  // floor((2x + 1) / 2) for x >= 0.
  return twice.numerator() / (twice.denominator() * 2);
}

FlopEstimate estimate(FlopMethod method, const FlopDims& dims) {
  if (dims.n < 0 || dims.m < 0 || dims.t < 0) throw Error(ErrorKind::InvalidInput, "negative dims");
  if (dims.m > dims.n) throw Error(ErrorKind::InvalidInput, "model requires N >= M");
  const Rational n(dims.n);
  const Rational m(dims.m);
  const Rational t(dims.t);
  const Rational nm2 = n * m * m;
  const Rational m3 = m * m * m;

  Rational flops;
  switch (method) {
    case FlopMethod::RgdCQr: flops = 10 * nm2 - Rational(2, 3) * m3; break;
    case FlopMethod::RgdEQr: flops = 14 * nm2 - Rational(2, 3) * m3; break;
    case FlopMethod::RgdCC: flops = 28 * nm2 + 16 * m3; break;
    case FlopMethod::RgdEC: flops = 72 * nm2 + 25 * m3; break;
    case FlopMethod::Own: flops = 4 * nm2 + Rational(14, 3) * m3; break;
    case FlopMethod::Tcwy: flops = 4 * nm2 + Rational(7, 3) * m3; break;
    case FlopMethod::CwyApply: flops = 4 * t * m * n + 2 * nm2 + Rational(1, 3) * m3; break;
    case FlopMethod::HrApply: flops = 4 * t * m * n; break;
  }
  return {method, dims, flops};
}

std::uint64_t count_empirical(FlopKernel kernel, const KernelDims& dims) {
  Rng rng(20240611);
  FlopCounter counter;
  const auto d1 = static_cast<Eigen::Index>(dims.d1);
  const auto d2 = static_cast<Eigen::Index>(dims.d2);
  const auto d3 = static_cast<Eigen::Index>(dims.d3);
  switch (kernel) {
    case FlopKernel::Gemm:
      gemm(standard_normal(d1, d2, rng), standard_normal(d2, d3, rng), &counter);
      break;
    case FlopKernel::TriangularSolve: {
      Matrix s = standard_normal(d1, d1, rng);
      s.diagonal().setOnes();
      triangular_solve(UpperTriangular(s), standard_normal(d1, 1, rng), &counter);
      break;
    }
    case FlopKernel::Tcwy:
      gamma(HouseholderStack(standard_normal(d1, d2, rng)), &counter);
      break;
    case FlopKernel::CwyApply: {
      const HouseholderStack stack(standard_normal(d1, d2, rng));
      apply(build_factors(stack, &counter), standard_normal(d1, d3, rng), &counter);
      break;
    }
    case FlopKernel::HrApply:
      apply_stack(HouseholderStack(standard_normal(d1, d2, rng)), standard_normal(d1, d3, rng),
                  &counter);
      break;
  }
  return counter.flops;
}

void write_flop_grid_csv(std::ostream& out, const std::vector<std::int64_t>& ns,
                         const std::vector<std::int64_t>& ms) {
  out << "method,n,m,flops_num,flops_den,flops_rounded\n";
  for (std::int64_t n : ns) {
    for (std::int64_t m : ms) {
      if (m > n) continue;
      for (FlopMethod method : kStiefelMethods) {
        const FlopEstimate e = estimate(method, {n, m, 1});
        out << to_string(method) << ',' << n << ',' << m << ',' << e.flops.numerator() << ','
            << e.flops.denominator() << ',' << e.rounded() << '\n';
      }
    }
  }
}

}  // namespace cwy
