#pragma once

#include "cwy/cwy.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cwy {

struct BenchConfig {
  std::vector<Eigen::Index> sizes{64, 128, 256};
  std::vector<double> l_fracs{1.0};
  Eigen::Index batch = 64;
  int trials = 10;
  int warmup = 2;
  std::uint64_t seed = 1;
  /// Threads for the batched CWY kernels; 0 means all available cores.
  int threads = 0;

  /// Throws InvalidInput unless trials >= 3, sizes are positive and sorted
  /// ascending, batch >= 1 and every L/N ratio lies in (0, 1].
  void validate() const;
};

struct TimingStats {
  double mean_ns = 0.0;
  double stderr_ns = 0.0;
  double median_ns = 0.0;
  int samples = 0;
};

TimingStats summarize(const std::vector<double>& samples_ns);

struct ParamBenchRow {
  std::string method;  // "cwy", "exp" or "cayley"
  Eigen::Index n = 0;
  TimingStats stats;
  double max_residual = 0.0;
  bool ok = false;
};

/// Times materialization of an N x N orthogonal matrix by CWY (L = N),
/// matrix exponential and Cayley map. Trial i at size N draws the reflection
/// vectors and the skew generator X - X^T from the same seeded stream for
/// every method. Results failing ||Q^T Q - I||_F < 1e-10 N are discarded.
std::vector<ParamBenchRow> bench_param(const BenchConfig& config);

struct ApplyBenchRow {
  Eigen::Index n = 0;
  Eigen::Index l = 0;
  Eigen::Index batch = 0;
  int cwy_threads = 0;
  int hr_threads = 1;
  TimingStats cwy;
  TimingStats hr;
  TimingStats build;
  double ratio_median = 0.0;  // hr / cwy
  double max_abs_diff = 0.0;
  bool ok = false;
};

/// Times the batched CWY apply against sequential reflections on identical
/// stacks and inputs; every trial is gated on max|CWY - HR| < 1e-11 L.
std::vector<ApplyBenchRow> bench_apply(const BenchConfig& config);

void write_param_csv(std::ostream& out, const std::vector<ParamBenchRow>& rows);
void write_apply_csv(std::ostream& out, const std::vector<ApplyBenchRow>& rows);

/// Number of threads used when BenchConfig::threads is 0.
int available_threads();

}  // namespace cwy
