#include "cwy/bench.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <thread>

namespace cwy {

void BenchConfig::validate() const {
  if (trials < 3) throw Error(ErrorKind::InvalidInput, "trials must be >= 3");
  if (warmup < 0) throw Error(ErrorKind::InvalidInput, "warmup must be >= 0");
  if (batch < 1) throw Error(ErrorKind::InvalidInput, "batch must be >= 1");
  if (threads < 0) throw Error(ErrorKind::InvalidInput, "threads must be >= 0");
  if (sizes.empty()) throw Error(ErrorKind::InvalidInput, "no sizes given");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw Error(ErrorKind::InvalidInput, "sizes must be positive");
    if (i > 0 && sizes[i] < sizes[i - 1]) {
      throw Error(ErrorKind::InvalidInput, "sizes must be sorted ascending");
    }
  }
  for (double f : l_fracs) {
    if (!(f > 0.0 && f <= 1.0)) throw Error(ErrorKind::InvalidInput, "L/N ratios must lie in (0, 1]");
  }
}

int available_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

TimingStats summarize(const std::vector<double>& samples) {
  TimingStats s;
  s.samples = static_cast<int>(samples.size());
  if (samples.empty()) return s;
  const double n = static_cast<double>(samples.size());
  s.mean_ns = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double x : samples) ss += (x - s.mean_ns) * (x - s.mean_ns);
    s.stderr_ns = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median_ns = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ns(F&& fn) {
  const auto start = Clock::now();
  fn();
  const auto stop = Clock::now();
  return std::chrono::duration<double, std::nano>(stop - start).count();
}

std::uint64_t trial_seed(std::uint64_t seed, Eigen::Index n, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(trial)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

struct ParamInputs {
  Matrix vectors;
  Matrix skew;
};

ParamInputs draw_param_inputs(std::uint64_t seed, Eigen::Index n, int trial) {
  Rng rng(trial_seed(seed, n, trial));
  ParamInputs in;
  in.vectors = standard_normal(n, n, rng);
  const Matrix x = standard_normal(n, n, rng);
  in.skew = x - x.transpose();
  return in;
}

class ThreadScope {
 public:
  explicit ThreadScope(int threads) : saved_(Eigen::nbThreads()) { Eigen::setNbThreads(threads); }
  ~ThreadScope() { Eigen::setNbThreads(saved_); }
  ThreadScope(const ThreadScope&) = delete;
  ThreadScope& operator=(const ThreadScope&) = delete;

 private:
  int saved_;
};

}  // namespace

std::vector<ParamBenchRow> bench_param(const BenchConfig& config) {
  config.validate();
  const int threads = config.threads == 0 ? available_threads() : config.threads;
  ThreadScope scope(threads);

  std::vector<ParamBenchRow> rows;
  for (Eigen::Index n : config.sizes) {
    for (const std::string method : {"cwy", "exp", "cayley"}) {
      auto run = [&](const ParamInputs& in) -> Matrix {
        if (method == "cwy") return materialize(build_factors(HouseholderStack(in.vectors)));
        if (method == "exp") return matrix_exp(in.skew);
        return cayley(in.skew);
      };
      ParamBenchRow row;
      row.method = method;
      row.n = n;
      row.ok = true;
      for (int w = 0; w < config.warmup; ++w) run(draw_param_inputs(config.seed, n, -1 - w));

      std::vector<double> samples;
      for (int t = 0; t < config.trials; ++t) {
        const ParamInputs in = draw_param_inputs(config.seed, n, t);
        Matrix q;
        const double ns = time_ns([&] { q = run(in); });
        const double residual = orthogonality_residual(q);
        row.max_residual = std::max(row.max_residual, residual);
        if (!(residual < 1e-10 * static_cast<double>(n))) {
          row.ok = false;
          continue;
        }
        samples.push_back(ns);
      }
      row.stats = summarize(samples);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<ApplyBenchRow> bench_apply(const BenchConfig& config) {
  config.validate();
  const int threads = config.threads == 0 ? available_threads() : config.threads;

  std::vector<ApplyBenchRow> rows;
  for (Eigen::Index n : config.sizes) {
    for (double frac : config.l_fracs) {
      const Eigen::Index l = std::clamp<Eigen::Index>(
          static_cast<Eigen::Index>(std::llround(frac * static_cast<double>(n))), 1, n);
      ApplyBenchRow row;
      row.n = n;
      row.l = l;
      row.batch = config.batch;
      row.cwy_threads = threads;
      row.hr_threads = 1;
      row.ok = true;

      std::vector<double> cwy_ns;
      std::vector<double> hr_ns;
      std::vector<double> build_ns;
      for (int t = -config.warmup; t < config.trials; ++t) {
        Rng rng(trial_seed(config.seed, n * 131 + l, t));
        const HouseholderStack stack(standard_normal(n, l, rng));
        const Matrix x = standard_normal(n, config.batch, rng);

        CwyFactors factors;
        Matrix via_cwy;
        Matrix via_hr;
        double b_ns = 0.0;
        double c_ns = 0.0;
        {
          ThreadScope scope(threads);
          b_ns = time_ns([&] { factors = build_factors(stack); });
          c_ns = time_ns([&] { via_cwy = apply(factors, x); });
        }
        double h_ns = 0.0;
        {
          ThreadScope scope(1);
          h_ns = time_ns([&] { via_hr = apply_stack(stack, x); });
        }
        if (t < 0) continue;

        const double diff = (via_cwy - via_hr).cwiseAbs().maxCoeff();
        row.max_abs_diff = std::max(row.max_abs_diff, diff);
        if (!(diff < 1e-11 * static_cast<double>(l))) {
          row.ok = false;
          continue;
        }
        cwy_ns.push_back(c_ns);
        hr_ns.push_back(h_ns);
        build_ns.push_back(b_ns);
      }
      row.cwy = summarize(cwy_ns);
      row.hr = summarize(hr_ns);
      row.build = summarize(build_ns);
      row.ratio_median = row.cwy.median_ns > 0.0 ? row.hr.median_ns / row.cwy.median_ns : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_param_csv(std::ostream& out, const std::vector<ParamBenchRow>& rows) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "method,n,mean_ns,stderr_ns,median_ns,samples,max_residual,status\n";
  out << std::setprecision(17);
  for (const ParamBenchRow& r : rows) {
    out << r.method << ',' << r.n << ',' << r.stats.mean_ns << ',' << r.stats.stderr_ns << ','
        << r.stats.median_ns << ',' << r.stats.samples << ',' << r.max_residual << ','
        << (r.ok ? "ok" : "failed") << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

void write_apply_csv(std::ostream& out, const std::vector<ApplyBenchRow>& rows) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "n,l,batch,cwy_threads,hr_threads,cwy_mean_ns,cwy_stderr_ns,cwy_median_ns,"
         "hr_mean_ns,hr_stderr_ns,hr_median_ns,build_mean_ns,ratio_median,max_abs_diff,status\n";
  out << std::setprecision(17);
  for (const ApplyBenchRow& r : rows) {
    out << r.n << ',' << r.l << ',' << r.batch << ',' << r.cwy_threads << ',' << r.hr_threads << ','
        << r.cwy.mean_ns << ',' << r.cwy.stderr_ns << ',' << r.cwy.median_ns << ','
        << r.hr.mean_ns << ',' << r.hr.stderr_ns << ',' << r.hr.median_ns << ','
        << r.build.mean_ns << ',' << r.ratio_median << ',' << r.max_abs_diff << ','
        << (r.ok ? "ok" : "failed") << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace cwy
