// Command-line front end: parametrization and apply benchmarks, SGD demos,
// constructive decompositions and the FLOP model grid.

#include "cwy/bench.hpp"
#include "cwy/flops.hpp"
#include "cwy/optim.hpp"
#include "cwy/tcwy.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(cwy::ErrorKind kind) {
  switch (kind) {
    case cwy::ErrorKind::InvalidInput:
    case cwy::ErrorKind::ShapeMismatch:
    case cwy::ErrorKind::DimensionMismatch:
    case cwy::ErrorKind::NotOrthogonal:
    case cwy::ErrorKind::NotOnManifold:
    case cwy::ErrorKind::WrongDeterminant:
    case cwy::ErrorKind::RequiresStrictTruncation:
    case cwy::ErrorKind::UnknownMethod:
      return kExitValidation;
    default:
      return kExitNumerical;
  }
}

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw cwy::Error(cwy::ErrorKind::InvalidInput, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct CommonFlags {
  std::vector<Eigen::Index> sizes{64, 128, 256};
  std::vector<double> l_fracs{1.0};
  Eigen::Index batch = 64;
  int trials = 10;
  int warmup = 2;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;

  cwy::BenchConfig config() const {
    cwy::BenchConfig c;
    c.sizes = sizes;
    c.l_fracs = l_fracs;
    c.batch = batch;
    c.trials = trials;
    c.warmup = warmup;
    c.seed = seed;
    c.threads = threads;
    return c;
  }
};

void add_bench_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--sizes", f.sizes, "Matrix sizes N, ascending")->delimiter(',');
  cmd->add_option("--l-frac", f.l_fracs, "Reflection count ratios L/N")->delimiter(',');
  cmd->add_option("--batch", f.batch, "Columns applied per trial");
  cmd->add_option("--trials", f.trials, "Timed repetitions (>= 3)");
  cmd->add_option("--warmup", f.warmup, "Untimed repetitions");
  cmd->add_option("--seed", f.seed, "Input seed");
  cmd->add_option("--threads", f.threads, "Threads for batched kernels (0 = all cores)");
  cmd->add_option("--out", f.out, "CSV output path (default stdout)");
}

int cmd_bench_param(const CommonFlags& f) {
  const auto rows = cwy::bench_param(f.config());
  Output out(f.out);
  cwy::write_param_csv(out.stream(), rows);
  for (const auto& r : rows) {
    if (!r.ok) return kExitNumerical;
  }
  return 0;
}

int cmd_bench_apply(const CommonFlags& f) {
  const auto rows = cwy::bench_apply(f.config());
  Output out(f.out);
  cwy::write_apply_csv(out.stream(), rows);
  for (const auto& r : rows) {
    if (!r.ok) return kExitNumerical;
  }
  return 0;
}

struct DemoFlags {
  std::string task = "procrustes_on";
  Eigen::Index n = 8;
  Eigen::Index m = 3;
  std::uint64_t iters = 20000;
  double grad_tol = 1e-6;
  double noise_sigma = 0.0;
  double eta0 = 1.0;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_demo(const DemoFlags& f) {
  cwy::Rng rng(f.seed);
  cwy::Report report;
  if (f.task == "procrustes_on") {
    // Planted optimum: B = Q* A with Q* drawn from the component N
    // reflections reach.
    const cwy::Matrix q_star =
        cwy::materialize(cwy::build_factors(cwy::random_stack(f.n, f.n, rng)));
    const cwy::Matrix a = cwy::qf(cwy::standard_normal(f.n, f.n, rng)).q;
    cwy::ProcrustesObjective objective(a, q_star * a, f.noise_sigma, f.seed + 1);
    cwy::SgdState state{cwy::random_stack(f.n, f.n, rng)};
    report = cwy::run(std::move(state), objective, f.iters, f.grad_tol, {f.eta0});
  } else if (f.task == "procrustes_st") {
    if (f.m >= f.n) throw cwy::Error(cwy::ErrorKind::InvalidInput, "procrustes_st needs m < n");
    cwy::TraceObjective objective(cwy::standard_normal(f.n, f.m, rng), f.noise_sigma, f.seed + 1);
    cwy::SgdState state{cwy::random_stack(f.n, f.m, rng)};
    report = cwy::stiefel_sgd(std::move(state), objective, f.iters, f.grad_tol, f.eta0);
  } else {
    throw cwy::Error(cwy::ErrorKind::InvalidInput, "unknown task " + f.task);
  }
  Output out(f.out);
  cwy::write_report_csv(out.stream(), report);
  return 0;
}

int cmd_decompose(const std::string& input, const std::string& mode, const std::string& out_path) {
  const cwy::Matrix m = cwy::read_matrix_file(input);
  cwy::HouseholderStack stack;
  double error = 0.0;
  double tolerance = 0.0;
  if (mode == "orthogonal") {
    stack = cwy::decompose(m);
    error = (cwy::apply_stack(stack, cwy::Matrix::Identity(m.rows(), m.rows())) - m).norm();
    tolerance = 1e-9 * static_cast<double>(m.rows());
  } else if (mode == "stiefel") {
    const cwy::StiefelPoint point(m);
    stack = cwy::decompose_stiefel(point);
    error = (cwy::gamma(stack).omega() - m).norm();
    tolerance = 1e-9 * static_cast<double>(m.cols());
  } else {
    throw cwy::Error(cwy::ErrorKind::InvalidInput, "mode must be orthogonal or stiefel");
  }
  if (!(error <= tolerance)) {
    std::cerr << "round-trip error " << error << " exceeds " << tolerance << '\n';
    return kExitNumerical;
  }
  Output out(out_path);
  std::ostream& os = out.stream();
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < stack.l(); ++i) {
    for (Eigen::Index j = 0; j < stack.n(); ++j) {
      if (j != 0) os << ' ';
      os << stack.vectors()(j, i);
    }
    os << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compact WY orthogonal and Stiefel parametrizations"};
  app.require_subcommand(1);

  CommonFlags param_flags;
  auto* bench_param = app.add_subcommand("bench-param", "Time CWY vs exp vs Cayley materialization");
  add_bench_flags(bench_param, param_flags);

  CommonFlags apply_flags;
  auto* bench_apply = app.add_subcommand("bench-apply", "Time batched CWY apply vs sequential reflections");
  add_bench_flags(bench_apply, apply_flags);

  DemoFlags demo_flags;
  auto* demo = app.add_subcommand("demo", "Run an SGD demo and write its report CSV");
  demo->add_option("--task", demo_flags.task, "procrustes_on | procrustes_st")
      ->check(CLI::IsMember({"procrustes_on", "procrustes_st"}));
  demo->add_option("--n", demo_flags.n, "Dimension N");
  demo->add_option("--m", demo_flags.m, "Stiefel column count M (procrustes_st)");
  demo->add_option("--iters", demo_flags.iters, "Maximum iterations");
  demo->add_option("--grad-tol", demo_flags.grad_tol, "Stop when min squared gradient norm is below");
  demo->add_option("--noise-sigma", demo_flags.noise_sigma, "Gradient noise standard deviation");
  demo->add_option("--eta0", demo_flags.eta0, "Step scale (1 = k^-1/2 schedule)");
  demo->add_option("--seed", demo_flags.seed, "Seed");
  demo->add_option("--out", demo_flags.out, "CSV output path (default stdout)");

  std::string dec_input;
  std::string dec_mode = "orthogonal";
  std::string dec_out;
  auto* decompose = app.add_subcommand("decompose", "Decompose a matrix file into reflection vectors");
  decompose->add_option("input", dec_input, "Matrix text file")->required();
  decompose->add_option("--mode", dec_mode, "orthogonal | stiefel");
  decompose->add_option("--out", dec_out, "Vector file path (default stdout)");

  std::vector<std::int64_t> flop_ns{32, 64, 128, 256, 512, 1024};
  std::vector<std::int64_t> flop_ms{4, 8, 16, 32, 64};
  std::string flop_out;
  auto* flops = app.add_subcommand("flops", "Emit the FLOP model grid as CSV");
  flops->add_option("--sizes", flop_ns, "N values")->delimiter(',');
  flops->add_option("--m-sizes", flop_ms, "M values")->delimiter(',');
  flops->add_option("--out", flop_out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*bench_param) return cmd_bench_param(param_flags);
    if (*bench_apply) return cmd_bench_apply(apply_flags);
    if (*demo) return cmd_demo(demo_flags);
    if (*decompose) return cmd_decompose(dec_input, dec_mode, dec_out);
    if (*flops) {
      Output out(flop_out);
      cwy::write_flop_grid_csv(out.stream(), flop_ns, flop_ms);
      return 0;
    }
  } catch (const cwy::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
