#include "cwy/bench.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace cwy;

namespace {

BenchConfig small_config() {
  BenchConfig c;
  c.sizes = {8, 16};
  c.l_fracs = {0.5, 1.0};
  c.batch = 4;
  c.trials = 3;
  c.warmup = 1;
  c.threads = 1;
  return c;
}

}  // namespace

TEST(BenchConfigValidation, RejectsBadConfigs) {
  EXPECT_NO_THROW(small_config().validate());
  BenchConfig c = small_config();
  c.trials = 2;
  EXPECT_THROW(c.validate(), Error);
  c = small_config();
  c.sizes = {16, 8};
  EXPECT_THROW(c.validate(), Error);
  c = small_config();
  c.sizes = {};
  EXPECT_THROW(c.validate(), Error);
  c = small_config();
  c.sizes = {0, 4};
  EXPECT_THROW(c.validate(), Error);
  c = small_config();
  c.l_fracs = {1.5};
  EXPECT_THROW(c.validate(), Error);
  c = small_config();
  c.l_fracs = {0.0};
  EXPECT_THROW(c.validate(), Error);
  c = small_config();
  c.batch = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Summarize, Statistics) {
  const TimingStats s = summarize({4.0, 1.0, 3.0, 2.0});
  EXPECT_DOUBLE_EQ(s.mean_ns, 2.5);
  EXPECT_DOUBLE_EQ(s.median_ns, 2.5);
  EXPECT_NEAR(s.stderr_ns, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(s.samples, 4);
  EXPECT_EQ(summarize({}).samples, 0);
  EXPECT_DOUBLE_EQ(summarize({5.0, 1.0, 9.0}).median_ns, 5.0);
}

TEST(BenchParam, AllMethodsPassGate) {
  const auto rows = bench_param(small_config());
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.ok) << r.method << " " << r.n;
    EXPECT_EQ(r.stats.samples, 3);
    EXPECT_LT(r.max_residual, 1e-10 * static_cast<double>(r.n));
    EXPECT_GT(r.stats.mean_ns, 0.0);
  }
  std::ostringstream csv;
  write_param_csv(csv, rows);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "method,n,mean_ns,stderr_ns,median_ns,samples,max_residual,status");
}

TEST(BenchApply, EquivalenceGateAndShape) {
  const auto rows = bench_apply(small_config());
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].l, 4);
  EXPECT_EQ(rows[1].l, 8);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.ok);
    EXPECT_LT(r.max_abs_diff, 1e-11 * static_cast<double>(r.l));
    EXPECT_EQ(r.cwy.samples, 3);
    EXPECT_EQ(r.hr_threads, 1);
    EXPECT_GT(r.ratio_median, 0.0);
  }
  std::ostringstream csv;
  write_apply_csv(csv, rows);
  const std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

TEST(BenchApply, DegenerateSingleReflection) {
  BenchConfig c = small_config();
  c.sizes = {1, 3};
  c.l_fracs = {0.01};
  c.batch = 1;
  const auto rows = bench_apply(c);
  for (const auto& r : rows) {
    EXPECT_EQ(r.l, 1);
    EXPECT_TRUE(r.ok);
  }
}

TEST(BenchParam, SameSeedSameResiduals) {
  BenchConfig c = small_config();
  c.sizes = {12};
  const auto a = bench_param(c);
  const auto b = bench_param(c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].max_residual, b[i].max_residual);
}
