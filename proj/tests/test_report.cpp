#include <gtest/gtest.h>

#include <cmath>

#include "ccsp/oracle.hpp"
#include "ccsp/report.hpp"

using namespace ccsp;
using nlohmann::json;

TEST(Report, SolveEnvelope) {
  const auto pl = gen_planted_nae3(10, 0.05, 2);
  SolveOptions opts;
  opts.emit_trace = true;
  const json rep = run_solve(pl.instance, opts);
  EXPECT_EQ(rep["schema"], kReportSchema);
  EXPECT_EQ(rep["version"], toolkit_version());
  EXPECT_EQ(rep["command"], "solve");
  EXPECT_EQ(rep["instance_hash"], hash_string(AnyInstance(pl.instance)));
  EXPECT_TRUE(rep["lp"]["pd_check"]["passes"].get<bool>());
  ASSERT_EQ(rep["outputs"].size(), 2u);
  EXPECT_EQ(rep["outputs"][0]["name"], "round_pd");
  EXPECT_NEAR(rep["opt"].get<double>(), brute_opt(pl.instance).value, 1e-12);
  EXPECT_TRUE(rep["trace"].contains("records"));
}

TEST(Report, SolveIsReproducible) {
  const auto inst = gen_planted_nae3(11, 0.05, 7).instance;
  SolveOptions opts;
  json a = run_solve(inst, opts), b = run_solve(inst, opts);
  a.erase("wall_time");
  b.erase("wall_time");
  EXPECT_EQ(a, b);
}

TEST(Report, DecideWitness) {
  const auto k = nae_to_kcsp(gen_planted_nae3(8, 0.0, 1).instance);
  const json rep = run_decide(k, {}, true);
  EXPECT_EQ(rep["verdict"], "yes");
  const auto w = Assignment::from_string(rep["witness"].get<std::string>());
  EXPECT_EQ(count_violated(k, w), 0u);
}

TEST(Report, OracleCount) {
  const auto pl = gen_planted_nae3(7, 0.0, 3);
  const json rep = run_oracle(pl.instance, true);
  EXPECT_EQ(rep["verdict"], "yes");
  // Complement symmetry: optima come in pairs.
  EXPECT_EQ(rep["count"].get<std::uint64_t>() % 2, 0u);
}

TEST(Report, BenchRecordsFailures) {
  const json suite{{"n", {8}}, {"p", {0.0}}, {"seeds", {1, 2}}, {"degree", {3, 2}}};
  const json rep = run_bench(suite);
  EXPECT_EQ(rep["aggregate"]["count"], 4);
  EXPECT_EQ(rep["aggregate"]["failures"], 2);
  for (const auto& r : rep["runs"])
    if (r["degree"] == 2) EXPECT_EQ(r["error"]["name"], error_code_name(ErrorCode::kInvalidArgument));
}

TEST(Report, Median) {
  EXPECT_EQ(median_of({3, 1, 2}), 2.0);
  EXPECT_EQ(median_of({4, 1, 2, 3}), 2.5);
  EXPECT_TRUE(std::isnan(median_of({})));
  EXPECT_EQ(median_of({1, INFINITY, 5}), 3.0);
}

TEST(Report, ErrorRecord) {
  const json e = error_record(ErrorCode::kSize, "too big");
  EXPECT_EQ(e["error"]["code"], 4);
  EXPECT_EQ(e["error"]["message"], "too big");
}
