#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cli/commands.hpp"
#include "oinfo/data_model.hpp"
#include "oinfo/gaussian_info.hpp"
#include "oinfo/records_io.hpp"
#include "support/synthetic.hpp"

namespace fs = std::filesystem;
using oinfo::io::Json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  args.insert(args.begin(), "--quiet");
  const int code = oinfo::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("oinfo_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& contents) const {
    std::ofstream(dir_ / name) << contents;
    return (dir_ / name).string();
  }
  std::string save_matrix(const std::string& name, const oinfo::CorrelationMatrix& m) const {
    const auto path = dir_ / name;
    oinfo::data::save_matrix_csv(path, m.values(), {});
    return path.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, MeasuresOnIdentityAreZero) {
  const auto cov = save_matrix("id5.csv", oinfo::CorrelationMatrix::identity(5));
  const auto r = run({"measures", "--cov", cov, "--subset", "0,1,2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["units"], "nats");
  for (const char* key : {"total_correlation", "dual_total_correlation", "o_information", "s_information",
                          "description_complexity", "normalized_o"})
    EXPECT_NEAR(j[key].get<double>(), 0.0, 1e-15) << key;
  EXPECT_EQ(r.out.find("-0.0"), std::string::npos);
}

TEST_F(CliTest, MeasuresCoInformationMatchesOmega) {
  const auto cov = write("xorlike3.csv", "1,0,0.6\n0,1,0.6\n0.6,0.6,1\n");
  const auto r = run({"measures", "--cov", cov, "--subset", "0,1,2", "--also-coinfo"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_LT(j["o_information"].get<double>(), 0.0);
  EXPECT_NEAR(j["o_information"].get<double>(), j["co_information"].get<double>(), 1e-9);
}

TEST_F(CliTest, MeasuresSelectionAndBits) {
  const auto cov = write("pair.csv", "a,b\n1,0.5\n0.5,1\n");
  const auto r = run({"--log-base", "bits", "measures", "--cov", cov, "--subset", "0,1", "--measures", "tc,dtc"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["units"], "bits");
  EXPECT_NEAR(j["total_correlation"].get<double>(), -0.5 * std::log2(0.75), 1e-15);
  EXPECT_FALSE(j.contains("o_information"));
  EXPECT_EQ(run({"measures", "--cov", cov, "--subset", "0,1", "--measures", "o"}).code, 64);
}

TEST_F(CliTest, ExitCodes) {
  const auto cov = save_matrix("id5.csv", oinfo::CorrelationMatrix::identity(5));
  const auto out_of_range = run({"measures", "--cov", cov, "--subset", "0,1,7"});
  EXPECT_EQ(out_of_range.code, 64);
  EXPECT_NE(out_of_range.err.find("7"), std::string::npos);

  const auto singular = write("dup.csv", "1,1,0.2\n1,1,0.2\n0.2,0.2,1\n");
  EXPECT_EQ(run({"measures", "--cov", singular, "--subset", "0,1,2"}).code, 2);
  EXPECT_EQ(run({"measures", "--cov", singular, "--shrinkage", "0.05", "--subset", "0,1,2"}).code, 0);

  EXPECT_EQ(run({"measures", "--cov", write("bad.csv", "1,x\n0,1\n"), "--subset", "0,1"}).code, 65);
  EXPECT_EQ(run({"measures", "--cov", path("missing.csv"), "--subset", "0,1"}).code, 65);
  EXPECT_EQ(run({"measures", "--subset", "0,1"}).code, 64);
  EXPECT_EQ(run({"measures", "--cov", cov}).code, 64);
  EXPECT_EQ(run({"measures", "--cov", cov, "--subset", "0,1", "--bogus"}).code, 64);
  EXPECT_EQ(run({}).code, 64);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, PrintConfigEchoesDefaults) {
  const auto r = run({"--print-config", "--seed", "9", "anneal", "--cov", "unused.csv", "--k", "4", "--out-dir", "x"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["steps"], 10000);
  EXPECT_EQ(j["t0"], 1.0);
  EXPECT_EQ(j["t_exp"], 0.998619);
  EXPECT_EQ(j["seed"], 9);
  EXPECT_EQ(j["objective"], "o_information");
  EXPECT_EQ(j["direction"], "minimize");
  EXPECT_FALSE(fs::exists("x"));
}

TEST_F(CliTest, SampleIsDeterministicAndWorkerIndependent) {
  const auto cov = save_matrix("m.csv", oinfo::testing::random_correlation(25, 3));
  const auto a = run({"--seed", "5", "sample", "--cov", cov, "--k", "4", "--n", "300", "--out-dir", path("a")});
  const auto b = run({"--seed", "5", "--workers", "4", "sample", "--cov", cov, "--k", "4", "--n", "300",
                      "--out-dir", path("b")});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(path("a/samples.jsonl")), slurp(path("b/samples.jsonl")));
  EXPECT_EQ(slurp(path("a/sample_summary.csv")), slurp(path("b/sample_summary.csv")));

  ::setenv("OINFO_SEED", "5", 1);
  const auto c = run({"sample", "--cov", cov, "--k", "4", "--n", "300", "--out-dir", path("c")});
  ::unsetenv("OINFO_SEED");
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(slurp(path("a/samples.jsonl")), slurp(path("c/samples.jsonl")));

  const auto d = run({"--seed", "6", "sample", "--cov", cov, "--k", "4", "--n", "300", "--out-dir", path("d")});
  EXPECT_NE(slurp(path("a/samples.jsonl")), slurp(path("d/samples.jsonl")));
}

TEST_F(CliTest, SampleSummaryOnIdentity) {
  const auto cov = save_matrix("id.csv", oinfo::CorrelationMatrix::identity(12));
  const auto r = run({"sample", "--cov", cov, "--k", "3", "--n", "40", "--out-dir", path("o")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["fraction_negative"], 0.0);
  const auto summary = slurp(path("o/sample_summary.csv"));
  EXPECT_NE(summary.find("# master_seed: 0"), std::string::npos);
  EXPECT_NE(summary.find("\n3,40,0,0,0,0,0,0,220,0,nats\n"), std::string::npos) << summary;
  const auto neg = run({"sample", "--cov", cov, "--k", "3", "--n", "40", "--filter", "negative", "--out-dir",
                        path("n")});
  EXPECT_EQ(neg.json()["records_written"], 0);
  EXPECT_EQ(run({"sample", "--cov", cov, "--k", "13", "--n", "4", "--out-dir", path("x")}).code, 64);
}

TEST_F(CliTest, StratifiedSample) {
  const auto cov = save_matrix("blocks.csv", oinfo::testing::block_model(4, 5, 0.6, 0.05));
  std::string labels;
  for (int i = 0; i < 20; ++i) labels += std::to_string(i) + ",S" + std::to_string(i / 5) + "\n";
  const auto lab = write("labels.csv", labels);
  const auto r = run({"sample", "--cov", cov, "--k", "4", "--n", "30", "--labels", lab, "--systems", "2",
                      "--out-dir", path("s")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto stream = oinfo::io::read_jsonl(path("s/samples.jsonl"));
  ASSERT_EQ(stream.lines.size(), 30u);
  for (const auto& line : stream.lines) {
    std::set<std::size_t> systems;
    for (auto v : line["subset"]) systems.insert(v.get<std::size_t>() / 5);
    EXPECT_EQ(systems.size(), 2u);
  }
  EXPECT_EQ(run({"sample", "--cov", cov, "--k", "4", "--n", "3", "--labels", lab, "--out-dir", path("t")}).code, 64);
}

TEST_F(CliTest, AnnealIdentityAndSingleFactor) {
  const auto id = save_matrix("id.csv", oinfo::CorrelationMatrix::identity(10));
  const auto r = run({"anneal", "--cov", id, "--k-range", "3:5", "--runs", "3", "--steps", "200", "--out-dir",
                      path("id")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& level : r.json()["levels"]) EXPECT_NEAR(level["best_overall"].get<double>(), 0.0, 1e-12);
  const auto stream = oinfo::io::read_jsonl(path("id/anneal_runs.jsonl"));
  EXPECT_EQ(stream.lines.size(), 9u);
  EXPECT_EQ(stream.header["config"]["subset_sizes"], Json::array({3, 4, 5}));

  const auto sf = oinfo::testing::single_factor(12, 0.7);
  const auto cov = save_matrix("sf.csv", sf);
  const auto s = run({"anneal", "--cov", cov, "--k", "3", "--runs", "4", "--steps", "300", "--out-dir", path("sf")});
  ASSERT_EQ(s.code, 0) << s.err;
  const double best = s.json()["levels"][0]["best_overall"].get<double>();
  EXPECT_GT(best, 0.0);
  EXPECT_NEAR(best, oinfo::gaussian::o_information(sf, oinfo::Subset{0, 1, 2}), 1e-12);
  const auto summary = slurp(path("sf/anneal_summary.csv"));
  EXPECT_NE(summary.find("k,runs,mean_best,min_best,max_best,best_overall,unique_best_subsets"), std::string::npos);
}

TEST_F(CliTest, AnnealOptionsAreValidated) {
  const auto id = save_matrix("id.csv", oinfo::CorrelationMatrix::identity(6));
  EXPECT_EQ(run({"anneal", "--cov", id, "--out-dir", path("a")}).code, 64);
  EXPECT_EQ(run({"anneal", "--cov", id, "--k", "3", "--t-exp", "1.5", "--out-dir", path("a")}).code, 64);
  EXPECT_EQ(run({"anneal", "--cov", id, "--k", "3", "--flip-probs", "1,2", "--out-dir", path("a")}).code, 64);
  EXPECT_EQ(run({"anneal", "--cov", id, "--k-range", "5:3", "--out-dir", path("a")}).code, 64);
  const auto max = run({"anneal", "--cov", id, "--k", "3", "--steps", "50", "--objective", "tc", "--maximize",
                        "--trajectory", "--out-dir", path("m")});
  ASSERT_EQ(max.code, 0) << max.err;
  const auto stream = oinfo::io::read_jsonl(path("m/anneal_runs.jsonl"));
  EXPECT_EQ(stream.lines[0]["trajectory"].size(), 50u);
}

TEST_F(CliTest, Tse) {
  const auto id = save_matrix("id.csv", oinfo::CorrelationMatrix::identity(8));
  const auto zero = run({"tse", "--cov", id, "--subset", "0-5"});
  ASSERT_EQ(zero.code, 0) << zero.err;
  EXPECT_NEAR(zero.json()["tse"].get<double>(), 0.0, 1e-12);

  const auto cov = save_matrix("r.csv", oinfo::testing::random_correlation(24, 1));
  const auto eight = run({"tse", "--cov", cov, "--subset", "0-7"});
  ASSERT_EQ(eight.code, 0) << eight.err;
  EXPECT_NEAR(eight.json()["tse"].get<double>(), eight.json()["bipartition_form"].get<double>(), 1e-9);

  const auto big = run({"tse", "--cov", cov, "--subset", "0-19"});
  EXPECT_EQ(big.code, 65);
  EXPECT_NE(big.err.find("sampled"), std::string::npos);
  EXPECT_EQ(run({"tse", "--cov", cov, "--subset", "0-19", "--mode", "sampled"}).code, 64);
  const auto sampled =
      run({"tse", "--cov", cov, "--subset", "0-19", "--mode", "sampled", "--samples-per-scale", "20"});
  ASSERT_EQ(sampled.code, 0) << sampled.err;
  EXPECT_EQ(sampled.json()["samples_per_scale"], 20);
}

TEST_F(CliTest, AnalyzeSingleRecord) {
  const auto rec = write("one.jsonl",
                         "{\"type\":\"header\",\"command\":\"sample\",\"master_seed\":1,\"n_nodes\":5}\n"
                         "{\"type\":\"sample\",\"sample_index\":0,\"seed\":1,\"subset\":[0,1,2],\"k\":3,"
                         "\"units\":\"nats\",\"joint_entropy\":4,\"total_correlation\":0.1,"
                         "\"dual_total_correlation\":0.2,\"o_information\":-0.1,\"s_information\":0.3,"
                         "\"description_complexity\":0.0667,\"normalized_o\":-0.0333}\n");
  const auto r = run({"analyze", "--records", rec, "--analyses", "participation", "--out-dir", path("an")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = slurp(path("an/participation.csv"));
  EXPECT_NE(text.find("# source: "), std::string::npos);
  EXPECT_NE(text.find("node,name,count,share\n0,0,1,1\n1,1,1,1\n2,2,1,1\n3,3,0,0\n4,4,0,0\n"), std::string::npos)
      << text;
  EXPECT_EQ(r.json()["qualifying"], 1);
}

TEST_F(CliTest, AnalyzeJaccardOfDisjointSubsets) {
  const auto rec = write("two.jsonl",
                         "{\"type\":\"anneal_run\",\"objective\":\"o_information\",\"best_subset\":[0,1,2],"
                         "\"best_value\":-1}\n"
                         "{\"type\":\"anneal_run\",\"objective\":\"o_information\",\"best_subset\":[3,4,5],"
                         "\"best_value\":-2}\n");
  const auto r = run({"analyze", "--records", rec, "--analyses", "jaccard", "--out-dir", path("j")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = slurp(path("j/jaccard.csv"));
  EXPECT_NE(text.find("record,0,1\n0,1,0\n1,0,1\n"), std::string::npos) << text;
}

TEST_F(CliTest, AnalyzeEnrichmentWithUniformLabels) {
  const auto cov = save_matrix("m.csv", oinfo::testing::random_correlation(12, 4));
  ASSERT_EQ(run({"sample", "--cov", cov, "--k", "3", "--n", "4000", "--out-dir", path("s")}).code, 0);
  std::string labels = "node,system\n";
  for (int i = 0; i < 12; ++i) labels += std::to_string(i) + ",S" + std::to_string(i % 3) + "\n";
  const auto lab = write("labels.csv", labels);
  const auto r = run({"analyze", "--records", path("s/samples.jsonl"), "--cov", cov, "--labels", lab, "--filter",
                      "all", "--out-dir", path("a")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  for (const auto& [system, ratio] : j["enrichment"]["ratio"].items()) EXPECT_NEAR(ratio.get<double>(), 1.0, 0.05);
  EXPECT_TRUE(j.contains("participation_vs_fc"));
  for (const char* f : {"participation.csv", "pair_fc_scatter.csv", "jaccard.csv", "enrichment.csv",
                        "enrichment_by_size.csv", "analysis_summary.json"})
    EXPECT_TRUE(fs::exists(path("a/") + f)) << f;
  EXPECT_EQ(Json::parse(slurp(path("a/analysis_summary.json")))["source"]["master_seed"], 0);
}

TEST_F(CliTest, AnalyzeErrors) {
  const auto id = save_matrix("id.csv", oinfo::CorrelationMatrix::identity(8));
  ASSERT_EQ(run({"sample", "--cov", id, "--k", "3", "--n", "20", "--out-dir", path("s")}).code, 0);
  EXPECT_EQ(run({"analyze", "--records", path("s/samples.jsonl"), "--out-dir", path("a")}).code, 65);
  EXPECT_EQ(run({"analyze", "--records", path("s/samples.jsonl"), "--analyses", "fc", "--out-dir", path("a")}).code,
            64);
  EXPECT_EQ(run({"analyze", "--records", path("s/samples.jsonl"), "--analyses", "fc", "--cov", id, "--filter",
                 "all", "--out-dir", path("a")})
                .code,
            65);
}

TEST_F(CliTest, DiscreteXor) {
  const auto r = run({"discrete", "--xor", "--pair", "0,1", "--given", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["units"], "bits");
  EXPECT_NEAR(j["total_correlation"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["dual_total_correlation"].get<double>(), 2.0, 1e-12);
  EXPECT_NEAR(j["o_information"].get<double>(), -1.0, 1e-12);
  EXPECT_NEAR(j["normalized_o"].get<double>(), -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(j["conditional_mutual_information"].get<double>(), 1.0, 1e-12);
  const auto joint = write("j.csv", "0,0,0.5\n1,1,0.5\n");
  const auto n = run({"--log-base", "nats", "discrete", "--joint", joint});
  ASSERT_EQ(n.code, 0) << n.err;
  EXPECT_NEAR(n.json()["total_correlation"].get<double>(), std::log(2.0), 1e-15);
  EXPECT_EQ(run({"discrete", "--joint", write("bad.csv", "0,0,0.7\n1,1,0.7\n")}).code, 65);
}

TEST_F(CliTest, Extrapolate) {
  const auto r = run({"extrapolate", "--nodes", "200", "--k", "10", "--fraction", "0.0041"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["population"], "22451004309013280");
  EXPECT_EQ(r.json()["count"], "92049117666954");
  EXPECT_EQ(run({"extrapolate", "--nodes", "200", "--k", "10", "--fraction", "41/10000"}).json()["count"],
            "92049117666954");
  EXPECT_EQ(run({"extrapolate", "--nodes", "20", "--k", "3", "--fraction", "abc"}).code, 64);
}

TEST_F(CliTest, CorrelateThenMeasure) {
  Eigen::MatrixXd loadings(4, 1);
  loadings << 0.8, 0.7, 0.6, 0.5;
  std::vector<std::string> runs;
  for (int r = 0; r < 2; ++r) {
    const auto x = oinfo::testing::factor_time_series(loadings, 2000, 10 + static_cast<std::uint64_t>(r));
    std::ostringstream text;
    text << "v1\tv2\tv3\tv4\n";
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      text << x(i, 0) << '\t' << x(i, 1) << '\t' << x(i, 2) << '\t' << x(i, 3) << '\n';
    runs.push_back(write("run" + std::to_string(r) + ".tsv", text.str()));
  }
  const auto r = run({"--delimiter", "tab", "correlate", "--timeseries", runs[0], runs[1], "--out", path("fc.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = oinfo::data::load_correlation_matrix(path("fc.csv"));
  EXPECT_EQ(m.node_names(), (std::vector<std::string>{"v1", "v2", "v3", "v4"}));
  EXPECT_NEAR(m(0, 1), 0.56, 0.05);
  const auto meas = run({"--delimiter", "tab", "measures", "--timeseries", runs[0], runs[1], "--subset", "0-3"});
  ASSERT_EQ(meas.code, 0) << meas.err;
  EXPECT_GT(meas.json()["o_information"].get<double>(), 0.0);
}
