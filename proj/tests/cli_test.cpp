// End-to-end tests for the command-line tool. The binary path arrives via
// the SFPCA_CLI environment variable (set by ctest); every test runs in its
// own scratch directory and checks files, stdout, and exit codes.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sfpca/io.hpp"

namespace fs = std::filesystem;

namespace sfpca {
namespace {

std::string cli_path() {
  const char* p = std::getenv("SFPCA_CLI");
  if (!p) ADD_FAILURE() << "SFPCA_CLI not set; run through ctest";
  return p ? p : "";
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    static int counter = 0;
    dir_ = fs::temp_directory_path() /
           ("sfpca_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir_);
  }
  void TearDown() override {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  // Runs the tool with the given arguments, captures combined output, and
  // returns the exit code (-1 if the process did not exit normally).
  int run(const std::string& args, const std::string& env_prefix = "") {
    const fs::path log = dir_ / "cmd_output.log";
    const std::string cmd =
        env_prefix + "'" + cli_path() + "' " + args + " > '" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    output_ = slurp(log);
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_config(const std::string& text) {
    const std::string p = path("config.ini");
    std::ofstream out(p);
    out << text;
    return p;
  }

  std::string small_lq_config() {
    return write_config("[scenario]\nn = 20\np = 5\nm = 21\ns = 8\n");
  }

  // simulate a small unlabeled dataset into the scratch dir
  void simulate_lq(std::uint64_t seed = 11) {
    ASSERT_EQ(run("simulate --config '" + small_lq_config() + "' --seed " +
                  std::to_string(seed) + " --out '" + dir_.string() + "'"),
              0)
        << output_;
  }

  std::string small_class_config() {
    return write_config(
        "[scenario]\ntype = class\np = 5\nm = 21\ns = 8\n"
        "kappa = 2\nn_train = 12\nn_test = 8\n");
  }

  void simulate_class(std::uint64_t seed = 11) {
    ASSERT_EQ(run("simulate --config '" + small_class_config() + "' --seed " +
                  std::to_string(seed) + " --out '" + dir_.string() + "'"),
              0)
        << output_;
  }

  fs::path dir_;
  std::string output_;
};

TEST_F(CliTest, NoSubcommandIsUsageError) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("fit"), 2) << "missing required --data should be a parse error";
}

TEST_F(CliTest, SimulateWritesDatasetAndTruth) {
  simulate_lq();
  EXPECT_NE(output_.find("simulate: n=20 p=5 m=21 s=8"), std::string::npos) << output_;
  const FunctionalDataset data = load_dataset(path("dataset.sfpc"));
  EXPECT_EQ(data.n(), 20u);
  EXPECT_EQ(data.p(), 5u);
  EXPECT_EQ(data.m(), 21u);
  EXPECT_FALSE(data.labels.has_value());
  const GroundTruth truth = load_truth(path("truth.sfpc"));
  EXPECT_EQ(truth.grid.size(), 21u);
  EXPECT_EQ(truth.x.dim0(), 20u);
}

TEST_F(CliTest, SimulateIsDeterministicInSeed) {
  simulate_lq(7);
  const std::string first = slurp(path("dataset.sfpc"));
  simulate_lq(7);
  EXPECT_EQ(slurp(path("dataset.sfpc")), first);
  simulate_lq(8);
  EXPECT_NE(slurp(path("dataset.sfpc")), first);
}

TEST_F(CliTest, SimulateReplicationsGetSuffixedDistinctFiles) {
  ASSERT_EQ(run("simulate --config '" + small_lq_config() + "' --seed 3 --reps 3 --out '" +
                dir_.string() + "'"),
            0)
      << output_;
  for (const char* name : {"dataset_rep000.sfpc", "dataset_rep001.sfpc",
                           "dataset_rep002.sfpc", "truth_rep000.sfpc"})
    EXPECT_TRUE(fs::exists(dir_ / name)) << name;
  EXPECT_FALSE(fs::exists(dir_ / "dataset.sfpc"));
  EXPECT_NE(slurp(path("dataset_rep000.sfpc")), slurp(path("dataset_rep001.sfpc")));
}

TEST_F(CliTest, SimulateClassWritesLabeledTrainAndTest) {
  simulate_class();
  const FunctionalDataset train = load_dataset(path("train.sfpc"));
  const FunctionalDataset test = load_dataset(path("test.sfpc"));
  ASSERT_TRUE(train.labels.has_value());
  ASSERT_TRUE(test.labels.has_value());
  EXPECT_EQ(train.n(), 12u);
  EXPECT_EQ(test.n(), 8u);
  EXPECT_EQ((*train.labels)[0], 0);
  EXPECT_EQ((*train.labels)[11], 1);
  EXPECT_TRUE(fs::exists(dir_ / "truth.sfpc"));
}

TEST_F(CliTest, FitWritesModelAndReportAndRefitsIdentically) {
  simulate_lq();
  const std::string fit_args = "fit --data '" + path("dataset.sfpc") +
                               "' --sn 8 --basis fourier --rho 0.5 --seed 11";
  ASSERT_EQ(run(fit_args + " --out '" + dir_.string() + "'"), 0) << output_;
  EXPECT_NE(output_.find("fit: sfpca"), std::string::npos) << output_;
  EXPECT_TRUE(fs::exists(dir_ / "model.sfpm"));
  const std::string report = slurp(path("fit_report.json"));
  EXPECT_NE(report.find("\"method\": \"sfpca\""), std::string::npos) << report;
  EXPECT_NE(report.find("\"sn\": 8"), std::string::npos) << report;
  EXPECT_NE(report.find("\"n\": 20"), std::string::npos) << report;

  // same data, same options: the model file must be byte-identical
  const fs::path second = dir_ / "again";
  ASSERT_EQ(run(fit_args + " --out '" + second.string() + "'"), 0) << output_;
  EXPECT_EQ(slurp(second / "model.sfpm"), slurp(path("model.sfpm")));
}

TEST_F(CliTest, MfpcaFitKeepsEveryPair) {
  simulate_lq();
  ASSERT_EQ(run("fit --data '" + path("dataset.sfpc") +
                "' --method mfpca --sn 6 --basis fourier --out '" + dir_.string() + "'"),
            0)
      << output_;
  const std::string report = slurp(path("fit_report.json"));
  EXPECT_NE(report.find("\"method\": \"mfpca\""), std::string::npos) << report;
  // p = 5 processes times sn = 6 coefficients, nothing thresholded away
  EXPECT_NE(report.find("\"retained_pairs\": 30"), std::string::npos) << report;
  EXPECT_NE(report.find("\"retained_processes\": 5"), std::string::npos) << report;
}

TEST_F(CliTest, RecoverWritesScoresAndTrajectories) {
  simulate_lq();
  ASSERT_EQ(run("fit --data '" + path("dataset.sfpc") + "' --sn 8 --basis fourier --out '" +
                dir_.string() + "'"),
            0)
      << output_;
  ASSERT_EQ(run("recover --model '" + path("model.sfpm") + "' --data '" +
                path("dataset.sfpc") + "' --out '" + dir_.string() + "'"),
            0)
      << output_;
  EXPECT_NE(output_.find("mean ||y - xhat||^2"), std::string::npos) << output_;
  const auto entries = read_container(path("recovered.sfpc"));
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].name, "recovered");
  ASSERT_EQ(entries[0].dims.size(), 3u);
  EXPECT_EQ(entries[0].dims[0], 20u);
  EXPECT_EQ(entries[0].dims[1], 5u);
  EXPECT_EQ(entries[0].dims[2], 21u);
  EXPECT_EQ(entries[1].name, "scores");
  EXPECT_EQ(entries[1].dims[0], 20u);
  EXPECT_GE(entries[1].dims[1], 1u);
}

TEST_F(CliTest, ClassifyWritesPredictions) {
  simulate_class();
  ASSERT_EQ(run("classify --train '" + path("train.sfpc") + "' --test '" +
                path("test.sfpc") + "' --sn 8 --basis fourier --out '" + dir_.string() +
                "'"),
            0)
      << output_;
  EXPECT_NE(output_.find("test misclassification rate"), std::string::npos) << output_;
  const std::string csv = slurp(path("predictions.csv"));
  EXPECT_EQ(csv.rfind("subject,predicted\n", 0), 0u) << csv;
  // header plus one line per test subject
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

TEST_F(CliTest, ClassifyWithoutLabelsIsDataError) {
  simulate_lq();
  EXPECT_EQ(run("classify --train '" + path("dataset.sfpc") + "' --test '" +
                path("dataset.sfpc") + "' --out '" + dir_.string() + "'"),
            3)
      << output_;
}

TEST_F(CliTest, TuneRecoveryObjectiveWritesTable) {
  const std::string cfg = write_config(
      "[scenario]\nn = 20\np = 5\nm = 21\ns = 8\n"
      "[tune]\nrhos = 0.4, 0.6\nsns = 6\nrns = 2\nfolds = 3\n");
  ASSERT_EQ(run("simulate --config '" + cfg + "' --seed 11 --out '" + dir_.string() + "'"),
            0)
      << output_;
  ASSERT_EQ(run("tune --data '" + path("dataset.sfpc") + "' --config '" + cfg +
                "' --basis fourier --out '" + dir_.string() + "'"),
            0)
      << output_;
  EXPECT_NE(output_.find("tune (recovery, 3-fold)"), std::string::npos) << output_;
  const std::string csv = slurp(path("tuning.csv"));
  EXPECT_EQ(csv.rfind("rho,sn,rn,mean,sd,mean_gn\n", 0), 0u) << csv;
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3) << csv;  // header + 2 rows
}

TEST_F(CliTest, TuneClassificationObjectiveUsesLabels) {
  const std::string cfg = write_config(
      "[scenario]\ntype = class\np = 5\nm = 21\ns = 8\n"
      "kappa = 2\nn_train = 12\nn_test = 8\n"
      "[tune]\nrhos = 0.5\nsns = 6\nrns = 2\nfolds = 3\n");
  ASSERT_EQ(run("simulate --config '" + cfg + "' --seed 11 --out '" + dir_.string() + "'"),
            0)
      << output_;
  ASSERT_EQ(run("tune --data '" + path("train.sfpc") + "' --config '" + cfg +
                "' --basis fourier --out '" + dir_.string() + "'"),
            0)
      << output_;
  EXPECT_NE(output_.find("tune (classification, 3-fold)"), std::string::npos) << output_;
}

TEST_F(CliTest, ExperimentWritesPerReplicationTable) {
  ASSERT_EQ(run("experiment --config '" + small_lq_config() +
                "' --seed 5 --reps 2 --sn 6 --basis fourier --out '" + dir_.string() + "'"),
            0)
      << output_;
  EXPECT_NE(output_.find("recovery experiment: 2 replications"), std::string::npos)
      << output_;
  const std::string csv = slurp(path("experiment_results.csv"));
  EXPECT_EQ(csv.rfind("rep,method,mse1,mse2,mse3,mse4,mrse,gn,pairs,seconds\n", 0), 0u)
      << csv;
  // two replications for each of the two methods
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5) << csv;
}

TEST_F(CliTest, BenchWritesTimingTable) {
  ASSERT_EQ(run("bench --config '" + small_lq_config() +
                "' --p 5 --sn-list 6 --reps 1 --out '" + dir_.string() + "'"),
            0)
      << output_;
  const std::string csv = slurp(path("bench.csv"));
  EXPECT_EQ(csv.rfind("p,sn,sfpca_seconds,mfpca_seconds,ratio\n", 0), 0u) << csv;
  EXPECT_NE(csv.find("\n5,6,"), std::string::npos) << csv;
}

TEST_F(CliTest, CsvImportFitsAndConverts) {
  const std::string csv_path = path("data.csv");
  {
    std::ofstream out(csv_path);
    out << "subject,process,time,value\n";
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 3; ++k)
          out << i << "," << j << "," << 0.5 * k << ","
              << (i + 1) * 0.25 + j + 0.1 * k << "\n";
  }
  ASSERT_EQ(run("fit --data '" + csv_path + "' --sn 3 --basis fourier --out '" +
                dir_.string() + "'"),
            0)
      << output_;
  EXPECT_TRUE(fs::exists(dir_ / "imported.sfpc"));
  EXPECT_TRUE(fs::exists(dir_ / "model.sfpm"));
  const FunctionalDataset data = load_dataset(path("imported.sfpc"));
  EXPECT_EQ(data.n(), 3u);
  EXPECT_EQ(data.p(), 2u);
  EXPECT_EQ(data.m(), 3u);
}

TEST_F(CliTest, ExitCodesFollowErrorKinds) {
  // argument / config problems: 2
  EXPECT_EQ(run("fit --data x.sfpc --basis wavelet"), 2) << output_;
  EXPECT_EQ(run("simulate --rho 1.5 --out '" + dir_.string() + "'"), 2) << output_;
  EXPECT_EQ(run("simulate --out '" + dir_.string() + "'", "SFPCA_THREADS=abc "), 2)
      << output_;
  EXPECT_EQ(run("simulate --out '" + dir_.string() + "'", "SFPCA_THREADS=0 "), 2)
      << output_;
  const std::string zero_p = write_config("[scenario]\np = 0\n");
  EXPECT_EQ(run("simulate --config '" + zero_p + "' --out '" + dir_.string() + "'"), 2)
      << output_;
  const std::string dup = write_config("[fit]\nrho = 0.5\nrho = 0.6\n");
  EXPECT_EQ(run("simulate --config '" + dup + "' --out '" + dir_.string() + "'"), 2)
      << output_;

  // unreadable or malformed data: 3
  const std::string junk = path("junk.sfpc");
  { std::ofstream(junk) << "this is not a tensor container"; }
  EXPECT_EQ(run("fit --data '" + junk + "' --out '" + dir_.string() + "'"), 3) << output_;
  const std::string bad_csv = path("bad.csv");
  { std::ofstream(bad_csv) << "subject,process,time,value\n0,0,0.0\n"; }
  EXPECT_EQ(run("fit --data '" + bad_csv + "' --out '" + dir_.string() + "'"), 3)
      << output_;

  // missing files / unwritable outputs: 5
  EXPECT_EQ(run("fit --data '" + path("absent.sfpc") + "' --out '" + dir_.string() + "'"),
            5)
      << output_;
  EXPECT_EQ(run("simulate --config '" + path("absent.ini") + "'"), 5) << output_;
  EXPECT_EQ(run("simulate --out /dev/null/x"), 5) << output_;
}

TEST_F(CliTest, ThreadsEnvOverrideIsAccepted) {
  ASSERT_EQ(run("simulate --config '" + small_lq_config() + "' --threads 4 --out '" +
                    dir_.string() + "'",
                "SFPCA_THREADS=2 "),
            0)
      << output_;
  EXPECT_TRUE(fs::exists(dir_ / "dataset.sfpc"));
}

}  // namespace
}  // namespace sfpca
