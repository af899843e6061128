// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0
//
// Drives the installed subcommands end to end: train -> quantize ->
// infer, plus the failure exits the harness promises (nonzero status
// with a diagnostic).

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = LPNN_CLI_PATH;
const std::string kSourceDir = LPNN_SOURCE_DIR;

struct RunResult {
  int status;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string out_path =
      std::string(::testing::TempDir()) + "/lpnn_cli_out.txt";
  const std::string cmd = kCli + " " + args + " > " + out_path + " 2>&1";
  const int rc = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::remove(out_path.c_str());
  return {rc == -1 ? -1 : WEXITSTATUS(rc), ss.str()};
}

std::string tmp_path(const std::string& name) {
  return std::string(::testing::TempDir()) + "/" + name;
}

/// iris with a short schedule so the pipeline test stays quick.
std::string write_fast_config() {
  const std::string path = tmp_path("lpnn_cli_cfg.json");
  std::ofstream out(path);
  out << R"({
  "seed": 12,
  "datasets": [{
    "name": "iris",
    "path": ")" << kSourceDir << R"(/data/iris.csv",
    "label": "species",
    "test_size": 50,
    "hidden": [8],
    "epochs": 60,
    "learning_rate": 0.1,
    "batch": 16
  }],
  "grid": {"posit": {"n": [8], "es": [0]}}
})";
  return path;
}

TEST(Cli, TrainQuantizeInferPipeline) {
  const std::string cfg = write_fast_config();
  const std::string model = tmp_path("lpnn_cli_iris.json");
  const std::string qmodel = tmp_path("lpnn_cli_iris_p8.json");

  RunResult train = run("train --config " + cfg + " --dataset iris --out " + model);
  EXPECT_EQ(train.status, 0) << train.output;
  EXPECT_NE(train.output.find("test accuracy"), std::string::npos);

  RunResult quant =
      run("quantize --model " + model + " --format posit8es0 --out " + qmodel);
  EXPECT_EQ(quant.status, 0) << quant.output;

  RunResult infer = run("infer --model " + qmodel + " --config " + cfg +
                        " --dataset iris --quiet");
  EXPECT_EQ(infer.status, 0) << infer.output;
  EXPECT_NE(infer.output.find("accuracy:"), std::string::npos);

  // format flag that contradicts the model document
  RunResult mismatch = run("infer --model " + qmodel + " --config " + cfg +
                           " --dataset iris --format posit8es1 --quiet");
  EXPECT_NE(mismatch.status, 0);
  EXPECT_NE(mismatch.output.find("error"), std::string::npos);
  EXPECT_NE(mismatch.output.find("posit8es0"), std::string::npos);

  // full-precision model documents run the reference pipeline
  RunResult real_infer =
      run("infer --model " + model + " --config " + cfg + " --dataset iris --quiet");
  EXPECT_EQ(real_infer.status, 0) << real_infer.output;

  std::remove(cfg.c_str());
  std::remove(model.c_str());
  std::remove(qmodel.c_str());
}

TEST(Cli, DynamicRangeCommand) {
  RunResult ok = run("dynamic-range posit8es0 fixed8q4");
  EXPECT_EQ(ok.status, 0);
  EXPECT_NE(ok.output.find("3.612360"), std::string::npos);

  RunResult bad = run("dynamic-range posit8es9");
  EXPECT_NE(bad.status, 0);
  EXPECT_NE(bad.output.find("error"), std::string::npos);
}

TEST(Cli, MissingFilesFailCleanly) {
  RunResult bad = run("train --config /nope/missing.json --dataset iris --out /tmp/x");
  EXPECT_NE(bad.status, 0);
  EXPECT_NE(bad.output.find("error"), std::string::npos);

  RunResult noargs = run("");
  EXPECT_NE(noargs.status, 0);
}

}  // namespace
