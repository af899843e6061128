// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpnn/sweep.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace lpnn {
namespace {

/// Two separable blobs, enough for a fast end-to-end sweep.
std::string write_blob_csv() {
  const std::string path = std::string(::testing::TempDir()) + "/lpnn_blobs.csv";
  std::ofstream out(path);
  out << "x0,x1,label\n";
  Rng rng(1);
  for (int i = 0; i < 60; ++i) {
    const int cls = i % 2;
    out << (0.15 + 0.55 * cls + 0.1 * rng.uniform()) << ','
        << (0.7 - 0.5 * cls + 0.1 * rng.uniform()) << ','
        << (cls ? "pos" : "neg") << "\n";
  }
  return path;
}

SweepConfig blob_config(const std::string& csv_path) {
  SweepConfig cfg;
  cfg.seed = 42;
  DatasetConfig d;
  d.name = "blobs";
  d.path = csv_path;
  d.label_column = "label";
  d.test_size = 12;
  d.train.hidden_sizes = {4};
  d.train.learning_rate = 0.3;
  d.train.epochs = 60;
  d.train.batch_size = 8;
  cfg.datasets.push_back(d);
  cfg.grid.posit_n = {6, 8};
  cfg.grid.posit_es = {0, 1};
  cfg.grid.float_n = {8};
  cfg.grid.float_we = {4};
  cfg.grid.fixed_n = {8};
  cfg.grid.fixed_q = {4, 6};
  return cfg;
}

TEST(Grid, BuildsOnlyValidSpecs) {
  GridConfig g;
  g.posit_n = {5, 8};
  g.posit_es = {0, 2};
  g.float_n = {5, 8};
  g.float_we = {3, 4};
  g.fixed_n = {5};
  g.fixed_q = {2, 4, 6};
  auto grid = build_grid(g);
  // posit5es2 is legal (es <= n-3); float5e4 (wf=0) and fixed5q6 are not
  std::map<std::string, int> tags;
  for (const FormatSpec& s : grid) tags[format_tag(s)]++;
  EXPECT_EQ(tags.count("float5e4"), 0u);
  EXPECT_EQ(tags.count("fixed5q6"), 0u);
  EXPECT_EQ(tags["posit5es2"], 1);
  EXPECT_EQ(tags["float5e3"], 1);
  EXPECT_EQ(grid.size(), 4u + 3u + 2u);
}

TEST(DynamicRangeTable, SpotValues) {
  std::string table =
      dynamic_range_table({"posit8es0", "float8e4", "fixed8q4", "posit7es0"});
  EXPECT_NE(table.find("3.612360"), std::string::npos);
  EXPECT_NE(table.find("5.089481"), std::string::npos);
  EXPECT_NE(table.find("2.103804"), std::string::npos);
  EXPECT_NE(table.find("0.015625"), std::string::npos) << table;
  EXPECT_THROW(dynamic_range_table({"posit8"}), UnknownFormatError);
}

TEST(Config, ParsesDocumentAndRejectsBadFields) {
  nlohmann::json j = {
      {"seed", 9},
      {"datasets",
       {{{"name", "d"},
         {"path", "d.csv"},
         {"label", "y"},
         {"test_size", 5},
         {"missing", "drop_column"},
         {"hidden", {3, 2}},
         {"epochs", 7}}}},
      {"grid", {{"posit", {{"n", {8}}, {"es", {0}}}}}}};
  SweepConfig cfg = sweep_config_from_json(j);
  EXPECT_EQ(cfg.seed, 9u);
  ASSERT_EQ(cfg.datasets.size(), 1u);
  EXPECT_EQ(cfg.datasets[0].missing, MissingPolicy::DropColumn);
  EXPECT_EQ(cfg.datasets[0].train.hidden_sizes, (std::vector<int>{3, 2}));
  EXPECT_EQ(cfg.datasets[0].train.epochs, 7);
  EXPECT_EQ(build_grid(cfg.grid).size(), 1u);

  j["datasets"][0]["missing"] = "interpolate";
  EXPECT_THROW(sweep_config_from_json(j), ConfigError);
  j["datasets"][0].erase("missing");
  j["datasets"][0].erase("label");
  EXPECT_THROW(sweep_config_from_json(j), ConfigError);
}

TEST(Sweep, ReportHasEveryCellOnceAndIsReproducible) {
  const std::string csv = write_blob_csv();
  SweepConfig cfg = blob_config(csv);
  SweepResult r1 = run_sweep(cfg);
  SweepResult r2 = run_sweep(cfg);
  std::remove(csv.c_str());

  const std::size_t cells = build_grid(cfg.grid).size();
  ASSERT_EQ(r1.rows.size(), cells + 1);  // + the float32 baseline row

  // baseline row: degradation exactly zero
  EXPECT_EQ(r1.rows[0].format, "float32");
  EXPECT_EQ(r1.rows[0].degradation, 0.0);
  EXPECT_GE(r1.rows[0].baseline, 0.9);  // separable blobs

  std::map<std::string, int> seen;
  for (const ResultRow& row : r1.rows) seen[row.dataset + "/" + row.format]++;
  for (const auto& [key, count] : seen) EXPECT_EQ(count, 1) << key;

  // same seed, same report, byte for byte
  EXPECT_EQ(report_csv(r1), report_csv(r2));
  EXPECT_NE(report_csv(r1).find("# seed=42"), std::string::npos);
  EXPECT_NE(report_csv(r1).find("# config="), std::string::npos);
  EXPECT_NE(report_csv(r1).find(
                "dataset,format,n,param,accuracy,baseline,degradation"),
            std::string::npos);

  // 8-bit posit keeps the separable problem solved
  for (const ResultRow& row : r1.rows) {
    if (row.format == "posit8es0") {
      EXPECT_GE(row.accuracy, 0.9);
    }
  }

  std::string table = report_table(r1);
  EXPECT_NE(table.find("blobs"), std::string::npos);
  EXPECT_NE(table.find("posit"), std::string::npos);
}

TEST(Sweep, QuantizedIrisAgreesWithReferencePredictions) {
  DatasetConfig dc;
  dc.name = "iris";
  dc.path = std::string(LPNN_SOURCE_DIR) + "/data/iris.csv";
  dc.label_column = "species";
  dc.test_size = 50;
  dc.train.hidden_sizes = {8};
  dc.train.learning_rate = 0.1;
  dc.train.epochs = 120;
  dc.train.batch_size = 16;
  Dataset d = prepare_dataset(dc, 12);
  TrainConfig tc = dc.train;
  tc.seed = derive_seed(12, dc.name, "train");
  FloatModel ref = train(d, tc);
  NetworkModel q = quantize(ref, FormatSpec::posit(8, 0));

  int agree = 0;
  for (int row : d.test_indices) {
    auto input = quantize_inputs(d.features[static_cast<std::size_t>(row)], q.spec);
    const int quantized = classify(q, input);
    const int reference =
        predict_real(ref, d.features[static_cast<std::size_t>(row)]);
    if (quantized == reference) ++agree;
  }
  // 8-bit posit inference tracks the full-precision argmax on >= 90% of rows
  EXPECT_GE(agree, 45) << "agreement " << agree << "/50";
}

TEST(Sweep, DerivedSeedsAreStablePerPurpose) {
  EXPECT_EQ(derive_seed(7, "iris", "split"), derive_seed(7, "iris", "split"));
  EXPECT_NE(derive_seed(7, "iris", "split"), derive_seed(7, "iris", "train"));
  EXPECT_NE(derive_seed(7, "iris", "split"), derive_seed(8, "iris", "split"));
  EXPECT_NE(derive_seed(7, "iris", "split"), derive_seed(7, "mushroom", "split"));
}

TEST(Sweep, ConfigHashTracksContent) {
  const std::string csv = write_blob_csv();
  SweepConfig a = blob_config(csv);
  SweepConfig b = a;
  EXPECT_EQ(hash_config(a), hash_config(b));
  b.seed = 43;
  EXPECT_NE(hash_config(a), hash_config(b));
  b = a;
  b.grid.posit_es = {0, 2};
  EXPECT_NE(hash_config(a), hash_config(b));
  std::remove(csv.c_str());
}

}  // namespace
}  // namespace lpnn
