// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpnn/data.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <string>

namespace lpnn {
namespace {

const std::string kDataDir = std::string(LPNN_SOURCE_DIR) + "/data";

class TempCsv {
 public:
  explicit TempCsv(const std::string& content) {
    path_ = std::string(::testing::TempDir()) + "/lpnn_data_test.csv";
    std::ofstream out(path_);
    out << content;
  }
  ~TempCsv() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

TEST(LoadCsv, IrisShape) {
  CsvSchema schema;
  schema.label_column = "species";
  Dataset d = load_csv(kDataDir + "/iris.csv", schema, "iris");
  EXPECT_EQ(d.num_rows(), 150);
  EXPECT_EQ(d.num_features(), 4);
  EXPECT_EQ(d.num_classes(), 3);
  EXPECT_EQ(d.class_names[0], "setosa");
}

TEST(LoadCsv, WrongColumnCountNamesTheRow) {
  TempCsv csv("a,b,label\n1,2,x\n1,2,3,4\n");
  CsvSchema schema;
  schema.label_column = "label";
  try {
    load_csv(csv.path(), schema);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos);
  }
}

TEST(LoadCsv, MissingLabelColumn) {
  TempCsv csv("a,b\n1,2\n");
  CsvSchema schema;
  schema.label_column = "label";
  EXPECT_THROW(load_csv(csv.path(), schema), SchemaError);
}

TEST(LoadCsv, MushroomOneHotAndDroppedColumn) {
  CsvSchema schema;
  schema.label_column = "class";
  schema.missing = MissingPolicy::DropColumn;
  Dataset d = load_csv(kDataDir + "/mushroom.csv", schema, "mushroom");
  EXPECT_EQ(d.num_rows(), 8124);
  EXPECT_EQ(d.num_classes(), 2);
  // stalk-root carries '?' markers and must be gone entirely
  for (const std::string& name : d.feature_names) {
    EXPECT_EQ(name.find("stalk-root"), std::string::npos) << name;
    EXPECT_EQ(name.find('?'), std::string::npos) << name;
  }
  // every kept column one-hot expands to its distinct value count
  std::set<std::string> bases;
  for (const std::string& name : d.feature_names)
    bases.insert(name.substr(0, name.find('=')));
  EXPECT_EQ(bases.size(), 21u);  // 22 categorical features minus stalk-root
  EXPECT_GT(d.num_features(), 60);
  for (const auto& row : d.features)
    for (double v : row) EXPECT_TRUE(v == 0.0 || v == 1.0);
}

TEST(LoadCsv, DropRowPolicy) {
  TempCsv csv("a,b,label\n1,2,x\n?,3,y\n4,5,x\n");
  CsvSchema schema;
  schema.label_column = "label";
  schema.missing = MissingPolicy::DropRow;
  Dataset d = load_csv(csv.path(), schema);
  EXPECT_EQ(d.num_rows(), 2);
  EXPECT_EQ(d.num_features(), 2);
}

TEST(Split, CanonicalPresetSizes) {
  CsvSchema schema;
  schema.label_column = "species";
  Dataset iris = load_csv(kDataDir + "/iris.csv", schema, "iris");
  split(iris, 50, 0);
  EXPECT_EQ(iris.test_indices.size(), 50u);
  EXPECT_EQ(iris.train_indices.size(), 100u);

  schema.label_column = "class";
  schema.missing = MissingPolicy::DropColumn;
  Dataset mush = load_csv(kDataDir + "/mushroom.csv", schema, "mushroom");
  split(mush, 2708, 0);
  EXPECT_EQ(mush.test_indices.size(), 2708u);

  schema.label_column = "diagnosis";
  schema.missing = MissingPolicy::DropRow;
  Dataset bc = load_csv(kDataDir + "/breast_cancer.csv", schema, "bc");
  EXPECT_EQ(bc.num_rows(), 569);
  split(bc, 190, 0);
  EXPECT_EQ(bc.test_indices.size(), 190u);
}

TEST(Split, DisjointDeterministicAndComplete) {
  CsvSchema schema;
  schema.label_column = "species";
  Dataset a = load_csv(kDataDir + "/iris.csv", schema);
  Dataset b = load_csv(kDataDir + "/iris.csv", schema);
  split(a, 50, 123);
  split(b, 50, 123);
  EXPECT_EQ(a.test_indices, b.test_indices);
  EXPECT_EQ(a.train_indices, b.train_indices);

  std::set<int> all(a.test_indices.begin(), a.test_indices.end());
  for (int i : a.train_indices) {
    EXPECT_FALSE(all.count(i)) << "index " << i << " in both splits";
    all.insert(i);
  }
  EXPECT_EQ(all.size(), 150u);

  split(b, 50, 124);
  EXPECT_NE(a.test_indices, b.test_indices);

  // test_size 0 keeps every row for training
  split(a, 0, 1);
  EXPECT_TRUE(a.test_indices.empty());
  EXPECT_EQ(a.train_indices.size(), 150u);

  EXPECT_THROW(split(a, 150, 1), ConfigError);
}

TEST(Normalize, UnitIntervalAndConstantColumns) {
  TempCsv csv("x,y,c,label\n2,10,5,a\n4,20,5,b\n6,-10,5,a\n");
  CsvSchema schema;
  schema.label_column = "label";
  Dataset d = load_csv(csv.path(), schema);
  minmax_normalize(d);
  for (const auto& row : d.features)
    for (double v : row) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  // constant column maps to zero
  for (const auto& row : d.features) EXPECT_EQ(row[2], 0.0);
  // each non-constant column spans the full interval
  EXPECT_EQ(d.features[0][0], 0.0);
  EXPECT_EQ(d.features[2][0], 1.0);
}

}  // namespace
}  // namespace lpnn
