// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpnn/oracle.hpp"
#include "lpnn/sweep.hpp"

namespace {

using namespace lpnn;

const DatasetConfig& find_dataset(const SweepConfig& cfg,
                                  const std::string& name) {
  for (const DatasetConfig& d : cfg.datasets)
    if (d.name == name) return d;
  throw ConfigError("config has no dataset named '" + name + "'");
}

int cmd_train(const std::string& config_path, const std::string& dataset,
              const std::string& out_path) {
  SweepConfig cfg = load_sweep_config(config_path);
  const DatasetConfig& dc = find_dataset(cfg, dataset);
  Dataset d = prepare_dataset(dc, cfg.seed);
  TrainConfig tc = dc.train;
  tc.seed = derive_seed(cfg.seed, dc.name, "train");
  FloatModel model = train(d, tc);
  save_real_model(model, out_path);
  const double train_acc = evaluate_real(model, d, d.train_indices);
  const double test_acc = evaluate_real(model, d, d.test_indices);
  std::cout << "trained " << dataset << ": train accuracy " << train_acc * 100
            << "%, test accuracy " << test_acc * 100 << "%\n"
            << "model written to " << out_path << "\n";
  return 0;
}

int cmd_quantize(const std::string& model_path, const std::string& tag,
                 const std::string& out_path) {
  FloatModel model = load_real_model(model_path);
  NetworkModel q = quantize(model, parse_format_tag(tag));
  save_network(q, out_path);
  std::cout << "quantized to " << tag << ", written to " << out_path << "\n";
  return 0;
}

int cmd_infer(const std::string& model_path, const std::string& config_path,
              const std::string& dataset, const std::string& expect_tag,
              bool quiet) {
  SweepConfig cfg = load_sweep_config(config_path);
  const DatasetConfig& dc = find_dataset(cfg, dataset);
  Dataset d = prepare_dataset(dc, cfg.seed);

  // A document with a format tag is a quantized network; without one it
  // is the full-precision reference model.
  nlohmann::json j;
  {
    std::ifstream in(model_path);
    if (!in) throw IoError("cannot open '" + model_path + "'");
    in >> j;
  }
  int correct = 0;
  const auto& idx = d.test_indices;
  std::vector<int> predictions;
  if (j.contains("format")) {
    NetworkModel model = network_from_json(j);
    if (!expect_tag.empty() && format_tag(model.spec) != expect_tag)
      throw FormatMismatchError("model is " + format_tag(model.spec) +
                                ", expected " + expect_tag);
    for (int row : idx) {
      auto input = quantize_inputs(d.features[row], model.spec);
      predictions.push_back(classify(model, input));
    }
  } else {
    if (!expect_tag.empty() && expect_tag != "float32")
      throw FormatMismatchError("model is float32, expected " + expect_tag);
    FloatModel model = load_real_model(model_path);
    for (int row : idx) predictions.push_back(predict_real(model, d.features[row]));
  }
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const int truth = d.labels[idx[i]];
    if (!quiet)
      std::cout << "row " << idx[i] << ": predicted "
                << d.class_names[predictions[i]] << ", actual "
                << d.class_names[truth] << "\n";
    if (predictions[i] == truth) ++correct;
  }
  std::cout << "accuracy: " << std::fixed << std::setprecision(1)
            << 100.0 * correct / idx.size() << "% (" << correct << "/"
            << idx.size() << ")\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, std::string out_dir) {
  std::string hash;
  SweepConfig cfg = load_sweep_config(config_path, &hash);
  if (out_dir.empty()) out_dir = cfg.output_dir;
  std::filesystem::create_directories(out_dir);
  SweepResult result = run_sweep(cfg);
  write_report(result, out_dir);
  std::cout << report_table(result);
  std::cout << "report written to " << out_dir << "/report.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-precision exact-MAC inference experiments"};
  app.require_subcommand(1);

  std::string config_path = "configs/sweep.json";
  std::string dataset, model_path, out_path, tag, out_dir;
  bool quiet = false;
  std::vector<std::string> tags;

  auto* train_cmd = app.add_subcommand("train", "train a full-precision model");
  train_cmd->add_option("--config", config_path, "experiment config");
  train_cmd->add_option("--dataset", dataset, "dataset name from the config")
      ->required();
  train_cmd->add_option("--out", out_path, "output model file")->required();

  auto* quant_cmd = app.add_subcommand("quantize", "quantize a trained model");
  quant_cmd->add_option("--model", model_path, "full-precision model file")
      ->required();
  quant_cmd->add_option("--format", tag, "target format tag, e.g. posit8es0")
      ->required();
  quant_cmd->add_option("--out", out_path, "output model file")->required();

  auto* infer_cmd = app.add_subcommand("infer", "run test-set inference");
  infer_cmd->add_option("--model", model_path, "model file")->required();
  infer_cmd->add_option("--config", config_path, "experiment config");
  infer_cmd->add_option("--dataset", dataset, "dataset name")->required();
  infer_cmd->add_option("--format", tag, "expected model format tag");
  infer_cmd->add_flag("--quiet", quiet, "suppress per-row predictions");

  auto* sweep_cmd = app.add_subcommand("sweep", "format x bit-width sweep");
  sweep_cmd->add_option("--config", config_path, "experiment config");
  sweep_cmd->add_option("--out", out_dir, "output directory");

  auto* dr_cmd = app.add_subcommand("dynamic-range",
                                    "print format extrema and dynamic range");
  dr_cmd->add_option("tags", tags, "format tags")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return cmd_train(config_path, dataset, out_path);
    if (quant_cmd->parsed()) return cmd_quantize(model_path, tag, out_path);
    if (infer_cmd->parsed())
      return cmd_infer(model_path, config_path, dataset, tag, quiet);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, out_dir);
    if (dr_cmd->parsed()) {
      std::cout << lpnn::dynamic_range_table(tags);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
