// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LPNN_SWEEP_HPP
#define LPNN_SWEEP_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <future>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpnn/data.hpp"
#include "lpnn/errors.hpp"
#include "lpnn/network.hpp"
#include "lpnn/trainer.hpp"

// Experiment harness: trains one full-precision baseline per dataset,
// quantizes it across a format x bit-width grid and reports test
// accuracy per cell. Everything is keyed off the single config seed so
// a rerun reproduces the report byte for byte.

namespace lpnn {

struct DatasetConfig {
  std::string name;
  std::string path;
  std::string label_column;
  std::vector<std::string> categorical_columns;  // empty = autodetect
  MissingPolicy missing = MissingPolicy::DropRow;
  int test_size = 0;
  TrainConfig train;
};

struct GridConfig {
  std::vector<int> posit_n, posit_es;
  std::vector<int> float_n, float_we;
  std::vector<int> fixed_n, fixed_q;
};

struct SweepConfig {
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::vector<DatasetConfig> datasets;
  GridConfig grid;
};

struct ResultRow {
  std::string dataset;
  std::string format;
  int n = 0;
  int param = 0;           // es / we / q; 0 for the baseline row
  double accuracy = 0.0;   // fraction in [0,1]
  double baseline = 0.0;   // fraction in [0,1]
  double degradation = 0.0;  // (baseline - accuracy) in percentage points
};

struct SweepResult {
  std::vector<ResultRow> rows;
  std::uint64_t seed = 0;
  std::string config_hash;
};

// ---------------------------------------------------------------------------
// Config document
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig cfg;
  try {
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.output_dir = j.value("output_dir", std::string("out"));
    for (const auto& jd : j.at("datasets")) {
      DatasetConfig d;
      d.name = jd.at("name").get<std::string>();
      d.path = jd.at("path").get<std::string>();
      d.label_column = jd.at("label").get<std::string>();
      if (jd.contains("categorical"))
        d.categorical_columns = jd["categorical"].get<std::vector<std::string>>();
      const std::string missing = jd.value("missing", std::string("drop_row"));
      if (missing == "drop_row") {
        d.missing = MissingPolicy::DropRow;
      } else if (missing == "drop_column") {
        d.missing = MissingPolicy::DropColumn;
      } else {
        throw ConfigError("missing policy '" + missing + "'");
      }
      d.test_size = jd.at("test_size").get<int>();
      d.train.hidden_sizes = jd.value("hidden", std::vector<int>{16});
      d.train.learning_rate = jd.value("learning_rate", 0.1);
      d.train.epochs = jd.value("epochs", 200);
      d.train.batch_size = jd.value("batch", 16);
      cfg.datasets.push_back(std::move(d));
    }
    const auto& jg = j.at("grid");
    if (jg.contains("posit")) {
      cfg.grid.posit_n = jg["posit"].value("n", std::vector<int>{});
      cfg.grid.posit_es = jg["posit"].value("es", std::vector<int>{});
    }
    if (jg.contains("float")) {
      cfg.grid.float_n = jg["float"].value("n", std::vector<int>{});
      cfg.grid.float_we = jg["float"].value("we", std::vector<int>{});
    }
    if (jg.contains("fixed")) {
      cfg.grid.fixed_n = jg["fixed"].value("n", std::vector<int>{});
      cfg.grid.fixed_q = jg["fixed"].value("q", std::vector<int>{});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sweep config: ") + e.what());
  }
  return cfg;
}

inline SweepConfig load_sweep_config(const std::string& path,
                                     std::string* config_hash = nullptr) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (config_hash) {
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(j.dump());
    *config_hash = hex.str();
  }
  return sweep_config_from_json(j);
}

inline std::string hash_config(const SweepConfig& cfg);  // defined below

/// Every valid format in the grid; combinations that violate a format
/// invariant (e.g. float5e4) are skipped.
inline std::vector<FormatSpec> build_grid(const GridConfig& g) {
  std::vector<FormatSpec> out;
  for (int n : g.posit_n)
    for (int es : g.posit_es) {
      if (es > n - 3) continue;
      out.push_back(FormatSpec::posit(n, es));
    }
  for (int n : g.float_n)
    for (int we : g.float_we) {
      if (n - 1 - we < 1) continue;
      out.push_back(FormatSpec::flt(n, we));
    }
  for (int n : g.fixed_n)
    for (int q : g.fixed_q) {
      if (q > n - 1) continue;
      out.push_back(FormatSpec::fixed(n, q));
    }
  return out;
}

inline int format_param(const FormatSpec& s) {
  switch (s.kind) {
    case Kind::Posit: return s.es;
    case Kind::Float: return s.we;
    case Kind::Fixed: return s.q;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

/// Seed for one (dataset, purpose) stream, derived from the config seed.
inline std::uint64_t derive_seed(std::uint64_t seed, const std::string& name,
                                 const std::string& purpose) {
  Rng rng(seed ^ fnv1a64(name + "/" + purpose));
  return rng.next();
}

/// Loads, normalizes and splits a configured dataset.
inline Dataset prepare_dataset(const DatasetConfig& dc, std::uint64_t seed,
                               const std::string& base_dir = "") {
  CsvSchema schema;
  schema.label_column = dc.label_column;
  schema.missing = dc.missing;
  schema.categorical_columns = dc.categorical_columns;
  const std::string path =
      (base_dir.empty() || dc.path.front() == '/') ? dc.path
                                                   : base_dir + "/" + dc.path;
  Dataset d = load_csv(path, schema, dc.name);
  minmax_normalize(d);
  split(d, dc.test_size, derive_seed(seed, dc.name, "split"));
  return d;
}

/// Accuracy of a quantized model over the dataset's test rows, feeding
/// each row through round_to_format and the EMAC layers.
inline double evaluate_quantized(const NetworkModel& model, const Dataset& d,
                                 std::span<const int> indices) {
  if (indices.empty()) return 0.0;
  int correct = 0;
  for (int row : indices) {
    std::vector<Code> input =
        quantize_inputs(d.features[static_cast<std::size_t>(row)], model.spec);
    if (classify(model, input) == d.labels[static_cast<std::size_t>(row)])
      ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

inline SweepResult run_sweep(const SweepConfig& cfg,
                             const std::string& base_dir = "") {
  SweepResult result;
  result.seed = cfg.seed;
  result.config_hash = hash_config(cfg);
  const std::vector<FormatSpec> grid = build_grid(cfg.grid);

  for (const DatasetConfig& dc : cfg.datasets) {
    Dataset d = prepare_dataset(dc, cfg.seed, base_dir);
    TrainConfig tc = dc.train;
    tc.seed = derive_seed(cfg.seed, dc.name, "train");
    FloatModel baseline_model = train(d, tc);
    const double baseline = evaluate_real(baseline_model, d, d.test_indices);

    ResultRow base_row;
    base_row.dataset = dc.name;
    base_row.format = "float32";
    base_row.n = 32;
    base_row.param = 0;
    base_row.accuracy = baseline;
    base_row.baseline = baseline;
    base_row.degradation = 0.0;
    result.rows.push_back(base_row);

    // cells are independent; evaluate them concurrently, collect in order
    std::vector<std::future<double>> futures;
    futures.reserve(grid.size());
    for (const FormatSpec& spec : grid) {
      futures.push_back(std::async(std::launch::async, [&, spec] {
        NetworkModel q = quantize(baseline_model, spec);
        return evaluate_quantized(q, d, d.test_indices);
      }));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ResultRow row;
      row.dataset = dc.name;
      row.format = format_tag(grid[i]);
      row.n = grid[i].n;
      row.param = format_param(grid[i]);
      row.accuracy = futures[i].get();
      row.baseline = baseline;
      row.degradation = (baseline - row.accuracy) * 100.0;
      result.rows.push_back(row);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline std::string report_csv(const SweepResult& r) {
  std::ostringstream out;
  out << "# seed=" << r.seed << "\n";
  out << "# config=" << r.config_hash << "\n";
  out << "dataset,format,n,param,accuracy,baseline,degradation\n";
  out << std::setprecision(6) << std::fixed;
  for (const ResultRow& row : r.rows)
    out << row.dataset << ',' << row.format << ',' << row.n << ',' << row.param
        << ',' << row.accuracy << ',' << row.baseline << ','
        << row.degradation << "\n";
  return out.str();
}

/// Best cell per (dataset, kind, n), accuracy printed to 0.1%.
inline std::string report_table(const SweepResult& r) {
  struct Best {
    double accuracy = -1.0;
    std::string format;
  };
  std::map<std::string, double> baselines;
  std::map<std::string, std::map<std::string, std::map<int, Best>>> best;
  std::vector<std::string> dataset_order;
  for (const ResultRow& row : r.rows) {
    if (row.format == "float32") {
      if (!baselines.count(row.dataset)) dataset_order.push_back(row.dataset);
      baselines[row.dataset] = row.baseline;
      continue;
    }
    std::string kind = row.format.substr(0, 5);
    Best& b = best[row.dataset][kind][row.n];
    if (row.accuracy > b.accuracy) {
      b.accuracy = row.accuracy;
      b.format = row.format;
    }
  }
  std::ostringstream out;
  out << std::fixed << std::setprecision(1);
  for (const std::string& ds : dataset_order) {
    out << ds << " (baseline " << baselines[ds] * 100.0 << "%)\n";
    for (const auto& [kind, by_n] : best[ds]) {
      out << "  " << kind << ":";
      for (const auto& [n, b] : by_n)
        out << "  n=" << n << " " << b.accuracy * 100.0 << "% (" << b.format
            << ")";
      out << "\n";
    }
  }
  return out.str();
}

inline void write_report(const SweepResult& r, const std::string& out_dir) {
  std::ofstream csv(out_dir + "/report.csv");
  if (!csv) throw IoError("cannot write report to '" + out_dir + "'");
  csv << report_csv(r);
  std::ofstream txt(out_dir + "/report.txt");
  if (!txt) throw IoError("cannot write report to '" + out_dir + "'");
  txt << report_table(r);
}

/// Table for the dynamic-range command: tag, max, min, log10(max/min).
inline std::string dynamic_range_table(const std::vector<std::string>& tags) {
  std::ostringstream out;
  out << "format        max                 min                 dynamic_range\n";
  for (const std::string& tag : tags) {
    FormatSpec spec = parse_format_tag(tag);
    Extrema e = format_extrema(spec);
    out << std::left << std::setw(14) << tag << std::setw(20)
        << to_exact_string(e.max) << std::setw(20) << to_exact_string(e.min)
        << std::setprecision(6) << std::fixed << dynamic_range(spec) << "\n";
  }
  return out.str();
}

inline std::string hash_config(const SweepConfig& cfg) {
  std::ostringstream s;
  s << cfg.seed << '|' << cfg.output_dir;
  for (const auto& d : cfg.datasets) {
    s << '|' << d.name << ',' << d.path << ',' << d.label_column << ','
      << d.test_size << ',' << static_cast<int>(d.missing);
    for (int h : d.train.hidden_sizes) s << 'h' << h;
    s << ',' << d.train.learning_rate << ',' << d.train.epochs << ','
      << d.train.batch_size;
  }
  auto dump_ints = [&](const std::vector<int>& v) {
    for (int x : v) s << ' ' << x;
  };
  s << "|posit";
  dump_ints(cfg.grid.posit_n);
  dump_ints(cfg.grid.posit_es);
  s << "|float";
  dump_ints(cfg.grid.float_n);
  dump_ints(cfg.grid.float_we);
  s << "|fixed";
  dump_ints(cfg.grid.fixed_n);
  dump_ints(cfg.grid.fixed_q);
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(s.str());
  return hex.str();
}

}  // namespace lpnn

#endif  // LPNN_SWEEP_HPP
