// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LPNN_TRAINER_HPP
#define LPNN_TRAINER_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpnn/data.hpp"
#include "lpnn/errors.hpp"
#include "lpnn/network.hpp"
#include "lpnn/rng.hpp"

// Full-precision reference: models are trained with plain minibatch SGD
// on softmax cross-entropy, then quantized into n-bit codes for the
// EMAC inference path. Training stays in double; the quantized network
// is where the low-precision story happens.

namespace lpnn {

struct FloatLayer {
  int in_dim = 0;
  int out_dim = 0;
  Activation activation = Activation::ReLU;
  std::vector<double> weights;  // row-major, out_dim x in_dim
  std::vector<double> biases;
};

struct FloatModel {
  int input_dim = 0;
  std::vector<FloatLayer> layers;

  int output_dim() const { return layers.empty() ? input_dim : layers.back().out_dim; }
};

struct TrainConfig {
  std::vector<int> hidden_sizes;
  double learning_rate = 0.1;
  int epochs = 200;
  int batch_size = 16;
  std::uint64_t seed = 1;
};

// ---------------------------------------------------------------------------
// Model setup / forward
// ---------------------------------------------------------------------------

inline FloatModel init_model(int input_dim, const std::vector<int>& hidden,
                             int num_classes, Rng& rng) {
  FloatModel m;
  m.input_dim = input_dim;
  std::vector<int> dims;
  dims.push_back(input_dim);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(num_classes);
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    FloatLayer l;
    l.in_dim = dims[i];
    l.out_dim = dims[i + 1];
    l.activation =
        (i + 2 == dims.size()) ? Activation::Affine : Activation::ReLU;
    const double r = std::sqrt(6.0 / (l.in_dim + l.out_dim));
    l.weights.resize(static_cast<std::size_t>(l.in_dim) * l.out_dim);
    for (double& w : l.weights) w = rng.uniform(-r, r);
    l.biases.assign(l.out_dim, 0.0);
    m.layers.push_back(std::move(l));
  }
  return m;
}

/// Returns the activations of every layer (index 0 = input).
inline std::vector<std::vector<double>> forward_real(const FloatModel& m,
                                                     std::span<const double> x) {
  std::vector<std::vector<double>> acts;
  acts.emplace_back(x.begin(), x.end());
  for (const FloatLayer& l : m.layers) {
    const std::vector<double>& in = acts.back();
    std::vector<double> out(l.out_dim, 0.0);
    for (int j = 0; j < l.out_dim; ++j) {
      double z = l.biases[j];
      const double* row = l.weights.data() + static_cast<std::size_t>(j) * l.in_dim;
      for (int i = 0; i < l.in_dim; ++i) z += row[i] * in[i];
      out[j] = (l.activation == Activation::ReLU && z < 0) ? 0.0 : z;
    }
    acts.push_back(std::move(out));
  }
  return acts;
}

inline int predict_real(const FloatModel& m, std::span<const double> x) {
  auto acts = forward_real(m, x);
  const std::vector<double>& logits = acts.back();
  return static_cast<int>(std::max_element(logits.begin(), logits.end()) -
                          logits.begin());
}

inline std::vector<double> softmax(const std::vector<double>& z) {
  double zmax = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = std::exp(z[i] - zmax);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

namespace trainer_detail {

struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  explicit Gradients(const FloatModel& m) {
    for (const FloatLayer& l : m.layers) {
      weights.emplace_back(l.weights.size(), 0.0);
      biases.emplace_back(l.biases.size(), 0.0);
    }
  }
};

/// Accumulates softmax cross-entropy gradients for one sample; returns
/// the sample loss.
inline double backprop(const FloatModel& m, std::span<const double> x, int label,
                       Gradients* g) {
  auto acts = forward_real(m, x);
  std::vector<double> p = softmax(acts.back());
  double loss = -std::log(std::max(p[static_cast<std::size_t>(label)], 1e-300));

  std::vector<double> delta = p;  // dL/dz of the readout
  delta[static_cast<std::size_t>(label)] -= 1.0;

  for (int li = static_cast<int>(m.layers.size()) - 1; li >= 0; --li) {
    const FloatLayer& l = m.layers[static_cast<std::size_t>(li)];
    const std::vector<double>& in = acts[static_cast<std::size_t>(li)];
    auto& gw = g->weights[static_cast<std::size_t>(li)];
    auto& gb = g->biases[static_cast<std::size_t>(li)];
    std::vector<double> delta_in(l.in_dim, 0.0);
    for (int j = 0; j < l.out_dim; ++j) {
      const double dj = delta[static_cast<std::size_t>(j)];
      gb[static_cast<std::size_t>(j)] += dj;
      const std::size_t base = static_cast<std::size_t>(j) * l.in_dim;
      for (int i = 0; i < l.in_dim; ++i) {
        gw[base + i] += dj * in[static_cast<std::size_t>(i)];
        delta_in[static_cast<std::size_t>(i)] += dj * l.weights[base + i];
      }
    }
    if (li > 0) {
      // ReLU gate of the upstream layer
      const std::vector<double>& up = acts[static_cast<std::size_t>(li)];
      for (int i = 0; i < l.in_dim; ++i)
        if (up[static_cast<std::size_t>(i)] <= 0.0)
          delta_in[static_cast<std::size_t>(i)] = 0.0;
      delta = std::move(delta_in);
    }
  }
  return loss;
}

}  // namespace trainer_detail

/// Minibatch SGD over the dataset's training split (all rows when no
/// split is set). Bit-reproducible for a fixed config.
inline FloatModel train(const Dataset& dataset, const TrainConfig& cfg) {
  std::vector<int> idx = dataset.train_indices;
  if (idx.empty()) {
    idx.resize(dataset.features.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  }
  if (idx.empty()) throw ConfigError("train: empty dataset");
  if (cfg.batch_size < 1) throw ConfigError("train: batch_size must be >= 1");

  Rng rng(cfg.seed);
  FloatModel model = init_model(dataset.num_features(), cfg.hidden_sizes,
                                dataset.num_classes(), rng);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(idx);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < idx.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(idx.size(), start + cfg.batch_size);
      trainer_detail::Gradients g(model);
      for (std::size_t s = start; s < end; ++s) {
        const int row = idx[s];
        epoch_loss += trainer_detail::backprop(
            model, dataset.features[static_cast<std::size_t>(row)],
            dataset.labels[static_cast<std::size_t>(row)], &g);
      }
      const double scale = cfg.learning_rate / static_cast<double>(end - start);
      for (std::size_t li = 0; li < model.layers.size(); ++li) {
        FloatLayer& l = model.layers[li];
        for (std::size_t i = 0; i < l.weights.size(); ++i)
          l.weights[i] -= scale * g.weights[li][i];
        for (std::size_t i = 0; i < l.biases.size(); ++i)
          l.biases[i] -= scale * g.biases[li][i];
      }
    }
    if (!std::isfinite(epoch_loss))
      throw NonFiniteLossError("train: non-finite loss at epoch " +
                               std::to_string(epoch));
  }
  return model;
}

/// Accuracy of the full-precision pipeline over the given rows.
inline double evaluate_real(const FloatModel& m, const Dataset& d,
                            std::span<const int> indices) {
  if (indices.empty()) return 0.0;
  int correct = 0;
  for (int row : indices)
    if (predict_real(m, d.features[static_cast<std::size_t>(row)]) ==
        d.labels[static_cast<std::size_t>(row)])
      ++correct;
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

// ---------------------------------------------------------------------------
// Quantization
// ---------------------------------------------------------------------------

/// Maps every parameter through round_to_format; topology is preserved.
inline NetworkModel quantize(const FloatModel& m, const FormatSpec& spec) {
  NetworkModel q;
  q.spec = spec;
  q.input_dim = m.input_dim;
  for (const FloatLayer& l : m.layers) {
    LayerModel ql;
    ql.in_dim = l.in_dim;
    ql.out_dim = l.out_dim;
    ql.activation = l.activation;
    ql.weights.reserve(l.weights.size());
    for (double w : l.weights)
      ql.weights.push_back(round_to_format(rational_from_double(w), spec));
    ql.biases.reserve(l.biases.size());
    for (double b : l.biases)
      ql.biases.push_back(round_to_format(rational_from_double(b), spec));
    q.layers.push_back(std::move(ql));
  }
  q.validate();
  return q;
}

// ---------------------------------------------------------------------------
// Gradient check
// ---------------------------------------------------------------------------

/// Max relative error between analytic gradients and central finite
/// differences (step 1e-5) of the mean loss over the sample.
inline double gradient_check(const FloatModel& model,
                             const std::vector<std::vector<double>>& xs,
                             const std::vector<int>& ys) {
  if (xs.empty() || xs.size() != ys.size())
    throw ConfigError("gradient_check: bad sample");
  const double h = 1e-5;

  auto mean_loss = [&](const FloatModel& m) {
    double total = 0.0;
    for (std::size_t s = 0; s < xs.size(); ++s) {
      auto acts = forward_real(m, xs[s]);
      auto p = softmax(acts.back());
      total += -std::log(std::max(p[static_cast<std::size_t>(ys[s])], 1e-300));
    }
    return total / static_cast<double>(xs.size());
  };

  trainer_detail::Gradients g(model);
  for (std::size_t s = 0; s < xs.size(); ++s)
    trainer_detail::backprop(model, xs[s], ys[s], &g);
  const double inv = 1.0 / static_cast<double>(xs.size());

  double max_rel = 0.0;
  FloatModel probe = model;
  auto check_param = [&](double* p, double analytic) {
    const double saved = *p;
    *p = saved + h;
    const double up = mean_loss(probe);
    *p = saved - h;
    const double down = mean_loss(probe);
    *p = saved;
    const double numeric = (up - down) / (2 * h);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1.0});
    max_rel = std::max(max_rel, std::abs(analytic - numeric) / denom);
  };
  for (std::size_t li = 0; li < probe.layers.size(); ++li) {
    FloatLayer& l = probe.layers[li];
    for (std::size_t i = 0; i < l.weights.size(); ++i)
      check_param(&l.weights[i], g.weights[li][i] * inv);
    for (std::size_t i = 0; i < l.biases.size(); ++i)
      check_param(&l.biases[i], g.biases[li][i] * inv);
  }
  return max_rel;
}

// ---------------------------------------------------------------------------
// Full-precision model files (same document shape as the quantized
// network files, minus the format tag)
// ---------------------------------------------------------------------------

inline void save_real_model(const FloatModel& m, const std::string& path) {
  nlohmann::json j;
  j["input_dim"] = m.input_dim;
  j["layers"] = nlohmann::json::array();
  for (const FloatLayer& l : m.layers) {
    nlohmann::json jl;
    jl["out_dim"] = l.out_dim;
    jl["activation"] = activation_name(l.activation);
    nlohmann::json w = nlohmann::json::array(), b = nlohmann::json::array();
    for (double v : l.weights) w.push_back(to_exact_string(rational_from_double(v)));
    for (double v : l.biases) b.push_back(to_exact_string(rational_from_double(v)));
    jl["weights"] = std::move(w);
    jl["biases"] = std::move(b);
    j["layers"].push_back(std::move(jl));
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

inline FloatModel load_real_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  FloatModel m;
  try {
    if (j.contains("format"))
      throw SchemaError(path + ": quantized model where a full-precision one "
                               "was expected");
    m.input_dim = j.at("input_dim").get<int>();
    int dim = m.input_dim;
    for (const auto& jl : j.at("layers")) {
      FloatLayer l;
      l.in_dim = dim;
      l.out_dim = jl.at("out_dim").get<int>();
      l.activation = parse_activation(jl.at("activation").get<std::string>());
      for (const auto& s : jl.at("weights"))
        l.weights.push_back(to_double(parse_rational(s.get<std::string>())));
      for (const auto& s : jl.at("biases"))
        l.biases.push_back(to_double(parse_rational(s.get<std::string>())));
      if (static_cast<int>(l.weights.size()) != l.in_dim * l.out_dim ||
          static_cast<int>(l.biases.size()) != l.out_dim)
        throw SchemaError(path + ": layer parameter count mismatch");
      dim = l.out_dim;
      m.layers.push_back(std::move(l));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return m;
}

}  // namespace lpnn

#endif  // LPNN_TRAINER_HPP
