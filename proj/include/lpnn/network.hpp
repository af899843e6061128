// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LPNN_NETWORK_HPP
#define LPNN_NETWORK_HPP

#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpnn/codec.hpp"
#include "lpnn/emac.hpp"
#include "lpnn/errors.hpp"
#include "lpnn/format.hpp"

// Feed-forward MLP where every neuron is one exact multiply-accumulate:
// activations are re-encoded into the model's n-bit format between
// layers, so nothing wider than a code ever crosses a layer boundary.

namespace lpnn {

enum class Activation { ReLU, Affine };

inline std::string activation_name(Activation a) {
  return a == Activation::ReLU ? "relu" : "affine";
}

inline Activation parse_activation(const std::string& s) {
  if (s == "relu") return Activation::ReLU;
  if (s == "affine") return Activation::Affine;
  throw SchemaError("unknown activation '" + s + "'");
}

struct LayerModel {
  int in_dim = 0;
  int out_dim = 0;
  Activation activation = Activation::ReLU;
  std::vector<Code> weights;  // row-major, out_dim x in_dim
  std::vector<Code> biases;   // out_dim
};

struct NetworkModel {
  FormatSpec spec;
  int input_dim = 0;
  std::vector<LayerModel> layers;

  void validate() const {
    int dim = input_dim;
    for (std::size_t li = 0; li < layers.size(); ++li) {
      const LayerModel& l = layers[li];
      if (l.in_dim != dim)
        throw DimensionMismatchError("layer " + std::to_string(li) +
                                     " expects " + std::to_string(l.in_dim) +
                                     " inputs, got " + std::to_string(dim));
      if (static_cast<int>(l.weights.size()) != l.in_dim * l.out_dim ||
          static_cast<int>(l.biases.size()) != l.out_dim)
        throw DimensionMismatchError("layer " + std::to_string(li) +
                                     " parameter count mismatch");
      const bool last = li + 1 == layers.size();
      if (!last && l.activation != Activation::ReLU)
        throw ConfigError("hidden layer " + std::to_string(li) +
                          " must use relu");
      for (const Code& c : l.weights)
        if (c.spec != spec) throw FormatMismatchError("weight format differs");
      for (const Code& c : l.biases)
        if (c.spec != spec) throw FormatMismatchError("bias format differs");
      dim = l.out_dim;
    }
  }
};

/// ReLU on codes: value-negative codes map to the exact zero code.
inline Code relu_code(const Code& c) {
  return code_is_negative(c) ? zero_code(c.spec) : c;
}

/// One layer: out_j = act(emac(weights_row_j, input, bias_j)), k = in_dim.
inline std::vector<Code> layer_forward(const LayerModel& layer,
                                       std::span<const Code> input,
                                       const FormatSpec& spec) {
  if (static_cast<int>(input.size()) != layer.in_dim)
    throw DimensionMismatchError("layer_forward: got " +
                                 std::to_string(input.size()) + " inputs, want " +
                                 std::to_string(layer.in_dim));
  std::vector<Code> out;
  out.reserve(layer.out_dim);
  for (int j = 0; j < layer.out_dim; ++j) {
    MacConfig cfg(spec, layer.in_dim > 0 ? layer.in_dim : 1, layer.biases[j]);
    std::span<const Code> row(layer.weights.data() +
                                  static_cast<std::size_t>(j) * layer.in_dim,
                              static_cast<std::size_t>(layer.in_dim));
    Code acc = emac(row, input, cfg);
    out.push_back(layer.activation == Activation::ReLU ? relu_code(acc) : acc);
  }
  return out;
}

inline std::vector<Code> network_forward(const NetworkModel& model,
                                         std::span<const Code> input) {
  if (static_cast<int>(input.size()) != model.input_dim)
    throw DimensionMismatchError("network_forward: input dim");
  std::vector<Code> act(input.begin(), input.end());
  for (const LayerModel& layer : model.layers)
    act = layer_forward(layer, act, model.spec);
  return act;
}

/// Argmax over the readout codes; ties break to the lowest index.
inline int classify(const NetworkModel& model, std::span<const Code> input) {
  std::vector<Code> logits = network_forward(model, input);
  if (logits.empty()) throw DimensionMismatchError("classify: empty readout");
  int best = 0;
  Rational best_v = *code_to_exact(logits[0]);
  for (int i = 1; i < static_cast<int>(logits.size()); ++i) {
    Rational v = *code_to_exact(logits[i]);
    if (v > best_v) {
      best = i;
      best_v = v;
    }
  }
  return best;
}

/// Quantizes raw features into the model's format.
inline std::vector<Code> quantize_inputs(std::span<const double> features,
                                         const FormatSpec& spec) {
  std::vector<Code> out;
  out.reserve(features.size());
  for (double f : features) out.push_back(round_to_format(rational_from_double(f), spec));
  return out;
}

// ---------------------------------------------------------------------------
// Model files. Parameters are stored as exact decimal strings and
// re-quantized on load; raw bit patterns never hit disk, so files stay
// portable across layout changes.
// ---------------------------------------------------------------------------

inline nlohmann::json network_to_json(const NetworkModel& model) {
  nlohmann::json j;
  j["format"] = format_tag(model.spec);
  j["input_dim"] = model.input_dim;
  j["layers"] = nlohmann::json::array();
  for (const LayerModel& l : model.layers) {
    nlohmann::json jl;
    jl["out_dim"] = l.out_dim;
    jl["activation"] = activation_name(l.activation);
    nlohmann::json w = nlohmann::json::array(), b = nlohmann::json::array();
    for (const Code& c : l.weights) w.push_back(to_exact_string(*code_to_exact(c)));
    for (const Code& c : l.biases) b.push_back(to_exact_string(*code_to_exact(c)));
    jl["weights"] = std::move(w);
    jl["biases"] = std::move(b);
    j["layers"].push_back(std::move(jl));
  }
  return j;
}

inline NetworkModel network_from_json(const nlohmann::json& j) {
  NetworkModel model;
  try {
    model.spec = parse_format_tag(j.at("format").get<std::string>());
    model.input_dim = j.at("input_dim").get<int>();
    int dim = model.input_dim;
    for (const auto& jl : j.at("layers")) {
      LayerModel l;
      l.in_dim = dim;
      l.out_dim = jl.at("out_dim").get<int>();
      l.activation = parse_activation(jl.at("activation").get<std::string>());
      for (const auto& s : jl.at("weights"))
        l.weights.push_back(
            round_to_format(parse_rational(s.get<std::string>()), model.spec));
      for (const auto& s : jl.at("biases"))
        l.biases.push_back(
            round_to_format(parse_rational(s.get<std::string>()), model.spec));
      dim = l.out_dim;
      model.layers.push_back(std::move(l));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("model document: ") + e.what());
  }
  model.validate();
  return model;
}

inline void save_network(const NetworkModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << network_to_json(model).dump(2) << "\n";
}

inline NetworkModel load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return network_from_json(j);
}

}  // namespace lpnn

#endif  // LPNN_NETWORK_HPP
