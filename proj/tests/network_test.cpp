// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpnn/network.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <vector>

#include "lpnn/oracle.hpp"
#include "lpnn/rng.hpp"

namespace lpnn {
namespace {

const FormatSpec p8 = FormatSpec::posit(8, 0);

Code code_of(double v, const FormatSpec& spec = p8) {
  return round_to_format(rational_from_double(v), spec);
}

Code rand_code(Rng& rng, const FormatSpec& spec) {
  for (;;) {
    Code c{static_cast<std::uint32_t>(rng.below(1u << spec.n)), spec};
    if (spec.kind == Kind::Posit && is_nar(c)) continue;
    return c;
  }
}

LayerModel identity_layer(int dim, const FormatSpec& spec, Activation act) {
  LayerModel l;
  l.in_dim = dim;
  l.out_dim = dim;
  l.activation = act;
  l.weights.assign(static_cast<std::size_t>(dim) * dim, zero_code(spec));
  for (int i = 0; i < dim; ++i)
    l.weights[static_cast<std::size_t>(i) * dim + i] = code_of(1.0, spec);
  l.biases.assign(dim, zero_code(spec));
  return l;
}

TEST(LayerForward, IdentityAndRelu) {
  LayerModel l = identity_layer(1, p8, Activation::ReLU);
  std::vector<Code> in = {code_of(1.0)};
  auto out = layer_forward(l, in, p8);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], code_of(1.0));

  // all-zero weights with a negative bias: ReLU clamps to the zero code
  l.biases[0] = code_of(-0.5);
  l.weights[0] = zero_code(p8);
  out = layer_forward(l, in, p8);
  EXPECT_EQ(out[0].bits, 0x00u);

  // the affine readout keeps the negative value
  l.activation = Activation::Affine;
  out = layer_forward(l, in, p8);
  EXPECT_EQ(out[0], code_of(-0.5));
}

TEST(LayerForward, DimensionMismatch) {
  LayerModel l = identity_layer(2, p8, Activation::ReLU);
  std::vector<Code> in = {code_of(1.0)};
  EXPECT_THROW(layer_forward(l, in, p8), DimensionMismatchError);
}

// Every neuron equals ReLU of the oracle's rounding of the exact
// row-dot-input-plus-bias.
TEST(LayerForward, RandomLayerMatchesOracleComposition) {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    LayerModel l;
    l.in_dim = 4;
    l.out_dim = 4;
    l.activation = Activation::ReLU;
    for (int i = 0; i < 16; ++i) l.weights.push_back(rand_code(rng, p8));
    for (int i = 0; i < 4; ++i) l.biases.push_back(rand_code(rng, p8));
    std::vector<Code> in;
    for (int i = 0; i < 4; ++i) in.push_back(rand_code(rng, p8));

    auto out = layer_forward(l, in, p8);
    for (int j = 0; j < 4; ++j) {
      std::span<const Code> row(l.weights.data() + 4 * j, 4);
      Code want = oracle_round(oracle_dot(row, in, l.biases[j]), p8).rounded;
      if (code_is_negative(want)) want = zero_code(p8);
      EXPECT_EQ(out[static_cast<std::size_t>(j)], want) << "neuron " << j;
    }
  }
}

TEST(NetworkForward, EmptyAndChainedIdentity) {
  NetworkModel empty;
  empty.spec = p8;
  empty.input_dim = 3;
  std::vector<Code> in = {code_of(0.5), code_of(0.25), code_of(1.0)};
  auto out = network_forward(empty, in);
  EXPECT_EQ(out, in);

  NetworkModel chain;
  chain.spec = p8;
  chain.input_dim = 3;
  chain.layers.push_back(identity_layer(3, p8, Activation::ReLU));
  chain.layers.push_back(identity_layer(3, p8, Activation::Affine));
  chain.validate();
  out = network_forward(chain, in);
  EXPECT_EQ(out, in);  // nonnegative inputs pass ReLU unchanged
}

TEST(NetworkForward, InterLayerValuesStayCodes) {
  Rng rng(88);
  NetworkModel m;
  m.spec = p8;
  m.input_dim = 4;
  LayerModel l1, l2;
  l1.in_dim = 4;
  l1.out_dim = 5;
  l1.activation = Activation::ReLU;
  for (int i = 0; i < 20; ++i) l1.weights.push_back(rand_code(rng, p8));
  for (int i = 0; i < 5; ++i) l1.biases.push_back(rand_code(rng, p8));
  l2.in_dim = 5;
  l2.out_dim = 2;
  l2.activation = Activation::Affine;
  for (int i = 0; i < 10; ++i) l2.weights.push_back(rand_code(rng, p8));
  for (int i = 0; i < 2; ++i) l2.biases.push_back(rand_code(rng, p8));
  m.layers = {l1, l2};
  m.validate();

  std::vector<Code> in;
  for (int i = 0; i < 4; ++i) in.push_back(rand_code(rng, p8));
  auto mid = layer_forward(m.layers[0], in, p8);
  for (const Code& c : mid) {
    // a valid activation re-rounds to itself
    EXPECT_EQ(round_to_format(*code_to_exact(c), p8), c);
  }
  // determinism across repeated runs
  EXPECT_EQ(network_forward(m, in), network_forward(m, in));
}

TEST(Classify, ArgmaxAndTies) {
  NetworkModel m;
  m.spec = p8;
  m.input_dim = 3;
  m.layers.push_back(identity_layer(3, p8, Activation::Affine));
  std::vector<Code> logits = {code_of(0.0), code_of(1.0), code_of(0.0)};
  EXPECT_EQ(classify(m, logits), 1);
  std::vector<Code> equal = {code_of(0.5), code_of(0.5), code_of(0.5)};
  EXPECT_EQ(classify(m, equal), 0);  // tie breaks to the lowest index
  std::vector<Code> negs = {code_of(-2.0), code_of(-1.0), code_of(-4.0)};
  EXPECT_EQ(classify(m, negs), 1);
}

TEST(ModelFiles, RoundTripPreservesCodes) {
  Rng rng(99);
  const FormatSpec spec = FormatSpec::posit(8, 1);
  NetworkModel m;
  m.spec = spec;
  m.input_dim = 3;
  LayerModel l1;
  l1.in_dim = 3;
  l1.out_dim = 4;
  l1.activation = Activation::ReLU;
  for (int i = 0; i < 12; ++i) l1.weights.push_back(rand_code(rng, spec));
  for (int i = 0; i < 4; ++i) l1.biases.push_back(rand_code(rng, spec));
  LayerModel l2;
  l2.in_dim = 4;
  l2.out_dim = 2;
  l2.activation = Activation::Affine;
  for (int i = 0; i < 8; ++i) l2.weights.push_back(rand_code(rng, spec));
  for (int i = 0; i < 2; ++i) l2.biases.push_back(rand_code(rng, spec));
  m.layers = {l1, l2};
  m.validate();

  const std::string path = std::string(::testing::TempDir()) + "/lpnn_model.json";
  save_network(m, path);
  NetworkModel r = load_network(path);
  std::remove(path.c_str());

  EXPECT_EQ(r.spec, m.spec);
  EXPECT_EQ(r.input_dim, m.input_dim);
  ASSERT_EQ(r.layers.size(), m.layers.size());
  for (std::size_t li = 0; li < m.layers.size(); ++li) {
    EXPECT_EQ(r.layers[li].weights, m.layers[li].weights);
    EXPECT_EQ(r.layers[li].biases, m.layers[li].biases);
    EXPECT_EQ(r.layers[li].activation, m.layers[li].activation);
  }
}

TEST(ModelFiles, MalformedDocuments) {
  const std::string path = std::string(::testing::TempDir()) + "/lpnn_bad.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_THROW(load_network(path), SchemaError);
  {
    std::ofstream out(path);
    out << R"({"format":"posit8es0","layers":[]})";  // input_dim missing
  }
  EXPECT_THROW(load_network(path), SchemaError);
  {
    std::ofstream out(path);
    out << R"({"format":"sundial8","input_dim":1,"layers":[]})";
  }
  EXPECT_THROW(load_network(path), UnknownFormatError);
  std::remove(path.c_str());
  EXPECT_THROW(load_network("/nonexistent/model.json"), IoError);
}

TEST(NetworkModel, ValidationRejectsBadTopology) {
  NetworkModel m;
  m.spec = p8;
  m.input_dim = 2;
  LayerModel l = identity_layer(3, p8, Activation::ReLU);  // wrong in_dim
  m.layers = {l};
  EXPECT_THROW(m.validate(), DimensionMismatchError);

  NetworkModel affine_hidden;
  affine_hidden.spec = p8;
  affine_hidden.input_dim = 2;
  affine_hidden.layers.push_back(identity_layer(2, p8, Activation::Affine));
  affine_hidden.layers.push_back(identity_layer(2, p8, Activation::Affine));
  EXPECT_THROW(affine_hidden.validate(), ConfigError);
}

TEST(QuantizeInputs, RoundsEveryFeature) {
  std::vector<double> feats = {0.0, 1.0, 0.3, 100.0};
  auto codes = quantize_inputs(feats, p8);
  ASSERT_EQ(codes.size(), 4u);
  EXPECT_EQ(codes[0].bits, 0x00u);
  EXPECT_EQ(codes[1].bits, 0x40u);
  EXPECT_EQ(codes[2], round_to_format(rational_from_double(0.3), p8));
  EXPECT_EQ(codes[3].bits, 0x7Fu);  // saturates at 64
}

}  // namespace
}  // namespace lpnn
