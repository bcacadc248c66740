#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vc/matrix.hpp"
#include "vc/rng.hpp"

namespace vc {

enum class Act : uint8_t { kLinear = 0, kRelu = 1 };

struct DenseLayer {
  DenseMatrix weight;  // in_dim x out_dim
  DenseMatrix bias;    // 1 x out_dim
  Act act = Act::kLinear;
};

// A fixed-topology feed-forward stack. Output layers are linear; hidden
// layers use ReLU.
struct MlpParams {
  std::vector<DenseLayer> layers;

  size_t input_dim() const { return layers.empty() ? 0 : layers.front().weight.rows; }
  size_t output_dim() const { return layers.empty() ? 0 : layers.back().weight.cols; }
};

// Builds an MLP with the given dimensions, ReLU on hidden layers and a
// linear output layer. Weights are Glorot-uniform, biases zero.
MlpParams make_mlp(const std::vector<size_t>& dims, Rng& rng);

// Checks adjacent layer compatibility and the linear-output invariant.
void validate(const MlpParams& params);

// Per-layer activations retained by the forward pass for backprop.
struct ForwardTape {
  DenseMatrix input;                 // batch x input_dim
  std::vector<DenseMatrix> preact;   // batch x out_dim, before activation
  std::vector<DenseMatrix> postact;  // batch x out_dim, after activation
};

struct ForwardResult {
  DenseMatrix output;
  ForwardTape tape;
};

ForwardResult mlp_forward(const MlpParams& params, const DenseMatrix& input);

// Gradients of a scalar loss w.r.t. every parameter tensor, shape-matched
// to an MlpParams.
struct GradientSet {
  std::vector<DenseMatrix> d_weight;
  std::vector<DenseMatrix> d_bias;

  void add_scaled(const GradientSet& other, double scale);
};

GradientSet zeros_like(const MlpParams& params);

struct BackwardResult {
  GradientSet grads;
  DenseMatrix input_grad;  // batch x input_dim
};

// Reverse-mode pass. `output_grad` is d(loss)/d(output); the ReLU
// subgradient at exactly 0 is taken as 0.
BackwardResult mlp_backward(const MlpParams& params, const ForwardTape& tape,
                            const DenseMatrix& output_grad);

struct AdamState {
  uint64_t step = 0;
  std::vector<DenseMatrix> m_w, v_w, m_b, v_b;
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

AdamState make_adam_state(const MlpParams& params, double learning_rate = 1e-4,
                          double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8);

// One ADAM update minimizing the loss whose gradients are given. The step
// counter is incremented before bias correction. Gradients are validated
// (shape and finiteness) before any state is touched.
void adam_step(MlpParams& params, const GradientSet& grads, AdamState& state);

}  // namespace vc
