#include "vc/mlp.hpp"

#include <cmath>

#include "vc/errors.hpp"

namespace vc {

MlpParams make_mlp(const std::vector<size_t>& dims, Rng& rng) {
  if (dims.size() < 2) throw ConfigError("make_mlp: need at least input and output dims");
  MlpParams params;
  for (size_t i = 0; i + 1 < dims.size(); ++i) {
    DenseLayer layer;
    layer.weight = DenseMatrix(dims[i], dims[i + 1]);
    layer.bias = DenseMatrix(1, dims[i + 1]);
    const double limit = std::sqrt(6.0 / static_cast<double>(dims[i] + dims[i + 1]));
    for (double& w : layer.weight.data) w = rng.uniform(-limit, limit);
    layer.act = (i + 2 < dims.size()) ? Act::kRelu : Act::kLinear;
    params.layers.push_back(std::move(layer));
  }
  return params;
}

void validate(const MlpParams& params) {
  for (size_t i = 0; i < params.layers.size(); ++i) {
    const auto& l = params.layers[i];
    if (l.bias.rows != 1 || l.bias.cols != l.weight.cols)
      throw ShapeError("layer " + std::to_string(i) + ": bias shape mismatch");
    if (i > 0 && params.layers[i - 1].weight.cols != l.weight.rows)
      throw ShapeError("layer " + std::to_string(i) + ": input dim does not match previous layer");
  }
  if (!params.layers.empty() && params.layers.back().act != Act::kLinear)
    throw ConfigError("final layer activation must be linear");
}

ForwardResult mlp_forward(const MlpParams& params, const DenseMatrix& input) {
  validate(params);
  if (!params.layers.empty() && input.cols != params.layers.front().weight.rows)
    throw ShapeError("mlp_forward: input cols " + std::to_string(input.cols) +
                     " != first layer input dim " +
                     std::to_string(params.layers.front().weight.rows));
  require_finite(input, "mlp_forward input");

  ForwardResult res;
  res.tape.input = input;
  DenseMatrix cur = input;
  for (const auto& layer : params.layers) {
    DenseMatrix z = matmul(cur, layer.weight);
    add_row_inplace(z, layer.bias);
    res.tape.preact.push_back(z);
    if (layer.act == Act::kRelu) {
      for (double& v : z.data) v = v > 0.0 ? v : 0.0;
    }
    res.tape.postact.push_back(z);
    cur = std::move(z);
  }
  res.output = cur;
  return res;
}

void GradientSet::add_scaled(const GradientSet& other, double scale) {
  if (d_weight.size() != other.d_weight.size())
    throw ShapeError("GradientSet::add_scaled: layer count mismatch");
  for (size_t i = 0; i < d_weight.size(); ++i) {
    for (size_t k = 0; k < d_weight[i].data.size(); ++k)
      d_weight[i].data[k] += scale * other.d_weight[i].data[k];
    for (size_t k = 0; k < d_bias[i].data.size(); ++k)
      d_bias[i].data[k] += scale * other.d_bias[i].data[k];
  }
}

GradientSet zeros_like(const MlpParams& params) {
  GradientSet g;
  for (const auto& l : params.layers) {
    g.d_weight.emplace_back(l.weight.rows, l.weight.cols);
    g.d_bias.emplace_back(1, l.bias.cols);
  }
  return g;
}

BackwardResult mlp_backward(const MlpParams& params, const ForwardTape& tape,
                            const DenseMatrix& output_grad) {
  const size_t n = params.layers.size();
  if (tape.preact.size() != n || tape.postact.size() != n)
    throw ShapeError("mlp_backward: tape does not match params");
  if (n == 0) return {GradientSet{}, output_grad};
  require_shape(output_grad, tape.postact.back().rows, tape.postact.back().cols,
                "mlp_backward output_grad");

  BackwardResult res;
  res.grads.d_weight.resize(n);
  res.grads.d_bias.resize(n);

  DenseMatrix delta = output_grad;  // d loss / d postact of current layer
  for (size_t li = n; li-- > 0;) {
    const auto& layer = params.layers[li];
    if (layer.act == Act::kRelu) {
      const DenseMatrix& z = tape.preact[li];
      for (size_t k = 0; k < delta.data.size(); ++k)
        if (z.data[k] <= 0.0) delta.data[k] = 0.0;
    }
    const DenseMatrix& layer_in = (li == 0) ? tape.input : tape.postact[li - 1];
    res.grads.d_weight[li] = matmul_tn(layer_in, delta);
    res.grads.d_bias[li] = col_sums(delta);
    delta = matmul_nt(delta, layer.weight);
  }
  res.input_grad = std::move(delta);
  return res;
}

AdamState make_adam_state(const MlpParams& params, double learning_rate, double beta1,
                          double beta2, double epsilon) {
  if (!(beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0))
    throw ConfigError("adam: beta1 and beta2 must lie in (0, 1)");
  AdamState s;
  s.learning_rate = learning_rate;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.epsilon = epsilon;
  for (const auto& l : params.layers) {
    s.m_w.emplace_back(l.weight.rows, l.weight.cols);
    s.v_w.emplace_back(l.weight.rows, l.weight.cols);
    s.m_b.emplace_back(1, l.bias.cols);
    s.v_b.emplace_back(1, l.bias.cols);
  }
  return s;
}

namespace {

void adam_update_tensor(DenseMatrix& param, const DenseMatrix& grad, DenseMatrix& m,
                        DenseMatrix& v, const AdamState& s) {
  const double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
  const double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
  for (size_t k = 0; k < param.data.size(); ++k) {
    const double g = grad.data[k];
    m.data[k] = s.beta1 * m.data[k] + (1.0 - s.beta1) * g;
    v.data[k] = s.beta2 * v.data[k] + (1.0 - s.beta2) * g * g;
    const double mhat = m.data[k] / bc1;
    const double vhat = v.data[k] / bc2;
    param.data[k] -= s.learning_rate * mhat / (std::sqrt(vhat) + s.epsilon);
  }
}

}  // namespace

void adam_step(MlpParams& params, const GradientSet& grads, AdamState& state) {
  const size_t n = params.layers.size();
  if (grads.d_weight.size() != n || grads.d_bias.size() != n ||
      state.m_w.size() != n)
    throw ShapeError("adam_step: layer count mismatch");
  for (size_t i = 0; i < n; ++i) {
    require_shape(grads.d_weight[i], params.layers[i].weight.rows, params.layers[i].weight.cols,
                  "adam_step weight gradient, layer " + std::to_string(i));
    require_shape(grads.d_bias[i], 1, params.layers[i].bias.cols,
                  "adam_step bias gradient, layer " + std::to_string(i));
    require_finite(grads.d_weight[i], "weight gradient of layer " + std::to_string(i));
    require_finite(grads.d_bias[i], "bias gradient of layer " + std::to_string(i));
  }

  ++state.step;
  for (size_t i = 0; i < n; ++i) {
    adam_update_tensor(params.layers[i].weight, grads.d_weight[i], state.m_w[i], state.v_w[i],
                       state);
    adam_update_tensor(params.layers[i].bias, grads.d_bias[i], state.m_b[i], state.v_b[i], state);
  }
}

}  // namespace vc
