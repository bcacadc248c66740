#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vc/errors.hpp"
#include "vc/gradcheck.hpp"
#include "vc/mlp.hpp"
#include "vc/rng.hpp"

using namespace vc;

namespace {

MlpParams single_layer(const DenseMatrix& w, const DenseMatrix& b, Act act) {
  MlpParams p;
  p.layers.push_back({w, b, act});
  return p;
}

DenseMatrix mat(size_t r, size_t c, std::initializer_list<double> vals) {
  DenseMatrix m(r, c);
  size_t i = 0;
  for (double v : vals) m.data[i++] = v;
  return m;
}

}  // namespace

TEST_CASE("forward: identity linear layer returns its input") {
  DenseMatrix w = mat(2, 2, {1, 0, 0, 1});
  DenseMatrix b(1, 2);
  auto p = single_layer(w, b, Act::kLinear);
  DenseMatrix x = mat(1, 2, {0.3, -0.7});
  auto out = mlp_forward(p, x).output;
  CHECK(out(0, 0) == doctest::Approx(0.3));
  CHECK(out(0, 1) == doctest::Approx(-0.7));
}

TEST_CASE("forward: ReLU clamps negatives") {
  DenseMatrix w = mat(2, 2, {1, 0, 0, 1});
  DenseMatrix b(1, 2);
  MlpParams p;
  p.layers.push_back({w, b, Act::kRelu});
  p.layers.push_back({w, b, Act::kLinear});  // keep final layer linear
  DenseMatrix x = mat(1, 2, {-1, 2});
  auto out = mlp_forward(p, x).output;
  CHECK(out(0, 0) == 0.0);
  CHECK(out(0, 1) == 2.0);
}

TEST_CASE("forward: two-layer net matches a hand evaluation") {
  // Hand-computed: z1 = [3.1, -0.7] -> relu [3.1, 0] -> z2 = [3.1, 6.7].
  MlpParams p;
  p.layers.push_back({mat(2, 2, {1, -1, 2, 0.5}), mat(1, 2, {0.1, -0.2}), Act::kRelu});
  p.layers.push_back({mat(2, 2, {1, 2, 3, -1}), mat(1, 2, {0, 0.5}), Act::kLinear});
  auto out = mlp_forward(p, mat(1, 2, {1, 1})).output;
  CHECK(out(0, 0) == doctest::Approx(3.1).epsilon(1e-12));
  CHECK(out(0, 1) == doctest::Approx(6.7).epsilon(1e-12));
}

TEST_CASE("forward: determinism and shape safety") {
  Rng rng(7);
  auto p = make_mlp({4, 8, 3}, rng);
  DenseMatrix x(5, 4);
  for (double& v : x.data) v = rng.uniform(-1, 1);
  auto a = mlp_forward(p, x).output;
  auto b = mlp_forward(p, x).output;
  CHECK(a.data == b.data);

  DenseMatrix bad(5, 3);
  CHECK_THROWS_AS(mlp_forward(p, bad), ShapeError);
}

TEST_CASE("backward: scalar chain rule dy/dw = x") {
  auto p = single_layer(mat(1, 1, {0.37}), DenseMatrix(1, 1), Act::kLinear);
  auto fwd = mlp_forward(p, mat(1, 1, {3.0}));
  auto back = mlp_backward(p, fwd.tape, mat(1, 1, {1.0}));
  CHECK(back.grads.d_weight[0](0, 0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(back.grads.d_bias[0](0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("backward: zero upstream gradient gives zero grads") {
  Rng rng(11);
  auto p = make_mlp({3, 4, 2}, rng);
  DenseMatrix x(6, 3);
  for (double& v : x.data) v = rng.uniform(-1, 1);
  auto fwd = mlp_forward(p, x);
  auto back = mlp_backward(p, fwd.tape, DenseMatrix(6, 2));
  for (const auto& g : back.grads.d_weight)
    for (double v : g.data) CHECK(v == 0.0);
  for (const auto& g : back.grads.d_bias)
    for (double v : g.data) CHECK(v == 0.0);
}

TEST_CASE("backward: tape mismatch rejected") {
  Rng rng(3);
  auto p = make_mlp({3, 4, 2}, rng);
  auto q = make_mlp({3, 2}, rng);
  DenseMatrix x(2, 3);
  auto fwd = mlp_forward(p, x);
  CHECK_THROWS_AS(mlp_backward(q, fwd.tape, DenseMatrix(2, 2)), ShapeError);
}

TEST_CASE("backward matches central finite differences on a random 3-layer net") {
  Rng rng(42);
  auto p = make_mlp({4, 5, 6, 3}, rng);
  DenseMatrix x(2, 4);
  for (double& v : x.data) v = rng.uniform(-1, 1);
  DenseMatrix c(2, 3);  // fixed weighting making the loss scalar
  for (double& v : c.data) v = rng.uniform(-1, 1);

  auto fwd = mlp_forward(p, x);
  auto back = mlp_backward(p, fwd.tape, c);

  std::vector<TensorRef> tensors;
  std::vector<const DenseMatrix*> analytic;
  for (size_t i = 0; i < p.layers.size(); ++i) {
    tensors.push_back({"layer" + std::to_string(i) + ".W", &p.layers[i].weight});
    analytic.push_back(&back.grads.d_weight[i]);
    tensors.push_back({"layer" + std::to_string(i) + ".b", &p.layers[i].bias});
    analytic.push_back(&back.grads.d_bias[i]);
  }
  auto loss = [&]() {
    auto out = mlp_forward(p, x).output;
    double s = 0.0;
    for (size_t k = 0; k < out.data.size(); ++k) s += c.data[k] * out.data[k];
    return s;
  };
  auto report = gradient_check(tensors, analytic, loss);
  CHECK(report.coords_checked > 0);
  CHECK(report.max_rel_error < 1e-4);
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  Rng rng(5);
  auto p = make_mlp({3, 3}, rng);
  auto before = p.layers[0].weight.data;
  auto st = make_adam_state(p, 0.1);
  adam_step(p, zeros_like(p), st);
  CHECK(p.layers[0].weight.data == before);
  CHECK(st.step == 1);
}

TEST_CASE("adam: first step moves by about the learning rate against the gradient") {
  auto p = single_layer(mat(1, 1, {2.0}), DenseMatrix(1, 1), Act::kLinear);
  auto st = make_adam_state(p, 0.01);
  GradientSet g = zeros_like(p);
  g.d_weight[0](0, 0) = 0.73;  // any nonzero gradient
  adam_step(p, g, st);
  const double delta = p.layers[0].weight(0, 0) - 2.0;
  CHECK(delta < 0.0);
  CHECK(std::abs(std::abs(delta) - 0.01) < 1e-6);
}

TEST_CASE("adam: 10 steps on f(w)=w^2 match an independent scalar oracle") {
  auto p = single_layer(mat(1, 1, {1.0}), DenseMatrix(1, 1), Act::kLinear);
  auto st = make_adam_state(p, 0.1);

  // Test-local scalar ADAM, written independently of the library path.
  double w = 1.0, m = 0.0, v = 0.0;
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8, lr = 0.1;
  for (int t = 1; t <= 10; ++t) {
    GradientSet g = zeros_like(p);
    g.d_weight[0](0, 0) = 2.0 * p.layers[0].weight(0, 0);
    adam_step(p, g, st);

    const double grad = 2.0 * w;
    m = b1 * m + (1 - b1) * grad;
    v = b2 * v + (1 - b2) * grad * grad;
    const double mhat = m / (1.0 - std::pow(b1, t));
    const double vhat = v / (1.0 - std::pow(b2, t));
    w -= lr * mhat / (std::sqrt(vhat) + eps);
    CHECK(p.layers[0].weight(0, 0) == doctest::Approx(w).epsilon(1e-12));
  }
  CHECK(std::abs(p.layers[0].weight(0, 0)) < 1.0);
}

TEST_CASE("adam: positive gradient scaling preserves first-update sign pattern") {
  Rng rng(9);
  auto p1 = make_mlp({3, 4, 2}, rng);
  auto p2 = p1;
  auto s1 = make_adam_state(p1, 0.05);
  auto s2 = make_adam_state(p2, 0.05);
  GradientSet g1 = zeros_like(p1);
  for (auto& t : g1.d_weight)
    for (double& v : t.data) v = rng.uniform(-1, 1);
  for (auto& t : g1.d_bias)
    for (double& v : t.data) v = rng.uniform(-1, 1);
  GradientSet g2 = zeros_like(p2);
  g2.add_scaled(g1, 37.5);

  const auto before = p1;
  adam_step(p1, g1, s1);
  adam_step(p2, g2, s2);
  for (size_t i = 0; i < p1.layers.size(); ++i) {
    for (size_t k = 0; k < p1.layers[i].weight.data.size(); ++k) {
      const double d1 = p1.layers[i].weight.data[k] - before.layers[i].weight.data[k];
      const double d2 = p2.layers[i].weight.data[k] - before.layers[i].weight.data[k];
      CHECK(((d1 > 0 && d2 > 0) || (d1 < 0 && d2 < 0) || (d1 == 0 && d2 == 0)));
    }
  }
}

TEST_CASE("adam: shape mismatch and non-finite gradients rejected") {
  Rng rng(13);
  auto p = make_mlp({3, 2}, rng);
  auto st = make_adam_state(p);
  auto other = make_mlp({4, 2}, rng);
  CHECK_THROWS_AS(adam_step(p, zeros_like(other), st), ShapeError);

  GradientSet g = zeros_like(p);
  g.d_weight[0](0, 0) = std::numeric_limits<double>::quiet_NaN();
  const auto before = p.layers[0].weight.data;
  try {
    adam_step(p, g, st);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("layer 0") != std::string::npos);
  }
  CHECK(p.layers[0].weight.data == before);  // validated before any mutation
}

TEST_CASE("gradient_check: quadratic loss over a linear layer") {
  Rng rng(21);
  auto p = make_mlp({2, 3}, rng);
  DenseMatrix x(4, 2);
  for (double& v : x.data) v = rng.uniform(-1, 1);

  auto fwd = mlp_forward(p, x);
  DenseMatrix og = fwd.output;  // d(0.5*sum out^2)/d out = out
  auto back = mlp_backward(p, fwd.tape, og);

  std::vector<TensorRef> tensors{{"W", &p.layers[0].weight}, {"b", &p.layers[0].bias}};
  std::vector<const DenseMatrix*> analytic{&back.grads.d_weight[0], &back.grads.d_bias[0]};
  auto loss = [&]() {
    auto out = mlp_forward(p, x).output;
    double s = 0.0;
    for (double v : out.data) s += 0.5 * v * v;
    return s;
  };
  auto report = gradient_check(tensors, analytic, loss);
  CHECK(report.max_rel_error < 1e-6);
}

TEST_CASE("gradient_check: zero-parameter model yields an empty report") {
  auto report = gradient_check({}, {}, []() { return 0.0; });
  CHECK(report.coords_checked == 0);
  CHECK(report.max_rel_error == 0.0);
}
