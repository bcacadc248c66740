#include "vc/vae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vc/errors.hpp"

namespace vc {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

SpeakerCode one_hot(size_t index, size_t dim) {
  if (index >= dim) throw ConfigError("one_hot: index out of range");
  SpeakerCode c;
  c.v.assign(dim, 0.0);
  c.v[index] = 1.0;
  return c;
}

bool is_one_hot(const SpeakerCode& code) {
  size_t ones = 0;
  for (double x : code.v) {
    if (x == 1.0)
      ++ones;
    else if (x != 0.0)
      return false;
  }
  return ones == 1;
}

VaeModel make_vae(size_t input_dim, size_t latent_dim, size_t speaker_dim,
                  const std::vector<size_t>& hidden, Rng& rng) {
  if (input_dim == 0 || latent_dim == 0 || speaker_dim == 0 || hidden.empty())
    throw ConfigError("make_vae: all dimensions must be positive");
  VaeModel m;
  m.input_dim = input_dim;
  m.latent_dim = latent_dim;
  m.speaker_dim = speaker_dim;
  m.hidden = hidden;

  std::vector<size_t> trunk_dims{input_dim};
  trunk_dims.insert(trunk_dims.end(), hidden.begin(), hidden.end());
  m.encoder_trunk = make_mlp(trunk_dims, rng);
  // make_mlp puts a linear layer last; the trunk feeds the heads, so every
  // trunk layer is a hidden ReLU layer.
  for (auto& l : m.encoder_trunk.layers) l.act = Act::kRelu;

  m.encoder_mu = make_mlp({hidden.back(), latent_dim}, rng);
  m.encoder_logsig = make_mlp({hidden.back(), latent_dim}, rng);

  std::vector<size_t> dec_dims{latent_dim + speaker_dim};
  dec_dims.insert(dec_dims.end(), hidden.begin(), hidden.end());
  dec_dims.push_back(input_dim);
  m.decoder = make_mlp(dec_dims, rng);
  return m;
}

void validate(const VaeModel& m) {
  if (m.encoder_trunk.input_dim() != m.input_dim)
    throw ShapeError("vae: trunk input dim mismatch");
  if (m.encoder_mu.output_dim() != m.latent_dim || m.encoder_logsig.output_dim() != m.latent_dim)
    throw ShapeError("vae: encoder heads must emit latent_dim outputs");
  if (m.encoder_mu.layers.back().act != Act::kLinear ||
      m.encoder_logsig.layers.back().act != Act::kLinear)
    throw ConfigError("vae: encoder heads must be linear");
  if (m.decoder.input_dim() != m.latent_dim + m.speaker_dim)
    throw ShapeError("vae: decoder input dim must equal latent_dim + speaker_dim");
  if (m.decoder.output_dim() != m.input_dim)
    throw ShapeError("vae: decoder output dim must equal input_dim");
  if (!m.speakers.empty() && m.speakers.size() != m.speaker_dim)
    throw ConfigError("vae: speaker list size must equal speaker_dim");
}

std::vector<TensorRef> collect_tensors(VaeModel& model) {
  std::vector<TensorRef> out;
  auto add = [&out](const std::string& prefix, MlpParams& p) {
    for (size_t i = 0; i < p.layers.size(); ++i) {
      out.push_back({prefix + ".L" + std::to_string(i) + ".W", &p.layers[i].weight});
      out.push_back({prefix + ".L" + std::to_string(i) + ".b", &p.layers[i].bias});
    }
  };
  add("enc_trunk", model.encoder_trunk);
  add("enc_mu", model.encoder_mu);
  add("enc_logsig", model.encoder_logsig);
  add("decoder", model.decoder);
  return out;
}

EncodeResult encode(const VaeModel& model, const DenseMatrix& x) {
  validate(model);
  if (x.cols != model.input_dim)
    throw ShapeError("encode: frame dim " + std::to_string(x.cols) + " != input_dim " +
                     std::to_string(model.input_dim));
  auto h = mlp_forward(model.encoder_trunk, x);
  EncodeResult res;
  res.z_mu = mlp_forward(model.encoder_mu, h.output).output;
  res.z_logsig = mlp_forward(model.encoder_logsig, h.output).output;
  return res;
}

LatentSample reparameterize(const DenseMatrix& z_mu, const DenseMatrix& z_logsig, Rng& rng) {
  if (z_mu.rows != z_logsig.rows || z_mu.cols != z_logsig.cols)
    throw ShapeError("reparameterize: z_mu and z_logsig shapes differ");
  LatentSample s;
  s.z_mu = z_mu;
  s.z_logsig = z_logsig;
  s.epsilon = DenseMatrix(z_mu.rows, z_mu.cols);
  for (double& e : s.epsilon.data) e = rng.normal();
  s.z_hat = z_mu;
  for (size_t k = 0; k < s.z_hat.data.size(); ++k)
    s.z_hat.data[k] += s.epsilon.data[k] * std::exp(z_logsig.data[k]);
  return s;
}

std::vector<double> kld_gaussian(const DenseMatrix& z_mu, const DenseMatrix& z_logsig) {
  if (z_mu.rows != z_logsig.rows || z_mu.cols != z_logsig.cols)
    throw ShapeError("kld_gaussian: shapes differ");
  require_finite(z_mu, "kld_gaussian z_mu");
  require_finite(z_logsig, "kld_gaussian z_logsig");
  std::vector<double> out(z_mu.rows, 0.0);
  for (size_t r = 0; r < z_mu.rows; ++r) {
    double acc = 0.0;
    for (size_t c = 0; c < z_mu.cols; ++c) {
      const double mu = z_mu(r, c);
      const double ls = z_logsig(r, c);
      acc += 1.0 + 2.0 * ls - mu * mu - std::exp(2.0 * ls);
    }
    out[r] = -0.5 * acc;
  }
  return out;
}

std::vector<double> gaussian_loglik(const DenseMatrix& x, const DenseMatrix& x_mu, double sigma2) {
  if (x.rows != x_mu.rows || x.cols != x_mu.cols)
    throw ShapeError("gaussian_loglik: shapes differ");
  if (!(sigma2 > 0.0)) throw ConfigError("gaussian_loglik: sigma2 must be positive");
  require_finite(x, "gaussian_loglik x");
  require_finite(x_mu, "gaussian_loglik x_mu");
  const double log_var = std::log(sigma2);
  std::vector<double> out(x.rows, 0.0);
  for (size_t r = 0; r < x.rows; ++r) {
    double acc = 0.0;
    for (size_t c = 0; c < x.cols; ++c) {
      const double d = x(r, c) - x_mu(r, c);
      acc += kLog2Pi + log_var + d * d / sigma2;
    }
    out[r] = -0.5 * acc;
  }
  return out;
}

DenseMatrix codes_to_rows(const std::vector<int>& speaker, size_t speaker_dim) {
  DenseMatrix codes(speaker.size(), speaker_dim);
  for (size_t i = 0; i < speaker.size(); ++i) {
    if (speaker[i] < 0 || static_cast<size_t>(speaker[i]) >= speaker_dim)
      throw ConfigError("speaker index " + std::to_string(speaker[i]) + " out of range");
    codes(i, static_cast<size_t>(speaker[i])) = 1.0;
  }
  return codes;
}

namespace {

struct VaeForward {
  ForwardResult trunk, mu, logsig, dec;
  LatentSample latent;
  DenseMatrix dec_in;
  std::vector<double> kld_rows, loglik_rows;
};

VaeForward vae_forward(const VaeModel& model, const DenseMatrix& frames, const DenseMatrix& codes,
                       const DenseMatrix& epsilon) {
  if (codes.rows != frames.rows) throw ShapeError("vae: one speaker code per frame required");
  if (codes.cols != model.speaker_dim) throw ShapeError("vae: speaker code dim mismatch");
  VaeForward f;
  f.trunk = mlp_forward(model.encoder_trunk, frames);
  f.mu = mlp_forward(model.encoder_mu, f.trunk.output);
  f.logsig = mlp_forward(model.encoder_logsig, f.trunk.output);

  require_shape(epsilon, frames.rows, model.latent_dim, "vae epsilon");
  f.latent.z_mu = f.mu.output;
  f.latent.z_logsig = f.logsig.output;
  f.latent.epsilon = epsilon;
  f.latent.z_hat = f.latent.z_mu;
  for (size_t k = 0; k < f.latent.z_hat.data.size(); ++k)
    f.latent.z_hat.data[k] += epsilon.data[k] * std::exp(f.latent.z_logsig.data[k]);

  f.dec_in = hcat(f.latent.z_hat, codes);
  f.dec = mlp_forward(model.decoder, f.dec_in);
  f.kld_rows = kld_gaussian(f.latent.z_mu, f.latent.z_logsig);
  f.loglik_rows = gaussian_loglik(frames, f.dec.output);
  return f;
}

ElboBreakdown breakdown_from_rows(const std::vector<double>& kld_rows,
                                  const std::vector<double>& loglik_rows) {
  ElboBreakdown b;
  const double n = static_cast<double>(kld_rows.size());
  b.kld = std::accumulate(kld_rows.begin(), kld_rows.end(), 0.0) / n;
  b.loglik = std::accumulate(loglik_rows.begin(), loglik_rows.end(), 0.0) / n;
  b.elbo = b.loglik - b.kld;
  return b;
}

}  // namespace

ElboBreakdown elbo_batch(const VaeModel& model, const DenseMatrix& frames,
                         const DenseMatrix& codes, uint64_t rng_seed) {
  validate(model);
  if (frames.rows == 0) throw ConfigError("elbo_batch: empty batch");
  Rng rng(rng_seed);
  DenseMatrix eps(frames.rows, model.latent_dim);
  for (double& e : eps.data) e = rng.normal();
  auto f = vae_forward(model, frames, codes, eps);
  return breakdown_from_rows(f.kld_rows, f.loglik_rows);
}

VaeStep elbo_backward(const VaeModel& model, const DenseMatrix& frames, const DenseMatrix& codes,
                      const DenseMatrix& epsilon) {
  validate(model);
  auto f = vae_forward(model, frames, codes, epsilon);
  const size_t batch = frames.rows;
  const double inv_b = 1.0 / static_cast<double>(batch);

  VaeStep step;
  step.breakdown = breakdown_from_rows(f.kld_rows, f.loglik_rows);

  // Loss minimized: mean(kld - loglik). d(-loglik)/d(x_mu) = x_mu - x.
  DenseMatrix d_xmu(batch, model.input_dim);
  for (size_t k = 0; k < d_xmu.data.size(); ++k)
    d_xmu.data[k] = (f.dec.output.data[k] - frames.data[k]) * inv_b;

  auto dec_back = mlp_backward(model.decoder, f.dec.tape, d_xmu);
  step.g_decoder = std::move(dec_back.grads);

  // Split decoder-input gradient; the speaker-code block has no parameters.
  DenseMatrix d_zhat(batch, model.latent_dim);
  for (size_t r = 0; r < batch; ++r)
    for (size_t c = 0; c < model.latent_dim; ++c) d_zhat(r, c) = dec_back.input_grad(r, c);

  // KLD path: d(kld)/d(z_mu) = z_mu, d(kld)/d(logsig) = exp(2 logsig) - 1.
  // Reparameterization path: d(z_hat)/d(logsig) = epsilon * exp(logsig).
  DenseMatrix d_zmu = d_zhat;
  DenseMatrix d_logsig(batch, model.latent_dim);
  for (size_t k = 0; k < d_zmu.data.size(); ++k) {
    const double ls = f.latent.z_logsig.data[k];
    d_zmu.data[k] += f.latent.z_mu.data[k] * inv_b;
    d_logsig.data[k] =
        d_zhat.data[k] * epsilon.data[k] * std::exp(ls) + (std::exp(2.0 * ls) - 1.0) * inv_b;
  }

  auto mu_back = mlp_backward(model.encoder_mu, f.mu.tape, d_zmu);
  auto ls_back = mlp_backward(model.encoder_logsig, f.logsig.tape, d_logsig);
  step.g_mu = std::move(mu_back.grads);
  step.g_logsig = std::move(ls_back.grads);

  DenseMatrix d_h = mu_back.input_grad;
  for (size_t k = 0; k < d_h.data.size(); ++k) d_h.data[k] += ls_back.input_grad.data[k];
  step.g_trunk = mlp_backward(model.encoder_trunk, f.trunk.tape, d_h).grads;
  return step;
}

double vae_loss(const VaeModel& model, const DenseMatrix& frames, const DenseMatrix& codes,
                const DenseMatrix& epsilon) {
  auto f = vae_forward(model, frames, codes, epsilon);
  auto b = breakdown_from_rows(f.kld_rows, f.loglik_rows);
  return -b.elbo;
}

VaeTrainResult train(const VaeModel& init, const TrainingSet& data, const VaeTrainConfig& cfg) {
  validate(init);
  if (data.frames.rows == 0) throw ConfigError("train: empty training set");
  if (data.speaker.size() != data.frames.rows)
    throw ConfigError("train: one speaker code per frame required");
  if (data.speaker_dim != init.speaker_dim)
    throw ConfigError("train: speaker_dim mismatch between model and training set");
  if (data.frames.cols != init.input_dim) throw ConfigError("train: frame dim mismatch");
  if (cfg.epochs == 0 || cfg.batch_size == 0)
    throw ConfigError("train: epochs and batch size must be positive");

  VaeTrainResult result;
  VaeModel model = init;
  Rng shuffle_rng(mix_seed(cfg.seed, 0xA11C));
  Rng eps_rng(mix_seed(cfg.seed, 0xE125));

  AdamState st_trunk = make_adam_state(model.encoder_trunk, cfg.learning_rate, cfg.beta1,
                                       cfg.beta2, cfg.adam_epsilon);
  AdamState st_mu =
      make_adam_state(model.encoder_mu, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.adam_epsilon);
  AdamState st_logsig = make_adam_state(model.encoder_logsig, cfg.learning_rate, cfg.beta1,
                                        cfg.beta2, cfg.adam_epsilon);
  AdamState st_dec =
      make_adam_state(model.decoder, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.adam_epsilon);

  const size_t n = data.frames.rows;
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  result.model = model;
  double best_elbo = -std::numeric_limits<double>::infinity();

  for (size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    // Fisher-Yates over the unified frame set; all speakers mixed jointly.
    for (size_t i = n; i > 1; --i) std::swap(order[i - 1], order[shuffle_rng.below(i)]);

    double sum_kld = 0.0, sum_loglik = 0.0;
    bool bad = false;
    for (size_t start = 0; start < n && !bad; start += cfg.batch_size) {
      const size_t b = std::min(cfg.batch_size, n - start);
      DenseMatrix frames(b, data.frames.cols);
      std::vector<int> spk(b);
      for (size_t i = 0; i < b; ++i) {
        const size_t src = order[start + i];
        std::copy_n(data.frames.row_ptr(src), data.frames.cols, frames.row_ptr(i));
        spk[i] = data.speaker[src];
      }
      DenseMatrix codes = codes_to_rows(spk, data.speaker_dim);
      DenseMatrix eps(b, model.latent_dim);
      for (double& e : eps.data) e = eps_rng.normal();

      VaeStep step;
      try {
        step = elbo_backward(model, frames, codes, eps);
      } catch (const NumericError&) {
        bad = true;
        break;
      }
      if (!std::isfinite(step.breakdown.elbo)) {
        bad = true;
        break;
      }
      sum_kld += step.breakdown.kld * static_cast<double>(b);
      sum_loglik += step.breakdown.loglik * static_cast<double>(b);
      try {
        adam_step(model.encoder_trunk, step.g_trunk, st_trunk);
        adam_step(model.encoder_mu, step.g_mu, st_mu);
        adam_step(model.encoder_logsig, step.g_logsig, st_logsig);
        adam_step(model.decoder, step.g_decoder, st_dec);
      } catch (const NumericError&) {
        bad = true;
        break;
      }
    }
    if (bad) {
      result.diverged = true;
      result.note = "non-finite loss or gradient at epoch " + std::to_string(epoch) +
                    "; kept checkpoint from epoch " + std::to_string(result.best_epoch);
      break;
    }

    ElboBreakdown epoch_mean;
    epoch_mean.kld = sum_kld / static_cast<double>(n);
    epoch_mean.loglik = sum_loglik / static_cast<double>(n);
    epoch_mean.elbo = epoch_mean.loglik - epoch_mean.kld;
    result.history.push_back(epoch_mean);

    if (epoch_mean.elbo > best_elbo || result.best_epoch == 0) {
      best_elbo = epoch_mean.elbo;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

DenseMatrix convert_frame(const VaeModel& model, const DenseMatrix& x_row,
                          const SpeakerCode& y_target) {
  validate(model);
  require_shape(x_row, 1, model.input_dim, "convert_frame input");
  if (y_target.v.size() != model.speaker_dim)
    throw ShapeError("convert_frame: speaker code dim mismatch");
  if (!is_one_hot(y_target)) throw ConfigError("convert_frame: speaker code must be one-hot");

  auto enc = encode(model, x_row);
  DenseMatrix code(1, model.speaker_dim);
  for (size_t c = 0; c < model.speaker_dim; ++c) code(0, c) = y_target.v[c];
  DenseMatrix dec_in = hcat(enc.z_mu, code);
  return mlp_forward(model.decoder, dec_in).output;
}

DenseMatrix convert_utterance(const VaeModel& model, const DenseMatrix& frames,
                              const SpeakerCode& y_target) {
  DenseMatrix out(frames.rows, model.input_dim);
  for (size_t r = 0; r < frames.rows; ++r) {
    DenseMatrix row = frames.row(r);
    DenseMatrix conv = convert_frame(model, row, y_target);
    out.set_row(r, conv);
  }
  return out;
}

}  // namespace vc
