#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vc/gradcheck.hpp"
#include "vc/matrix.hpp"
#include "vc/mlp.hpp"
#include "vc/rng.hpp"

namespace vc {

// One-hot identity of a training speaker; the decoder's conditioning input.
struct SpeakerCode {
  std::vector<double> v;
};

SpeakerCode one_hot(size_t index, size_t dim);
bool is_one_hot(const SpeakerCode& code);

// Speaker-conditioned variational auto-encoder. The two encoder heads share
// the hidden stack (`encoder_trunk`) and differ only in their linear output
// layers. The decoder consumes [z | speaker code] and emits the spectral
// mean; its output variance is fixed to the identity, so no variance head
// is kept.
struct VaeModel {
  MlpParams encoder_trunk;   // input_dim -> hidden[0] -> ... -> hidden.back(), ReLU
  MlpParams encoder_mu;      // hidden.back() -> latent_dim, linear
  MlpParams encoder_logsig;  // hidden.back() -> latent_dim, linear
  MlpParams decoder;         // latent_dim + speaker_dim -> hidden -> input_dim, linear out

  size_t input_dim = 0;
  size_t latent_dim = 0;
  size_t speaker_dim = 0;
  std::vector<size_t> hidden;

  // Ordered speaker ids; position = one-hot index. Filled by the trainer.
  std::vector<std::string> speakers;
  std::string variant;  // "pair" | "multi" | "disj" | "" for ad-hoc models
};

VaeModel make_vae(size_t input_dim, size_t latent_dim, size_t speaker_dim,
                  const std::vector<size_t>& hidden, Rng& rng);

void validate(const VaeModel& model);

// Named references to every trainable tensor, fixed order (trunk, mu head,
// log-sigma head, decoder).
std::vector<TensorRef> collect_tensors(VaeModel& model);

// Batched latent draw; every field is batch x latent_dim.
struct LatentSample {
  DenseMatrix z_mu;
  DenseMatrix z_logsig;
  DenseMatrix epsilon;
  DenseMatrix z_hat;  // z_mu + epsilon .* exp(z_logsig)
};

struct EncodeResult {
  DenseMatrix z_mu;
  DenseMatrix z_logsig;
};

// Deterministic encoder pass (both heads).
EncodeResult encode(const VaeModel& model, const DenseMatrix& x);

// Draws epsilon ~ N(0, I) from the given rng and applies the
// reparameterization z_hat = z_mu + epsilon .* exp(z_logsig).
LatentSample reparameterize(const DenseMatrix& z_mu, const DenseMatrix& z_logsig, Rng& rng);

// Closed-form KL divergence of N(z_mu, diag(exp(z_logsig)^2)) from N(0, I),
// summed over dimensions, one value per row. Always >= 0.
std::vector<double> kld_gaussian(const DenseMatrix& z_mu, const DenseMatrix& z_logsig);

// Log density of x under N(x_mu, sigma2 * I), summed over dimensions, one
// value per row. sigma2 defaults to the identity choice used throughout.
std::vector<double> gaussian_loglik(const DenseMatrix& x, const DenseMatrix& x_mu,
                                    double sigma2 = 1.0);

// Per-frame lower-bound decomposition, averaged over a batch.
struct ElboBreakdown {
  double kld = 0.0;     // nats per frame
  double loglik = 0.0;  // nats per frame
  double elbo = 0.0;    // loglik - kld, exact
};

// Unified multi-speaker frame set: one speaker index per frame.
struct TrainingSet {
  DenseMatrix frames;  // N x input_dim, log-spectra
  std::vector<int> speaker;
  size_t speaker_dim = 0;
};

DenseMatrix codes_to_rows(const std::vector<int>& speaker, size_t speaker_dim);

// Forward-only evaluation of the approximated lower bound on a batch.
ElboBreakdown elbo_batch(const VaeModel& model, const DenseMatrix& frames,
                         const DenseMatrix& codes, uint64_t rng_seed);

// Loss (-mean ELBO) and gradients for one minibatch with frozen epsilon.
struct VaeStep {
  ElboBreakdown breakdown;
  GradientSet g_trunk, g_mu, g_logsig, g_decoder;
};

VaeStep elbo_backward(const VaeModel& model, const DenseMatrix& frames, const DenseMatrix& codes,
                      const DenseMatrix& epsilon);

// Forward-only loss with frozen epsilon; the target of finite-difference
// gradient checks.
double vae_loss(const VaeModel& model, const DenseMatrix& frames, const DenseMatrix& codes,
                const DenseMatrix& epsilon);

struct VaeTrainConfig {
  size_t epochs = 200;
  size_t batch_size = 128;
  double learning_rate = 1e-4;
  uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
};

struct VaeTrainResult {
  VaeModel model;  // best-ELBO checkpoint over the epoch budget
  std::vector<ElboBreakdown> history;
  size_t best_epoch = 0;  // 1-based
  bool diverged = false;
  std::string note;
};

// Point-wise stochastic training over the unified frame set: shuffled
// mini-batches per epoch, ADAM on the negative lower bound. Returns the
// best-ELBO checkpoint. Aborts on non-finite loss, keeping the last good
// checkpoint.
VaeTrainResult train(const VaeModel& init, const TrainingSet& data, const VaeTrainConfig& cfg);

// Conversion: x_hat = decoder([encoder_mu(x) | y]). No sampling.
DenseMatrix convert_frame(const VaeModel& model, const DenseMatrix& x_row,
                          const SpeakerCode& y_target);

// Row-wise conversion of a whole utterance; preserves frame count.
DenseMatrix convert_utterance(const VaeModel& model, const DenseMatrix& frames,
                              const SpeakerCode& y_target);

}  // namespace vc
