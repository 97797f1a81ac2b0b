#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "supmatch/rng.hpp"
#include "supmatch/tokenizer.hpp"

namespace supmatch {

struct ModelConfig {
  TokenizerConfig tokenizer;
  int embed_dim = 64;
  int hidden_dim = 256;
  int proj_dim = 32;
  double dropout = 0.1;
};

/// One named view into a parameter set; biases are column matrices and the
/// classifier weight is a single-row matrix so every tensor is a MatrixXd.
struct TensorRef {
  const char* name;
  Eigen::MatrixXd* value;
};

struct ConstTensorRef {
  const char* name;
  const Eigen::MatrixXd* value;
};

/// All trainable parameters. Tensor enumeration order (also the checkpoint
/// and initialization draw order): embeddings, w1, b1, w2, b2, w_proj,
/// w_cls, b_cls.
struct ModelState {
  ModelConfig cfg;
  Eigen::MatrixXd embeddings;  // V x d
  Eigen::MatrixXd w1, b1;      // h x d, h x 1
  Eigen::MatrixXd w2, b2;      // d x h, d x 1
  Eigen::MatrixXd w_proj;      // p x d
  Eigen::MatrixXd w_cls;       // 1 x 4d
  Eigen::MatrixXd b_cls;       // 1 x 1

  std::vector<TensorRef> tensors();
  std::vector<ConstTensorRef> tensors() const;

  /// Tensors fixed when the encoder is frozen during fine-tuning.
  static bool is_encoder_tensor(const std::string& name);

  bool all_finite() const;
};

/// Uniform(-0.05, 0.05) embeddings, Xavier-uniform dense layers, zero
/// biases. Draws consume row-major per tensor, in enumeration order.
ModelState init_model(const ModelConfig& cfg, uint64_t seed);

/// Same shapes as ModelState, zero-initialized; used for gradients and
/// optimizer moments.
struct TensorSet {
  Eigen::MatrixXd embeddings, w1, b1, w2, b2, w_proj, w_cls, b_cls;

  static TensorSet zeros_like(const ModelState& state);
  std::vector<TensorRef> tensors();
  void set_zero();
};

enum class Mode { train, eval };

/// Forward intermediates needed to replay the backward pass; dropout masks
/// are stored pre-scaled by 1/(1-p).
struct EncodeTrace {
  std::vector<int> tokens;
  bool train_mode = false;
  Eigen::VectorXd mean_embedding;  // d (zero for empty input)
  Eigen::VectorXd hidden;          // h, tanh(w1 x + b1)
  Eigen::VectorXd hidden_mask;     // h, scaled dropout mask (empty in eval mode)
  Eigen::VectorXd pooled;          // d, tanh(w2 hidden' + b2)
  Eigen::VectorXd proj_lin;        // p, w_proj pooled
  double proj_norm = 0.0;          // ||proj_lin||
  Eigen::VectorXd projected;       // p, proj_lin / (proj_norm + 1e-12)
};

/// Mean token embedding -> 2-layer tanh MLP (dropout after the first tanh
/// in train mode; one Bernoulli draw per hidden element, dropped iff
/// u < dropout) -> pooled; projected = normalize(w_proj * pooled) with an
/// epsilon guard of 1e-12 on the norm. rng may be null in eval mode.
EncodeTrace encode(const ModelState& state, std::span<const int> tokens, Mode mode, Rng* rng);

/// Accumulates parameter gradients for one encode call into grads given the
/// upstream gradients on the projected and pooled outputs (either may be
/// zero-sized to mean zero).
void encode_backward(const ModelState& state, const EncodeTrace& trace,
                     const Eigen::VectorXd& grad_projected, const Eigen::VectorXd& grad_pooled,
                     TensorSet& grads);

/// (u, v, |u-v|, u*v) — dimension mismatch throws.
Eigen::VectorXd combine_pair(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

struct PairTrace {
  EncodeTrace left, right;
  Eigen::VectorXd features;      // 4d
  Eigen::VectorXd feature_mask;  // scaled dropout mask (empty in eval mode)
  double logit = 0.0;
};

/// Shared-encoder pairwise head: encodes both sides, combines the pooled
/// vectors, applies dropout in train mode, then the linear classifier.
PairTrace classify_pair(const ModelState& state, std::span<const int> left_tokens,
                        std::span<const int> right_tokens, Mode mode, Rng* rng);

/// freeze_encoder skips encoder gradient accumulation entirely, so encoder
/// tensors receive exactly zero gradient.
void classify_backward(const ModelState& state, const PairTrace& trace, double grad_logit,
                       TensorSet& grads, bool freeze_encoder = false);

double sigmoid(double x);

}  // namespace supmatch
