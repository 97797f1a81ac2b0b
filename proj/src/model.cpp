#include "supmatch/model.hpp"

#include <cmath>

#include "supmatch/errors.hpp"

namespace supmatch {

namespace {

constexpr double kNormEpsilon = 1e-12;

void fill_uniform(Eigen::MatrixXd& m, double lo, double hi, Rng& rng) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = lo + (hi - lo) * rng.next_unit();
    }
  }
}

void fill_xavier(Eigen::MatrixXd& m, Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  fill_uniform(m, -bound, bound, rng);
}

Eigen::VectorXd dropout_mask(Eigen::Index n, double p, Rng& rng) {
  Eigen::VectorXd mask(n);
  const double scale = 1.0 / (1.0 - p);
  for (Eigen::Index i = 0; i < n; ++i) {
    mask[i] = rng.bernoulli(p) ? 0.0 : scale;
  }
  return mask;
}

}  // namespace

std::vector<TensorRef> ModelState::tensors() {
  return {{"embeddings", &embeddings}, {"w1", &w1},         {"b1", &b1},
          {"w2", &w2},                 {"b2", &b2},         {"w_proj", &w_proj},
          {"w_cls", &w_cls},           {"b_cls", &b_cls}};
}

std::vector<ConstTensorRef> ModelState::tensors() const {
  return {{"embeddings", &embeddings}, {"w1", &w1},         {"b1", &b1},
          {"w2", &w2},                 {"b2", &b2},         {"w_proj", &w_proj},
          {"w_cls", &w_cls},           {"b_cls", &b_cls}};
}

bool ModelState::is_encoder_tensor(const std::string& name) {
  return name == "embeddings" || name == "w1" || name == "b1" || name == "w2" || name == "b2" ||
         name == "w_proj";
}

bool ModelState::all_finite() const {
  for (const auto& t : tensors()) {
    if (!t.value->allFinite()) return false;
  }
  return true;
}

ModelState init_model(const ModelConfig& cfg, uint64_t seed) {
  if (cfg.embed_dim < 1 || cfg.hidden_dim < 1 || cfg.proj_dim < 1) {
    throw ParameterError("model dimensions must be positive");
  }
  if (cfg.dropout < 0.0 || cfg.dropout >= 1.0) {
    throw ParameterError("dropout must be in [0, 1)");
  }
  const Eigen::Index v = cfg.tokenizer.vocab_size;
  const Eigen::Index d = cfg.embed_dim;
  const Eigen::Index h = cfg.hidden_dim;
  const Eigen::Index p = cfg.proj_dim;

  ModelState state;
  state.cfg = cfg;
  state.embeddings.resize(v, d);
  state.w1.resize(h, d);
  state.b1 = Eigen::MatrixXd::Zero(h, 1);
  state.w2.resize(d, h);
  state.b2 = Eigen::MatrixXd::Zero(d, 1);
  state.w_proj.resize(p, d);
  state.w_cls.resize(1, 4 * d);
  state.b_cls = Eigen::MatrixXd::Zero(1, 1);

  Rng rng(seed);
  fill_uniform(state.embeddings, -0.05, 0.05, rng);
  fill_xavier(state.w1, d, h, rng);
  fill_xavier(state.w2, h, d, rng);
  fill_xavier(state.w_proj, d, p, rng);
  fill_xavier(state.w_cls, 4 * d, 1, rng);
  return state;
}

TensorSet TensorSet::zeros_like(const ModelState& state) {
  TensorSet set;
  set.embeddings = Eigen::MatrixXd::Zero(state.embeddings.rows(), state.embeddings.cols());
  set.w1 = Eigen::MatrixXd::Zero(state.w1.rows(), state.w1.cols());
  set.b1 = Eigen::MatrixXd::Zero(state.b1.rows(), state.b1.cols());
  set.w2 = Eigen::MatrixXd::Zero(state.w2.rows(), state.w2.cols());
  set.b2 = Eigen::MatrixXd::Zero(state.b2.rows(), state.b2.cols());
  set.w_proj = Eigen::MatrixXd::Zero(state.w_proj.rows(), state.w_proj.cols());
  set.w_cls = Eigen::MatrixXd::Zero(state.w_cls.rows(), state.w_cls.cols());
  set.b_cls = Eigen::MatrixXd::Zero(state.b_cls.rows(), state.b_cls.cols());
  return set;
}

std::vector<TensorRef> TensorSet::tensors() {
  return {{"embeddings", &embeddings}, {"w1", &w1},         {"b1", &b1},
          {"w2", &w2},                 {"b2", &b2},         {"w_proj", &w_proj},
          {"w_cls", &w_cls},           {"b_cls", &b_cls}};
}

void TensorSet::set_zero() {
  for (auto& t : tensors()) t.value->setZero();
}

EncodeTrace encode(const ModelState& state, std::span<const int> tokens, Mode mode, Rng* rng) {
  const Eigen::Index d = state.cfg.embed_dim;
  EncodeTrace trace;
  trace.tokens.assign(tokens.begin(), tokens.end());
  trace.train_mode = (mode == Mode::train);

  trace.mean_embedding = Eigen::VectorXd::Zero(d);
  for (const int id : tokens) {
    if (id < 0 || id >= state.cfg.tokenizer.vocab_size) {
      throw ParameterError("token id out of range: " + std::to_string(id));
    }
    trace.mean_embedding += state.embeddings.row(id).transpose();
  }
  if (!tokens.empty()) trace.mean_embedding /= static_cast<double>(tokens.size());

  const Eigen::VectorXd pre_hidden = state.w1 * trace.mean_embedding + state.b1.col(0);
  trace.hidden = pre_hidden.array().tanh();

  Eigen::VectorXd hidden_dropped = trace.hidden;
  if (trace.train_mode && state.cfg.dropout > 0.0) {
    if (rng == nullptr) throw UsageError("train-mode encode needs a generator");
    trace.hidden_mask = dropout_mask(trace.hidden.size(), state.cfg.dropout, *rng);
    hidden_dropped = trace.hidden.cwiseProduct(trace.hidden_mask);
  }

  const Eigen::VectorXd pre_pooled = state.w2 * hidden_dropped + state.b2.col(0);
  trace.pooled = pre_pooled.array().tanh();

  trace.proj_lin = state.w_proj * trace.pooled;
  trace.proj_norm = trace.proj_lin.norm();
  trace.projected = trace.proj_lin / (trace.proj_norm + kNormEpsilon);
  return trace;
}

void encode_backward(const ModelState& state, const EncodeTrace& trace,
                     const Eigen::VectorXd& grad_projected, const Eigen::VectorXd& grad_pooled,
                     TensorSet& grads) {
  const Eigen::Index d = state.cfg.embed_dim;
  const Eigen::Index p = state.cfg.proj_dim;
  if (trace.pooled.size() != d) throw UsageError("backward without a recorded forward trace");

  Eigen::VectorXd g_pooled = Eigen::VectorXd::Zero(d);
  if (grad_pooled.size() == d) g_pooled = grad_pooled;

  if (grad_projected.size() == p) {
    // projected = y / (n + eps), y = w_proj pooled, n = ||y||.
    const double denom = trace.proj_norm + kNormEpsilon;
    Eigen::VectorXd g_proj_lin = grad_projected / denom;
    if (trace.proj_norm > 0.0) {
      const double inner = trace.proj_lin.dot(grad_projected);
      g_proj_lin -= trace.proj_lin * (inner / (trace.proj_norm * denom * denom));
    }
    grads.w_proj += g_proj_lin * trace.pooled.transpose();
    g_pooled += state.w_proj.transpose() * g_proj_lin;
  }

  // pooled = tanh(a2)
  const Eigen::VectorXd g_a2 =
      g_pooled.cwiseProduct((1.0 - trace.pooled.array().square()).matrix());

  Eigen::VectorXd hidden_dropped = trace.hidden;
  if (trace.hidden_mask.size() == trace.hidden.size()) {
    hidden_dropped = trace.hidden.cwiseProduct(trace.hidden_mask);
  }
  grads.w2 += g_a2 * hidden_dropped.transpose();
  grads.b2.col(0) += g_a2;

  Eigen::VectorXd g_hidden = state.w2.transpose() * g_a2;
  if (trace.hidden_mask.size() == trace.hidden.size()) {
    g_hidden = g_hidden.cwiseProduct(trace.hidden_mask);
  }
  const Eigen::VectorXd g_a1 =
      g_hidden.cwiseProduct((1.0 - trace.hidden.array().square()).matrix());

  grads.w1 += g_a1 * trace.mean_embedding.transpose();
  grads.b1.col(0) += g_a1;

  if (!trace.tokens.empty()) {
    const Eigen::VectorXd g_mean =
        (state.w1.transpose() * g_a1) / static_cast<double>(trace.tokens.size());
    for (const int id : trace.tokens) {
      grads.embeddings.row(id) += g_mean.transpose();
    }
  }
}

Eigen::VectorXd combine_pair(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) {
    throw ParameterError("combine_pair dimension mismatch: " + std::to_string(u.size()) +
                         " vs " + std::to_string(v.size()));
  }
  const Eigen::Index d = u.size();
  Eigen::VectorXd out(4 * d);
  out.segment(0, d) = u;
  out.segment(d, d) = v;
  out.segment(2 * d, d) = (u - v).cwiseAbs();
  out.segment(3 * d, d) = u.cwiseProduct(v);
  return out;
}

PairTrace classify_pair(const ModelState& state, std::span<const int> left_tokens,
                        std::span<const int> right_tokens, Mode mode, Rng* rng) {
  PairTrace trace;
  trace.left = encode(state, left_tokens, mode, rng);
  trace.right = encode(state, right_tokens, mode, rng);
  trace.features = combine_pair(trace.left.pooled, trace.right.pooled);

  Eigen::VectorXd features_dropped = trace.features;
  if (mode == Mode::train && state.cfg.dropout > 0.0) {
    if (rng == nullptr) throw UsageError("train-mode classify needs a generator");
    trace.feature_mask = dropout_mask(trace.features.size(), state.cfg.dropout, *rng);
    features_dropped = trace.features.cwiseProduct(trace.feature_mask);
  }
  trace.logit = (state.w_cls * features_dropped)(0, 0) + state.b_cls(0, 0);
  return trace;
}

void classify_backward(const ModelState& state, const PairTrace& trace, double grad_logit,
                       TensorSet& grads, bool freeze_encoder) {
  const Eigen::Index d = state.cfg.embed_dim;
  if (trace.features.size() != 4 * d) throw UsageError("backward without a recorded forward trace");

  Eigen::VectorXd features_dropped = trace.features;
  if (trace.feature_mask.size() == trace.features.size()) {
    features_dropped = trace.features.cwiseProduct(trace.feature_mask);
  }
  grads.w_cls += grad_logit * features_dropped.transpose();
  grads.b_cls(0, 0) += grad_logit;

  if (freeze_encoder) return;

  Eigen::VectorXd g_features = grad_logit * state.w_cls.transpose();
  if (trace.feature_mask.size() == trace.features.size()) {
    g_features = g_features.cwiseProduct(trace.feature_mask);
  }

  const Eigen::VectorXd& u = trace.left.pooled;
  const Eigen::VectorXd& v = trace.right.pooled;
  Eigen::VectorXd g_u = g_features.segment(0, d);
  Eigen::VectorXd g_v = g_features.segment(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double diff = u[i] - v[i];
    const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
    g_u[i] += g_features[2 * d + i] * sign;
    g_v[i] -= g_features[2 * d + i] * sign;
    g_u[i] += g_features[3 * d + i] * v[i];
    g_v[i] += g_features[3 * d + i] * u[i];
  }

  const Eigen::VectorXd no_projected;
  encode_backward(state, trace.left, no_projected, g_u, grads);
  encode_backward(state, trace.right, no_projected, g_v, grads);
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace supmatch
