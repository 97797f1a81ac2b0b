#pragma once

#include <vector>

#include <Eigen/Dense>

namespace supmatch {

struct ContrastiveConfig {
  double temperature = 0.07;  // must be > 0
  bool check_normalized = true;
};

/// Supervised contrastive loss over a batch of unit-normalized embeddings
/// (rows of z). For each anchor i, A(i) is the rest of the batch and P(i)
/// the same-label subset of A(i); the per-anchor term is
///   -(1/|P(i)|) sum_{p in P(i)} log( exp(z_i.z_p / t) / sum_{a in A(i)} exp(z_i.z_a / t) )
/// averaged over anchors with nonempty P(i) (anchors without positives
/// contribute nothing to numerator or anchor count). Log-sum-exp uses max
/// subtraction. Throws on batches smaller than 2, non-positive temperature,
/// or (when check_normalized) rows whose norm is off unity by more than
/// 1e-3 and not degenerate-zero.
double supcon_loss(const Eigen::MatrixXd& z, const std::vector<int>& labels,
                   const ContrastiveConfig& cfg);

/// Same, also accumulating d(loss)/dz into grad (resized and zeroed).
double supcon_loss_grad(const Eigen::MatrixXd& z, const std::vector<int>& labels,
                        const ContrastiveConfig& cfg, Eigen::MatrixXd& grad);

/// Self-supervised variant: P(i) = {pairing[i]}. pairing must map every row
/// to a distinct row (pairing[i] != i); the usual batch layout pairs i with
/// n+i in both directions.
double simclr_loss(const Eigen::MatrixXd& z, const std::vector<int>& pairing,
                   const ContrastiveConfig& cfg);
double simclr_loss_grad(const Eigen::MatrixXd& z, const std::vector<int>& pairing,
                        const ContrastiveConfig& cfg, Eigen::MatrixXd& grad);

/// Mean binary cross-entropy in the numerically stable logit form
/// max(x,0) - x t + log(1 + exp(-|x|)). Empty input throws.
double bce_loss(const std::vector<double>& logits, const std::vector<int>& targets);
double bce_loss_grad(const std::vector<double>& logits, const std::vector<int>& targets,
                     std::vector<double>& grad);

}  // namespace supmatch
