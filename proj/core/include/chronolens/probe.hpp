#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "chronolens/embeddings.hpp"
#include "chronolens/predictions.hpp"

namespace chronolens {

// Softmax-regression parameters: weights is D x K, row-major.
struct ProbeParameters {
  std::size_t dim = 0;
  std::size_t num_classes = 0;
  std::vector<double> weights;
  std::vector<double> biases;

  static ProbeParameters zeros(std::size_t dim, std::size_t num_classes);
  double& w(std::size_t d, std::size_t k) { return weights[d * num_classes + k]; }
  double w(std::size_t d, std::size_t k) const {
    return weights[d * num_classes + k];
  }
};

struct ProbeModel {
  ProbeParameters params;
  std::vector<int> classes;  // strictly increasing years, one per column
  double l2_lambda = 0.0;
  std::string trained_on;  // dataset fingerprint
};

struct TrainConfig {
  double l2_lambda = 1e-4;
  int max_iters = 500;
  double tolerance = 1e-6;  // relative loss change
  // The optimizer is deterministic full-batch descent from zero; the seed is
  // recorded with the model and folded into its fingerprint.
  std::uint64_t seed = 0;
};

struct TrainStats {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> loss_history;  // loss after each accepted step
};

// Mean softmax cross-entropy plus (l2_lambda / 2) * ||W||^2 over the rows of
// `x`, where labels[i] is a column index. When `gradient` is non-null it
// receives dLoss/dW and dLoss/db.
double probe_objective(const ProbeParameters& params, const EmbeddingMatrix& x,
                       std::span<const std::size_t> labels, double l2_lambda,
                       ProbeParameters* gradient = nullptr);

// Full-batch gradient descent with Armijo backtracking from W = 0, b = 0 on
// L2-normalized embeddings. Throws std::invalid_argument for fewer than two
// classes, labels outside 1950..1999 or a size mismatch; DataError when the
// loss becomes non-finite.
ProbeModel train_probe(const EmbeddingMatrix& embeddings,
                       std::span<const int> labels, const TrainConfig& config,
                       TrainStats* stats = nullptr);

// Scores are softmax probabilities over model.classes.
std::vector<DatePrediction> probe_predict(const ProbeModel& model,
                                          const EmbeddingMatrix& embeddings);

// Largest relative deviation between the analytic gradient and central finite
// differences (step 1e-5) over every weight and bias. The relative deviation
// is |a - f| / max(|a|, |f|, 1e-3).
double gradient_check(const ProbeParameters& params, const EmbeddingMatrix& x,
                      std::span<const std::size_t> labels, double l2_lambda);

// Bundle of `<stem>.json`, `<stem>.weights.npy` (D x K, '<f8') and
// `<stem>.biases.npy` (K, '<f8').
void save_probe(const std::filesystem::path& stem, const ProbeModel& model);
ProbeModel load_probe(const std::filesystem::path& stem);

}  // namespace chronolens
