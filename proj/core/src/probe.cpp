#include "chronolens/probe.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <set>
#include <stdexcept>

#include "chronolens/dataset.hpp"
#include "chronolens/error.hpp"
#include "chronolens/npy.hpp"
#include "chronolens/util.hpp"

namespace chronolens {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RowMatrix to_matrix(const EmbeddingMatrix& m) {
  RowMatrix x(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.dim()));
  const auto data = m.data();
  for (std::size_t i = 0; i < data.size(); ++i) x.data()[i] = data[i];
  return x;
}

Eigen::Map<const RowMatrix> weight_view(const ProbeParameters& p) {
  return {p.weights.data(), static_cast<Eigen::Index>(p.dim),
          static_cast<Eigen::Index>(p.num_classes)};
}

Eigen::Map<const Eigen::RowVectorXd> bias_view(const ProbeParameters& p) {
  return {p.biases.data(), static_cast<Eigen::Index>(p.num_classes)};
}

// Row-wise softmax of the logits, in place; returns log of the normalizer of
// each row.
Eigen::VectorXd softmax_rows(RowMatrix& z) {
  Eigen::VectorXd log_norm(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    auto row = z.row(i);
    const double peak = row.maxCoeff();
    row.array() = (row.array() - peak).exp();
    const double total = row.sum();
    row /= total;
    log_norm(i) = peak + std::log(total);
  }
  return log_norm;
}

double objective(const ProbeParameters& params, const RowMatrix& x,
                 std::span<const std::size_t> labels, double l2_lambda,
                 ProbeParameters* gradient) {
  const auto w = weight_view(params);
  const auto b = bias_view(params);
  RowMatrix z = x * w;
  z.rowwise() += b;

  double data_loss = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    data_loss -= z(i, static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)]));
  }
  const auto log_norm = softmax_rows(z);
  data_loss += log_norm.sum();
  const double n = static_cast<double>(x.rows());
  const double loss = data_loss / n + 0.5 * l2_lambda * w.squaredNorm();

  if (gradient) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      z(i, static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)])) -= 1.0;
    }
    *gradient = ProbeParameters::zeros(params.dim, params.num_classes);
    Eigen::Map<RowMatrix> gw(gradient->weights.data(), w.rows(), w.cols());
    Eigen::Map<Eigen::RowVectorXd> gb(gradient->biases.data(), b.cols());
    gw.noalias() = x.transpose() * z / n;
    gw += l2_lambda * w;
    gb = z.colwise().sum() / n;
  }
  return loss;
}

void check_shapes(const ProbeParameters& params, std::size_t dim,
                  std::span<const std::size_t> labels, std::size_t rows) {
  if (params.dim != dim) {
    throw std::invalid_argument("probe dimension " + std::to_string(params.dim) +
                                " does not match embedding dimension " +
                                std::to_string(dim));
  }
  if (labels.size() != rows) {
    throw std::invalid_argument("label count does not match embedding rows");
  }
  for (auto l : labels) {
    if (l >= params.num_classes) throw std::invalid_argument("label index out of range");
  }
}

double squared_norm(const ProbeParameters& p) {
  double s = 0.0;
  for (double v : p.weights) s += v * v;
  for (double v : p.biases) s += v * v;
  return s;
}

// a - t * g
ProbeParameters step(const ProbeParameters& a, const ProbeParameters& g, double t) {
  ProbeParameters out = a;
  for (std::size_t i = 0; i < out.weights.size(); ++i) out.weights[i] -= t * g.weights[i];
  for (std::size_t i = 0; i < out.biases.size(); ++i) out.biases[i] -= t * g.biases[i];
  return out;
}

std::string fingerprint(const EmbeddingMatrix& x, std::span<const int> labels,
                        const TrainConfig& config) {
  Fnv1a h;
  for (const auto& id : x.ids()) {
    h.update(id);
    h.update(std::string_view("\n"));
  }
  h.update(std::as_bytes(labels));
  h.update(std::as_bytes(x.data()));
  h.update(format_double(config.l2_lambda) + "|" + std::to_string(config.max_iters) +
           "|" + format_double(config.tolerance) + "|" + std::to_string(config.seed));
  return h.hex();
}

}  // namespace

ProbeParameters ProbeParameters::zeros(std::size_t dim, std::size_t num_classes) {
  return {dim, num_classes, std::vector<double>(dim * num_classes, 0.0),
          std::vector<double>(num_classes, 0.0)};
}

double probe_objective(const ProbeParameters& params, const EmbeddingMatrix& x,
                       std::span<const std::size_t> labels, double l2_lambda,
                       ProbeParameters* gradient) {
  check_shapes(params, x.dim(), labels, x.rows());
  if (x.rows() == 0) throw std::invalid_argument("probe_objective: empty batch");
  return objective(params, to_matrix(x), labels, l2_lambda, gradient);
}

ProbeModel train_probe(const EmbeddingMatrix& embeddings, std::span<const int> labels,
                       const TrainConfig& config, TrainStats* stats) {
  if (labels.size() != embeddings.rows()) {
    throw std::invalid_argument("train_probe: " + std::to_string(labels.size()) +
                                " labels for " + std::to_string(embeddings.rows()) +
                                " embeddings");
  }
  if (config.l2_lambda < 0.0 || !(config.tolerance > 0.0) || config.max_iters < 0) {
    throw std::invalid_argument("train_probe: invalid TrainConfig");
  }
  for (int y : labels) {
    if (y < kFirstYear || y > kLastYear) {
      throw std::invalid_argument("train_probe: label " + std::to_string(y) +
                                  " outside " + std::to_string(kFirstYear) + ".." +
                                  std::to_string(kLastYear));
    }
  }
  const std::set<int> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) {
    throw std::invalid_argument("train_probe needs at least two distinct years");
  }

  ProbeModel model;
  model.classes.assign(distinct.begin(), distinct.end());
  model.l2_lambda = config.l2_lambda;
  model.trained_on = fingerprint(embeddings, labels, config);

  std::vector<std::size_t> targets(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    targets[i] = static_cast<std::size_t>(
        std::lower_bound(model.classes.begin(), model.classes.end(), labels[i]) -
        model.classes.begin());
  }

  const auto normalized = embeddings.normalized() ? embeddings : l2_normalize(embeddings);
  const RowMatrix x = to_matrix(normalized);

  auto params = ProbeParameters::zeros(normalized.dim(), model.classes.size());
  ProbeParameters grad;
  double loss = objective(params, x, targets, config.l2_lambda, &grad);
  if (!std::isfinite(loss)) throw DataError("probe training: non-finite initial loss");

  TrainStats local;
  local.initial_loss = loss;
  constexpr double kArmijo = 1e-4;
  constexpr double kMinStep = 1e-20;
  constexpr double kMaxStep = 1e6;
  double t0 = 1.0;

  for (int it = 0; it < config.max_iters; ++it) {
    const double g2 = squared_norm(grad);
    if (g2 == 0.0) {
      local.converged = true;
      break;
    }
    double t = t0;
    ProbeParameters candidate;
    double candidate_loss = 0.0;
    bool accepted = false;
    while (t >= kMinStep) {
      candidate = step(params, grad, t);
      candidate_loss = objective(candidate, x, targets, config.l2_lambda, nullptr);
      if (std::isfinite(candidate_loss) && candidate_loss <= loss - kArmijo * t * g2) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // No descent left at machine precision.
      local.converged = true;
      break;
    }
    const double previous = loss;
    params = std::move(candidate);
    loss = objective(params, x, targets, config.l2_lambda, &grad);
    if (!std::isfinite(loss)) {
      throw DataError("probe training diverged: non-finite loss at iteration " +
                      std::to_string(it));
    }
    local.loss_history.push_back(loss);
    local.iterations = it + 1;
    t0 = std::min(2.0 * t, kMaxStep);
    if ((previous - loss) / std::max(std::abs(previous), 1e-12) < config.tolerance) {
      local.converged = true;
      break;
    }
  }
  local.final_loss = loss;
  model.params = std::move(params);
  if (stats) *stats = std::move(local);
  return model;
}

std::vector<DatePrediction> probe_predict(const ProbeModel& model,
                                          const EmbeddingMatrix& embeddings) {
  if (embeddings.rows() > 0 && embeddings.dim() != model.params.dim) {
    throw DataError("embedding dimension " + std::to_string(embeddings.dim()) +
                    " does not match probe dimension " +
                    std::to_string(model.params.dim));
  }
  std::vector<DatePrediction> out(embeddings.rows());
  if (embeddings.rows() == 0) return out;

  const auto normalized = embeddings.normalized() ? embeddings : l2_normalize(embeddings);
  RowMatrix z = to_matrix(normalized) * weight_view(model.params);
  z.rowwise() += bias_view(model.params);
  softmax_rows(z);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& p = out[i];
    p.image_id = normalized.ids()[i];
    const auto row = z.row(static_cast<Eigen::Index>(i));
    p.scores.assign(row.data(), row.data() + row.size());
    p.predicted_year = model.classes[argmax(p.scores)];
  }
  return out;
}

double gradient_check(const ProbeParameters& params, const EmbeddingMatrix& x,
                      std::span<const std::size_t> labels, double l2_lambda) {
  check_shapes(params, x.dim(), labels, x.rows());
  const RowMatrix xm = to_matrix(x);
  ProbeParameters analytic;
  objective(params, xm, labels, l2_lambda, &analytic);

  constexpr double h = 1e-5;
  double worst = 0.0;
  auto probe = params;
  auto compare = [&](double& slot, double a) {
    const double saved = slot;
    slot = saved + h;
    const double up = objective(probe, xm, labels, l2_lambda, nullptr);
    slot = saved - h;
    const double down = objective(probe, xm, labels, l2_lambda, nullptr);
    slot = saved;
    const double fd = (up - down) / (2.0 * h);
    const double scale = std::max({std::abs(a), std::abs(fd), 1e-3});
    worst = std::max(worst, std::abs(a - fd) / scale);
  };
  for (std::size_t i = 0; i < probe.weights.size(); ++i) {
    compare(probe.weights[i], analytic.weights[i]);
  }
  for (std::size_t i = 0; i < probe.biases.size(); ++i) {
    compare(probe.biases[i], analytic.biases[i]);
  }
  return worst;
}

void save_probe(const std::filesystem::path& stem, const ProbeModel& model) {
  nlohmann::ordered_json header;
  header["format"] = "chronolens-probe/1";
  header["classes"] = model.classes;
  header["dim"] = model.params.dim;
  header["num_classes"] = model.params.num_classes;
  header["l2_lambda"] = model.l2_lambda;
  header["fingerprint"] = model.trained_on;

  auto json_path = stem;
  json_path += ".json";
  auto weights_path = stem;
  weights_path += ".weights.npy";
  auto biases_path = stem;
  biases_path += ".biases.npy";
  write_text_file(json_path, header.dump(2) + "\n");
  npy::write(weights_path, npy::Array<double>{{model.params.dim, model.params.num_classes},
                                              model.params.weights});
  npy::write(biases_path, npy::Array<double>{{model.params.num_classes},
                                             model.params.biases});
}

ProbeModel load_probe(const std::filesystem::path& stem) {
  auto json_path = stem;
  json_path += ".json";
  auto weights_path = stem;
  weights_path += ".weights.npy";
  auto biases_path = stem;
  biases_path += ".biases.npy";
  for (const auto& p : {json_path, weights_path, biases_path}) {
    if (!std::filesystem::exists(p)) throw DataError("missing probe file " + p.string());
  }

  ProbeModel model;
  try {
    const auto header = nlohmann::json::parse(read_text_file(json_path));
    model.classes = header.at("classes").get<std::vector<int>>();
    model.params.dim = header.at("dim").get<std::size_t>();
    model.params.num_classes = header.at("num_classes").get<std::size_t>();
    model.l2_lambda = header.at("l2_lambda").get<double>();
    model.trained_on = header.at("fingerprint").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(json_path.string() + ": " + e.what());
  }
  auto weights = npy::read<double>(weights_path);
  auto biases = npy::read<double>(biases_path);
  const auto d = model.params.dim;
  const auto k = model.params.num_classes;
  if (weights.shape != std::vector<std::size_t>{d, k} ||
      biases.shape != std::vector<std::size_t>{k} || model.classes.size() != k) {
    throw DataError("probe bundle " + stem.string() + " has inconsistent shapes");
  }
  if (!std::is_sorted(model.classes.begin(), model.classes.end()) ||
      std::adjacent_find(model.classes.begin(), model.classes.end()) !=
          model.classes.end()) {
    throw DataError("probe bundle " + stem.string() + ": classes not strictly increasing");
  }
  model.params.weights = std::move(weights.data);
  model.params.biases = std::move(biases.data);
  for (double v : model.params.weights) {
    if (!std::isfinite(v)) throw DataError("probe bundle has non-finite weights");
  }
  for (double v : model.params.biases) {
    if (!std::isfinite(v)) throw DataError("probe bundle has non-finite biases");
  }
  return model;
}

}  // namespace chronolens
