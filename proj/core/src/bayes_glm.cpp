#include "chronolens/bayes_glm.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "chronolens/csv.hpp"
#include "chronolens/error.hpp"
#include "chronolens/npy.hpp"
#include "chronolens/util.hpp"

namespace chronolens {

double nb_log_pmf(std::int64_t y, double mu, double alpha) {
  if (y < 0 || !(mu > 0.0) || !(alpha > 0.0) || !std::isfinite(mu) ||
      !std::isfinite(alpha)) {
    throw std::invalid_argument("nb_log_pmf: requires y >= 0, mu > 0, alpha > 0");
  }
  const double yd = static_cast<double>(y);
  const double log_total = std::log(alpha + mu);
  return std::lgamma(yd + alpha) - std::lgamma(alpha) - std::lgamma(yd + 1.0) +
         alpha * (std::log(alpha) - log_total) + yd * (std::log(mu) - log_total);
}

double nb_log_likelihood(std::span<const std::int64_t> y, std::span<const double> mu,
                         double alpha) {
  if (y.size() != mu.size()) {
    throw std::invalid_argument("nb_log_likelihood: y and mu differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) total += nb_log_pmf(y[i], mu[i], alpha);
  return total;
}

// ---------------------------------------------------------------------------
// PosteriorSamples

PosteriorSamples::PosteriorSamples(std::vector<std::string> names, std::size_t chains,
                                   std::size_t draws)
    : names_(std::move(names)), chains_(chains), draws_(draws),
      values_(names_.size(), std::vector<double>(chains * draws, 0.0)),
      log_density_(chains * draws, 0.0) {}

std::size_t PosteriorSamples::index_of(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw std::invalid_argument("no parameter named " + std::string(name));
  }
  return static_cast<std::size_t>(it - names_.begin());
}

std::span<double> PosteriorSamples::chain(std::size_t param, std::size_t c) {
  return {values_[param].data() + c * draws_, draws_};
}

std::span<const double> PosteriorSamples::chain(std::size_t param, std::size_t c) const {
  return {values_[param].data() + c * draws_, draws_};
}

std::span<double> PosteriorSamples::log_density_chain(std::size_t c) {
  return {log_density_.data() + c * draws_, draws_};
}

double PosteriorSamples::max_r_hat() const {
  return r_hat.empty() ? 0.0 : *std::max_element(r_hat.begin(), r_hat.end());
}

double PosteriorSamples::min_ess() const {
  return ess.empty() ? 0.0 : *std::min_element(ess.begin(), ess.end());
}

std::vector<double> PosteriorSamples::mode() const {
  const auto best = static_cast<std::size_t>(
      std::max_element(log_density_.begin(), log_density_.end()) - log_density_.begin());
  std::vector<double> out;
  for (const auto& v : values_) out.push_back(v[best]);
  return out;
}

// ---------------------------------------------------------------------------
// Diagnostics

namespace {

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance_of(std::span<const double> x) {
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace

double split_r_hat(const std::vector<std::span<const double>>& chains) {
  std::vector<std::span<const double>> halves;
  for (const auto& c : chains) {
    const std::size_t half = c.size() / 2;
    if (half < 2) throw std::invalid_argument("split_r_hat: chains too short");
    halves.push_back(c.subspan(0, half));
    halves.push_back(c.subspan(c.size() - half, half));
  }
  const double n = static_cast<double>(halves.front().size());
  std::vector<double> means;
  double within = 0.0;
  for (const auto& h : halves) {
    means.push_back(mean_of(h));
    within += variance_of(h);
  }
  within /= static_cast<double>(halves.size());
  const double between_over_n = variance_of(means);
  if (within <= 0.0) return between_over_n > 0.0 ? INFINITY : 1.0;
  const double var_plus = (n - 1.0) / n * within + between_over_n;
  return std::sqrt(var_plus / within);
}

double effective_sample_size(const std::vector<std::span<const double>>& chains) {
  const std::size_t m = chains.size();
  const std::size_t n = chains.front().size();
  if (m == 0 || n < 4) throw std::invalid_argument("effective_sample_size: too few draws");

  std::vector<double> means(m);
  double within = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    means[c] = mean_of(chains[c]);
    within += variance_of(chains[c]);
  }
  within /= static_cast<double>(m);
  const double nd = static_cast<double>(n);
  const double var_plus =
      (nd - 1.0) / nd * within + (m > 1 ? variance_of(means) : 0.0);
  if (var_plus <= 0.0) return static_cast<double>(m * n);

  // Mean over chains of the biased autocovariance at lag t.
  auto acov = [&](std::size_t t) {
    double total = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      const auto& x = chains[c];
      double s = 0.0;
      for (std::size_t i = 0; i + t < n; ++i) {
        s += (x[i] - means[c]) * (x[i + t] - means[c]);
      }
      total += s / nd;
    }
    return total / static_cast<double>(m);
  };
  auto rho = [&](std::size_t t) { return 1.0 - (within - acov(t)) / var_plus; };

  // Geyer's initial monotone sequence over pairs (rho_2k + rho_2k+1).
  double tau = -1.0;
  double previous_pair = INFINITY;
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    const double pair = (k == 0 ? 1.0 : rho(2 * k)) + rho(2 * k + 1);
    if (pair <= 0.0) break;
    const double monotone = std::min(pair, previous_pair);
    tau += 2.0 * monotone;
    previous_pair = monotone;
  }
  tau = std::max(tau, 1.0 / std::log10(static_cast<double>(m * n)));
  return static_cast<double>(m * n) / tau;
}

// ---------------------------------------------------------------------------
// Sampler

namespace {

// Sufficient statistics of the NB GLM with binary predictors: rows with the
// same predictor pattern share mu, and the lgamma(y + alpha) terms only need
// the pooled histogram of outcomes.
struct NbData {
  std::size_t num_predictors = 0;
  struct Pattern {
    std::vector<std::size_t> active;  // predictor indices set in this pattern
    double rows = 0.0;
    double sum_y = 0.0;
  };
  std::vector<Pattern> patterns;
  std::vector<std::pair<double, double>> y_counts;  // (y, count)
  double total_rows = 0.0;
  double log_factorials = 0.0;  // sum of lgamma(y + 1)
};

NbData summarize(const std::vector<std::vector<std::uint8_t>>& predictors,
                 std::span<const std::int64_t> outcomes) {
  NbData data;
  data.num_predictors = predictors.size();
  std::map<std::vector<std::uint8_t>, std::size_t> pattern_index;
  std::map<std::int64_t, double> histogram;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    std::vector<std::uint8_t> key(predictors.size());
    for (std::size_t j = 0; j < predictors.size(); ++j) key[j] = predictors[j][i];
    auto [it, inserted] = pattern_index.emplace(key, data.patterns.size());
    if (inserted) {
      NbData::Pattern p;
      for (std::size_t j = 0; j < key.size(); ++j) {
        if (key[j]) p.active.push_back(j);
      }
      data.patterns.push_back(std::move(p));
    }
    auto& p = data.patterns[it->second];
    p.rows += 1.0;
    p.sum_y += static_cast<double>(outcomes[i]);
    histogram[outcomes[i]] += 1.0;
    data.log_factorials += std::lgamma(static_cast<double>(outcomes[i]) + 1.0);
  }
  for (const auto& [y, count] : histogram) {
    data.y_counts.emplace_back(static_cast<double>(y), count);
  }
  data.total_rows = static_cast<double>(outcomes.size());
  return data;
}

// Internal parameter order: [log alpha, b0, b1..bp]. Keeping log alpha first
// makes it the only coordinate touched by the first whitened direction of a
// lower-triangular Cholesky factor.
class NbPosterior {
 public:
  NbPosterior(const NbData& data, const NbPriors& priors)
      : data_(data), priors_(priors) {}

  std::size_t dim() const { return data_.num_predictors + 2; }

  double alpha_part(double log_alpha) const {
    const double alpha = std::exp(log_alpha);
    double s = -data_.total_rows * std::lgamma(alpha) - data_.log_factorials;
    for (const auto& [y, count] : data_.y_counts) s += count * std::lgamma(y + alpha);
    // Half-normal prior on alpha plus the log-Jacobian of alpha = exp(.)
    s += -0.5 * alpha * alpha / (priors_.alpha_sd * priors_.alpha_sd) + log_alpha;
    return s;
  }

  double regression_part(const Eigen::VectorXd& theta) const {
    const double log_alpha = theta(0);
    const double alpha = std::exp(log_alpha);
    double s = 0.0;
    for (const auto& p : data_.patterns) {
      double eta = theta(1);
      for (auto j : p.active) eta += theta(static_cast<Eigen::Index>(j) + 2);
      // log(alpha + mu) without overflow
      const double hi = std::max(log_alpha, eta);
      const double log_total = hi + std::log1p(std::exp(std::min(log_alpha, eta) - hi));
      s += p.rows * alpha * (log_alpha - log_total) + p.sum_y * (eta - log_total);
    }
    const double b0 = theta(1);
    s += -0.5 * b0 * b0 / (priors_.intercept_sd * priors_.intercept_sd);
    for (Eigen::Index j = 2; j < theta.size(); ++j) {
      s += -0.5 * theta(j) * theta(j) / (priors_.slope_sd * priors_.slope_sd);
    }
    return s;
  }

 private:
  const NbData& data_;
  NbPriors priors_;
};

struct ChainOutput {
  std::vector<Eigen::VectorXd> draws;
  std::vector<double> log_density;
  double acceptance = 0.0;
};

struct Window {
  int start;
  int end;
};

// Covariance-estimation windows in the spirit of Stan's warmup schedule:
// an initial buffer, doubling slow windows, and a terminal buffer.
std::vector<Window> adaptation_windows(int warmup) {
  std::vector<Window> windows;
  const int init = static_cast<int>(0.15 * warmup);
  const int term = static_cast<int>(0.1 * warmup);
  int width = std::max(5, static_cast<int>(0.025 * warmup));
  int start = init;
  const int last = warmup - term;
  while (start + width <= last) {
    int end = start + width;
    if (end + 2 * width > last) end = last;
    windows.push_back({start, end});
    start = end;
    width *= 2;
  }
  return windows;
}

ChainOutput run_chain(const NbPosterior& posterior, const McmcConfig& config,
                      std::uint64_t seed, const Eigen::VectorXd& centre) {
  const auto d = static_cast<Eigen::Index>(posterior.dim());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> init_jitter(-2.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::VectorXd theta = centre;
  for (Eigen::Index j = 0; j < d; ++j) theta(j) += init_jitter(rng);

  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd log_scale = Eigen::VectorXd::Constant(d, std::log(0.1));
  double alpha_term = posterior.alpha_part(theta(0));
  double regression_term = posterior.regression_part(theta);

  const auto windows = adaptation_windows(config.warmup);
  std::size_t next_window = 0;
  std::vector<Eigen::VectorXd> window_draws;
  int adapt_step = 0;

  ChainOutput out;
  out.draws.reserve(static_cast<std::size_t>(config.draws));
  out.log_density.reserve(static_cast<std::size_t>(config.draws));
  long accepted = 0;
  long proposed = 0;

  const int total = config.warmup + config.draws;
  for (int it = 0; it < total; ++it) {
    const bool warming = it < config.warmup;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double z = normal(rng) * std::exp(log_scale(j));
      Eigen::VectorXd proposal = theta + z * basis.col(j);
      const bool moves_alpha = basis(0, j) != 0.0;
      const double new_alpha_term =
          moves_alpha ? posterior.alpha_part(proposal(0)) : alpha_term;
      const double new_regression_term = posterior.regression_part(proposal);
      const double log_ratio =
          new_alpha_term + new_regression_term - alpha_term - regression_term;
      const bool accept =
          std::isfinite(log_ratio) && (log_ratio >= 0.0 || std::log(unit(rng)) < log_ratio);
      if (accept) {
        theta = std::move(proposal);
        alpha_term = new_alpha_term;
        regression_term = new_regression_term;
      }
      if (warming) {
        const double rate = std::min(1.0, std::exp(std::min(log_ratio, 0.0)));
        const double gain = 1.0 / std::pow(adapt_step + 3.0, 0.6);
        log_scale(j) += gain * ((std::isfinite(rate) ? rate : 0.0) - config.target_accept);
      } else {
        ++proposed;
        if (accept) ++accepted;
      }
    }
    if (!warming) {
      out.draws.push_back(theta);
      out.log_density.push_back(alpha_term + regression_term);
      continue;
    }
    ++adapt_step;

    if (next_window < windows.size() && it >= windows[next_window].start) {
      window_draws.push_back(theta);
    }
    if (next_window < windows.size() && it + 1 == windows[next_window].end) {
      const auto n = static_cast<double>(window_draws.size());
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
      for (const auto& v : window_draws) mean += v;
      mean /= n;
      Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
      for (const auto& v : window_draws) cov += (v - mean) * (v - mean).transpose();
      cov /= std::max(n - 1.0, 1.0);
      cov = (n / (n + 5.0)) * cov +
            1e-3 * (5.0 / (n + 5.0)) * Eigen::MatrixXd::Identity(d, d);
      Eigen::LLT<Eigen::MatrixXd> llt(cov);
      if (llt.info() == Eigen::Success) {
        basis = llt.matrixL();
        // Whitened coordinates have unit conditional scale; 2.4 is the usual
        // one-dimensional random-walk optimum.
        log_scale.setConstant(std::log(2.4));
        adapt_step = 0;
      }
      window_draws.clear();
      ++next_window;
    }
  }
  out.acceptance = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed)
                            : 0.0;
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

PosteriorSamples fit_nb_glm(const std::vector<std::vector<std::uint8_t>>& predictors,
                            const std::vector<std::string>& slope_names,
                            std::span<const std::int64_t> outcomes,
                            const McmcConfig& config) {
  if (predictors.size() != slope_names.size()) {
    throw std::invalid_argument("fit_nb_glm: one name per predictor required");
  }
  if (outcomes.size() < 50) {
    throw std::invalid_argument("NB regression needs at least 50 observations, got " +
                                std::to_string(outcomes.size()));
  }
  if (config.chains < 2 || config.draws < 4 || config.warmup < 0) {
    throw std::invalid_argument("McmcConfig needs >= 2 chains and >= 4 draws");
  }
  for (auto y : outcomes) {
    if (y < 0) throw std::invalid_argument("NB outcomes must be nonnegative counts");
  }
  for (std::size_t j = 0; j < predictors.size(); ++j) {
    const auto& col = predictors[j];
    if (col.size() != outcomes.size()) {
      throw std::invalid_argument("predictor " + slope_names[j] + " has wrong length");
    }
    std::size_t ones = 0;
    for (auto v : col) {
      if (v > 1) throw std::invalid_argument("predictor " + slope_names[j] + " is not binary");
      ones += v;
    }
    if (ones == 0 || ones == col.size()) {
      throw std::invalid_argument("predictor " + slope_names[j] +
                                  " is degenerate (all " + (ones ? "1" : "0") + ")");
    }
  }

  const auto data = summarize(predictors, outcomes);
  const NbPosterior posterior(data, config.priors);

  // Chains start jittered around (log alpha = 0, b0 = log mean outcome, b = 0).
  const double mean_y =
      std::accumulate(outcomes.begin(), outcomes.end(), 0.0) / data.total_rows;
  Eigen::VectorXd centre = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(posterior.dim()));
  centre(1) = std::log(mean_y + 0.5);

  std::vector<std::future<ChainOutput>> futures;
  for (int c = 0; c < config.chains; ++c) {
    const auto seed = splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(c) + 1));
    futures.push_back(std::async(std::launch::async, [&, seed] {
      return run_chain(posterior, config, seed, centre);
    }));
  }

  std::vector<std::string> names{"b0"};
  names.insert(names.end(), slope_names.begin(), slope_names.end());
  names.emplace_back("alpha");
  const auto chains = static_cast<std::size_t>(config.chains);
  const auto draws = static_cast<std::size_t>(config.draws);
  PosteriorSamples samples(names, chains, draws);
  const std::size_t alpha_index = names.size() - 1;
  for (std::size_t c = 0; c < chains; ++c) {
    auto chain = futures[c].get();
    for (std::size_t i = 0; i < draws; ++i) {
      const auto& theta = chain.draws[i];
      for (std::size_t p = 0; p + 1 < names.size(); ++p) {
        samples.chain(p, c)[i] = theta(static_cast<Eigen::Index>(p) + 1);
      }
      samples.chain(alpha_index, c)[i] = std::exp(theta(0));
      samples.log_density_chain(c)[i] = chain.log_density[i];
    }
    samples.acceptance_rate.push_back(chain.acceptance);
  }

  for (std::size_t p = 0; p < names.size(); ++p) {
    std::vector<std::span<const double>> per_chain;
    for (std::size_t c = 0; c < chains; ++c) per_chain.push_back(samples.chain(p, c));
    samples.r_hat.push_back(split_r_hat(per_chain));
    samples.ess.push_back(effective_sample_size(per_chain));
  }
  for (std::size_t p = 0; p < names.size(); ++p) {
    if (!(samples.r_hat[p] <= config.max_r_hat)) {
      throw FitDiagnosticError("r_hat for " + names[p] + " is " +
                               format_double(samples.r_hat[p]) + " > " +
                               format_double(config.max_r_hat));
    }
  }
  return samples;
}

PosteriorSamples fit_nb_regression(std::span<const std::uint8_t> presence,
                                   std::span<const std::int64_t> abs_errors,
                                   const McmcConfig& config) {
  return fit_nb_glm({std::vector<std::uint8_t>(presence.begin(), presence.end())},
                    {"b1"}, abs_errors, config);
}

std::vector<std::int64_t> to_counts(std::span<const double> values) {
  std::vector<std::int64_t> out;
  out.reserve(values.size());
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0 || std::floor(v) != v) {
      throw std::invalid_argument("outcome " + format_double(v) +
                                  " is not a nonnegative integer count");
    }
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Summaries

Interval hdi(std::span<const double> samples, double mass) {
  if (!(mass > 0.0 && mass < 1.0)) throw std::invalid_argument("hdi: mass must lie in (0, 1)");
  if (samples.size() < 10) throw std::invalid_argument("hdi: need at least 10 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  auto k = static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n) - 1e-9));
  k = std::clamp<std::size_t>(k, 1, n);
  std::size_t best = 0;
  double best_width = sorted[k - 1] - sorted[0];
  for (std::size_t i = 1; i + k <= n; ++i) {
    const double width = sorted[i + k - 1] - sorted[i];
    if (width < best_width) {
      best_width = width;
      best = i;
    }
  }
  return {sorted[best], sorted[best + k - 1]};
}

EffectSummary posterior_predictive_contrast(const PosteriorSamples& samples,
                                            std::string class_name,
                                            std::string_view slope) {
  const auto b0 = samples.all(samples.index_of("b0"));
  const auto b1 = samples.all(samples.index_of(slope));
  std::vector<double> absent(b0.size());
  std::vector<double> present(b0.size());
  for (std::size_t i = 0; i < b0.size(); ++i) {
    absent[i] = std::exp(b0[i]);
    present[i] = std::exp(b0[i] + b1[i]);
  }
  EffectSummary s;
  s.class_name = std::move(class_name);
  s.b1_mean = mean_of(b1);
  s.b1_hdi = hdi(b1);
  s.mae_absent = mean_of(absent);
  s.mae_absent_hdi = hdi(absent);
  s.mae_present = mean_of(present);
  s.mae_present_hdi = hdi(present);
  s.r_hat_max = samples.max_r_hat();
  s.ess_min = samples.min_ess();
  return s;
}

EffectsReport run_all_effects(const PresenceMatrix& presence,
                              std::span<const DatePrediction> predictions,
                              const McmcConfig& config, RegressionMode mode) {
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < presence.rows(); ++i) row_of.emplace(presence.image_ids[i], i);

  std::vector<std::size_t> rows;
  std::vector<std::int64_t> outcomes;
  for (const auto& p : predictions) {
    const auto it = row_of.find(p.image_id);
    if (it == row_of.end()) {
      throw std::invalid_argument("prediction id " + p.image_id +
                                  " is missing from the presence matrix");
    }
    const auto err = p.signed_error();
    if (!err) throw std::invalid_argument("prediction " + p.image_id + " has no actual year");
    rows.push_back(it->second);
    outcomes.push_back(std::abs(*err));
  }

  auto column = [&](std::size_t c) {
    std::vector<std::uint8_t> col(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) col[i] = presence.at(rows[i], c);
    return col;
  };

  EffectsReport report;
  if (mode == RegressionMode::per_class) {
    for (std::size_t c = 0; c < presence.cols(); ++c) {
      const auto& name = presence.classes[c];
      auto class_config = config;
      class_config.seed = splitmix64(config.seed + 0x632be59bd9b4e019ULL * (c + 1));
      try {
        auto samples = fit_nb_regression(column(c), outcomes, class_config);
        report.effects.push_back(posterior_predictive_contrast(samples, name));
        report.samples.emplace_back(name, std::move(samples));
      } catch (const FitDiagnosticError& e) {
        report.failures.push_back({name, e.what(), true});
      } catch (const std::invalid_argument& e) {
        report.failures.push_back({name, e.what(), false});
      }
    }
    return report;
  }

  std::vector<std::vector<std::uint8_t>> columns;
  std::vector<std::string> names;
  std::vector<std::string> classes;
  for (std::size_t c = 0; c < presence.cols(); ++c) {
    auto col = column(c);
    const auto ones = std::count(col.begin(), col.end(), std::uint8_t{1});
    if (ones == 0 || static_cast<std::size_t>(ones) == col.size()) {
      report.failures.push_back({presence.classes[c],
                                 "predictor " + presence.classes[c] + " is degenerate",
                                 false});
      continue;
    }
    columns.push_back(std::move(col));
    names.push_back("b_" + presence.classes[c]);
    classes.push_back(presence.classes[c]);
  }
  if (columns.empty()) return report;
  try {
    auto samples = fit_nb_glm(columns, names, outcomes, config);
    for (std::size_t j = 0; j < classes.size(); ++j) {
      report.effects.push_back(posterior_predictive_contrast(samples, classes[j], names[j]));
    }
    report.samples.emplace_back("joint", std::move(samples));
  } catch (const FitDiagnosticError& e) {
    for (const auto& c : classes) report.failures.push_back({c, e.what(), true});
  } catch (const std::invalid_argument& e) {
    for (const auto& c : classes) report.failures.push_back({c, e.what(), false});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Files

std::string format_effects(std::span<const EffectSummary> effects) {
  std::string out =
      "class,b1_mean,b1_hdi_low,b1_hdi_high,mae_absent,mae_present,r_hat_max,ess_min\n";
  for (const auto& e : effects) {
    out += csv::format_row({e.class_name, format_double(e.b1_mean),
                            format_double(e.b1_hdi.low), format_double(e.b1_hdi.high),
                            format_double(e.mae_absent), format_double(e.mae_present),
                            format_double(e.r_hat_max), format_double(e.ess_min)});
  }
  return out;
}

void write_effects(const std::filesystem::path& path,
                   std::span<const EffectSummary> effects) {
  write_text_file(path, format_effects(effects));
}

std::vector<EffectSummary> read_effects(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  const csv::Row expected{"class",      "b1_mean",     "b1_hdi_low", "b1_hdi_high",
                          "mae_absent", "mae_present", "r_hat_max",  "ess_min"};
  if (table.header != expected) {
    throw DataError(path.string() + ": unexpected effects header");
  }
  std::vector<EffectSummary> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != expected.size()) {
      throw DataError(path.string() + " line " + std::to_string(table.lines[r]) +
                      ": wrong field count");
    }
    std::vector<double> v;
    for (std::size_t k = 1; k < row.size(); ++k) {
      const auto x = parse_double(row[k]);
      if (!x) throw DataError(path.string() + ": bad number '" + row[k] + "'");
      v.push_back(*x);
    }
    EffectSummary e;
    e.class_name = row[0];
    e.b1_mean = v[0];
    e.b1_hdi = {v[1], v[2]};
    e.mae_absent = v[3];
    e.mae_present = v[4];
    e.r_hat_max = v[5];
    e.ess_min = v[6];
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<std::filesystem::path> write_draws(const std::filesystem::path& directory,
                                               const std::string& prefix,
                                               const PosteriorSamples& samples) {
  std::vector<std::filesystem::path> written;
  for (std::size_t p = 0; p < samples.names().size(); ++p) {
    const auto all = samples.all(p);
    const auto path = directory / (prefix + "_" + samples.names()[p] + ".npy");
    npy::write(path, npy::Array<double>{{samples.num_chains(), samples.draws_per_chain()},
                                        {all.begin(), all.end()}});
    written.push_back(path);
  }
  return written;
}

}  // namespace chronolens
