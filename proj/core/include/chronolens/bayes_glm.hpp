#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chronolens/object_features.hpp"
#include "chronolens/predictions.hpp"

namespace chronolens {

// Negative binomial with mean mu and dispersion alpha, Var(y) = mu + mu^2/alpha:
//   p(y) = G(y + alpha) / (G(alpha) y!) (alpha/(alpha+mu))^alpha (mu/(alpha+mu))^y
double nb_log_pmf(std::int64_t y, double mu, double alpha);

// Sum of per-observation log densities. Throws std::invalid_argument on
// y < 0, mu <= 0, alpha <= 0 or length mismatch.
double nb_log_likelihood(std::span<const std::int64_t> y,
                         std::span<const double> mu, double alpha);

struct NbPriors {
  double intercept_sd = 5.0;  // b0 ~ Normal(0, 5)
  double slope_sd = 2.5;      // slopes ~ Normal(0, 2.5)
  double alpha_sd = 10.0;     // alpha ~ Half-Normal(10)
};

struct McmcConfig {
  int chains = 4;
  int warmup = 1000;
  int draws = 1000;
  std::uint64_t seed = 0;
  double target_accept = 0.4;
  double max_r_hat = 1.05;
  NbPriors priors;
};

// Draws stored per parameter as chains x draws, chain-major.
class PosteriorSamples {
 public:
  PosteriorSamples() = default;
  PosteriorSamples(std::vector<std::string> names, std::size_t chains,
                   std::size_t draws);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t num_chains() const { return chains_; }
  std::size_t draws_per_chain() const { return draws_; }
  std::size_t index_of(std::string_view name) const;

  std::span<double> chain(std::size_t param, std::size_t c);
  std::span<const double> chain(std::size_t param, std::size_t c) const;
  std::span<const double> all(std::size_t param) const { return values_[param]; }

  // Unnormalized log posterior of each draw, same layout as a parameter.
  std::span<double> log_density_chain(std::size_t c);
  std::span<const double> log_density() const { return log_density_; }

  std::vector<double> r_hat;  // per parameter
  std::vector<double> ess;    // per parameter
  std::vector<double> acceptance_rate;  // per chain, kept draws

  double max_r_hat() const;
  double min_ess() const;

  // Parameter values of the draw with the highest log density.
  std::vector<double> mode() const;

 private:
  std::vector<std::string> names_;
  std::size_t chains_ = 0;
  std::size_t draws_ = 0;
  std::vector<std::vector<double>> values_;
  std::vector<double> log_density_;
};

// Split-chain potential scale reduction.
double split_r_hat(const std::vector<std::span<const double>>& chains);
// Multi-chain effective sample size with Geyer's initial monotone sequence.
double effective_sample_size(const std::vector<std::span<const double>>& chains);

// Log-link NB regression of `outcomes` on binary predictor columns:
// mu_i = exp(b0 + sum_j b_j x_ij). Parameters are named "b0", `slope_names`,
// "alpha". Sampling runs on (b0, b, log alpha) with componentwise random-walk
// Metropolis in a warmup-estimated whitened basis and per-direction step
// adaptation; chains are seeded from config.seed and merged by chain index.
//
// Throws std::invalid_argument for fewer than 50 rows, a constant predictor,
// or negative outcomes; FitDiagnosticError if any r_hat > config.max_r_hat.
PosteriorSamples fit_nb_glm(
    const std::vector<std::vector<std::uint8_t>>& predictors,
    const std::vector<std::string>& slope_names,
    std::span<const std::int64_t> outcomes, const McmcConfig& config);

// Single-predictor model `error ~ 1 + presence`; parameters b0, b1, alpha.
PosteriorSamples fit_nb_regression(std::span<const std::uint8_t> presence,
                                   std::span<const std::int64_t> abs_errors,
                                   const McmcConfig& config);

// Rounds values that are integers; throws std::invalid_argument otherwise.
std::vector<std::int64_t> to_counts(std::span<const double> values);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Shortest window covering ceil(mass * n) sorted samples; earliest start wins
// ties. Throws std::invalid_argument for mass outside (0, 1) or n < 10.
Interval hdi(std::span<const double> samples, double mass = 0.95);

struct EffectSummary {
  std::string class_name;
  double b1_mean = 0.0;
  Interval b1_hdi;
  double mae_absent = 0.0;  // posterior mean of exp(b0)
  Interval mae_absent_hdi;
  double mae_present = 0.0;  // posterior mean of exp(b0 + b1)
  Interval mae_present_hdi;
  double r_hat_max = 0.0;
  double ess_min = 0.0;
};

EffectSummary posterior_predictive_contrast(const PosteriorSamples& samples,
                                            std::string class_name,
                                            std::string_view slope = "b1");

enum class RegressionMode { per_class, joint };

struct EffectFailure {
  std::string class_name;
  std::string reason;
  bool diagnostic = false;  // convergence failure rather than bad data
};

struct EffectsReport {
  std::vector<EffectSummary> effects;
  std::vector<EffectFailure> failures;
  std::vector<std::pair<std::string, PosteriorSamples>> samples;
};

// One fit per presence column (or one joint fit) of |signed error| on
// presence. Predictions whose id is missing from the presence matrix are a
// std::invalid_argument. Per-class failures are collected, not thrown.
EffectsReport run_all_effects(const PresenceMatrix& presence,
                              std::span<const DatePrediction> predictions,
                              const McmcConfig& config,
                              RegressionMode mode = RegressionMode::per_class);

// `class,b1_mean,b1_hdi_low,b1_hdi_high,mae_absent,mae_present,r_hat_max,ess_min`
std::string format_effects(std::span<const EffectSummary> effects);
void write_effects(const std::filesystem::path& path,
                   std::span<const EffectSummary> effects);
std::vector<EffectSummary> read_effects(const std::filesystem::path& path);

// One `<prefix>_<param>.npy` per parameter, shape (chains, draws), '<f8'.
std::vector<std::filesystem::path> write_draws(
    const std::filesystem::path& directory, const std::string& prefix,
    const PosteriorSamples& samples);

}  // namespace chronolens
