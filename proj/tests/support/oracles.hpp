#pragma once

// Independent reference computations used only by tests. None of these call
// into the library paths they check.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace oracle {

// Per image, the index of the year with the largest cosine similarity found
// by a plain double loop (ties to the lowest index).
std::vector<std::size_t> brute_force_argmax(const std::vector<std::vector<double>>& images,
                                            const std::vector<std::vector<double>>& texts);

// sup |F_a - F_b| evaluated by counting both samples at every sample point.
double ecdf_sweep_ks(std::span<const double> a, std::span<const double> b);

// Exact permutation p-value of the KS statistic for tiny samples.
double ks_permutation_p(std::span<const double> a, std::span<const double> b);

double poisson_log_pmf(std::int64_t y, double mu);

// Fraction of points closer to their own class centroid than to the other.
double nearest_centroid_accuracy(const std::vector<std::vector<double>>& points,
                                 const std::vector<int>& labels);

// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> samples, double q);

// Mode of the NB GLM posterior over (b0, b1, log alpha) by damped Newton
// iterations with finite-difference derivatives. Priors match the library
// defaults: b0 ~ N(0, 5), b1 ~ N(0, 2.5), alpha ~ HalfNormal(10), with the
// log-alpha Jacobian included.
std::array<double, 3> newton_nb_map(std::span<const std::uint8_t> x,
                                    std::span<const std::int64_t> y);

}  // namespace oracle
