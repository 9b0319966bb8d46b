#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "chronolens/predictions.hpp"

namespace chronolens {

struct ErrorSummary {
  std::size_t n = 0;
  double mae = 0.0;
  double mean_signed_error = 0.0;  // negative: dated too early
  int bin_width = 1;
  // Key is the lower edge of the bin, floor(error / bin_width) * bin_width.
  std::map<int, std::size_t> histogram;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

// Throws std::invalid_argument on empty input, a missing actual year or
// bin_width < 1.
ErrorSummary summarize_errors(std::span<const DatePrediction> predictions,
                              int bin_width = 1);
ErrorSummary summarize_signed_errors(std::span<const int> signed_errors,
                                     int bin_width = 1);

std::vector<int> signed_errors(std::span<const DatePrediction> predictions);

// Survival function of the Kolmogorov distribution,
// Q(l) = 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 l^2), clamped to [0, 1].
double kolmogorov_q(double lambda);

// Two-sample KS test with the asymptotic p-value
// Q((sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) * D), ne = n1 n2 / (n1 + n2).
// Throws std::invalid_argument if either sample is empty.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

inline constexpr const char* kUngrouped = "\xE2\x88\x85";  // "∅"

// Ids missing from `grouping` are collected under kUngrouped.
std::map<std::string, ErrorSummary> group_errors(
    std::span<const DatePrediction> predictions,
    const std::unordered_map<std::string, std::string>& grouping,
    int bin_width = 1);

}  // namespace chronolens
