#include "chronolens/eval_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chronolens {

namespace {

int bin_of(int error, int width) {
  // floor division, so -1 with width 5 lands in [-5, 0)
  int q = error / width;
  if (error % width != 0 && error < 0) --q;
  return q * width;
}

}  // namespace

std::vector<int> signed_errors(std::span<const DatePrediction> predictions) {
  std::vector<int> out;
  out.reserve(predictions.size());
  for (const auto& p : predictions) {
    const auto e = p.signed_error();
    if (!e) {
      throw std::invalid_argument("prediction for " + p.image_id +
                                  " has no actual year");
    }
    out.push_back(*e);
  }
  return out;
}

ErrorSummary summarize_signed_errors(std::span<const int> errors, int bin_width) {
  if (errors.empty()) throw std::invalid_argument("summarize_errors: empty input");
  if (bin_width < 1) throw std::invalid_argument("bin_width must be >= 1");
  ErrorSummary s;
  s.n = errors.size();
  s.bin_width = bin_width;
  double abs_sum = 0.0;
  double signed_sum = 0.0;
  for (int e : errors) {
    abs_sum += std::abs(e);
    signed_sum += e;
    ++s.histogram[bin_of(e, bin_width)];
  }
  s.mae = abs_sum / static_cast<double>(s.n);
  s.mean_signed_error = signed_sum / static_cast<double>(s.n);
  return s;
}

ErrorSummary summarize_errors(std::span<const DatePrediction> predictions,
                              int bin_width) {
  const auto errors = signed_errors(predictions);
  return summarize_signed_errors(errors, bin_width);
}

double kolmogorov_q(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  constexpr double kEps = 1e-10;
  double q = 0.0;
  if (lambda < 1.18) {
    // The alternating series converges too slowly here; use the equivalent
    // theta-function form of the CDF, 1 - Q = sqrt(2 pi)/l sum exp(-(2k-1)^2 pi^2 / (8 l^2)).
    const double c = -std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(c * odd * odd);
      cdf += term;
      if (term < kEps * cdf) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    q = 1.0 - cdf;
  } else {
    double sign = 1.0;
    for (int k = 1; k < 100; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      q += sign * term;
      if (term < kEps) break;
      sign = -sign;
    }
    q *= 2.0;
  }
  return std::clamp(q, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> xs(a.begin(), a.end());
  std::vector<double> ys(b.begin(), b.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());

  const double n1 = static_cast<double>(xs.size());
  const double n2 = static_cast<double>(ys.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  // Step both ECDFs past every copy of the next distinct value before
  // comparing, so ties never produce a spurious gap.
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] == v) ++i;
    while (j < ys.size() && ys[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }

  KsResult r;
  r.statistic = d;
  r.n1 = xs.size();
  r.n2 = ys.size();
  const double ne = n1 * n2 / (n1 + n2);
  const double root = std::sqrt(ne);
  r.p_value = kolmogorov_q((root + 0.12 + 0.11 / root) * d);
  return r;
}

std::map<std::string, ErrorSummary> group_errors(
    std::span<const DatePrediction> predictions,
    const std::unordered_map<std::string, std::string>& grouping, int bin_width) {
  std::map<std::string, std::vector<int>> members;
  for (const auto& p : predictions) {
    const auto e = p.signed_error();
    if (!e) {
      throw std::invalid_argument("prediction for " + p.image_id +
                                  " has no actual year");
    }
    const auto it = grouping.find(p.image_id);
    members[it == grouping.end() ? std::string(kUngrouped) : it->second].push_back(*e);
  }
  std::map<std::string, ErrorSummary> out;
  for (const auto& [group, errors] : members) {
    out.emplace(group, summarize_signed_errors(errors, bin_width));
  }
  return out;
}

}  // namespace chronolens
