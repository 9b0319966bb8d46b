#include "chronolens/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "chronolens/util.hpp"

namespace chronolens::report {

namespace {

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

constexpr double kWidth = 640.0;
constexpr double kHeight = 360.0;
constexpr double kLeft = 56.0;
constexpr double kRight = 16.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 40.0;

std::string svg_open(double width, double height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width, 0) +
         "\" height=\"" + fixed(height, 0) + "\" viewBox=\"0 0 " + fixed(width, 0) + " " +
         fixed(height, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
}

std::string text(double x, double y, std::string_view body, std::string_view anchor = "middle") {
  return "  <text x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" text-anchor=\"" +
         std::string(anchor) + "\">" + xml_escape(body) + "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, std::string_view extra = "") {
  return "  <line x1=\"" + fixed(x1) + "\" y1=\"" + fixed(y1) + "\" x2=\"" + fixed(x2) +
         "\" y2=\"" + fixed(y2) + "\" stroke=\"#333\"" +
         (extra.empty() ? std::string() : " " + std::string(extra)) + "/>\n";
}

}  // namespace

std::string histogram_svg(const ErrorSummary& summary, const std::string& title) {
  std::string out = svg_open(kWidth, kHeight);
  out += "  <title>" + xml_escape(title) + "</title>\n";

  std::string data = "{\"n\":" + std::to_string(summary.n) +
                     ",\"bin_width\":" + std::to_string(summary.bin_width) + ",\"bins\":{";
  bool first = true;
  for (const auto& [bin, count] : summary.histogram) {
    if (!first) data += ",";
    first = false;
    data += "\"" + std::to_string(bin) + "\":" + std::to_string(count);
  }
  data += "}}";
  out += "  <metadata id=\"histogram-data\">" + data + "</metadata>\n";
  out += text(kWidth / 2, 20, title);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double base = kTop + plot_h;
  out += line(kLeft, base, kLeft + plot_w, base);

  if (summary.histogram.empty()) {
    out += text(kWidth / 2, kHeight / 2, "no errors");
    return out + "</svg>\n";
  }

  const int lo = std::min(summary.histogram.begin()->first, 0);
  const int hi = std::max(std::prev(summary.histogram.end())->first, 0) + summary.bin_width;
  std::size_t peak = 0;
  for (const auto& [bin, count] : summary.histogram) peak = std::max(peak, count);

  const double span = static_cast<double>(hi - lo);
  auto x_of = [&](double v) { return kLeft + (v - lo) / span * plot_w; };
  const double bar_w = plot_w * summary.bin_width / span;

  for (const auto& [bin, count] : summary.histogram) {
    const double h = plot_h * static_cast<double>(count) / static_cast<double>(peak);
    out += "  <rect class=\"bar\" data-bin=\"" + std::to_string(bin) + "\" data-count=\"" +
           std::to_string(count) + "\" x=\"" + fixed(x_of(bin)) + "\" y=\"" +
           fixed(base - h) + "\" width=\"" + fixed(std::max(bar_w - 1.0, 0.5)) +
           "\" height=\"" + fixed(h) + "\" fill=\"#4a78b5\"/>\n";
  }

  out += line(x_of(0), kTop, x_of(0), base, "stroke-dasharray=\"4 3\"");
  out += text(x_of(lo), base + 16, std::to_string(lo));
  out += text(x_of(0), base + 16, "0");
  out += text(x_of(hi), base + 16, std::to_string(hi));
  out += text(kWidth / 2, kHeight - 6, "signed error (predicted - actual, years)");
  out += text(kLeft - 6, kTop + 4, std::to_string(peak), "end");
  out += text(kLeft - 6, base, "0", "end");
  out += text(kWidth - kRight, kTop - 6,
              "n=" + std::to_string(summary.n) + "  MAE=" + fixed(summary.mae) +
                  "  mean=" + fixed(summary.mean_signed_error),
              "end");
  return out + "</svg>\n";
}

std::string mae_table_markdown(std::span<const NamedSummary> runs) {
  std::string out = "| run | n | MAE | mean signed error |\n|---|---:|---:|---:|\n";
  for (const auto& [name, s] : runs) {
    out += "| " + name + " | " + std::to_string(s.n) + " | " + fixed(s.mae) + " | " +
           fixed(s.mean_signed_error) + " |\n";
  }
  return out;
}

std::string effects_forest_svg(std::span<const EffectSummary> effects) {
  const double row_h = 24.0;
  const double left = 110.0;
  const double height = kTop + kBottom + row_h * static_cast<double>(std::max<std::size_t>(effects.size(), 1));
  std::string out = svg_open(kWidth, height);
  out += "  <title>Estimated effects of objects on absolute error (95% HDI)</title>\n";
  out += text(kWidth / 2, 20, "Effect of object presence on absolute error (b1, 95% HDI)");
  if (effects.empty()) {
    out += text(kWidth / 2, kTop + row_h / 2, "no effects computed");
    return out + "</svg>\n";
  }

  double lo = 0.0;
  double hi = 0.0;
  for (const auto& e : effects) {
    lo = std::min(lo, e.b1_hdi.low);
    hi = std::max(hi, e.b1_hdi.high);
  }
  const double pad = 0.05 * std::max(hi - lo, 1e-6);
  lo -= pad;
  hi += pad;
  const double plot_w = kWidth - left - kRight;
  auto x_of = [&](double v) { return left + (v - lo) / (hi - lo) * plot_w; };
  const double bottom = kTop + row_h * static_cast<double>(effects.size());

  out += line(x_of(0.0), kTop - 4, x_of(0.0), bottom, "stroke-dasharray=\"4 3\"");
  for (std::size_t i = 0; i < effects.size(); ++i) {
    const auto& e = effects[i];
    const double y = kTop + row_h * (static_cast<double>(i) + 0.5);
    const bool excludes_zero = e.b1_hdi.high < 0.0 || e.b1_hdi.low > 0.0;
    const std::string colour = excludes_zero ? "#b5443a" : "#4a78b5";
    out += "  <g class=\"effect\" data-class=\"" + xml_escape(e.class_name) +
           "\" data-mean=\"" + format_double(e.b1_mean) + "\" data-low=\"" +
           format_double(e.b1_hdi.low) + "\" data-high=\"" + format_double(e.b1_hdi.high) +
           "\">\n";
    out += "  " + line(x_of(e.b1_hdi.low), y, x_of(e.b1_hdi.high), y,
                       "stroke-width=\"2\" stroke=\"" + colour + "\"");
    out += "    <circle cx=\"" + fixed(x_of(e.b1_mean)) + "\" cy=\"" + fixed(y) +
           "\" r=\"4\" fill=\"" + colour + "\"/>\n";
    out += "  " + text(left - 8, y + 4, e.class_name, "end");
    out += "  </g>\n";
  }
  out += line(left, bottom, left + plot_w, bottom);
  out += text(x_of(lo), bottom + 16, fixed(lo));
  out += text(x_of(0.0), bottom + 16, "0");
  out += text(x_of(hi), bottom + 16, fixed(hi));
  return out + "</svg>\n";
}

std::string effects_table_markdown(std::span<const EffectSummary> effects) {
  if (effects.empty()) return "no effects computed\n";
  std::string out =
      "| class | b1 mean | b1 95% HDI | MAE absent | MAE present | r_hat max | ESS min |\n"
      "|---|---:|---|---:|---:|---:|---:|\n";
  for (const auto& e : effects) {
    out += "| " + e.class_name + " | " + fixed(e.b1_mean, 3) + " | [" +
           fixed(e.b1_hdi.low, 3) + ", " + fixed(e.b1_hdi.high, 3) + "] | " +
           fixed(e.mae_absent) + " | " + fixed(e.mae_present) + " | " +
           fixed(e.r_hat_max, 3) + " | " + fixed(e.ess_min, 0) + " |\n";
  }
  return out;
}

}  // namespace chronolens::report
