#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chronolens/bayes_glm.hpp"
#include "chronolens/eval_stats.hpp"

namespace chronolens::report {

// Signed-error histogram; one <rect class="bar"> per non-empty bin carrying
// data-bin and data-count attributes.
std::string histogram_svg(const ErrorSummary& summary, const std::string& title);

using NamedSummary = std::pair<std::string, ErrorSummary>;

std::string mae_table_markdown(std::span<const NamedSummary> runs);

// Per-class slope mean with its HDI bar, a vertical rule at zero.
std::string effects_forest_svg(std::span<const EffectSummary> effects);

std::string effects_table_markdown(std::span<const EffectSummary> effects);

}  // namespace chronolens::report
