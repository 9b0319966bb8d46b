#include "chronolens/zero_shot.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chronolens/error.hpp"
#include "chronolens/util.hpp"

namespace chronolens {

YearPromptSet::YearPromptSet(EmbeddingMatrix text_embeddings, int first_year,
                             int last_year, std::string prompt_template)
    : template_(std::move(prompt_template)) {
  if (first_year > last_year) {
    throw std::invalid_argument("YearPromptSet: first_year > last_year");
  }
  if (template_.find("{}") == std::string::npos) {
    throw std::invalid_argument("prompt template lacks a {} placeholder");
  }
  for (int y = first_year; y <= last_year; ++y) years_.push_back(y);
  if (text_embeddings.rows() != years_.size()) {
    throw DataError("text embeddings have " + std::to_string(text_embeddings.rows()) +
                    " rows, expected one per year " + std::to_string(first_year) +
                    ".." + std::to_string(last_year));
  }
  for (std::size_t i = 0; i < years_.size(); ++i) {
    if (text_embeddings.ids()[i] != std::to_string(years_[i])) {
      throw DataError("text embedding row " + std::to_string(i) + " has id '" +
                      text_embeddings.ids()[i] + "', expected '" +
                      std::to_string(years_[i]) + "'");
    }
  }
  text_ = text_embeddings.normalized() ? std::move(text_embeddings)
                                       : l2_normalize(text_embeddings);
}

std::string YearPromptSet::prompt_for(int year) const {
  auto out = template_;
  out.replace(out.find("{}"), 2, std::to_string(year));
  return out;
}

std::vector<DatePrediction> zero_shot_predict(const EmbeddingMatrix& images,
                                              const YearPromptSet& prompts) {
  const auto& text = prompts.text_embeddings();
  if (images.rows() > 0 && images.dim() != text.dim()) {
    throw DataError("image embeddings have dimension " + std::to_string(images.dim()) +
                    " but text embeddings have " + std::to_string(text.dim()));
  }
  const auto normalized = images.normalized() ? images : l2_normalize(images);
  const auto& years = prompts.years();

  std::vector<DatePrediction> out(normalized.rows());
  for (std::size_t i = 0; i < normalized.rows(); ++i) {
    auto& p = out[i];
    p.image_id = normalized.ids()[i];
    p.scores.resize(years.size());
    const auto x = normalized.row(i);
    for (std::size_t k = 0; k < years.size(); ++k) {
      p.scores[k] = dot(x, text.row(k));
    }
    p.predicted_year = years[argmax(p.scores)];
  }
  return out;
}

std::vector<double> scores_to_probabilities(std::span<const double> scores,
                                            double logit_scale) {
  if (!(logit_scale > 0.0)) {
    throw std::invalid_argument("logit_scale must be positive");
  }
  std::vector<double> out(scores.size());
  if (scores.empty()) return out;
  const double peak = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    out[k] = std::exp(logit_scale * (scores[k] - peak));
    total += out[k];
  }
  for (auto& v : out) v /= total;
  return out;
}

}  // namespace chronolens
