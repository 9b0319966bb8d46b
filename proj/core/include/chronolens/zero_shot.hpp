#pragma once

#include <span>
#include <string>
#include <vector>

#include "chronolens/embeddings.hpp"
#include "chronolens/predictions.hpp"

namespace chronolens {

inline constexpr const char* kDefaultPromptTemplate =
    "a photograph from the year {}";

// One text embedding per candidate year, years strictly increasing.
class YearPromptSet {
 public:
  // Text embedding ids must be exactly the year strings first..last in order.
  YearPromptSet(EmbeddingMatrix text_embeddings, int first_year = 1950,
                int last_year = 1999,
                std::string prompt_template = kDefaultPromptTemplate);

  const std::vector<int>& years() const { return years_; }
  const std::string& prompt_template() const { return template_; }
  const EmbeddingMatrix& text_embeddings() const { return text_; }

  // Template with its `{}` placeholder replaced by the year.
  std::string prompt_for(int year) const;

 private:
  std::vector<int> years_;
  std::string template_;
  EmbeddingMatrix text_;
};

// Cosine similarity of every image against every year prompt; the predicted
// year is the argmax with ties toward the earliest year. Output order follows
// the image rows. actual_year is left empty.
std::vector<DatePrediction> zero_shot_predict(const EmbeddingMatrix& images,
                                              const YearPromptSet& prompts);

// softmax(logit_scale * scores). Throws std::invalid_argument for
// logit_scale <= 0.
std::vector<double> scores_to_probabilities(std::span<const double> scores,
                                            double logit_scale = 100.0);

}  // namespace chronolens
