#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stgan/ingest.hpp"

namespace stgan {

/// Dense 0-based token index.
class Vocabulary {
 public:
  /// Returns the index of `token`, inserting it if new.
  std::size_t add(const std::string& token);
  std::optional<std::size_t> find(std::string_view token) const;
  const std::string& token(std::size_t index) const { return tokens_.at(index); }
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> tokens_;
};

inline constexpr std::size_t kClassCount = 3;
/// Class slot order used by every per-class array.
inline constexpr std::array<Polarity, kClassCount> kClasses = {Polarity::Negative, Polarity::Neutral,
                                                                Polarity::Positive};
inline constexpr std::size_t class_slot(Polarity p) { return static_cast<std::size_t>(static_cast<int>(p) + 1); }

/// Multinomial Naive Bayes over {-1, 0, +1} with additive smoothing.
struct NaiveBayesModel {
  double alpha = 1.0;
  Vocabulary vocabulary;
  std::array<double, kClassCount> log_prior{};
  /// log_likelihood[token][slot] = log P(token | class).
  std::vector<std::array<double, kClassCount>> log_likelihood;

  std::string to_json() const;
  static NaiveBayesModel from_json(std::string_view text);
};

struct SentenceSentiment {
  Polarity label = Polarity::Neutral;
  double confidence = 0.0;
  std::string doc_id;
  std::size_t sentence_index = 0;
};

NaiveBayesModel train_nb(const LabeledSeedCorpus& corpus, double alpha = 1.0);

/// log P(y) + sum log P(x_k | y) over in-vocabulary tokens, per class slot.
std::array<double, kClassCount> class_scores(const NaiveBayesModel& model, std::span<const std::string> sentence);

/// Normalized posterior P(y | sentence) per class slot.
std::array<double, kClassCount> posterior(const NaiveBayesModel& model, std::span<const std::string> sentence);

/// Argmax with ties resolved toward 0, then +1, then -1. Scores within a
/// relative 1e-12 of each other count as tied.
Polarity argmax_class(const std::array<double, kClassCount>& scores);

SentenceSentiment classify(const NaiveBayesModel& model, std::span<const std::string> sentence);

std::vector<SentenceSentiment> analyze_document(const NaiveBayesModel& model, const NewsDocument& doc);

/// Word-level polarity argmax_y P(y | w); nullopt for out-of-vocabulary words.
std::optional<Polarity> word_sentiment(const NaiveBayesModel& model, std::string_view word);

/// Mean word-level polarity of tokens within +/- window of each occurrence of
/// `keyword`, bounded by the sentence.
double context_sentiment(const NaiveBayesModel& model, std::span<const NewsDocument> docs,
                         std::string_view keyword, std::size_t window = 5);

}  // namespace stgan
