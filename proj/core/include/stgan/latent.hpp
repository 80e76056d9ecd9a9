#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stgan/sentiment.hpp"

namespace stgan {

inline constexpr std::size_t kLatentDim = 100;

struct SentenceRef {
  std::string doc_id;
  std::size_t sentence_index = 0;

  friend bool operator==(const SentenceRef&, const SentenceRef&) = default;
};

/// The generator's 100-dimensional seed built from the most confident
/// sentence classifications.
struct LatentSeed {
  std::vector<double> values;
  /// One entry per selected sentence; padded slots have no provenance.
  std::vector<SentenceRef> provenance;
  bool standardized = false;
  bool signed_values = true;
  std::vector<std::string> warnings;

  std::string to_json() const;
  static LatentSeed from_json(std::string_view text);
};

/// Sorts by confidence (descending; ties by doc_id then sentence index) and
/// keeps the first 100. Signed mode stores label * confidence, unsigned mode
/// the confidence alone. Fewer than 100 inputs are zero-padded with a warning.
LatentSeed select_top_confidence(std::span<const SentenceSentiment> sentiments, bool signed_values = true);

/// (v - mean) / population std, componentwise.
std::vector<double> standardize_values(std::span<const double> values);

LatentSeed standardize(const LatentSeed& seed);

}  // namespace stgan
