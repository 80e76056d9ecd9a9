#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stgan/date.hpp"

namespace stgan {

/// One daily bar as published by Yahoo Finance.
struct OhlcvBar {
  Date date;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  double adj_close = 0.0;
  double volume = 0.0;

  friend bool operator==(const OhlcvBar&, const OhlcvBar&) = default;
};

/// Throws ValidationError describing the first broken bar invariant.
void validate_bar(const OhlcvBar& bar);

/// Date-ordered daily bars for one ticker. Construction validates every bar
/// and requires strictly increasing dates.
class PriceSeries {
 public:
  PriceSeries() = default;
  PriceSeries(std::string ticker, std::vector<OhlcvBar> bars);

  const std::string& ticker() const noexcept { return ticker_; }
  std::span<const OhlcvBar> bars() const noexcept { return bars_; }
  std::size_t size() const noexcept { return bars_.size(); }
  bool empty() const noexcept { return bars_.empty(); }
  const OhlcvBar& operator[](std::size_t i) const { return bars_[i]; }
  const OhlcvBar& front() const { return bars_.front(); }
  const OhlcvBar& back() const { return bars_.back(); }

  std::vector<double> closes() const;
  std::vector<double> adj_closes() const;
  std::vector<double> volumes() const;
  std::vector<Date> dates() const;

  /// Bars with date <= last (prefix view, copied).
  PriceSeries up_to(Date last) const;
  /// First `n` bars.
  PriceSeries head(std::size_t n) const;
  /// Copy with one more bar appended (validated).
  PriceSeries appended(const OhlcvBar& bar) const;

  friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

 private:
  std::string ticker_;
  std::vector<OhlcvBar> bars_;
};

/// Loads `Date,Open,High,Low,Close,Adj Close,Volume` CSV. Rows are sorted by
/// date; invalid rows raise ValidationError naming the 1-based file line.
PriceSeries load_prices(const std::filesystem::path& path, std::string ticker);

/// Writes the canonical CSV form read by load_prices (round-trip exact).
void write_prices(const std::filesystem::path& path, const PriceSeries& series);

/// Splits into (date <= cutoff, date > cutoff). The cutoff must fall within
/// [first date, last date].
std::pair<PriceSeries, PriceSeries> split_train_test(const PriceSeries& series, Date cutoff);

using Sentence = std::vector<std::string>;

struct NewsDocument {
  std::string doc_id;
  std::vector<std::string> tickers;
  Date date;
  std::string source;
  std::vector<Sentence> sentences;

  friend bool operator==(const NewsDocument&, const NewsDocument&) = default;
};

/// Lowercases, strips ASCII punctuation and splits on whitespace.
Sentence tokenize(std::string_view text);

/// Splits on '.', '!' or '?' followed by whitespace or end of text.
std::vector<std::string> split_sentences(std::string_view text);

/// split_sentences + tokenize, dropping sentences that end up empty.
std::vector<Sentence> preprocess_text(std::string_view text);

/// JSON Lines with fields {id, tickers, date, source, text}.
std::vector<NewsDocument> load_corpus(const std::filesystem::path& path);

/// Canonical JSONL: sentences rejoined with ". " so reloading is exact.
void write_corpus(const std::filesystem::path& path, std::span<const NewsDocument> docs);

/// Documents attributed to `ticker` (a document counts for every ticker it lists).
std::vector<NewsDocument> documents_for(std::span<const NewsDocument> docs, std::string_view ticker);

enum class Polarity : int { Negative = -1, Neutral = 0, Positive = 1 };

struct LabeledSentence {
  Sentence tokens;
  Polarity label = Polarity::Neutral;
};

struct LabeledSeedCorpus {
  std::vector<LabeledSentence> entries;
};

/// Throws ValidationError unless every polarity class has at least one entry.
void validate_seed_corpus(const LabeledSeedCorpus& corpus);

/// CSV with header `text,label`, label in {-1,0,1}; text may be double-quoted.
LabeledSeedCorpus load_seed_corpus(const std::filesystem::path& path);

/// Splits one CSV record honoring double quotes ("" escapes a quote).
std::vector<std::string> split_csv_record(std::string_view line);

}  // namespace stgan
