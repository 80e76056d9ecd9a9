#include "stgan/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stgan/errors.hpp"

namespace stgan {

namespace {

constexpr std::string_view kPriceHeader = "Date,Open,High,Low,Close,Adj Close,Volume";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view field, const std::string& where) {
  field = trim(field);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(out)) {
    throw ValidationError(where + ": not a number '" + std::string(field) + "'");
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::ifstream open_input(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw MissingArtifactError(path.string());
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

void validate_bar(const OhlcvBar& b) {
  if (!(b.open > 0 && b.high > 0 && b.low > 0 && b.close > 0 && b.adj_close > 0)) {
    throw ValidationError("non-positive price on " + b.date.iso());
  }
  if (!(b.volume >= 0)) throw ValidationError("negative volume on " + b.date.iso());
  if (b.low > std::min(b.open, b.close) || b.high < std::max(b.open, b.close) || b.low > b.high) {
    throw ValidationError("low/high do not bracket open/close on " + b.date.iso());
  }
}

PriceSeries::PriceSeries(std::string ticker, std::vector<OhlcvBar> bars)
    : ticker_(std::move(ticker)), bars_(std::move(bars)) {
  for (std::size_t i = 0; i < bars_.size(); ++i) {
    validate_bar(bars_[i]);
    if (i > 0 && !(bars_[i - 1].date < bars_[i].date)) {
      throw ValidationError(ticker_ + ": dates not strictly increasing at " + bars_[i].date.iso());
    }
  }
}

std::vector<double> PriceSeries::closes() const {
  std::vector<double> out;
  out.reserve(bars_.size());
  for (const auto& b : bars_) out.push_back(b.close);
  return out;
}

std::vector<double> PriceSeries::adj_closes() const {
  std::vector<double> out;
  out.reserve(bars_.size());
  for (const auto& b : bars_) out.push_back(b.adj_close);
  return out;
}

std::vector<double> PriceSeries::volumes() const {
  std::vector<double> out;
  out.reserve(bars_.size());
  for (const auto& b : bars_) out.push_back(b.volume);
  return out;
}

std::vector<Date> PriceSeries::dates() const {
  std::vector<Date> out;
  out.reserve(bars_.size());
  for (const auto& b : bars_) out.push_back(b.date);
  return out;
}

PriceSeries PriceSeries::up_to(Date last) const {
  auto end = std::upper_bound(bars_.begin(), bars_.end(), last,
                              [](Date d, const OhlcvBar& b) { return d < b.date; });
  PriceSeries out;
  out.ticker_ = ticker_;
  out.bars_.assign(bars_.begin(), end);
  return out;
}

PriceSeries PriceSeries::head(std::size_t n) const {
  PriceSeries out;
  out.ticker_ = ticker_;
  out.bars_.assign(bars_.begin(), bars_.begin() + static_cast<std::ptrdiff_t>(std::min(n, bars_.size())));
  return out;
}

PriceSeries PriceSeries::appended(const OhlcvBar& bar) const {
  validate_bar(bar);
  if (!bars_.empty() && !(bars_.back().date < bar.date)) {
    throw ValidationError(ticker_ + ": appended bar " + bar.date.iso() + " is not after the last bar");
  }
  PriceSeries out = *this;
  out.bars_.push_back(bar);
  return out;
}

PriceSeries load_prices(const std::filesystem::path& path, std::string ticker) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kPriceHeader) {
    throw ValidationError(path.string() + ":1: expected header '" + std::string(kPriceHeader) + "'");
  }
  std::vector<OhlcvBar> bars;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const auto fields = split_csv_record(line);
    if (fields.size() != 7) {
      throw ValidationError(where + ": expected 7 fields, got " + std::to_string(fields.size()));
    }
    OhlcvBar bar;
    try {
      bar.date = Date::parse(trim(fields[0]));
      bar.open = parse_double(fields[1], where);
      bar.high = parse_double(fields[2], where);
      bar.low = parse_double(fields[3], where);
      bar.close = parse_double(fields[4], where);
      bar.adj_close = parse_double(fields[5], where);
      bar.volume = parse_double(fields[6], where);
      validate_bar(bar);
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      throw ValidationError(msg.rfind(where, 0) == 0 ? msg : where + ": " + msg);
    }
    bars.push_back(bar);
  }
  if (bars.empty()) throw ValidationError(path.string() + ": empty price series");
  std::stable_sort(bars.begin(), bars.end(),
                   [](const OhlcvBar& a, const OhlcvBar& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < bars.size(); ++i) {
    if (bars[i].date == bars[i - 1].date) {
      throw ValidationError(path.string() + ": duplicate date " + bars[i].date.iso());
    }
  }
  return PriceSeries(std::move(ticker), std::move(bars));
}

void write_prices(const std::filesystem::path& path, const PriceSeries& series) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << kPriceHeader << '\n';
  for (const auto& b : series.bars()) {
    out << b.date.iso() << ',' << format_double(b.open) << ',' << format_double(b.high) << ','
        << format_double(b.low) << ',' << format_double(b.close) << ',' << format_double(b.adj_close)
        << ',' << format_double(b.volume) << '\n';
  }
}

std::pair<PriceSeries, PriceSeries> split_train_test(const PriceSeries& series, Date cutoff) {
  if (series.empty()) throw ValidationError("cannot split an empty series");
  if (cutoff < series.front().date || series.back().date < cutoff) {
    throw ValidationError("cutoff " + cutoff.iso() + " outside series range " + series.front().date.iso() +
                          ".." + series.back().date.iso());
  }
  std::vector<OhlcvBar> train, test;
  for (const auto& b : series.bars()) (b.date <= cutoff ? train : test).push_back(b);
  return {PriceSeries(series.ticker(), std::move(train)), PriceSeries(series.ticker(), std::move(test))};
}

Sentence tokenize(std::string_view text) {
  Sentence tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (c < 0x80 && std::ispunct(c)) {
      continue;
    } else {
      current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const bool at_end = i + 1 == text.size();
    if (is_terminal(text[i]) && (at_end || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
      out.emplace_back(text.substr(start, i + 1 - start));
      start = i + 1;
    }
  }
  if (start < text.size()) out.emplace_back(text.substr(start));
  return out;
}

std::vector<Sentence> preprocess_text(std::string_view text) {
  std::vector<Sentence> out;
  for (const auto& s : split_sentences(text)) {
    auto tokens = tokenize(s);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  return out;
}

std::vector<NewsDocument> load_corpus(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<NewsDocument> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    try {
      const auto j = nlohmann::json::parse(line);
      for (const char* key : {"id", "tickers", "date", "source", "text"}) {
        if (!j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
      }
      NewsDocument doc;
      doc.doc_id = j.at("id").get<std::string>();
      doc.tickers = j.at("tickers").get<std::vector<std::string>>();
      doc.date = Date::parse(j.at("date").get<std::string>());
      doc.source = j.at("source").get<std::string>();
      doc.sentences = preprocess_text(j.at("text").get<std::string>());
      if (doc.sentences.empty()) throw ValidationError("document has no sentences after preprocessing");
      docs.push_back(std::move(doc));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return docs;
}

void write_corpus(const std::filesystem::path& path, std::span<const NewsDocument> docs) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  for (const auto& doc : docs) {
    std::string text;
    for (const auto& sentence : doc.sentences) {
      if (!text.empty()) text += ' ';
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        if (i) text += ' ';
        text += sentence[i];
      }
      text += '.';
    }
    nlohmann::ordered_json j;
    j["id"] = doc.doc_id;
    j["tickers"] = doc.tickers;
    j["date"] = doc.date.iso();
    j["source"] = doc.source;
    j["text"] = text;
    out << j.dump() << '\n';
  }
}

std::vector<NewsDocument> documents_for(std::span<const NewsDocument> docs, std::string_view ticker) {
  std::vector<NewsDocument> out;
  for (const auto& d : docs) {
    if (std::find(d.tickers.begin(), d.tickers.end(), ticker) != d.tickers.end()) out.push_back(d);
  }
  return out;
}

void validate_seed_corpus(const LabeledSeedCorpus& corpus) {
  if (corpus.entries.empty()) throw ValidationError("seed corpus is empty");
  bool seen[3] = {false, false, false};
  for (const auto& e : corpus.entries) seen[static_cast<int>(e.label) + 1] = true;
  for (int c = 0; c < 3; ++c) {
    if (!seen[c]) throw ValidationError("seed corpus has no example of class " + std::to_string(c - 1));
  }
}

LabeledSeedCorpus load_seed_corpus(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "text,label") {
    throw ValidationError(path.string() + ":1: expected header 'text,label'");
  }
  LabeledSeedCorpus corpus;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const auto fields = split_csv_record(line);
    if (fields.size() != 2) throw ValidationError(where + ": expected 2 fields");
    const auto label_text = trim(fields[1]);
    int label = 0;
    auto [ptr, ec] = std::from_chars(label_text.data(), label_text.data() + label_text.size(), label);
    if (ec != std::errc{} || ptr != label_text.data() + label_text.size() || label < -1 || label > 1) {
      throw ValidationError(where + ": label must be -1, 0 or 1");
    }
    corpus.entries.push_back({tokenize(fields[0]), static_cast<Polarity>(label)});
  }
  validate_seed_corpus(corpus);
  return corpus;
}

std::vector<std::string> split_csv_record(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace stgan
