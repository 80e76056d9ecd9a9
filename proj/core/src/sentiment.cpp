#include "stgan/sentiment.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "stgan/errors.hpp"

namespace stgan {

std::size_t Vocabulary::add(const std::string& token) {
  auto [it, inserted] = index_.try_emplace(token, tokens_.size());
  if (inserted) tokens_.push_back(token);
  return it->second;
}

std::optional<std::size_t> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NaiveBayesModel train_nb(const LabeledSeedCorpus& corpus, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("train_nb: alpha must be positive");
  validate_seed_corpus(corpus);
  NaiveBayesModel model;
  model.alpha = alpha;
  std::array<double, kClassCount> doc_count{};
  std::array<double, kClassCount> token_total{};
  std::vector<std::array<double, kClassCount>> counts;
  for (const auto& entry : corpus.entries) {
    const std::size_t slot = class_slot(entry.label);
    doc_count[slot] += 1.0;
    for (const auto& tok : entry.tokens) {
      const std::size_t idx = model.vocabulary.add(tok);
      if (idx == counts.size()) counts.push_back({});
      counts[idx][slot] += 1.0;
      token_total[slot] += 1.0;
    }
  }
  const double total = static_cast<double>(corpus.entries.size());
  const double v = static_cast<double>(model.vocabulary.size());
  for (std::size_t c = 0; c < kClassCount; ++c) model.log_prior[c] = std::log(doc_count[c] / total);
  model.log_likelihood.resize(counts.size());
  for (std::size_t w = 0; w < counts.size(); ++w) {
    for (std::size_t c = 0; c < kClassCount; ++c) {
      model.log_likelihood[w][c] = std::log((counts[w][c] + alpha) / (token_total[c] + alpha * v));
    }
  }
  return model;
}

std::array<double, kClassCount> class_scores(const NaiveBayesModel& model, std::span<const std::string> sentence) {
  std::array<double, kClassCount> score = model.log_prior;
  for (const auto& tok : sentence) {
    const auto idx = model.vocabulary.find(tok);
    if (!idx) continue;
    for (std::size_t c = 0; c < kClassCount; ++c) score[c] += model.log_likelihood[*idx][c];
  }
  return score;
}

std::array<double, kClassCount> posterior(const NaiveBayesModel& model, std::span<const std::string> sentence) {
  const auto score = class_scores(model, sentence);
  const double top = *std::max_element(score.begin(), score.end());
  std::array<double, kClassCount> p{};
  double z = 0.0;
  for (std::size_t c = 0; c < kClassCount; ++c) z += (p[c] = std::exp(score[c] - top));
  for (auto& v : p) v /= z;
  return p;
}

Polarity argmax_class(const std::array<double, kClassCount>& scores) {
  // Visiting order encodes the tie-break: neutral, positive, negative.
  constexpr std::array<Polarity, kClassCount> preference = {Polarity::Neutral, Polarity::Positive,
                                                            Polarity::Negative};
  // Log scores summed in different orders can split an exact tie by a few ulps.
  auto ahead = [&](Polarity a, Polarity b) {
    const double sa = scores[class_slot(a)], sb = scores[class_slot(b)];
    return sa - sb > 1e-12 * std::max({1.0, std::abs(sa), std::abs(sb)});
  };
  Polarity best = preference[0];
  for (Polarity p : preference) {
    if (ahead(p, best)) best = p;
  }
  return best;
}

SentenceSentiment classify(const NaiveBayesModel& model, std::span<const std::string> sentence) {
  const auto score = class_scores(model, sentence);
  const Polarity label = argmax_class(score);
  const auto post = posterior(model, sentence);
  return {label, post[class_slot(label)], {}, 0};
}

std::vector<SentenceSentiment> analyze_document(const NaiveBayesModel& model, const NewsDocument& doc) {
  std::vector<SentenceSentiment> out;
  out.reserve(doc.sentences.size());
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    auto s = classify(model, doc.sentences[i]);
    s.doc_id = doc.doc_id;
    s.sentence_index = i;
    out.push_back(std::move(s));
  }
  return out;
}

std::optional<Polarity> word_sentiment(const NaiveBayesModel& model, std::string_view word) {
  const auto idx = model.vocabulary.find(word);
  if (!idx) return std::nullopt;
  std::array<double, kClassCount> score{};
  for (std::size_t c = 0; c < kClassCount; ++c) score[c] = model.log_prior[c] + model.log_likelihood[*idx][c];
  return argmax_class(score);
}

double context_sentiment(const NaiveBayesModel& model, std::span<const NewsDocument> docs, std::string_view keyword,
                         std::size_t window) {
  if (window == 0) throw ValidationError("context_sentiment: window must be at least 1");
  bool found = false;
  double sum = 0.0;
  std::size_t scored = 0;
  for (const auto& doc : docs) {
    for (const auto& sentence : doc.sentences) {
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        if (sentence[i] != keyword) continue;
        found = true;
        const std::size_t lo = i >= window ? i - window : 0;
        const std::size_t hi = std::min(sentence.size() - 1, i + window);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          if (const auto pol = word_sentiment(model, sentence[j])) {
            sum += static_cast<int>(*pol);
            ++scored;
          }
        }
      }
    }
  }
  if (!found) throw ValidationError("keyword not found: " + std::string(keyword));
  if (scored == 0) throw ValidationError("no scorable context for keyword " + std::string(keyword));
  return sum / static_cast<double>(scored);
}

std::string NaiveBayesModel::to_json() const {
  nlohmann::ordered_json j;
  j["alpha"] = alpha;
  j["classes"] = {-1, 0, 1};
  j["priors"] = std::vector<double>(log_prior.begin(), log_prior.end());
  j["vocabulary"] = vocabulary.tokens();
  auto rows = nlohmann::json::array();
  for (const auto& row : log_likelihood) rows.push_back(std::vector<double>(row.begin(), row.end()));
  j["likelihood_rows"] = std::move(rows);
  j["encoding"] = "natural log";
  return j.dump();
}

NaiveBayesModel NaiveBayesModel::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    NaiveBayesModel m;
    m.alpha = j.at("alpha").get<double>();
    if (j.at("classes").get<std::vector<int>>() != std::vector<int>{-1, 0, 1}) {
      throw ValidationError("NaiveBayesModel: classes must be [-1, 0, 1]");
    }
    const auto priors = j.at("priors").get<std::vector<double>>();
    if (priors.size() != kClassCount) throw ValidationError("NaiveBayesModel: expected 3 priors");
    std::copy(priors.begin(), priors.end(), m.log_prior.begin());
    for (const auto& tok : j.at("vocabulary").get<std::vector<std::string>>()) m.vocabulary.add(tok);
    for (const auto& row : j.at("likelihood_rows")) {
      const auto r = row.get<std::vector<double>>();
      if (r.size() != kClassCount) throw ValidationError("NaiveBayesModel: likelihood row must have 3 entries");
      m.log_likelihood.push_back({r[0], r[1], r[2]});
    }
    if (m.log_likelihood.size() != m.vocabulary.size()) {
      throw ValidationError("NaiveBayesModel: likelihood rows do not match vocabulary");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("NaiveBayesModel JSON: ") + e.what());
  }
}

}  // namespace stgan
