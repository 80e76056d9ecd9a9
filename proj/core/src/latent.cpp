#include "stgan/latent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "stgan/errors.hpp"

namespace stgan {

LatentSeed select_top_confidence(std::span<const SentenceSentiment> sentiments, bool signed_values) {
  if (sentiments.empty()) throw ValidationError("select_top_confidence: no sentiments");
  std::vector<const SentenceSentiment*> order;
  order.reserve(sentiments.size());
  for (const auto& s : sentiments) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](const SentenceSentiment* a, const SentenceSentiment* b) {
    if (a->confidence != b->confidence) return a->confidence > b->confidence;
    if (a->doc_id != b->doc_id) return a->doc_id < b->doc_id;
    return a->sentence_index < b->sentence_index;
  });
  LatentSeed seed;
  seed.signed_values = signed_values;
  const std::size_t take = std::min(kLatentDim, order.size());
  for (std::size_t i = 0; i < take; ++i) {
    const auto& s = *order[i];
    seed.values.push_back(signed_values ? static_cast<int>(s.label) * s.confidence : s.confidence);
    seed.provenance.push_back({s.doc_id, s.sentence_index});
  }
  if (take < kLatentDim) {
    seed.warnings.push_back("only " + std::to_string(take) + " sentences available; zero-padded " +
                            std::to_string(kLatentDim - take) + " latent entries");
    seed.values.resize(kLatentDim, 0.0);
  }
  return seed;
}

std::vector<double> standardize_values(std::span<const double> values) {
  if (values.empty()) throw ValidationError("standardize: empty vector");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  if (!(sd > 0.0)) throw NumericError("degenerate latent: zero standard deviation");
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mean) / sd;
  return out;
}

LatentSeed standardize(const LatentSeed& seed) {
  if (seed.values.size() != kLatentDim) throw ValidationError("latent seed must have 100 values");
  LatentSeed out = seed;
  out.values = standardize_values(seed.values);
  out.standardized = true;
  return out;
}

std::string LatentSeed::to_json() const {
  nlohmann::ordered_json j;
  j["dim"] = values.size();
  j["standardized"] = standardized;
  j["signed"] = signed_values;
  j["values"] = values;
  auto prov = nlohmann::json::array();
  for (const auto& p : provenance) prov.push_back({{"doc_id", p.doc_id}, {"sentence_index", p.sentence_index}});
  j["provenance"] = std::move(prov);
  j["warnings"] = warnings;
  return j.dump(2);
}

LatentSeed LatentSeed::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    LatentSeed s;
    s.values = j.at("values").get<std::vector<double>>();
    s.standardized = j.at("standardized").get<bool>();
    s.signed_values = j.value("signed", true);
    for (const auto& p : j.at("provenance")) {
      s.provenance.push_back({p.at("doc_id").get<std::string>(), p.at("sentence_index").get<std::size_t>()});
    }
    s.warnings = j.value("warnings", std::vector<std::string>{});
    if (s.values.size() != kLatentDim) throw ValidationError("latent seed must have 100 values");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("LatentSeed JSON: ") + e.what());
  }
}

}  // namespace stgan
