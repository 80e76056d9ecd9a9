#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "stgan/config.hpp"

namespace stgan {

/// Artifact directories under one run root.
struct RunLayout {
  std::filesystem::path root;

  std::filesystem::path data() const { return root / "data"; }
  std::filesystem::path models() const { return root / "models"; }
  std::filesystem::path reports() const { return root / "reports"; }
  std::filesystem::path plots() const { return root / "plots"; }

  std::filesystem::path prices(const std::string& ticker) const { return data() / "prices" / (ticker + ".csv"); }
  std::filesystem::path corpus() const { return data() / "corpus.jsonl"; }
  std::filesystem::path seed_corpus() const { return data() / "seed_corpus.csv"; }
  std::filesystem::path features() const { return data() / "features.csv"; }
  std::filesystem::path feature_fits() const { return models() / "feature_arima.json"; }
  std::filesystem::path classifier() const { return models() / "naive_bayes.json"; }
  std::filesystem::path latent() const { return models() / "latent.json"; }
  std::filesystem::path model_dir(const std::string& name) const { return models() / name; }
};

/// `<output_dir>/<run_id>`.
RunLayout run_layout(const RunConfig& config, const std::string& run_id);

/// Each stage reads only upstream artifacts and writes its own. A missing
/// upstream file raises MissingArtifactError naming the path. Progress
/// lines go to `log`.
void cmd_ingest(const RunConfig& config, const RunLayout& layout, std::ostream& log);
void cmd_features(const RunConfig& config, const RunLayout& layout, std::ostream& log);
void cmd_train_sentiment(const RunConfig& config, const RunLayout& layout, std::ostream& log);
void cmd_build_latent(const RunConfig& config, const RunLayout& layout, std::ostream& log);
void cmd_train(const RunConfig& config, const RunLayout& layout, std::ostream& log);
void cmd_forecast(const RunConfig& config, const RunLayout& layout, std::ostream& log);
void cmd_evaluate(const RunConfig& config, const RunLayout& layout, std::ostream& log);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);
/// Reads a whole file; MissingArtifactError if it does not exist.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace stgan
