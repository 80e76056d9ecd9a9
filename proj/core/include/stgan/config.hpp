#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stgan/date.hpp"
#include "stgan/gan.hpp"

namespace stgan {

/// Declarative run configuration. Defaults mirror the published
/// hyperparameter table; relative paths resolve against the config file.
struct RunConfig {
  struct Paths {
    std::filesystem::path prices_dir = "prices";
    std::filesystem::path corpus = "corpus.jsonl";
    std::filesystem::path seed_corpus = "seed_corpus.csv";
    std::filesystem::path output_dir = "runs";
  } paths;

  std::vector<std::string> tickers = {"AIR.PA", "BA", "ERJ", "GE", "HON", "LMT", "NOC", "RTX"};
  std::string target = "BA";
  Date cutoff = Date::from_ymd(2020, 1, 24);

  FeatureOptions features;
  double nb_alpha = 1.0;

  bool latent_signed = true;
  std::size_t context_window = 5;

  GeneratorConfig generator;
  DiscriminatorConfig discriminator;
  TrainConfig train;
  std::size_t train_window = 0;

  // Fixed by the published model; any other value is rejected.
  std::string weight_initializer = "xavier";
  std::string optimizer = "adam";
  std::string regularization = "l1";
  std::string conv_padding = "none";

  std::vector<std::string> models;  // defaults to every grid model
  std::vector<std::size_t> horizons = {1, 15, 30};

  std::uint64_t seed() const { return train.seed; }
  /// Throws ValidationError on an inconsistent configuration.
  void validate() const;
  /// Canonical TOML rendering (stable across runs; basis of the run hash).
  std::string to_toml() const;
  std::string hash() const;
};

RunConfig default_config();
RunConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace stgan
