// stgan: batch front end for the forecasting pipeline.
//
//   stgan --config run.toml ingest
//   stgan --config run.toml features
//   stgan --config run.toml train-sentiment
//   stgan --config run.toml build-latent
//   stgan --config run.toml train --epochs 1
//   stgan --config run.toml forecast
//   stgan --config run.toml evaluate
//
// Exit codes: 0 ok, 1 validation error, 2 missing artifact, 3 numeric failure.

#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "stgan/errors.hpp"
#include "stgan/pipeline.hpp"

namespace {

using Stage = void (*)(const stgan::RunConfig&, const stgan::RunLayout&, std::ostream&);

int run(int argc, char** argv) {
  CLI::App app{"Sentiment-seeded GAN stock forecasting pipeline"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<std::size_t> epochs;
  app.add_option("--config", config_path, "Run configuration (TOML); built-in defaults when omitted");
  app.add_option("--seed", seed, "Override the run seed");
  app.add_option("--out", out_dir, "Override the output directory");

  const std::vector<std::pair<std::string, Stage>> stages = {
      {"ingest", stgan::cmd_ingest},
      {"features", stgan::cmd_features},
      {"train-sentiment", stgan::cmd_train_sentiment},
      {"build-latent", stgan::cmd_build_latent},
      {"train", stgan::cmd_train},
      {"forecast", stgan::cmd_forecast},
      {"evaluate", stgan::cmd_evaluate},
  };
  std::map<CLI::App*, Stage> by_app;
  for (const auto& [name, fn] : stages) {
    CLI::App* sub = app.add_subcommand(name, "Run the " + name + " stage");
    if (name == "train") sub->add_option("--epochs", epochs, "Override train.epochs");
    by_app[sub] = fn;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    stgan::RunConfig config = config_path.empty() ? stgan::default_config() : stgan::load_config(config_path);
    // The run root is keyed on the configuration before flag overrides so
    // every stage of one run lands in the same directory.
    const std::string run_id = config.hash();
    if (seed) config.train.seed = *seed;
    if (!out_dir.empty()) config.paths.output_dir = out_dir;
    if (epochs) config.train.epochs = *epochs;
    config.validate();
    const stgan::RunLayout layout = stgan::run_layout(config, run_id);
    for (const auto& [sub, fn] : by_app) {
      if (sub->parsed()) {
        fn(config, layout, std::cout);
        std::cout << "run root: " << layout.root.string() << "\n";
      }
    }
    return 0;
  } catch (const stgan::MissingArtifactError& e) {
    std::cerr << "stgan: " << e.what() << "\n";
    return 2;
  } catch (const stgan::NumericError& e) {
    std::cerr << "stgan: numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const stgan::ValidationError& e) {
    std::cerr << "stgan: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "stgan: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
