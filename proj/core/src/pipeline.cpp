#include "stgan/pipeline.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "stgan/errors.hpp"
#include "stgan/eval.hpp"
#include "stgan/latent.hpp"
#include "stgan/sentiment.hpp"

namespace stgan {

namespace fs = std::filesystem;

RunLayout run_layout(const RunConfig& config, const std::string& run_id) {
  return RunLayout{config.paths.output_dir / run_id};
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ValidationError("cannot write " + path.string());
}

std::string read_text_file(const fs::path& path) {
  if (!fs::exists(path)) throw MissingArtifactError(path.string());
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

namespace {

std::vector<PriceSeries> load_canonical_prices(const RunConfig& config, const RunLayout& layout) {
  std::vector<PriceSeries> out;
  for (const auto& t : config.tickers) out.push_back(load_prices(layout.prices(t), t));
  return out;
}

std::vector<PriceSeries> training_span(const std::vector<PriceSeries>& series, Date cutoff) {
  std::vector<PriceSeries> out;
  for (const auto& s : series) out.push_back(split_train_test(s, cutoff).first);
  return out;
}

std::string join_tokens(const Sentence& s) {
  std::string out;
  for (const auto& tok : s) {
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

std::string fits_to_json(const std::map<std::string, ArimaFit>& fits) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [t, f] : fits) j[t] = nlohmann::ordered_json::parse(to_json(f));
  return j.dump(2) + "\n";
}

std::map<std::string, ArimaFit> fits_from_json(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    std::map<std::string, ArimaFit> out;
    const auto j = nlohmann::json::parse(text);
    for (const auto& [t, f] : j.items()) out[t] = arima_fit_from_json(f.dump());
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

/// News for the target dated on or before the cutoff; the whole pre-cutoff
/// corpus when the target has none.
std::vector<NewsDocument> target_news(const std::vector<NewsDocument>& docs, const RunConfig& config) {
  std::vector<NewsDocument> all, mine;
  for (const auto& d : docs) {
    if (d.date > config.cutoff) continue;
    all.push_back(d);
    if (std::find(d.tickers.begin(), d.tickers.end(), config.target) != d.tickers.end()) mine.push_back(d);
  }
  return mine.empty() ? all : mine;
}

ExperimentInputs load_inputs(const RunConfig& config, const RunLayout& layout) {
  ExperimentInputs in;
  in.series = load_canonical_prices(config, layout);
  in.target = config.target;
  in.cutoff = config.cutoff;
  in.features = config.features;
  in.feature_fits = fits_from_json(layout.feature_fits());
  in.train_features = load_feature_matrix(layout.features());
  in.documents = load_corpus(layout.corpus());
  in.classifier = NaiveBayesModel::from_json(read_text_file(layout.classifier()));
  in.latent = LatentSeed::from_json(read_text_file(layout.latent())).values;
  in.generator = config.generator;
  in.discriminator = config.discriminator;
  in.train = config.train;
  in.train_window = config.train_window;
  return in;
}

bool is_network(const std::string& name) { return name == kStGan || name == "gan_random_latent" || name == "fc_lstm"; }

PathForecaster load_forecaster(const std::string& name, const RunLayout& layout) {
  const fs::path dir = layout.model_dir(name);
  TrainedModel m;
  m.name = name;
  if (is_network(name)) {
    m.network = std::make_shared<GanModel>(load_gan(dir));
  } else if (name == "arima510") {
    m.arima = arima_fit_from_json(read_text_file(dir / "arima.json"));
  } else {
    m.sentiment = SentimentRegression::from_json(read_text_file(dir / "regression.json"));
  }
  return m.forecaster();
}

}  // namespace

void cmd_ingest(const RunConfig& config, const RunLayout& layout, std::ostream& log) {
  for (const auto& t : config.tickers) {
    const PriceSeries s = load_prices(config.paths.prices_dir / (t + ".csv"), t);
    if (s.empty()) throw ValidationError("price file for " + t + " has no rows");
    split_train_test(s, config.cutoff);
    fs::create_directories(layout.prices(t).parent_path());
    write_prices(layout.prices(t), s);
    log << "ingest: " << t << " " << s.size() << " bars\n";
  }
  const auto docs = load_corpus(config.paths.corpus);
  fs::create_directories(layout.data());
  write_corpus(layout.corpus(), docs);
  log << "ingest: " << docs.size() << " documents\n";

  const LabeledSeedCorpus seed = load_seed_corpus(config.paths.seed_corpus);
  validate_seed_corpus(seed);
  std::string csv = "text,label\n";
  for (const auto& e : seed.entries) csv += join_tokens(e.tokens) + "," + std::to_string(static_cast<int>(e.label)) + "\n";
  write_text_file(layout.seed_corpus(), csv);
  log << "ingest: " << seed.entries.size() << " labeled sentences\n";
}

void cmd_features(const RunConfig& config, const RunLayout& layout, std::ostream& log) {
  const auto train = training_span(load_canonical_prices(config, layout), config.cutoff);
  const auto fits = fit_feature_arimas(train, config.features.arima_spec);
  const FeatureMatrix m = assemble_features(train, config.features, &fits);
  write_text_file(layout.feature_fits(), fits_to_json(fits));
  fs::create_directories(layout.data());
  write_feature_matrix(layout.features(), m);
  log << "features: " << m.size() << " rows x " << m.width() << " columns through " << m.dates.back().iso() << "\n";
}

void cmd_train_sentiment(const RunConfig& config, const RunLayout& layout, std::ostream& log) {
  const LabeledSeedCorpus seed = load_seed_corpus(layout.seed_corpus());
  const NaiveBayesModel model = train_nb(seed, config.nb_alpha);
  write_text_file(layout.classifier(), model.to_json() + "\n");
  log << "train-sentiment: vocabulary " << model.vocabulary.size() << "\n";
}

void cmd_build_latent(const RunConfig& config, const RunLayout& layout, std::ostream& log) {
  const NaiveBayesModel model = NaiveBayesModel::from_json(read_text_file(layout.classifier()));
  const auto docs = target_news(load_corpus(layout.corpus()), config);
  if (docs.empty()) throw ValidationError("no news on or before " + config.cutoff.iso());
  std::vector<SentenceSentiment> sentiments;
  for (const auto& d : docs) {
    for (auto& s : analyze_document(model, d)) sentiments.push_back(std::move(s));
  }
  const LatentSeed seed = standardize(select_top_confidence(sentiments, config.latent_signed));
  for (const auto& w : seed.warnings) log << "build-latent: warning: " << w << "\n";
  write_text_file(layout.latent(), seed.to_json() + "\n");

  nlohmann::ordered_json ctx = nlohmann::ordered_json::object();
  for (const auto& t : config.tickers) {
    std::string keyword;
    for (char c : t) {
      if (c == '.') break;
      keyword += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    try {
      ctx[t] = context_sentiment(model, docs, keyword, config.context_window);
    } catch (const ValidationError& e) {
      ctx[t] = nullptr;
    }
  }
  write_text_file(layout.reports() / "context_sentiment.json", ctx.dump(2) + "\n");
  log << "build-latent: " << sentiments.size() << " sentences scored\n";
}

void cmd_train(const RunConfig& config, const RunLayout& layout, std::ostream& log) {
  const ExperimentInputs inputs = load_inputs(config, layout);
  for (const auto& name : config.models) {
    const fs::path dir = layout.model_dir(name);
    ExperimentInputs local = inputs;
    if (is_network(name) && local.train.checkpoint_every > 0) local.train.checkpoint_dir = dir / "checkpoints";
    const TrainedModel m = train_model(name, local);
    if (m.network) {
      save_gan(dir, *m.network, &local.train);
      write_text_file(dir / "training_log.json", to_json(m.log) + "\n");
      const auto& h = m.log.history.back();
      log << "train: " << name << " " << m.log.history.size() << " epochs, final D " << format_double(h.discriminator)
          << " G " << format_double(h.generator) << "\n";
    } else if (name == "arima510") {
      write_text_file(dir / "arima.json", to_json(m.arima) + "\n");
      log << "train: arima510 fitted\n";
    } else {
      write_text_file(dir / "regression.json", m.sentiment.to_json() + "\n");
      log << "train: sentiment_only on " << m.sentiment.points << " news days\n";
    }
  }
}

void cmd_forecast(const RunConfig& config, const RunLayout& layout, std::ostream& log) {
  const ForecastContext ctx{load_canonical_prices(config, layout), config.target, config.cutoff, config.features,
                            fits_from_json(layout.feature_fits())};
  const std::size_t longest = *std::max_element(config.horizons.begin(), config.horizons.end());
  const std::vector<double> path = load_forecaster(std::string(kStGan), layout)(ctx, longest);
  std::string csv = "step,date,prediction\n";
  Date d = config.cutoff;
  for (std::size_t i = 0; i < path.size(); ++i) {
    d = d.next_weekday();
    csv += std::to_string(i + 1) + "," + d.iso() + "," + format_double(path[i]) + "\n";
  }
  write_text_file(layout.reports() / "forecast_st_gan.csv", csv);
  log << "forecast: " << path.size() << " days from " << config.cutoff.iso() << "\n";
}

void cmd_evaluate(const RunConfig& config, const RunLayout& layout, std::ostream& log) {
  std::vector<std::pair<std::string, PathForecaster>> models;
  for (const auto& name : config.models) models.emplace_back(name, load_forecaster(name, layout));
  const ForecastContext ctx{load_canonical_prices(config, layout), config.target, config.cutoff, config.features,
                            fits_from_json(layout.feature_fits())};
  ExperimentReport report = experiment_grid(models, config.horizons, ctx);
  report.header = {
      {"config_hash", config.hash()},
      {"seed", std::to_string(config.seed())},
      {"split", "train <= " + config.cutoff.iso() + " < test"},
      {"nrmse", "rmse / mean of the horizon's ground truth"},
      {"sentiment_only",
       "least-squares map from daily mean sentence sentiment to next-day return, integrated from the last "
       "known price with the last observed sentiment held"},
      {"fc_lstm", "generator network alone trained with squared error"},
      {"gan_random_latent", "same GAN with the latent drawn from a standard normal"},
  };
  for (const auto& name : config.models) {
    const fs::path lg = layout.model_dir(name) / "training_log.json";
    if (fs::exists(lg)) report.header.emplace_back(name + "_config_hash", nlohmann::json::parse(read_text_file(lg)).at("config_hash"));
  }
  write_report(layout.reports(), layout.plots(), report);
  for (const auto& run : report.runs) {
    log << "evaluate: " << display_name(run.model) << " N=" << run.horizon << " rmse " << format_double(run.rmse)
        << " nrmse " << format_double(run.nrmse) << "\n";
  }
}

}  // namespace stgan
