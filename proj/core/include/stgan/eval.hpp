#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stgan/gan.hpp"
#include "stgan/sentiment.hpp"

namespace stgan {

double rmse(std::span<const double> pred, std::span<const double> truth);
/// rmse_val / mean(truth).
double nrmse(double rmse_val, std::span<const double> truth);

struct ForecastRun {
  std::string model;
  std::string ticker;
  std::size_t horizon = 0;
  std::vector<Date> dates;
  std::vector<double> predicted;
  std::vector<double> truth;
  double rmse = 0.0;
  double nrmse = 0.0;

  /// Throws ValidationError if lengths or metrics are inconsistent.
  void validate() const;
};

ForecastRun make_run(std::string model, std::string ticker, std::vector<Date> dates, std::vector<double> predicted,
                     std::vector<double> truth);

/// Model names in report order; the first is the full model.
inline constexpr std::string_view kStGan = "st_gan";
const std::vector<std::string>& baseline_names();
const std::vector<std::string>& model_names();
/// Row label used in the report table.
std::string display_name(std::string_view model);

/// Mean sentence polarity of a ticker's news, bucketed onto trading days.
struct DailySentiment {
  Date date;
  double mean = 0.0;
  std::size_t sentences = 0;
};

/// News dated on a non-trading day counts toward the next trading day of
/// `prices`; news after prices.back() is ignored.
std::vector<DailySentiment> daily_sentiment(const NaiveBayesModel& model, std::span<const NewsDocument> docs,
                                            const PriceSeries& prices);

/// Next-day simple return ~ intercept + slope * sentiment, by least squares.
struct SentimentRegression {
  double intercept = 0.0;
  double slope = 0.0;
  double last_sentiment = 0.0;
  std::size_t points = 0;

  std::string to_json() const;
  static SentimentRegression from_json(std::string_view text);
};

/// Falls back to slope 0 (mean return) with fewer than two points or
/// constant sentiment.
SentimentRegression fit_sentiment_regression(const PriceSeries& prices, std::span<const DailySentiment> daily);

/// Holds the last observed sentiment and compounds the implied return.
std::vector<double> sentiment_path(const SentimentRegression& reg, double last_close, std::size_t horizon);

/// N-day forecast from a context; must never read past context.origin.
using PathForecaster = std::function<std::vector<double>(const ForecastContext&, std::size_t horizon)>;

PathForecaster gan_forecaster(GanModel& model);
PathForecaster arima_forecaster(ArimaFit fit);
PathForecaster sentiment_forecaster(SentimentRegression reg);

/// Everything the grid models are trained from.
struct ExperimentInputs {
  std::vector<PriceSeries> series;  // may extend past the cutoff
  std::string target;
  Date cutoff;
  FeatureOptions features;
  std::map<std::string, ArimaFit> feature_fits;  // fitted on the training span
  FeatureMatrix train_features;
  std::vector<double> latent;  // standardized seed for st_gan
  std::vector<NewsDocument> documents;
  NaiveBayesModel classifier;
  GeneratorConfig generator;
  DiscriminatorConfig discriminator;
  TrainConfig train;
  std::size_t train_window = 0;  // last rows of train_features used; 0 = all

  ForecastContext context() const;
  PriceSeries target_train() const;
};

/// A trained grid entry. GAN-family models own their network.
struct TrainedModel {
  std::string name;
  std::shared_ptr<GanModel> network;
  TrainingLog log;
  ArimaFit arima;
  SentimentRegression sentiment;

  PathForecaster forecaster() const;
};

TrainedModel train_model(std::string_view name, const ExperimentInputs& inputs);

/// Trains `name` and scores its N-day forecast from the cutoff.
ForecastRun run_baseline(std::string_view name, const ExperimentInputs& inputs, std::size_t horizon);

/// First `horizon` bars of the target after the origin.
std::pair<std::vector<Date>, std::vector<double>> ground_truth(const ForecastContext& context, std::size_t horizon);

struct ExperimentReport {
  std::string ticker;
  Date origin;
  std::vector<std::size_t> horizons;
  std::vector<ForecastRun> runs;
  std::vector<std::pair<std::string, std::string>> header;

  std::string to_csv() const;
  std::string to_json() const;
};

/// Forecasts each model once at the longest horizon and scores every
/// prefix (forecasts are prefix-consistent).
ExperimentReport experiment_grid(const std::vector<std::pair<std::string, PathForecaster>>& models,
                                 std::span<const std::size_t> horizons, const ForecastContext& context);

/// date,truth,prediction
std::string plot_csv(const ForecastRun& run);

/// Writes report.csv, report.json and one plot CSV per run.
void write_report(const std::filesystem::path& reports_dir, const std::filesystem::path& plots_dir,
                  const ExperimentReport& report);

/// Shortest round-trip decimal.
std::string format_double(double v);

}  // namespace stgan
