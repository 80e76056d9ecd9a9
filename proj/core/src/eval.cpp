#include "stgan/eval.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "stgan/errors.hpp"

namespace stgan {

double rmse(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) {
    throw ValidationError("rmse: length mismatch (" + std::to_string(pred.size()) + " vs " +
                          std::to_string(truth.size()) + ")");
  }
  if (pred.empty()) throw ValidationError("rmse: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += (pred[i] - truth[i]) * (pred[i] - truth[i]);
  return std::sqrt(s / static_cast<double>(pred.size()));
}

double nrmse(double rmse_val, std::span<const double> truth) {
  if (truth.empty()) throw ValidationError("nrmse: empty truth");
  const double mean = std::accumulate(truth.begin(), truth.end(), 0.0) / static_cast<double>(truth.size());
  if (mean == 0.0) throw NumericError("nrmse: ground truth has zero mean");
  return rmse_val / mean;
}

void ForecastRun::validate() const {
  if (predicted.size() != horizon || truth.size() != horizon || dates.size() != horizon) {
    throw ValidationError("forecast run " + model + ": lengths do not match horizon " + std::to_string(horizon));
  }
  if (!(rmse >= 0.0) || std::abs(nrmse - stgan::nrmse(rmse, truth)) > 1e-12 * std::max(1.0, std::abs(nrmse))) {
    throw ValidationError("forecast run " + model + ": inconsistent metrics");
  }
}

ForecastRun make_run(std::string model, std::string ticker, std::vector<Date> dates, std::vector<double> predicted,
                     std::vector<double> truth) {
  ForecastRun run;
  run.model = std::move(model);
  run.ticker = std::move(ticker);
  run.horizon = predicted.size();
  run.dates = std::move(dates);
  run.predicted = std::move(predicted);
  run.truth = std::move(truth);
  run.rmse = rmse(run.predicted, run.truth);
  run.nrmse = nrmse(run.rmse, run.truth);
  run.validate();
  return run;
}

const std::vector<std::string>& baseline_names() {
  static const std::vector<std::string> names = {"gan_random_latent", "fc_lstm", "arima510", "sentiment_only"};
  return names;
}

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v{std::string(kStGan)};
    for (const auto& b : baseline_names()) v.push_back(b);
    return v;
  }();
  return names;
}

std::string display_name(std::string_view model) {
  if (model == kStGan) return "ST-GAN";
  if (model == "gan_random_latent") return "GAN";
  if (model == "fc_lstm") return "FC-LSTM";
  if (model == "arima510") return "ARIMA(5,1,0)";
  if (model == "sentiment_only") return "Sentiment Analysis";
  return std::string(model);
}

std::vector<DailySentiment> daily_sentiment(const NaiveBayesModel& model, std::span<const NewsDocument> docs,
                                            const PriceSeries& prices) {
  std::map<std::size_t, std::pair<double, std::size_t>> buckets;
  const auto dates = prices.dates();
  for (const auto& doc : docs) {
    const auto it = std::lower_bound(dates.begin(), dates.end(), doc.date);
    if (it == dates.end()) continue;
    auto& [sum, n] = buckets[static_cast<std::size_t>(it - dates.begin())];
    for (const auto& s : analyze_document(model, doc)) {
      sum += static_cast<double>(static_cast<int>(s.label));
      ++n;
    }
  }
  std::vector<DailySentiment> out;
  for (const auto& [idx, acc] : buckets) {
    if (acc.second == 0) continue;
    out.push_back({dates[idx], acc.first / static_cast<double>(acc.second), acc.second});
  }
  return out;
}

SentimentRegression fit_sentiment_regression(const PriceSeries& prices, std::span<const DailySentiment> daily) {
  SentimentRegression reg;
  std::vector<double> xs, ys;
  std::size_t j = 0;
  for (const auto& d : daily) {
    while (j < prices.size() && prices[j].date < d.date) ++j;
    if (j + 1 >= prices.size()) break;
    if (prices[j].date != d.date) continue;
    xs.push_back(d.mean);
    ys.push_back(prices[j + 1].close / prices[j].close - 1.0);
  }
  if (!daily.empty()) reg.last_sentiment = daily.back().mean;
  reg.points = xs.size();
  if (xs.empty()) return reg;
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (xs.size() < 2 || !(sxx > 1e-15)) {
    reg.intercept = my;
    return reg;
  }
  reg.slope = sxy / sxx;
  reg.intercept = my - reg.slope * mx;
  return reg;
}

std::vector<double> sentiment_path(const SentimentRegression& reg, double last_close, std::size_t horizon) {
  const double r = reg.intercept + reg.slope * reg.last_sentiment;
  std::vector<double> out;
  double p = last_close;
  for (std::size_t h = 0; h < horizon; ++h) {
    p *= 1.0 + r;
    out.push_back(p);
  }
  return out;
}

std::string SentimentRegression::to_json() const {
  nlohmann::ordered_json j{{"intercept", intercept}, {"slope", slope}, {"last_sentiment", last_sentiment},
                           {"points", points}};
  return j.dump(2);
}

SentimentRegression SentimentRegression::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    return {j.at("intercept"), j.at("slope"), j.at("last_sentiment"), j.at("points")};
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("sentiment regression: ") + e.what());
  }
}

PathForecaster gan_forecaster(GanModel& model) {
  return [&model](const ForecastContext& ctx, std::size_t horizon) { return forecast_horizon(model, ctx, horizon); };
}

PathForecaster arima_forecaster(ArimaFit fit) {
  return [fit = std::move(fit)](const ForecastContext& ctx, std::size_t horizon) {
    const auto closes = ctx.target_series().up_to(ctx.origin).closes();
    return forecast(fit, closes, horizon);
  };
}

PathForecaster sentiment_forecaster(SentimentRegression reg) {
  return [reg](const ForecastContext& ctx, std::size_t horizon) {
    const PriceSeries history = ctx.target_series().up_to(ctx.origin);
    if (history.empty()) throw ValidationError("sentiment forecast: no history before the origin");
    return sentiment_path(reg, history.back().close, horizon);
  };
}

ForecastContext ExperimentInputs::context() const {
  return ForecastContext{series, target, cutoff, features, feature_fits};
}

PriceSeries ExperimentInputs::target_train() const {
  for (const auto& s : series) {
    if (s.ticker() == target) return s.up_to(cutoff);
  }
  throw ValidationError("target " + target + " not among the series");
}

namespace {

FeatureMatrix tail_rows(const FeatureMatrix& m, std::size_t n) {
  if (n == 0 || n >= m.size()) return m;
  FeatureMatrix out;
  out.feature_names = m.feature_names;
  const auto skip = static_cast<std::ptrdiff_t>(m.size() - n);
  out.dates.assign(m.dates.begin() + skip, m.dates.end());
  out.rows.assign(m.rows.begin() + skip, m.rows.end());
  return out;
}

}  // namespace

PathForecaster TrainedModel::forecaster() const {
  if (network) {
    auto net = network;
    return [net](const ForecastContext& ctx, std::size_t horizon) { return forecast_horizon(*net, ctx, horizon); };
  }
  if (name == "arima510") return arima_forecaster(arima);
  if (name == "sentiment_only") return sentiment_forecaster(sentiment);
  throw ValidationError("model " + name + " has no forecaster");
}

TrainedModel train_model(std::string_view name, const ExperimentInputs& inputs) {
  TrainedModel out;
  out.name = std::string(name);
  const PriceSeries target = inputs.target_train();
  const FeatureMatrix features = tail_rows(inputs.train_features, inputs.train_window);
  const std::uint64_t seed = inputs.train.seed;
  if (name == kStGan || name == "gan_random_latent") {
    std::vector<double> latent = inputs.latent;
    if (name == "gan_random_latent") {
      Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
      latent.assign(inputs.generator.latent_dim, 0.0);
      for (auto& v : latent) v = rng.normal();
    }
    out.network = std::make_shared<GanModel>(make_gan(inputs.generator, inputs.discriminator, latent, seed));
    out.network->kind = out.name;
    out.log = train(*out.network, features, target, inputs.train);
  } else if (name == "fc_lstm") {
    out.network = std::make_shared<GanModel>(make_generator_only(inputs.generator, seed));
    out.log = train_supervised(*out.network, features, target, inputs.train);
  } else if (name == "arima510") {
    out.arima = fit_ar(target.closes(), ArimaSpec{5, 1, 0});
  } else if (name == "sentiment_only") {
    std::vector<NewsDocument> docs;
    for (const auto& d : documents_for(inputs.documents, inputs.target)) {
      if (d.date <= inputs.cutoff) docs.push_back(d);
    }
    out.sentiment = fit_sentiment_regression(target, daily_sentiment(inputs.classifier, docs, target));
  } else {
    throw ValidationError("unknown model '" + std::string(name) + "'");
  }
  return out;
}

std::pair<std::vector<Date>, std::vector<double>> ground_truth(const ForecastContext& context, std::size_t horizon) {
  std::vector<Date> dates;
  std::vector<double> closes;
  for (const auto& bar : context.target_series().bars()) {
    if (bar.date <= context.origin) continue;
    if (dates.size() == horizon) break;
    dates.push_back(bar.date);
    closes.push_back(bar.close);
  }
  if (dates.size() < horizon) {
    throw ValidationError("only " + std::to_string(dates.size()) + " bars of " + context.target + " follow " +
                          context.origin.iso() + "; horizon " + std::to_string(horizon) + " needs more");
  }
  return {dates, closes};
}

ForecastRun run_baseline(std::string_view name, const ExperimentInputs& inputs, std::size_t horizon) {
  const TrainedModel model = train_model(name, inputs);
  const ForecastContext ctx = inputs.context();
  auto [dates, truth] = ground_truth(ctx, horizon);
  return make_run(model.name, inputs.target, std::move(dates), model.forecaster()(ctx, horizon), std::move(truth));
}

ExperimentReport experiment_grid(const std::vector<std::pair<std::string, PathForecaster>>& models,
                                 std::span<const std::size_t> horizons, const ForecastContext& context) {
  if (horizons.empty()) throw ValidationError("experiment grid needs at least one horizon");
  const std::size_t longest = *std::max_element(horizons.begin(), horizons.end());
  const auto [dates, truth] = ground_truth(context, longest);
  ExperimentReport report;
  report.ticker = context.target;
  report.origin = context.origin;
  report.horizons.assign(horizons.begin(), horizons.end());
  for (const auto& [name, forecaster] : models) {
    const std::vector<double> path = forecaster(context, longest);
    if (path.size() != longest) throw ValidationError("model " + name + " returned a short forecast");
    for (std::size_t n : horizons) {
      const auto cut = static_cast<std::ptrdiff_t>(n);
      report.runs.push_back(make_run(name, context.target, {dates.begin(), dates.begin() + cut},
                                     {path.begin(), path.begin() + cut}, {truth.begin(), truth.begin() + cut}));
    }
  }
  return report;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string ExperimentReport::to_csv() const {
  std::string out = "metric,model,N,value\n";
  for (const char* metric : {"rmse", "nrmse"}) {
    for (const auto& run : runs) {
      out += std::string(metric) + "," + run.model + "," + std::to_string(run.horizon) + "," +
             format_double(metric[0] == 'r' ? run.rmse : run.nrmse) + "\n";
    }
  }
  return out;
}

std::string ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json head = nlohmann::ordered_json::object();
  for (const auto& [k, v] : header) head[k] = v;
  j["header"] = std::move(head);
  j["ticker"] = ticker;
  j["origin"] = origin.iso();
  j["horizons"] = horizons;
  auto table = nlohmann::ordered_json::array();
  for (const auto& run : runs) {
    table.push_back({{"model", run.model},
                     {"label", display_name(run.model)},
                     {"N", run.horizon},
                     {"rmse", run.rmse},
                     {"nrmse", run.nrmse},
                     {"truth_mean", run.rmse / run.nrmse}});
  }
  j["table"] = std::move(table);
  return j.dump(2) + "\n";
}

std::string plot_csv(const ForecastRun& run) {
  std::string out = "date,truth,prediction\n";
  for (std::size_t i = 0; i < run.horizon; ++i) {
    out += run.dates[i].iso() + "," + format_double(run.truth[i]) + "," + format_double(run.predicted[i]) + "\n";
  }
  return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ValidationError("cannot write " + path.string());
}

}  // namespace

void write_report(const std::filesystem::path& reports_dir, const std::filesystem::path& plots_dir,
                  const ExperimentReport& report) {
  write_text(reports_dir / "report.csv", report.to_csv());
  write_text(reports_dir / "report.json", report.to_json());
  for (const auto& run : report.runs) {
    write_text(plots_dir / (run.model + "_N" + std::to_string(run.horizon) + ".csv"), plot_csv(run));
  }
}

}  // namespace stgan
