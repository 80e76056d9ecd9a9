#include "stgan/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "stgan/errors.hpp"

namespace stgan {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> full_length(const IndicatorSeries& s, std::size_t n) {
  std::vector<double> out(n, kNaN);
  for (std::size_t i = 0; i < s.values.size(); ++i) out[s.warmup + i] = s.values[i];
  return out;
}

}  // namespace

IndicatorSeries sma(std::span<const double> close, std::size_t window) {
  if (window == 0) throw ValidationError("sma: window must be positive");
  if (window > close.size()) throw ValidationError("sma: window exceeds series length");
  IndicatorSeries out{"sma" + std::to_string(window), window - 1, {}};
  out.values.reserve(close.size() - window + 1);
  for (std::size_t t = window - 1; t < close.size(); ++t) {
    double sum = 0.0;
    for (std::size_t j = t + 1 - window; j <= t; ++j) sum += close[j];
    out.values.push_back(sum / static_cast<double>(window));
  }
  return out;
}

IndicatorSeries ema(std::span<const double> close, std::size_t period) {
  if (period == 0) throw ValidationError("ema: period must be positive");
  if (close.empty()) throw ValidationError("ema: empty series");
  const double k = 2.0 / (static_cast<double>(period) + 1.0);
  IndicatorSeries out{"ema" + std::to_string(period), 0, {}};
  out.values.reserve(close.size());
  double prev = close[0];
  out.values.push_back(prev);
  for (std::size_t t = 1; t < close.size(); ++t) {
    prev += k * (close[t] - prev);
    out.values.push_back(prev);
  }
  return out;
}

IndicatorSeries macd(std::span<const double> close) {
  const auto fast = ema(close, 12);
  const auto slow = ema(close, 26);
  IndicatorSeries out{"macd", 0, std::vector<double>(close.size())};
  for (std::size_t t = 0; t < close.size(); ++t) out.values[t] = fast.values[t] - slow.values[t];
  return out;
}

IndicatorSeries rolling_std(std::span<const double> close, std::size_t window) {
  if (window == 0 || window > close.size()) throw ValidationError("rolling_std: invalid window");
  IndicatorSeries out{"std" + std::to_string(window), window - 1, {}};
  for (std::size_t t = window - 1; t < close.size(); ++t) {
    const auto w = close.subspan(t + 1 - window, window);
    double mean = 0.0;
    for (double v : w) mean += v;
    mean /= static_cast<double>(window);
    double ss = 0.0;
    for (double v : w) ss += (v - mean) * (v - mean);
    out.values.push_back(std::sqrt(ss / static_cast<double>(window)));
  }
  return out;
}

BollingerBands bollinger(std::span<const double> close) {
  if (close.size() < 21) throw ValidationError("bollinger: series shorter than 21 days");
  const auto mid = sma(close, 21);
  const auto sd = rolling_std(close, 20);
  BollingerBands bands{{"bollinger_upper", 20, {}}, {"bollinger_lower", 20, {}}};
  for (std::size_t t = 20; t < close.size(); ++t) {
    const double m = *mid.at(t);
    const double s = *sd.at(t);
    bands.upper.values.push_back(m + s);
    bands.lower.values.push_back(m - s);
  }
  return bands;
}

const std::vector<std::string>& feature_catalog() {
  static const std::vector<std::string> names = {
      "close",  "adj_close", "volume", "log_return",      "sma7",            "sma21",
      "ema12",  "ema26",     "macd",   "bollinger_upper", "bollinger_lower", "fourier_recon_k3",
      "fourier_recon_k9", "arima_forecast_1d", "acf_lag1", "pacf_lag1"};
  return names;
}

std::vector<std::size_t> catalog_warmups(const ArimaSpec& spec, std::size_t acf_window) {
  const std::size_t forecast_warmup = spec.p + spec.d == 0 ? 0 : spec.p + spec.d - 1;
  const std::size_t acf_warmup = acf_window - 1;
  return {0, 0, 0, 1, 6, 20, 0, 0, 0, 20, 20, 0, 0, forecast_warmup, acf_warmup, acf_warmup};
}

std::vector<PriceSeries> align_on_common_dates(std::span<const PriceSeries> series) {
  if (series.empty()) return {};
  std::vector<const PriceSeries*> ordered;
  for (const auto& s : series) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const PriceSeries* a, const PriceSeries* b) { return a->ticker() < b->ticker(); });
  std::set<Date> common;
  for (const auto& b : ordered.front()->bars()) common.insert(b.date);
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    std::set<Date> next;
    for (const auto& b : ordered[i]->bars()) {
      if (common.count(b.date)) next.insert(b.date);
    }
    common.swap(next);
  }
  std::vector<PriceSeries> out;
  for (const auto* s : ordered) {
    std::vector<OhlcvBar> bars;
    for (const auto& b : s->bars()) {
      if (common.count(b.date)) bars.push_back(b);
    }
    out.emplace_back(s->ticker(), std::move(bars));
  }
  return out;
}

FeatureMatrix build_feature_matrix(std::span<const PriceSeries> aligned, std::span<const SpectralFeatures> spectral,
                                   std::span<const ArimaFeatures> arima) {
  if (aligned.size() != kTickerCount) {
    throw ValidationError("feature matrix needs exactly 8 tickers, got " + std::to_string(aligned.size()));
  }
  if (spectral.size() != kTickerCount || arima.size() != kTickerCount) {
    throw ValidationError("feature matrix needs spectral and ARIMA columns for all 8 tickers");
  }
  const std::size_t n = aligned.front().size();
  if (n == 0) throw ValidationError("feature matrix: empty date intersection");
  const auto dates = aligned.front().dates();
  for (const auto& s : aligned) {
    if (s.dates() != dates) throw ValidationError("feature matrix: series are not date-aligned");
  }
  if (n < kMinCommonDays) {
    throw ValidationError("feature matrix: common date range has " + std::to_string(n) + " days, need " +
                          std::to_string(kMinCommonDays));
  }

  const auto& catalog = feature_catalog();
  FeatureMatrix m;
  std::vector<std::vector<double>> columns;
  columns.reserve(kFeatureWidth);
  for (std::size_t k = 0; k < kTickerCount; ++k) {
    const auto& s = aligned[k];
    const auto close = s.closes();
    const auto& sp = spectral[k];
    const auto& ar = arima[k];
    if (sp.recon_low.size() != n || sp.recon_high.size() != n || ar.forecast_1d.size() != n ||
        ar.acf_lag1.size() != n || ar.pacf_lag1.size() != n) {
      throw ValidationError("feature matrix: auxiliary columns for " + s.ticker() + " have the wrong length");
    }
    std::vector<double> volume = s.volumes();
    for (auto& v : volume) v *= kVolumeScale;
    std::vector<double> log_ret(n, kNaN);
    for (std::size_t t = 1; t < n; ++t) log_ret[t] = std::log(close[t] / close[t - 1]);
    const auto bands = bollinger(close);

    columns.push_back(close);
    columns.push_back(s.adj_closes());
    columns.push_back(std::move(volume));
    columns.push_back(std::move(log_ret));
    columns.push_back(full_length(sma(close, 7), n));
    columns.push_back(full_length(sma(close, 21), n));
    columns.push_back(full_length(ema(close, 12), n));
    columns.push_back(full_length(ema(close, 26), n));
    columns.push_back(full_length(macd(close), n));
    columns.push_back(full_length(bands.upper, n));
    columns.push_back(full_length(bands.lower, n));
    columns.push_back(sp.recon_low);
    columns.push_back(sp.recon_high);
    columns.push_back(ar.forecast_1d);
    columns.push_back(ar.acf_lag1);
    columns.push_back(ar.pacf_lag1);
    for (const auto& name : catalog) m.feature_names.push_back(s.ticker() + "." + name);
  }

  std::size_t first = 0;
  for (const auto& col : columns) {
    std::size_t w = 0;
    while (w < n && std::isnan(col[w])) ++w;
    first = std::max(first, w);
  }
  if (first >= n) throw ValidationError("feature matrix: no day has every feature defined");
  for (std::size_t t = first; t < n; ++t) {
    std::vector<double> row(kFeatureWidth);
    for (std::size_t c = 0; c < kFeatureWidth; ++c) {
      row[c] = columns[c][t];
      if (!std::isfinite(row[c])) {
        throw NumericError("feature matrix: non-finite " + m.feature_names[c] + " on " + dates[t].iso());
      }
    }
    m.dates.push_back(dates[t]);
    m.rows.push_back(std::move(row));
  }
  return m;
}

std::map<std::string, ArimaFit> fit_feature_arimas(std::span<const PriceSeries> series, const ArimaSpec& spec) {
  std::map<std::string, ArimaFit> fits;
  for (const auto& s : series) {
    try {
      fits[s.ticker()] = fit_ar(s.closes(), spec);
    } catch (const Error&) {
      fits[s.ticker()] = random_walk_fit(spec);
    }
  }
  return fits;
}

FeatureMatrix assemble_features(std::span<const PriceSeries> series, const FeatureOptions& options,
                                const std::map<std::string, ArimaFit>* fits) {
  if (series.size() != kTickerCount) {
    throw ValidationError("feature matrix needs exactly 8 tickers, got " + std::to_string(series.size()));
  }
  const auto aligned = align_on_common_dates(series);
  if (aligned.front().empty()) throw ValidationError("feature matrix: empty date intersection");
  std::map<std::string, ArimaFit> own;
  if (fits == nullptr) {
    own = fit_feature_arimas(aligned, options.arima_spec);
    fits = &own;
  }
  std::vector<SpectralFeatures> spectral;
  std::vector<ArimaFeatures> arima;
  for (const auto& s : aligned) {
    const auto close = s.closes();
    spectral.push_back(spectral_features(close, options.fourier_k_low, options.fourier_k_high));
    const auto it = fits->find(s.ticker());
    if (it == fits->end()) throw ValidationError("no ARIMA fit for ticker " + s.ticker());
    arima.push_back(arima_features(close, it->second, options.acf_window));
  }
  return build_feature_matrix(aligned, spectral, arima);
}

void write_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& m) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "date";
  for (const auto& name : m.feature_names) out << ',' << name;
  out << '\n';
  out.precision(17);
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    out << m.dates[r].iso();
    for (double v : m.rows[r]) out << ',' << v;
    out << '\n';
  }
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw MissingArtifactError(path.string());
  std::ifstream in(path);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + ": empty feature file");
  FeatureMatrix m;
  auto header = split_csv_record(line);
  if (header.empty() || header.front() != "date") throw ValidationError(path.string() + ": bad header");
  m.feature_names.assign(header.begin() + 1, header.end());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_record(line);
    if (fields.size() != m.feature_names.size() + 1) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": wrong field count");
    }
    m.dates.push_back(Date::parse(fields[0]));
    std::vector<double> row;
    row.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) row.push_back(std::stod(fields[i]));
    m.rows.push_back(std::move(row));
  }
  return m;
}

}  // namespace stgan
