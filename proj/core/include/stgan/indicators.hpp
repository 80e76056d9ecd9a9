#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stgan/arima.hpp"
#include "stgan/date.hpp"
#include "stgan/ingest.hpp"
#include "stgan/spectral.hpp"

namespace stgan {

/// An indicator over a source series of length n. `values[i]` belongs to
/// source index `warmup + i`; the first `warmup` days are undefined.
struct IndicatorSeries {
  std::string name;
  std::size_t warmup = 0;
  std::vector<double> values;

  std::optional<double> at(std::size_t source_index) const {
    if (source_index < warmup || source_index - warmup >= values.size()) return std::nullopt;
    return values[source_index - warmup];
  }
};

IndicatorSeries sma(std::span<const double> close, std::size_t window);

/// EMA(t) = close(t) k + EMA(t-1) (1 - k), k = 2 / (N + 1), seeded with close(0).
/// Evaluated as EMA(t-1) + k (close(t) - EMA(t-1)) so a constant series is an exact fixed point.
IndicatorSeries ema(std::span<const double> close, std::size_t period);

/// ema(12) - ema(26).
IndicatorSeries macd(std::span<const double> close);

struct BollingerBands {
  IndicatorSeries upper;
  IndicatorSeries lower;
};

/// sma(21) +/- population standard deviation of the trailing 20 closes.
BollingerBands bollinger(std::span<const double> close);

/// Population standard deviation of each trailing window.
IndicatorSeries rolling_std(std::span<const double> close, std::size_t window);

inline constexpr std::size_t kTickerCount = 8;
inline constexpr std::size_t kFeaturesPerTicker = 16;
inline constexpr std::size_t kFeatureWidth = kTickerCount * kFeaturesPerTicker;
inline constexpr std::size_t kMinCommonDays = 51;
inline constexpr double kVolumeScale = 1e-6;

/// Per-ticker column suffixes in matrix order.
const std::vector<std::string>& feature_catalog();

/// Leading days each catalog column leaves undefined, in catalog order.
std::vector<std::size_t> catalog_warmups(const ArimaSpec& spec = {}, std::size_t acf_window = 21);

struct FeatureMatrix {
  std::vector<Date> dates;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> feature_names;

  std::size_t size() const { return rows.size(); }
  std::size_t width() const { return feature_names.size(); }
};

/// Restricts every series to the dates all of them share. Output is ordered
/// by ticker symbol.
std::vector<PriceSeries> align_on_common_dates(std::span<const PriceSeries> series);

/// Assembles the 128-wide matrix from date-aligned, ticker-ordered series
/// and their per-ticker spectral and ARIMA columns (aligned to the same
/// days). Rows inside any warmup are dropped.
FeatureMatrix build_feature_matrix(std::span<const PriceSeries> aligned,
                                   std::span<const SpectralFeatures> spectral,
                                   std::span<const ArimaFeatures> arima);

struct FeatureOptions {
  std::size_t fourier_k_low = 3;
  std::size_t fourier_k_high = 9;
  ArimaSpec arima_spec{};
  std::size_t acf_window = 21;
};

/// Fits ARIMA(p,d,0) per ticker, falling back to a random-walk fit when the
/// series is too short or the design matrix is singular.
std::map<std::string, ArimaFit> fit_feature_arimas(std::span<const PriceSeries> series,
                                                   const ArimaSpec& spec = {});

/// Aligns the eight series and runs every feature family. When `fits` is
/// null the ARIMA models are estimated on the given series.
FeatureMatrix assemble_features(std::span<const PriceSeries> series, const FeatureOptions& options = {},
                                const std::map<std::string, ArimaFit>* fits = nullptr);

void write_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& m);
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);

}  // namespace stgan
