#pragma once

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "stgan/indicators.hpp"
#include "stgan/ingest.hpp"
#include "stgan/random.hpp"

#ifndef STGAN_FIXTURE_DIR
#define STGAN_FIXTURE_DIR "fixtures"
#endif

namespace stgan::support {

inline std::filesystem::path fixture_dir() { return STGAN_FIXTURE_DIR; }

inline const std::vector<std::string>& fixture_tickers() {
  static const std::vector<std::string> t = {"AIR.PA", "BA", "ERJ", "GE", "HON", "LMT", "NOC", "RTX"};
  return t;
}

inline std::vector<PriceSeries> load_fixture_prices() {
  std::vector<PriceSeries> out;
  for (const auto& t : fixture_tickers()) out.push_back(load_prices(fixture_dir() / "prices" / (t + ".csv"), t));
  return out;
}

/// Series with the given closes on consecutive weekdays from `start`.
inline PriceSeries series_from_closes(const std::string& ticker, const std::vector<double>& closes,
                                      Date start = Date::from_ymd(2015, 1, 5), double volume = 1e6) {
  std::vector<OhlcvBar> bars;
  Date d = start;
  for (double c : closes) {
    bars.push_back({d, c, c * 1.01, c * 0.99, c, c * 0.95, volume});
    d = d.next_weekday();
  }
  return PriceSeries(ticker, std::move(bars));
}

/// Sine plus Gaussian noise around `level`, one series per ticker with its
/// own phase.
inline std::vector<PriceSeries> sine_panel(std::size_t days, std::uint64_t seed, double noise = 0.5,
                                           double period = 20.0, double level = 100.0, double amp = 10.0) {
  Rng rng(seed);
  std::vector<PriceSeries> out;
  for (std::size_t k = 0; k < kTickerCount; ++k) {
    std::vector<double> closes(days);
    for (std::size_t t = 0; t < days; ++t) {
      closes[t] = level + amp * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period + 0.7 * k) +
                  noise * rng.normal();
    }
    out.push_back(series_from_closes(fixture_tickers()[k], closes));
  }
  return out;
}

/// Geometric random walk panel.
inline std::vector<PriceSeries> random_walk_panel(std::size_t days, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PriceSeries> out;
  for (std::size_t k = 0; k < kTickerCount; ++k) {
    std::vector<double> closes(days);
    double p = 50.0 + 10.0 * static_cast<double>(k);
    for (auto& c : closes) {
      p *= std::exp(0.01 * rng.normal());
      c = p;
    }
    out.push_back(series_from_closes(fixture_tickers()[k], closes));
  }
  return out;
}

}  // namespace stgan::support
