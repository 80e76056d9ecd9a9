#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stgan {

/// ARIMA(p, d, q) orders. Only q = 0 and d in {0, 1} are supported.
struct ArimaSpec {
  std::size_t p = 5;
  std::size_t d = 1;
  std::size_t q = 0;
};

void validate(const ArimaSpec& spec);

struct ArimaFit {
  ArimaSpec spec;
  std::vector<double> phi;  // phi[i] multiplies the (i+1)-lagged differenced value
  double intercept = 0.0;
  double sigma2 = 0.0;
};

/// Applies x_t - x_{t-1}, d times.
std::vector<double> difference(std::span<const double> x, std::size_t d);

/// Inverse of one differencing pass: anchored cumulative sum starting at
/// `anchor` (the level preceding diffs[0]). Output has diffs.size() values.
std::vector<double> integrate(std::span<const double> diffs, double anchor);

/// Sample autocorrelation rho_0..rho_max_lag with the biased (1/N) covariance.
std::vector<double> acf(std::span<const double> x, std::size_t max_lag);

/// Partial autocorrelation pacf[0..max_lag] via Durbin-Levinson; pacf[0] = 1.
std::vector<double> pacf(std::span<const double> x, std::size_t max_lag);

/// Conditional least squares: difference by d, then OLS of y_t on
/// (1, y_{t-1}, ..., y_{t-p}). sigma2 is the mean squared residual.
ArimaFit fit_ar(std::span<const double> x, const ArimaSpec& spec);

/// Residuals of `fit` on the differenced series (for diagnostics/tests).
std::vector<double> residuals(const ArimaFit& fit, std::span<const double> x);

/// Multi-step forecast in levels; steps beyond the first consume earlier
/// forecasts. Returns an empty vector for steps == 0.
std::vector<double> forecast(const ArimaFit& fit, std::span<const double> history, std::size_t steps);

/// A fit with phi = 0 and no intercept (random walk for d = 1).
ArimaFit random_walk_fit(const ArimaSpec& spec);

std::string to_json(const ArimaFit& fit);
ArimaFit arima_fit_from_json(std::string_view text);

/// Per-day ARIMA-derived columns for one ticker, aligned with the close
/// series. Entries before `warmup` are NaN.
struct ArimaFeatures {
  std::vector<double> forecast_1d;  // one-step forecast made at day t
  std::vector<double> acf_lag1;     // trailing-window lag-1 ACF of differences
  std::vector<double> pacf_lag1;    // trailing-window lag-1 PACF of differences
  std::size_t warmup = 0;
};

/// `window` is the number of trailing closes used for the rolling ACF/PACF;
/// a window with zero variance yields 0.
ArimaFeatures arima_features(std::span<const double> close, const ArimaFit& fit, std::size_t window = 21);

}  // namespace stgan
