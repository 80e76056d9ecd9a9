#include "stgan/arima.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "stgan/errors.hpp"

namespace stgan {

void validate(const ArimaSpec& spec) {
  if (spec.q != 0) throw ValidationError("ARIMA: moving-average terms (q > 0) are not supported");
  if (spec.d > 1) throw ValidationError("ARIMA: differencing order must be 0 or 1");
}

std::vector<double> difference(std::span<const double> x, std::size_t d) {
  if (x.size() <= d) throw ValidationError("difference: series too short for order " + std::to_string(d));
  std::vector<double> cur(x.begin(), x.end());
  for (std::size_t pass = 0; pass < d; ++pass) {
    for (std::size_t t = 0; t + 1 < cur.size(); ++t) cur[t] = cur[t + 1] - cur[t];
    cur.pop_back();
  }
  return cur;
}

std::vector<double> integrate(std::span<const double> diffs, double anchor) {
  std::vector<double> out(diffs.size());
  double level = anchor;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    level += diffs[i];
    out[i] = level;
  }
  return out;
}

std::vector<double> acf(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (n <= max_lag) throw ValidationError("acf: series length must exceed max_lag");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) s += (x[t] - mean) * (x[t + lag] - mean);
    return s / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  if (!(c0 > 0.0)) throw NumericError("acf: zero variance");
  std::vector<double> rho(max_lag + 1);
  rho[0] = 1.0;
  for (std::size_t lag = 1; lag <= max_lag; ++lag) rho[lag] = autocov(lag) / c0;
  return rho;
}

std::vector<double> pacf(std::span<const double> x, std::size_t max_lag) {
  const auto rho = acf(x, max_lag);
  std::vector<double> out(max_lag + 1, 0.0);
  out[0] = 1.0;
  if (max_lag == 0) return out;
  // phi_prev holds phi_{k-1, 1..k-1}
  std::vector<double> phi_prev, phi_cur;
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double num = rho[k];
    double den = 1.0;
    for (std::size_t j = 1; j < k; ++j) {
      num -= phi_prev[j - 1] * rho[k - j];
      den -= phi_prev[j - 1] * rho[j];
    }
    const double phi_kk = den != 0.0 ? num / den : 0.0;
    phi_cur.assign(k, 0.0);
    for (std::size_t j = 1; j < k; ++j) phi_cur[j - 1] = phi_prev[j - 1] - phi_kk * phi_prev[k - j - 1];
    phi_cur[k - 1] = phi_kk;
    out[k] = phi_kk;
    phi_prev.swap(phi_cur);
  }
  return out;
}

ArimaFit fit_ar(std::span<const double> x, const ArimaSpec& spec) {
  validate(spec);
  const auto y = difference(x, spec.d);
  const std::size_t p = spec.p;
  if (y.size() <= 10 * p || y.size() < 2) {
    throw ValidationError("fit_ar: differenced length " + std::to_string(y.size()) + " must exceed 10*p");
  }
  const std::size_t rows = y.size() - p;
  Eigen::MatrixXd design(rows, p + 1);
  Eigen::VectorXd target(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t t = r + p;
    design(r, 0) = 1.0;
    for (std::size_t i = 1; i <= p; ++i) design(r, i) = y[t - i];
    target(r) = y[t];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < static_cast<Eigen::Index>(p + 1)) throw NumericError("fit_ar: singular design matrix");
  const Eigen::VectorXd beta = qr.solve(target);
  ArimaFit fit;
  fit.spec = spec;
  fit.intercept = beta(0);
  fit.phi.resize(p);
  for (std::size_t i = 0; i < p; ++i) fit.phi[i] = beta(static_cast<Eigen::Index>(i + 1));
  const Eigen::VectorXd resid = target - design * beta;
  fit.sigma2 = resid.squaredNorm() / static_cast<double>(rows);
  if (!std::isfinite(fit.sigma2) || !std::isfinite(fit.intercept)) throw NumericError("fit_ar: non-finite estimate");
  return fit;
}

std::vector<double> residuals(const ArimaFit& fit, std::span<const double> x) {
  const auto y = difference(x, fit.spec.d);
  const std::size_t p = fit.phi.size();
  std::vector<double> out;
  for (std::size_t t = p; t < y.size(); ++t) {
    double pred = fit.intercept;
    for (std::size_t i = 1; i <= p; ++i) pred += fit.phi[i - 1] * y[t - i];
    out.push_back(y[t] - pred);
  }
  return out;
}

std::vector<double> forecast(const ArimaFit& fit, std::span<const double> history, std::size_t steps) {
  if (steps == 0) return {};
  const std::size_t p = fit.phi.size();
  if (history.size() < p + fit.spec.d || history.empty()) {
    throw ValidationError("forecast: history shorter than p + d");
  }
  std::vector<double> y = fit.spec.d == 0 ? std::vector<double>(history.begin(), history.end())
                                          : difference(history, fit.spec.d);
  std::vector<double> diffs_out;
  diffs_out.reserve(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    double next = fit.intercept;
    for (std::size_t i = 1; i <= p; ++i) next += fit.phi[i - 1] * y[y.size() - i];
    y.push_back(next);
    diffs_out.push_back(next);
  }
  if (fit.spec.d == 0) return diffs_out;
  return integrate(diffs_out, history.back());
}

ArimaFit random_walk_fit(const ArimaSpec& spec) {
  validate(spec);
  ArimaFit fit;
  fit.spec = spec;
  fit.phi.assign(spec.p, 0.0);
  return fit;
}

std::string to_json(const ArimaFit& fit) {
  nlohmann::ordered_json j;
  j["p"] = fit.spec.p;
  j["d"] = fit.spec.d;
  j["q"] = fit.spec.q;
  j["phi"] = fit.phi;
  j["intercept"] = fit.intercept;
  j["sigma2"] = fit.sigma2;
  return j.dump(2);
}

ArimaFit arima_fit_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ArimaFit fit;
    fit.spec = {j.at("p").get<std::size_t>(), j.at("d").get<std::size_t>(), j.at("q").get<std::size_t>()};
    validate(fit.spec);
    fit.phi = j.at("phi").get<std::vector<double>>();
    fit.intercept = j.at("intercept").get<double>();
    fit.sigma2 = j.at("sigma2").get<double>();
    if (fit.phi.size() != fit.spec.p) throw ValidationError("ArimaFit: phi length differs from p");
    if (fit.sigma2 < 0) throw ValidationError("ArimaFit: negative sigma2");
    return fit;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("ArimaFit JSON: ") + e.what());
  }
}

ArimaFeatures arima_features(std::span<const double> close, const ArimaFit& fit, std::size_t window) {
  const std::size_t n = close.size();
  const std::size_t p = fit.phi.size();
  const std::size_t d = fit.spec.d;
  if (window < 3) throw ValidationError("arima_features: window must be at least 3");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ArimaFeatures out;
  out.warmup = std::max(p + d == 0 ? 0 : p + d - 1, window - 1);
  out.forecast_1d.assign(n, nan);
  out.acf_lag1.assign(n, nan);
  out.pacf_lag1.assign(n, nan);
  // level-space differenced view; y[t] = close[t] - close[t-1] for d = 1
  for (std::size_t t = 0; t < n; ++t) {
    if (t + 1 >= p + d) {
      double next = fit.intercept;
      for (std::size_t i = 1; i <= p; ++i) {
        const std::size_t at = t + 1 - i;  // index of the lagged level/diff
        const double v = d == 0 ? close[at] : close[at] - close[at - 1];
        next += fit.phi[i - 1] * v;
      }
      out.forecast_1d[t] = d == 0 ? next : close[t] + next;
    }
    if (t + 1 >= window) {
      const auto diffs = difference(close.subspan(t + 1 - window, window), 1);
      try {
        out.acf_lag1[t] = acf(diffs, 1)[1];
        out.pacf_lag1[t] = pacf(diffs, 1)[1];
      } catch (const NumericError&) {
        out.acf_lag1[t] = 0.0;
        out.pacf_lag1[t] = 0.0;
      }
    }
  }
  return out;
}

}  // namespace stgan
