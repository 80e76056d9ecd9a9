#include <gtest/gtest.h>

#include <cmath>
#include <Eigen/Dense>

#include "stgan/arima.hpp"
#include "stgan/errors.hpp"
#include "stgan/random.hpp"

using namespace stgan;

namespace {

std::vector<double> simulate_ar(const std::vector<double>& phi, std::size_t n, std::uint64_t seed, double c = 0.0,
                                double noise = 1.0) {
  Rng rng(seed);
  const std::size_t burn = 500;
  std::vector<double> x(n + burn, 0.0);
  for (std::size_t t = phi.size(); t < x.size(); ++t) {
    double v = c + noise * rng.normal();
    for (std::size_t i = 0; i < phi.size(); ++i) v += phi[i] * x[t - 1 - i];
    x[t] = v;
  }
  return {x.begin() + burn, x.end()};
}

std::vector<double> cumulate(const std::vector<double>& d, double start) {
  std::vector<double> out{start};
  for (double v : d) out.push_back(out.back() + v);
  return out;
}

}  // namespace

TEST(Difference, Examples) {
  const std::vector<double> x{1, 3, 6, 10};
  EXPECT_EQ(difference(x, 0), x);
  EXPECT_EQ(difference(x, 1), (std::vector<double>{2, 3, 4}));
  std::vector<double> lin(20);
  for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = 3.0 + 0.5 * static_cast<double>(i);
  for (double v : difference(lin, 1)) EXPECT_DOUBLE_EQ(v, 0.5);
  EXPECT_THROW(difference(std::vector<double>{1.0}, 1), ValidationError);
}

TEST(Difference, IntegrateInverts) {
  const auto x = simulate_ar({0.3}, 200, 1);
  const auto back = integrate(difference(x, 1), x[0]);
  ASSERT_EQ(back.size(), x.size() - 1);
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_NEAR(back[i], x[i + 1], 1e-9);
}

TEST(Acf, Examples) {
  const auto noise = simulate_ar({}, 10000, 2);
  const auto r = acf(noise, 5);
  EXPECT_EQ(r[0], 1.0);
  EXPECT_LT(std::abs(r[1]), 0.05);
  std::vector<double> alt(1000);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 == 0 ? 1.0 : -1.0;
  EXPECT_NEAR(acf(alt, 1)[1], -999.0 / 1000.0, 1e-12);
  EXPECT_THROW(acf(std::vector<double>(10, 2.0), 2), NumericError);
  EXPECT_THROW(acf(std::vector<double>{1, 2}, 2), ValidationError);
}

TEST(Acf, BoundedAndReversalInvariant) {
  const auto x = simulate_ar({0.6, -0.2}, 500, 3);
  std::vector<double> rev(x.rbegin(), x.rend());
  const auto a = acf(x, 20), b = acf(rev, 20);
  for (std::size_t l = 0; l <= 20; ++l) {
    EXPECT_LE(std::abs(a[l]), 1.0);
    EXPECT_NEAR(a[l], b[l], 1e-12);
  }
}

TEST(Pacf, Examples) {
  const auto x = simulate_ar({0.5}, 10000, 4);
  const auto p = pacf(x, 5);
  EXPECT_EQ(p[0], 1.0);
  EXPECT_EQ(p[1], acf(x, 1)[1]);
  EXPECT_NEAR(p[1], 0.5, 0.05);
  for (std::size_t l = 2; l <= 5; ++l) EXPECT_LT(std::abs(p[l]), 0.05) << l;
  const auto w = pacf(simulate_ar({}, 10000, 5), 5);
  for (std::size_t l = 1; l <= 5; ++l) EXPECT_LT(std::abs(w[l]), 0.05) << l;
}

TEST(FitAr, Ar1) {
  const auto fit = fit_ar(simulate_ar({0.5}, 10000, 6), {1, 0, 0});
  EXPECT_GE(fit.phi[0], 0.45);
  EXPECT_LE(fit.phi[0], 0.55);
  EXPECT_GT(fit.sigma2, 0.0);
}

TEST(FitAr, Ar5OnIntegratedSeries) {
  const std::vector<double> phi{0.4, -0.2, 0.15, 0.1, -0.1};
  const auto levels = cumulate(simulate_ar(phi, 10000, 7), 100.0);
  const auto fit = fit_ar(levels, {5, 1, 0});
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(fit.phi[i], phi[i], 0.1) << i;
}

TEST(FitAr, NoiselessAr2IsExact) {
  std::vector<double> x{1.0, 0.5};
  for (std::size_t t = 2; t < 60; ++t) x.push_back(0.2 + 0.6 * x[t - 1] - 0.3 * x[t - 2]);
  const auto fit = fit_ar(x, {2, 0, 0});
  EXPECT_NEAR(fit.phi[0], 0.6, 1e-8);
  EXPECT_NEAR(fit.phi[1], -0.3, 1e-8);
  EXPECT_NEAR(fit.intercept, 0.2, 1e-8);
  EXPECT_LT(fit.sigma2, 1e-16);
}

TEST(FitAr, ResidualsOrthogonalToRegressors) {
  const auto x = cumulate(simulate_ar({0.3, 0.1}, 800, 8, 0.05), 10.0);
  const ArimaSpec spec{3, 1, 0};
  const auto fit = fit_ar(x, spec);
  const auto e = residuals(fit, x);
  const auto y = difference(x, 1);
  ASSERT_EQ(e.size(), y.size() - 3);
  double s0 = 0.0;
  for (double v : e) s0 += v;
  EXPECT_NEAR(s0, 0.0, 1e-8);
  for (std::size_t lag = 1; lag <= 3; ++lag) {
    double s = 0.0;
    for (std::size_t t = 3; t < y.size(); ++t) s += e[t - 3] * y[t - lag];
    EXPECT_NEAR(s, 0.0, 1e-8) << lag;
  }
}

TEST(FitAr, MatchesNormalEquations) {
  const auto x = simulate_ar({0.4, 0.2}, 300, 9, 1.0);
  const auto fit = fit_ar(x, {2, 0, 0});
  Eigen::MatrixXd a(x.size() - 2, 3);
  Eigen::VectorXd b(x.size() - 2);
  for (std::size_t t = 2; t < x.size(); ++t) {
    a.row(t - 2) << 1.0, x[t - 1], x[t - 2];
    b(t - 2) = x[t];
  }
  const Eigen::VectorXd beta = (a.transpose() * a).ldlt().solve(a.transpose() * b);
  EXPECT_NEAR(fit.intercept, beta(0), 1e-9);
  EXPECT_NEAR(fit.phi[0], beta(1), 1e-9);
  EXPECT_NEAR(fit.phi[1], beta(2), 1e-9);
}

TEST(FitAr, Errors) {
  EXPECT_THROW(fit_ar(std::vector<double>(100, 3.0), {2, 1, 0}), NumericError);
  EXPECT_THROW(fit_ar(simulate_ar({}, 40, 1), {5, 1, 0}), ValidationError);
  EXPECT_THROW(fit_ar(simulate_ar({}, 400, 1), {1, 1, 1}), ValidationError);
  EXPECT_THROW(fit_ar(simulate_ar({}, 400, 1), {1, 2, 0}), ValidationError);
}

TEST(Forecast, RandomWalkIsFlat) {
  const std::vector<double> h{5, 6, 7, 8, 9, 12.5};
  const auto f = forecast(random_walk_fit({5, 1, 0}), h, 4);
  EXPECT_EQ(f, std::vector<double>(4, 12.5));
  EXPECT_TRUE(forecast(random_walk_fit({5, 1, 0}), h, 0).empty());
  EXPECT_THROW(forecast(random_walk_fit({5, 1, 0}), std::vector<double>{1, 2, 3}, 1), ValidationError);
}

TEST(Forecast, OneStepByHand) {
  ArimaFit fit{{2, 1, 0}, {0.5, -0.25}, 0.1, 1.0};
  const std::vector<double> h{10, 11, 13, 12, 15, 16};
  // Differences: 1, 2, -1, 3, 1. Next difference = 0.1 + 0.5*1 - 0.25*3.
  const double next = 16.0 + 0.1 + 0.5 * 1.0 - 0.25 * 3.0;
  EXPECT_NEAR(forecast(fit, h, 1)[0], next, 1e-12);
}

TEST(Forecast, RecursionConsistency) {
  const auto x = cumulate(simulate_ar({0.3, -0.1, 0.05}, 600, 11, 0.01), 50.0);
  const auto fit = fit_ar(x, {3, 1, 0});
  const auto two = forecast(fit, x, 2);
  auto extended = x;
  extended.push_back(forecast(fit, x, 1)[0]);
  EXPECT_NEAR(two[0], extended.back(), 1e-12);
  EXPECT_NEAR(two[1], forecast(fit, extended, 1)[0], 1e-12);
}

TEST(ArimaJson, RoundTrip) {
  const auto fit = fit_ar(cumulate(simulate_ar({0.2}, 400, 12), 1.0), {5, 1, 0});
  const auto back = arima_fit_from_json(to_json(fit));
  EXPECT_EQ(back.phi, fit.phi);
  EXPECT_EQ(back.intercept, fit.intercept);
  EXPECT_EQ(back.sigma2, fit.sigma2);
  EXPECT_EQ(back.spec.p, 5u);
  EXPECT_THROW(arima_fit_from_json("{\"p\":2}"), ValidationError);
}

TEST(ArimaFeatures, WarmupAndFiniteness) {
  const auto x = cumulate(simulate_ar({0.2}, 300, 13), 40.0);
  const auto fit = fit_ar(x, {5, 1, 0});
  const auto f = arima_features(x, fit, 21);
  ASSERT_EQ(f.forecast_1d.size(), x.size());
  EXPECT_EQ(f.warmup, 20u);
  for (std::size_t t = f.warmup; t < x.size(); ++t) {
    EXPECT_TRUE(std::isfinite(f.forecast_1d[t]));
    EXPECT_LE(std::abs(f.acf_lag1[t]), 1.0);
  }
  // The day-t forecast uses only closes up to t.
  std::vector<double> head(x.begin(), x.begin() + 101);
  EXPECT_NEAR(f.forecast_1d[100], forecast(fit, head, 1)[0], 1e-12);
  const auto flat = arima_features(std::vector<double>(60, 7.0), random_walk_fit({5, 1, 0}), 21);
  EXPECT_EQ(flat.acf_lag1[40], 0.0);
}
