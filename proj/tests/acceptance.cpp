// Acceptance harness: one PASS/FAIL line per criterion. `--known-red N`
// (repeatable) lists criteria whose failure is analyzed and expected; they
// still print FAIL but do not affect the exit status. `--only N` runs one.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "stgan/errors.hpp"
#include "stgan/eval.hpp"
#include "stgan/latent.hpp"
#include "stgan/spectral.hpp"
#include "support/experiment.hpp"
#include "support/gradcheck.hpp"

using namespace stgan;
using namespace stgan::nn;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and budgets, one block per criterion.
constexpr double kNbNormTol = 1e-12;
constexpr double kNbSeconds = 1.0;
constexpr double kGradTol = 1e-4;
constexpr double kGradSeconds = 30.0;
constexpr double kIndicatorTol = 1e-12;
constexpr double kDftRoundTripTol = 1e-9;
constexpr double kParsevalTol = 1e-9;
constexpr double kDftExampleTol = 1e-12;
constexpr double kAr5Tol = 0.1;
constexpr double kAr2Tol = 1e-8;
constexpr double kLatentTol = 1e-9;
constexpr double kTrainSeconds = 600.0;
constexpr double kTableRatioTol = 0.03;
constexpr double kSmokeSeconds = 900.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

// 1. Naive Bayes against direct enumeration of P(y) prod P(x|y).
Outcome naive_bayes_oracle() {
  const auto t0 = Clock::now();
  const auto seed = load_seed_corpus(support::fixture_dir() / "seed_corpus.csv");
  const auto model = train_nb(seed, 1.0);
  std::map<std::string, std::array<double, 3>> counts;
  std::array<double, 3> docs{}, tokens{};
  for (const auto& e : seed.entries) {
    const auto y = class_slot(e.label);
    docs[y] += 1;
    for (const auto& t : e.tokens) {
      counts[t][y] += 1;
      tokens[y] += 1;
    }
  }
  const double v = static_cast<double>(counts.size());
  std::vector<Sentence> sentences;
  for (const auto& d : load_corpus(support::fixture_dir() / "corpus.jsonl")) {
    for (const auto& s : d.sentences) {
      if (sentences.size() < 200) sentences.push_back(s);
    }
  }
  if (sentences.size() < 200) return {false, "fixture corpus has fewer than 200 sentences"};
  double worst_norm = 0.0, worst_post = 0.0;
  std::size_t mismatched = 0;
  for (const auto& s : sentences) {
    // Work in logs only to avoid underflow; the enumeration itself is independent.
    std::array<double, 3> joint{};
    for (std::size_t y = 0; y < 3; ++y) {
      joint[y] = std::log(docs[y] / static_cast<double>(seed.entries.size()));
      for (const auto& t : s) {
        const auto it = counts.find(t);
        if (it != counts.end()) joint[y] += std::log((it->second[y] + 1.0) / (tokens[y] + v));
      }
    }
    const double m = std::max({joint[0], joint[1], joint[2]});
    double z = 0.0;
    for (double j : joint) z += std::exp(j - m);
    const auto post = posterior(model, s);
    worst_norm = std::max(worst_norm, std::abs(post[0] + post[1] + post[2] - 1.0));
    std::size_t best = 1;
    for (std::size_t y : {2u, 0u}) {
      if (joint[y] - joint[best] > 1e-9) best = y;
    }
    for (std::size_t y = 0; y < 3; ++y) worst_post = std::max(worst_post, std::abs(post[y] - std::exp(joint[y] - m) / z));
    if (class_slot(classify(model, s).label) != best) ++mismatched;
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_norm < kNbNormTol && worst_post < kNbNormTol && mismatched == 0 && secs < kNbSeconds;
  return {ok, "norm err " + num(worst_norm) + ", posterior err " + num(worst_post) + ", label mismatches " +
                  std::to_string(mismatched) + ", " + num(secs) + " s"};
}

// 2. Finite-difference gradient checks.
Outcome gradient_checks() {
  using support::check_gradients;
  using support::random_tensor;
  const auto t0 = Clock::now();
  Rng rng(2024);
  auto weighted = [](Tape& t, Var y, std::uint64_t s) {
    Rng r(s);
    return sum(mul(y, t.constant(random_tensor(y.shape(), r))));
  };
  std::vector<std::pair<std::string, double>> errs;

  Parameter dx("x", random_tensor({3, 4}, rng)), dw("w", random_tensor({4, 2}, rng)), db("b", random_tensor({2}, rng));
  errs.emplace_back("dense", check_gradients({&dx, &dw, &db}, [&](Tape& t, const std::vector<Var>& p) {
                               return weighted(t, dense_forward(p[0], p[1], p[2]), 1);
                             }).max_rel_err);

  Parameter cx("x", random_tensor({2, 2, 13}, rng)), cw("w", random_tensor({3, 2, 5}, rng)),
      cb("b", random_tensor({3}, rng));
  errs.emplace_back("conv1d", check_gradients({&cx, &cw, &cb}, [&](Tape& t, const std::vector<Var>& p) {
                                return weighted(t, conv1d_forward(p[0], p[1], p[2], 2), 2);
                              }).max_rel_err);

  Parameter lx("x", random_tensor({2, 3, 4}, rng)), lwx("wx", random_tensor({4, 20}, rng, 0.5)),
      lwh("wh", random_tensor({5, 20}, rng, 0.5)), lb("b", random_tensor({20}, rng, 0.5));
  errs.emplace_back("lstm", check_gradients({&lx, &lwx, &lwh, &lb}, [&](Tape& t, const std::vector<Var>& p) {
                              return weighted(t, lstm_forward(p[0], p[1], p[2], p[3]), 3);
                            }).max_rel_err);

  Parameter bx("x", random_tensor({4, 3, 5}, rng)), bg("g", random_tensor({3}, rng)), bb("b", random_tensor({3}, rng));
  BatchNormState state{Tensor({3}), Tensor({3}, 1.0), 0.9, 1e-5};
  errs.emplace_back("batchnorm", check_gradients({&bx, &bg, &bb}, [&](Tape& t, const std::vector<Var>& p) {
                                   return weighted(t, batchnorm_forward(p[0], p[1], p[2], state, Mode::Train), 4);
                                 }).max_rel_err);

  Parameter la("a", random_tensor({4, 4}, rng));
  errs.emplace_back("l1", check_gradients({&la}, [](Tape&, const std::vector<Var>& p) {
                            return l1_penalty({p[0]}, 0.5);
                          }).max_rel_err);

  GeneratorConfig gc;
  gc.hidden = 6;
  gc.input_features = 5;
  DiscriminatorConfig dc;
  dc.conv_channels = {3, 4, 4};
  dc.dense_hidden = 5;
  std::vector<double> latent(gc.latent_dim);
  for (auto& z : latent) z = rng.normal();
  GanModel m = make_gan(gc, dc, latent, 5);
  const Tensor feats = random_tensor({3, 30, 5}, rng), prefix = random_tensor({3, 29}, rng, 0.3),
               real = random_tensor({3, 1, 30}, rng, 0.3);
  std::vector<Parameter*> params = m.generator.parameters();
  for (auto* p : m.discriminator.parameters()) params.push_back(p);
  params.push_back(&m.latent);
  for (bool g_side : {false, true}) {
    const auto r = check_gradients(
        params,
        [&](Tape& t, const std::vector<Var>&) {
          const Var lat = t.parameter(m.latent);
          const Var pred = m.generator.forward(t, t.constant(feats), &lat);
          const Var fake = reshape(concat_cols(t.constant(prefix), pred), {3, 1, 30});
          const Var df = m.discriminator.forward(t, fake, Mode::Train, false);
          if (g_side) return add(scale(mean(df), -0.5), l1_penalty({t.parameter(m.generator.lstm.w_x)}, 1e-3));
          const Var dr = m.discriminator.forward(t, t.constant(real), Mode::Train, false);
          return scale(add(mean(add_scalar(scale(dr, -1.0), 1.0)), mean(df)), 0.5);
        },
        1e-5, 4, 9);
    errs.emplace_back(g_side ? "generator" : "discriminator", r.max_rel_err);
  }
  const double secs = seconds_since(t0);
  bool ok = secs < kGradSeconds;
  std::string detail;
  for (const auto& [name, e] : errs) {
    ok = ok && e < kGradTol;
    detail += name + " " + num(e) + ", ";
  }
  return {ok, detail + num(secs) + " s"};
}

// 3. Indicators against brute force on 300 fixture days.
Outcome indicator_oracle() {
  auto closes = load_prices(support::fixture_dir() / "prices" / "BA.csv", "BA").closes();
  closes.resize(300);
  double worst = 0.0;
  auto mean = [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += closes[i];
    return s / static_cast<double>(hi - lo);
  };
  for (std::size_t w : {7u, 21u}) {
    const auto s = sma(closes, w);
    for (std::size_t t = w - 1; t < 300; ++t) worst = std::max(worst, std::abs(*s.at(t) - mean(t + 1 - w, t + 1)));
  }
  auto brute_ema = [&](std::size_t n) {
    const double k = 2.0 / (static_cast<double>(n) + 1.0);
    std::vector<double> e{closes[0]};
    for (std::size_t i = 1; i < closes.size(); ++i) e.push_back(closes[i] * k + e.back() * (1.0 - k));
    return e;
  };
  const auto e12 = brute_ema(12), e26 = brute_ema(26);
  const auto m = macd(closes);
  const auto f12 = ema(closes, 12);
  for (std::size_t t = 0; t < 300; ++t) {
    worst = std::max(worst, std::abs(f12.values[t] - e12[t]));
    worst = std::max(worst, std::abs(m.values[t] - (e12[t] - e26[t])));
  }
  const auto bb = bollinger(closes);
  for (std::size_t t = 20; t < 300; ++t) {
    const double mid = mean(t - 20, t + 1), mu = mean(t - 19, t + 1);
    double ss = 0.0;
    for (std::size_t i = t - 19; i <= t; ++i) ss += (closes[i] - mu) * (closes[i] - mu);
    const double sd = std::sqrt(ss / 20.0);
    worst = std::max({worst, std::abs(*bb.upper.at(t) - (mid + sd)), std::abs(*bb.lower.at(t) - (mid - sd))});
  }
  bool exact = true;
  for (double level : {137.25, 0.1, 3.3e5}) {
    const std::vector<double> flat(300, level);
    for (std::size_t n : {2u, 12u, 26u, 1000u}) exact = exact && ema(flat, n).values == flat;
  }
  return {worst < kIndicatorTol && exact,
          "max abs err " + num(worst) + ", EMA fixed point " + (exact ? "exact" : "NOT exact")};
}

// 4. DFT identities.
Outcome dft_identities() {
  Rng rng(4);
  double rt = 0.0, pars = 0.0;
  for (std::size_t n : {1u, 2u, 17u, 64u, 255u, 1000u}) {
    std::vector<double> x(n);
    for (auto& v : x) v = rng.normal();
    const auto s = dft(x);
    const auto back = idft(s);
    double e = 0.0, spec = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rt = std::max(rt, std::abs(back[i] - x[i]));
      e += x[i] * x[i];
    }
    for (const auto& c : s.coefficients) spec += std::norm(c);
    pars = std::max(pars, std::abs(e - spec / static_cast<double>(n)) / e);
  }
  const auto q = dft(std::vector<double>{0, 1, 0, -1});
  const std::vector<std::complex<double>> expect{0, {0, -2}, 0, {0, 2}};
  double ex = 0.0;
  for (std::size_t i = 0; i < 4; ++i) ex = std::max(ex, std::abs(q.coefficients[i] - expect[i]));
  return {rt < kDftRoundTripTol && pars < kParsevalTol && ex < kDftExampleTol,
          "round trip " + num(rt) + ", Parseval (relative) " + num(pars) + ", example " + num(ex)};
}

// 5. AR recovery.
Outcome ar_recovery() {
  const std::vector<double> phi{0.4, -0.2, 0.15, 0.1, -0.1};
  Rng rng(5);
  std::vector<double> d(10500, 0.0);
  for (std::size_t t = 5; t < d.size(); ++t) {
    double v = rng.normal();
    for (std::size_t i = 0; i < 5; ++i) v += phi[i] * d[t - 1 - i];
    d[t] = v;
  }
  std::vector<double> levels{100.0};
  for (std::size_t t = 500; t < d.size(); ++t) levels.push_back(levels.back() + d[t]);
  const auto fit = fit_ar(levels, {5, 1, 0});
  double worst5 = 0.0;
  for (std::size_t i = 0; i < 5; ++i) worst5 = std::max(worst5, std::abs(fit.phi[i] - phi[i]));
  std::vector<double> x{1.0, -0.5};
  for (std::size_t t = 2; t < 80; ++t) x.push_back(0.3 + 0.5 * x[t - 1] - 0.25 * x[t - 2]);
  const auto f2 = fit_ar(x, {2, 0, 0});
  const double worst2 = std::max(std::abs(f2.phi[0] - 0.5), std::abs(f2.phi[1] + 0.25));
  return {worst5 < kAr5Tol && worst2 < kAr2Tol,
          "AR(5) max coef err " + num(worst5) + " (N=" + std::to_string(levels.size()) + "), AR(2) " + num(worst2)};
}

// 6. Latent seed invariants.
Outcome latent_invariants() {
  auto build = [] {
    const auto model = train_nb(load_seed_corpus(support::fixture_dir() / "seed_corpus.csv"), 1.0);
    std::vector<SentenceSentiment> all;
    for (const auto& d : load_corpus(support::fixture_dir() / "corpus.jsonl")) {
      for (auto& s : analyze_document(model, d)) all.push_back(std::move(s));
    }
    return standardize(select_top_confidence(all));
  };
  const auto a = build(), b = build();
  const auto& v = a.values;
  const double n = static_cast<double>(v.size());
  double mean = 0.0, ss = 0.0;
  for (double x : v) mean += x / n;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / n);
  Rng rng(6);
  std::vector<double> raw(kLatentDim);
  for (auto& x : raw) x = rng.normal();
  const auto z = standardize_values(raw);
  double affine = 0.0;
  for (auto [s, c] : {std::pair{0.2, 3.0}, std::pair{40.0, -7.0}}) {
    std::vector<double> w(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) w[i] = s * raw[i] + c;
    const auto zw = standardize_values(w);
    for (std::size_t i = 0; i < raw.size(); ++i) affine = std::max(affine, std::abs(zw[i] - z[i]));
  }
  const bool same = std::memcmp(a.values.data(), b.values.data(), v.size() * sizeof(double)) == 0 &&
                    a.provenance == b.provenance;
  const bool ok = v.size() == kLatentDim && std::abs(mean) < kLatentTol && std::abs(sd - 1.0) < kLatentTol &&
                  affine < kLatentTol && same;
  return {ok, "length " + std::to_string(v.size()) + ", mean " + num(mean) + ", std-1 " + num(sd - 1.0) +
                  ", affine " + num(affine) + ", determinism " + (same ? "bit-exact" : "DIFFERS")};
}

// Grid inputs over the bundled fixtures with small networks.
ExperimentInputs fixture_inputs(std::size_t epochs) {
  ExperimentInputs in;
  in.series = support::load_fixture_prices();
  in.target = "BA";
  in.cutoff = Date::from_ymd(2020, 1, 24);
  std::vector<PriceSeries> span;
  for (const auto& s : in.series) span.push_back(s.up_to(in.cutoff));
  in.feature_fits = fit_feature_arimas(span, in.features.arima_spec);
  in.train_features = assemble_features(span, in.features, &in.feature_fits);
  in.documents = load_corpus(support::fixture_dir() / "corpus.jsonl");
  in.classifier = train_nb(load_seed_corpus(support::fixture_dir() / "seed_corpus.csv"), 1.0);
  std::vector<SentenceSentiment> sentiments;
  for (const auto& d : documents_for(in.documents, "BA")) {
    if (d.date > in.cutoff) continue;
    for (auto& s : analyze_document(in.classifier, d)) sentiments.push_back(std::move(s));
  }
  in.latent = standardize(select_top_confidence(sentiments)).values;
  in.generator = support::tiny_generator(16);
  in.discriminator = support::tiny_discriminator();
  in.train = support::tiny_train(epochs);
  in.train_window = 200;
  return in;
}

// 7. Leakage mutation across the grid.
Outcome leakage_mutation() {
  const auto in = fixture_inputs(2);
  const auto ctx = in.context();
  auto mutated = ctx;
  for (auto& s : mutated.series) {
    std::vector<OhlcvBar> bars(s.bars().begin(), s.bars().end());
    Rng rng(7);
    for (auto& b : bars) {
      if (b.date <= ctx.origin) continue;
      const double c = 50.0 + 500.0 * rng.uniform();
      b = {b.date, c, c + 1.0, c - 1.0, c, c, 1e3 + 1e6 * rng.uniform()};
    }
    s = PriceSeries(s.ticker(), bars);
  }
  std::string detail;
  bool ok = true;
  for (const auto& name : model_names()) {
    const auto f = train_model(name, in).forecaster();
    bool same = true;
    for (std::size_t n : {15u, 30u}) {
      const auto a = f(ctx, n), b = f(mutated, n);
      same = same && a.size() == n && std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0;
    }
    ok = ok && same;
    detail += name + (same ? " identical" : " DIFFERS") + ", ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

// 8. Sine-plus-noise training run against the repeat-last predictor.
Outcome sine_training() {
  const auto panel = support::sine_panel(500, 8);
  const std::size_t cutoff = 439;
  GeneratorConfig gen;
  gen.hidden = 128;
  DiscriminatorConfig disc;
  TrainConfig train;
  train.epochs = 100;
  train.checkpoint_every = 0;
  train.seed = 8;
  ExperimentInputs in = support::synthetic_inputs(panel, cutoff, gen, disc, train);
  const auto t0 = Clock::now();
  const auto model = train_model(std::string(kStGan), in);
  const double train_secs = seconds_since(t0);

  bool finite = model.log.history.size() == train.epochs;
  for (const auto& h : model.log.history) {
    finite = finite && std::isfinite(h.discriminator) && std::isfinite(h.generator) && std::isfinite(h.gan);
  }
  auto rerun = in;
  rerun.train.epochs = 10;
  const auto again = train_model(std::string(kStGan), rerun);
  bool reproducible = true;
  for (std::size_t e = 0; e < again.log.history.size(); ++e) {
    const auto& a = model.log.history[e];
    const auto& b = again.log.history[e];
    reproducible = reproducible && std::memcmp(&a, &b, sizeof(EpochLoss)) == 0;
  }

  // Rolling one-step forecasts from every held-out origin.
  double se_model = 0.0, se_naive = 0.0;
  std::size_t n = 0;
  auto ctx = in.context();
  for (std::size_t o = cutoff; o + 1 < panel[1].size(); ++o) {
    ctx.origin = panel[1][o].date;
    const double pred = model.forecaster()(ctx, 1)[0];
    const double truth = panel[1][o + 1].close;
    se_model += (pred - truth) * (pred - truth);
    se_naive += (panel[1][o].close - truth) * (panel[1][o].close - truth);
    ++n;
  }
  const double rm = std::sqrt(se_model / static_cast<double>(n)), rn = std::sqrt(se_naive / static_cast<double>(n));
  const bool ok = rm < rn && finite && reproducible && train_secs < kTrainSeconds;
  return {ok, "N=1 RMSE " + num(rm) + " vs repeat-last " + num(rn) + " over " + std::to_string(n) +
                  " origins, history " + (finite ? "finite" : "NOT finite") + ", " +
                  (reproducible ? "bit-reproducible" : "NOT reproducible") + ", train " + num(train_secs) + " s"};
}

// 9. Published table: rmse / nrmse should imply one ground-truth mean per row.
Outcome table_consistency() {
  struct Row {
    const char* name;
    std::array<double, 3> rmse, nrmse;
  };
  const std::vector<Row> rows = {
      {"ST-GAN", {0.16, 2.39, 4.37}, {0.00049, 0.00751, 0.01326}},
      {"GAN", {0.74, 11.74, 20.41}, {0.00229, 0.03693, 0.06193}},
      {"FC-LSTM", {0.41, 6.13, 13.24}, {0.00127, 0.01928, 0.04018}},
      {"ARIMA(5,1,0)", {1.94, 19.34, 32.43}, {0.00600, 0.06083, 0.09841}},
      {"Sentiment Analysis", {6.89, 90.24, 174.87}, {0.02133, 0.28383, 0.53063}},
      {"GAN-FD", {0.28, 3.41, 8.25}, {0.00196, 0.01114, 0.02961}},
      {"VolTAGE", {0.33, 7.25, 5.11}, {0.00152, 0.04241, 0.01441}},
      {"DP-LSTM", {0.65, 5.34, 14.09}, {0.00162, 0.00993, 0.05114}},
  };
  bool ok = true;
  std::string bad;
  for (const auto& r : rows) {
    std::array<double, 3> ybar{};
    for (std::size_t i = 0; i < 3; ++i) ybar[i] = r.rmse[i] / r.nrmse[i];
    auto sorted = ybar;
    std::sort(sorted.begin(), sorted.end());
    const double mid = sorted[1];
    bool row_ok = true;
    for (double y : ybar) row_ok = row_ok && std::abs(y - mid) / mid <= kTableRatioTol;
    if (!row_ok) {
      ok = false;
      bad += std::string(bad.empty() ? "" : "; ") + r.name + " implies " + num(ybar[0]) + "/" + num(ybar[1]) + "/" +
             num(ybar[2]);
    }
  }
  return {ok, ok ? "all 8 rows consistent" : "inconsistent rows: " + bad};
}

int run_cli(const std::string& args, std::string& output) {
  FILE* pipe = popen((std::string(STGAN_CLI_PATH) + " " + args + " 2>&1").c_str(), "r");
  if (!pipe) return -1;
  char buf[4096];
  while (fgets(buf, sizeof buf, pipe)) output += buf;
  const int status = pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 10. CLI smoke over the fixtures.
Outcome cli_smoke() {
  const auto t0 = Clock::now();
  const fs::path out = fs::path(STGAN_TEST_TMP) / "smoke";
  fs::remove_all(out);
  const std::string base = "--config " + (support::fixture_dir() / "smoke.toml").string() + " --out " + out.string();
  for (const char* stage : {"ingest", "features", "train-sentiment", "build-latent", "train", "forecast", "evaluate"}) {
    std::string log;
    const int code = run_cli(base + " " + stage, log);
    if (code != 0) return {false, std::string(stage) + " exited " + std::to_string(code) + ": " + log};
  }
  fs::path report;
  for (const auto& e : fs::recursive_directory_iterator(out)) {
    if (e.path().filename() == "report.csv") report = e.path();
  }
  if (report.empty()) return {false, "no report.csv under " + out.string()};
  std::ifstream in(report);
  std::set<std::string> cells;
  std::string line;
  while (std::getline(in, line)) {
    const auto a = line.find(','), b = line.find(',', a + 1), c = line.find(',', b + 1);
    if (c == std::string::npos) continue;
    const double v = std::strtod(line.c_str() + c + 1, nullptr);
    if (std::isfinite(v)) cells.insert(line.substr(0, c));
  }
  std::size_t missing = 0;
  for (const auto& m : baseline_names()) {
    for (const char* metric : {"rmse", "nrmse"}) {
      for (const char* n : {"1", "15", "30"}) missing += cells.count(std::string(metric) + "," + m + "," + n) ? 0 : 1;
    }
  }
  const double secs = seconds_since(t0);
  return {missing == 0 && secs < kSmokeSeconds,
          "7 stages exit 0, " + std::to_string(missing) + " missing baseline cells, " + num(secs) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known_red, only;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--known-red") known_red.insert(std::atoi(argv[i + 1]));
    else if (flag == "--only") only.insert(std::atoi(argv[i + 1]));
    else {
      std::cerr << "usage: stgan_acceptance [--known-red N]... [--only N]...\n";
      return 2;
    }
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"naive Bayes oracle", naive_bayes_oracle},
      {"gradient checks", gradient_checks},
      {"indicators vs brute force", indicator_oracle},
      {"DFT identities", dft_identities},
      {"AR coefficient recovery", ar_recovery},
      {"latent seed invariants", latent_invariants},
      {"leakage mutation", leakage_mutation},
      {"sine training beats repeat-last", sine_training},
      {"published table consistency", table_consistency},
      {"CLI smoke", cli_smoke},
  };
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const bool red_ok = !o.pass && known_red.count(id);
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first << ": " << o.detail
              << (red_ok ? " [known red]" : "") << std::endl;
    if (!o.pass && !red_ok) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
