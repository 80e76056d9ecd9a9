#include "stgan/gan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "json.hpp"
#include "stgan/errors.hpp"
#include "stgan/nn/checkpoint.hpp"

namespace stgan {

using nn::Mode;
using nn::Parameter;
using nn::Tape;
using nn::Tensor;
using nn::Var;

MinMaxScaler MinMaxScaler::fit(std::span<const double> values) {
  if (values.empty()) throw ValidationError("MinMaxScaler: no values");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(*hi > *lo)) throw NumericError("MinMaxScaler: constant target series");
  return {*lo, *hi};
}

FeatureScaler FeatureScaler::fit(const FeatureMatrix& m) {
  if (m.rows.empty()) throw ValidationError("FeatureScaler: empty matrix");
  const std::size_t w = m.width();
  FeatureScaler s;
  s.mean.assign(w, 0.0);
  s.stddev.assign(w, 0.0);
  const double n = static_cast<double>(m.rows.size());
  for (const auto& row : m.rows)
    for (std::size_t c = 0; c < w; ++c) s.mean[c] += row[c];
  for (auto& v : s.mean) v /= n;
  for (const auto& row : m.rows)
    for (std::size_t c = 0; c < w; ++c) s.stddev[c] += (row[c] - s.mean[c]) * (row[c] - s.mean[c]);
  for (auto& v : s.stddev) {
    v = std::sqrt(v / n);
    if (!(v > 1e-12)) v = 1.0;
  }
  return s;
}

std::vector<double> FeatureScaler::apply(std::span<const double> row) const {
  if (row.size() != mean.size()) throw ValidationError("FeatureScaler: row width mismatch");
  std::vector<double> out(row.size());
  for (std::size_t c = 0; c < row.size(); ++c) out[c] = (row[c] - mean[c]) / stddev[c];
  return out;
}

Generator::Generator(const GeneratorConfig& config, std::uint64_t seed)
    : lstm("gen.lstm", config.input_features, config.hidden, seed + 1, config.forget_bias),
      latent_to_h("gen.latent_to_h", nn::xavier_init({config.latent_dim, config.hidden}, seed + 2)),
      latent_to_c("gen.latent_to_c", nn::xavier_init({config.latent_dim, config.hidden}, seed + 3)),
      head("gen.head", config.hidden, config.output_dim, seed + 4) {
  if (config.input_features == 0 || config.hidden == 0 || config.sequence_length == 0 || config.latent_dim == 0 ||
      config.output_dim == 0) {
    throw ValidationError("GeneratorConfig: all sizes must be positive");
  }
}

Var Generator::forward(Tape& tape, Var features, const Var* latent) {
  const std::size_t batch = features.dim(0);
  std::optional<nn::LstmState> init;
  if (latent != nullptr) {
    const Var h0 = repeat_rows(matmul(*latent, tape.parameter(latent_to_h)), batch);
    const Var c0 = repeat_rows(matmul(*latent, tape.parameter(latent_to_c)), batch);
    init = nn::LstmState{h0, c0};
  }
  return head.forward(tape, lstm.forward(tape, features, init));
}

std::vector<Parameter*> Generator::parameters() {
  return {&lstm.w_x, &lstm.w_h, &lstm.bias, &latent_to_h, &latent_to_c, &head.weight, &head.bias};
}

Discriminator::Discriminator(const DiscriminatorConfig& cfg, std::size_t window, std::uint64_t seed) : config(cfg) {
  std::size_t len = window;
  std::size_t in = 1;
  for (std::size_t i = 0; i < 3; ++i) {
    convs[i] = nn::Conv1d("disc.conv" + std::to_string(i + 1), in, cfg.conv_channels[i], cfg.kernel, cfg.stride,
                          seed + 10 + i);
    len = conv_output_length(len, cfg.kernel, cfg.stride);
    if (len == 0) {
      throw ValidationError("DiscriminatorConfig: window " + std::to_string(window) +
                            " is too short for three convolutions");
    }
    in = cfg.conv_channels[i];
  }
  for (std::size_t i = 0; i < 2; ++i) {
    norms[i] = nn::BatchNorm("disc.bn" + std::to_string(i + 1), cfg.conv_channels[i], cfg.bn_momentum, cfg.bn_eps);
  }
  dense1 = nn::Dense("disc.dense1", cfg.conv_channels[2] * len, cfg.dense_hidden, seed + 20);
  dense2 = nn::Dense("disc.dense2", cfg.dense_hidden, 1, seed + 21);
}

namespace {

/// Drops the oldest samples a strided valid convolution would never reach,
/// so the newest step (where a generated close sits) is always read.
Var right_align(Var x, std::size_t kernel, std::size_t stride) {
  const std::size_t b = x.dim(0), c = x.dim(1), len = x.dim(2);
  const std::size_t drop = (len - kernel) % stride;
  if (drop == 0) return x;
  const Var flat = slice_cols(reshape(x, {b * c, len}), drop, len - drop);
  return reshape(flat, {b, c, len - drop});
}

}  // namespace

Var Discriminator::forward(Tape& tape, Var windows, Mode mode, bool update_running) {
  Var x = windows;
  for (std::size_t i = 0; i < 3; ++i) {
    x = right_align(x, config.kernel, config.stride);
    x = leaky_relu(convs[i].forward(tape, x), config.leaky_alpha);
    if (i < 2) x = norms[i].forward(tape, x, mode, update_running);
  }
  const std::size_t batch = x.dim(0);
  x = reshape(x, {batch, x.dim(1) * x.dim(2)});
  x = relu(dense1.forward(tape, x));
  return sigmoid(dense2.forward(tape, x));
}

std::vector<Parameter*> Discriminator::parameters() {
  std::vector<Parameter*> out;
  for (auto& c : convs)
    for (auto* p : c.parameters()) out.push_back(p);
  for (auto& n : norms)
    for (auto* p : n.parameters()) out.push_back(p);
  for (auto* p : dense1.parameters()) out.push_back(p);
  for (auto* p : dense2.parameters()) out.push_back(p);
  return out;
}

GanModel make_gan(const GeneratorConfig& gen, const DiscriminatorConfig& disc, std::span<const double> latent_values,
                  std::uint64_t seed) {
  if (latent_values.size() != gen.latent_dim) {
    throw ValidationError("latent seed has " + std::to_string(latent_values.size()) + " values, expected " +
                          std::to_string(gen.latent_dim));
  }
  GanModel m;
  m.gen_config = gen;
  m.disc_config = disc;
  m.generator = Generator(gen, seed);
  m.discriminator = Discriminator(disc, gen.sequence_length, seed);
  m.latent = Parameter("latent", Tensor({1, gen.latent_dim}, std::vector<double>(latent_values.begin(),
                                                                                  latent_values.end())));
  m.use_latent = true;
  m.seed = seed;
  return m;
}

GanModel make_generator_only(const GeneratorConfig& gen, std::uint64_t seed) {
  GanModel m = make_gan(gen, DiscriminatorConfig{}, std::vector<double>(gen.latent_dim, 0.0), seed);
  m.use_latent = false;
  m.kind = "fc_lstm";
  return m;
}

std::vector<double> generator_forward(GanModel& model, const Tensor& features) {
  const auto& g = model.gen_config;
  if (features.rank() != 3 || features.dim(1) != g.sequence_length || features.dim(2) != g.input_features) {
    throw ValidationError("generator_forward: expected [batch, " + std::to_string(g.sequence_length) + ", " +
                          std::to_string(g.input_features) + "], got " + nn::to_string(features.shape()));
  }
  Tape tape;
  const Var x = tape.constant(features);
  const Var z = tape.constant(model.latent.value);
  const Var out = model.generator.forward(tape, x, model.use_latent ? &z : nullptr);
  if (!out.value().all_finite()) throw NumericError("generator produced a non-finite output");
  return out.value().values();
}

double discriminator_forward(GanModel& model, std::span<const double> window) {
  const std::size_t len = model.gen_config.sequence_length;
  if (window.size() != len) {
    throw ValidationError("discriminator_forward: window length " + std::to_string(window.size()) + ", expected " +
                          std::to_string(len));
  }
  Tape tape;
  const Var x = tape.constant(Tensor({1, 1, len}, std::vector<double>(window.begin(), window.end())));
  return model.discriminator.forward(tape, x, Mode::Eval, false).value()[0];
}

double gan_loss(std::span<const double> d_real, std::span<const double> d_fake) {
  if (d_real.empty() || d_fake.empty()) throw ValidationError("gan_loss: empty score batch");
  double real = 0.0, fake = 0.0;
  for (double v : d_real) real += 1.0 - v;
  for (double v : d_fake) fake += v;
  return 0.5 * (real / static_cast<double>(d_real.size()) + fake / static_cast<double>(d_fake.size()));
}

namespace {

WindowDataset cut_windows(const GanModel& model, const FeatureMatrix& features, const PriceSeries& target) {
  const std::size_t t = model.gen_config.sequence_length;
  if (features.width() != model.gen_config.input_features) {
    throw ValidationError("feature matrix width " + std::to_string(features.width()) + " does not match generator input " +
                          std::to_string(model.gen_config.input_features));
  }
  WindowDataset d;
  d.sequence_length = t;
  d.width = features.width();
  std::size_t j = 0;
  const auto bars = target.bars();
  for (std::size_t r = 0; r < features.size(); ++r) {
    while (j < bars.size() && bars[j].date < features.dates[r]) ++j;
    if (j == bars.size() || bars[j].date != features.dates[r]) {
      throw ValidationError("target " + target.ticker() + " has no bar on " + features.dates[r].iso());
    }
    d.scaled_rows.push_back(model.feature_scaler.apply(features.rows[r]));
    d.scaled_close.push_back(model.price_scaler.scale(bars[j].close));
    d.dates.push_back(features.dates[r]);
  }
  return d;
}

}  // namespace

WindowDataset prepare_dataset(GanModel& model, const FeatureMatrix& features, const PriceSeries& target) {
  std::vector<double> closes;
  std::size_t j = 0;
  const auto bars = target.bars();
  for (const auto& d : features.dates) {
    while (j < bars.size() && bars[j].date < d) ++j;
    if (j == bars.size() || bars[j].date != d) throw ValidationError("target " + target.ticker() + " has no bar on " + d.iso());
    closes.push_back(bars[j].close);
  }
  model.price_scaler = MinMaxScaler::fit(closes);
  model.feature_scaler = FeatureScaler::fit(features);
  model.target_ticker = target.ticker();
  return cut_windows(model, features, target);
}

WindowDataset make_dataset(const GanModel& model, const FeatureMatrix& features, const PriceSeries& target) {
  return cut_windows(model, features, target);
}

Batch make_batch(const WindowDataset& data, std::span<const std::size_t> indices) {
  const std::size_t b = indices.size(), t = data.sequence_length, f = data.width;
  Batch batch{Tensor({b, t, f}), Tensor({b, t - 1}), Tensor({b, 1, t}), Tensor({b, 1})};
  for (std::size_t i = 0; i < b; ++i) {
    const std::size_t k = indices[i];
    if (k >= data.size()) throw ValidationError("make_batch: window index out of range");
    for (std::size_t s = 0; s < t; ++s) {
      std::copy(data.scaled_rows[k + s].begin(), data.scaled_rows[k + s].end(), batch.features.ptr() + (i * t + s) * f);
    }
    for (std::size_t s = 0; s + 1 < t; ++s) {
      const double v = data.scaled_close[k + 1 + s];
      batch.prefix[i * (t - 1) + s] = v;
      batch.real[i * t + s] = v;
    }
    const double next = data.scaled_close[k + t];
    batch.real[i * t + t - 1] = next;
    batch.target[i] = next;
  }
  return batch;
}

std::vector<std::vector<std::size_t>> epoch_batches(std::size_t count, std::size_t batch_size, Rng& rng) {
  if (batch_size == 0) throw ValidationError("batch size must be positive");
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < count; i += batch_size) {
    const std::size_t end = std::min(count, i + batch_size);
    if (end - i < 2) break;
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i), order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

EpochLoss adversarial_step(GanModel& model, const Batch& batch, nn::Adam& opt_d, nn::Adam& opt_g,
                           nn::Adam* opt_latent, const TrainConfig& config) {
  const std::size_t b = batch.features.dim(0), t = batch.features.dim(1);
  Tape g_tape;
  const Var features = g_tape.constant(batch.features);
  const Var latent = g_tape.parameter(model.latent);
  const Var pred = model.generator.forward(g_tape, features, model.use_latent ? &latent : nullptr);
  const Var fake = reshape(concat_cols(g_tape.constant(batch.prefix), pred), {b, 1, t});

  EpochLoss out;
  // Discriminator step against a detached copy of the generated windows.
  {
    opt_d.zero_grad();
    Tape d_tape;
    const Var d_real = model.discriminator.forward(d_tape, d_tape.constant(batch.real), Mode::Train);
    const Var d_fake = model.discriminator.forward(d_tape, d_tape.constant(fake.value()), Mode::Train);
    out.gan = gan_loss(d_real.value().data(), d_fake.value().data());
    Var loss;
    if (config.loss == GanLossKind::Paper) {
      loss = scale(add(mean(add_scalar(scale(d_real, -1.0), 1.0)), mean(d_fake)), 0.5);
    } else {
      loss = scale(add(mean(nn::log(d_real)), mean(nn::log(add_scalar(scale(d_fake, -1.0), 1.0)))), -1.0);
    }
    out.discriminator = loss.value()[0];
    if (!std::isfinite(out.discriminator)) throw NumericError("non-finite discriminator loss");
    d_tape.backward(loss);
    opt_d.step();
  }
  // Generator (and latent) step against the updated discriminator.
  {
    opt_g.zero_grad();
    model.latent.zero_grad();
    const Var d_fake = model.discriminator.forward(g_tape, fake, Mode::Train, false);
    Var loss;
    if (config.loss == GanLossKind::Paper) {
      loss = scale(mean(d_fake), -0.5);
    } else {
      loss = scale(mean(nn::log(d_fake)), -1.0);
    }
    if (config.l1_lambda > 0) {
      std::vector<Var> weights;
      for (auto* p : model.generator.lstm_weights()) weights.push_back(g_tape.parameter(*p));
      loss = add(loss, nn::l1_penalty(weights, config.l1_lambda));
    }
    out.generator = loss.value()[0];
    if (!std::isfinite(out.generator)) throw NumericError("non-finite generator loss");
    g_tape.backward(loss);
    opt_g.step();
    if (opt_latent != nullptr) opt_latent->step();
    // Gradients that leaked into D through this pass are discarded.
    opt_d.zero_grad();
  }
  return out;
}

namespace {

std::string epoch_dir_name(std::size_t epoch) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "epoch_%04zu", epoch);
  return buf;
}

template <typename Step>
TrainingLog run_epochs(GanModel& model, const WindowDataset& data, const TrainConfig& config, Step&& step) {
  if (data.size() < 2) {
    throw ValidationError("training needs at least " + std::to_string(model.gen_config.sequence_length + 2) +
                          " aligned rows");
  }
  TrainingLog log;
  log.seed = config.seed;
  log.config_hash = config_hash(model.gen_config, model.disc_config, config);
  Rng rng(config.seed);
  GanModel last_good = model;
  for (std::size_t e = 0; e < config.epochs; ++e) {
    EpochLoss acc;
    std::size_t n = 0;
    try {
      for (const auto& idx : epoch_batches(data.size(), config.batch_size, rng)) {
        const Batch batch = make_batch(data, idx);
        const EpochLoss l = step(batch);
        if (!std::isfinite(l.discriminator) || !std::isfinite(l.generator) || !std::isfinite(l.gan)) {
          throw NumericError("non-finite loss");
        }
        acc.discriminator += l.discriminator;
        acc.generator += l.generator;
        acc.gan += l.gan;
        ++n;
      }
    } catch (const NumericError& err) {
      model = last_good;
      throw NumericError(std::string(err.what()) + " at epoch " + std::to_string(e + 1) +
                         "; parameters restored to epoch " + std::to_string(model.epoch));
    }
    acc.discriminator /= static_cast<double>(n);
    acc.generator /= static_cast<double>(n);
    acc.gan /= static_cast<double>(n);
    log.history.push_back(acc);
    ++model.epoch;
    if (config.checkpoint_every > 0 && model.epoch % config.checkpoint_every == 0) {
      last_good = model;
      if (config.checkpoint_dir) {
        const auto dir = *config.checkpoint_dir / epoch_dir_name(model.epoch);
        save_gan(dir, model, &config);
        log.checkpoints.push_back(dir.string());
      }
    }
  }
  return log;
}

}  // namespace

TrainingLog train(GanModel& model, const FeatureMatrix& features, const PriceSeries& target, const TrainConfig& config) {
  const WindowDataset data = prepare_dataset(model, features, target);
  nn::Adam opt_d(model.discriminator.parameters(), {config.lr_discriminator});
  nn::Adam opt_g(model.generator.parameters(), {config.lr_generator});
  std::optional<nn::Adam> opt_latent;
  if (model.use_latent && config.train_latent) opt_latent.emplace(std::vector<Parameter*>{&model.latent},
                                                                   nn::AdamOptions{config.lr_latent});
  return run_epochs(model, data, config, [&](const Batch& batch) {
    return adversarial_step(model, batch, opt_d, opt_g, opt_latent ? &*opt_latent : nullptr, config);
  });
}

TrainingLog train_supervised(GanModel& model, const FeatureMatrix& features, const PriceSeries& target,
                             const TrainConfig& config) {
  const WindowDataset data = prepare_dataset(model, features, target);
  nn::Adam opt_g(model.generator.parameters(), {config.lr_generator});
  return run_epochs(model, data, config, [&](const Batch& batch) {
    opt_g.zero_grad();
    Tape tape;
    const Var latent = tape.parameter(model.latent);
    const Var pred = model.generator.forward(tape, tape.constant(batch.features), model.use_latent ? &latent : nullptr);
    Var loss = mean(square(sub(pred, tape.constant(batch.target))));
    EpochLoss out;
    out.gan = loss.value()[0];
    if (config.l1_lambda > 0) {
      std::vector<Var> weights;
      for (auto* p : model.generator.lstm_weights()) weights.push_back(tape.parameter(*p));
      loss = add(loss, nn::l1_penalty(weights, config.l1_lambda));
    }
    out.generator = loss.value()[0];
    if (!std::isfinite(out.generator)) throw NumericError("non-finite supervised loss");
    tape.backward(loss);
    opt_g.step();
    return out;
  });
}

std::vector<PriceSeries> ForecastContext::history() const {
  std::vector<PriceSeries> out;
  out.reserve(series.size());
  for (const auto& s : series) out.push_back(s.up_to(origin));
  return out;
}

const PriceSeries& ForecastContext::target_series() const {
  for (const auto& s : series) {
    if (s.ticker() == target) return s;
  }
  throw ValidationError("forecast target " + target + " not among the series");
}

std::vector<PriceSeries> extend_history(std::span<const PriceSeries> history, const std::string& target, double close) {
  Date next;
  for (const auto& s : history) {
    if (s.empty()) throw ValidationError("extend_history: empty series " + s.ticker());
    next = std::max(next, s.back().date);
  }
  next = next.next_weekday();
  // Positive floor keeps the appended bar valid if a model predicts <= 0.
  const double price = std::isfinite(close) ? std::max(close, 1e-6) : throw NumericError("non-finite forecast");
  std::vector<PriceSeries> out;
  bool found = false;
  for (const auto& s : history) {
    OhlcvBar bar = s.back();
    bar.date = next;
    if (s.ticker() == target) {
      found = true;
      const double ratio = s.back().adj_close / s.back().close;
      bar.open = bar.high = bar.low = bar.close = price;
      bar.adj_close = price * ratio;
    }
    out.push_back(s.appended(bar));
  }
  if (!found) throw ValidationError("extend_history: target " + target + " not in history");
  return out;
}

std::vector<double> rollout(const ForecastContext& context, std::size_t horizon, const WindowPredictor& predict) {
  if (horizon == 0) throw ValidationError("forecast horizon must be at least 1");
  auto history = context.history();
  std::map<std::string, ArimaFit> fits = context.arima_fits;
  if (fits.empty()) fits = fit_feature_arimas(history, context.features.arima_spec);
  std::vector<double> out;
  out.reserve(horizon);
  for (std::size_t h = 0; h < horizon; ++h) {
    const FeatureMatrix fm = assemble_features(history, context.features, &fits);
    const double next = predict(fm);
    if (!std::isfinite(next)) throw NumericError("forecast produced a non-finite value");
    out.push_back(next);
    if (h + 1 < horizon) history = extend_history(history, context.target, next);
  }
  return out;
}

double predict_next_close(GanModel& model, const FeatureMatrix& features) {
  const std::size_t t = model.gen_config.sequence_length;
  if (features.size() < t) {
    throw ValidationError("insufficient history: need " + std::to_string(t) + " feature rows, have " +
                          std::to_string(features.size()));
  }
  const std::size_t f = features.width();
  Tensor window({1, t, f});
  for (std::size_t s = 0; s < t; ++s) {
    const auto row = model.feature_scaler.apply(features.rows[features.size() - t + s]);
    std::copy(row.begin(), row.end(), window.ptr() + s * f);
  }
  return model.price_scaler.unscale(generator_forward(model, window)[0]);
}

std::vector<double> forecast_horizon(GanModel& model, const ForecastContext& context, std::size_t horizon) {
  return rollout(context, horizon, [&](const FeatureMatrix& fm) { return predict_next_close(model, fm); });
}

namespace {

nlohmann::ordered_json gen_json(const GeneratorConfig& g) {
  return {{"input_features", g.input_features}, {"hidden", g.hidden},       {"sequence_length", g.sequence_length},
          {"latent_dim", g.latent_dim},         {"output_dim", g.output_dim}, {"forget_bias", g.forget_bias}};
}

nlohmann::ordered_json disc_json(const DiscriminatorConfig& d) {
  return {{"conv_channels", d.conv_channels}, {"kernel", d.kernel},           {"stride", d.stride},
          {"leaky_alpha", d.leaky_alpha},     {"dense_hidden", d.dense_hidden}, {"bn_momentum", d.bn_momentum},
          {"bn_eps", d.bn_eps}};
}

nlohmann::ordered_json train_json(const TrainConfig& t) {
  return {{"epochs", t.epochs},
          {"batch_size", t.batch_size},
          {"lr_generator", t.lr_generator},
          {"lr_discriminator", t.lr_discriminator},
          {"lr_latent", t.lr_latent},
          {"l1_lambda", t.l1_lambda},
          {"train_latent", t.train_latent},
          {"loss", t.loss == GanLossKind::Paper ? "paper" : "bce"},
          {"checkpoint_every", t.checkpoint_every},
          {"seed", t.seed}};
}

std::vector<Parameter*> all_parameters(GanModel& m) {
  auto out = m.generator.parameters();
  for (auto* p : m.discriminator.parameters()) out.push_back(p);
  out.push_back(&m.latent);
  return out;
}

}  // namespace

std::string config_hash(const GeneratorConfig& gen, const DiscriminatorConfig& disc, const TrainConfig& train) {
  nlohmann::ordered_json j{{"generator", gen_json(gen)}, {"discriminator", disc_json(disc)}, {"train", train_json(train)}};
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void save_gan(const std::filesystem::path& dir, const GanModel& model, const TrainConfig* config) {
  GanModel& m = const_cast<GanModel&>(model);
  nn::Checkpoint ckpt;
  for (auto* p : all_parameters(m)) ckpt.tensors[p->name] = p->value;
  for (const auto& bn : m.discriminator.norms) {
    ckpt.tensors[bn.name + ".running_mean"] = bn.state.running_mean;
    ckpt.tensors[bn.name + ".running_var"] = bn.state.running_var;
  }
  ckpt.tensors["scaler.price"] = Tensor({2}, {m.price_scaler.lo, m.price_scaler.hi});
  ckpt.tensors["scaler.feature_mean"] = Tensor({m.feature_scaler.mean.size()}, m.feature_scaler.mean);
  ckpt.tensors["scaler.feature_std"] = Tensor({m.feature_scaler.stddev.size()}, m.feature_scaler.stddev);
  ckpt.metadata["generator"] = gen_json(m.gen_config).dump();
  ckpt.metadata["discriminator"] = disc_json(m.disc_config).dump();
  if (config != nullptr) ckpt.metadata["train"] = train_json(*config).dump();
  ckpt.metadata["use_latent"] = m.use_latent ? "true" : "false";
  ckpt.metadata["target_ticker"] = m.target_ticker;
  ckpt.metadata["seed"] = std::to_string(m.seed);
  ckpt.metadata["epoch"] = std::to_string(m.epoch);
  ckpt.metadata["kind"] = m.kind;
  nn::save_checkpoint(dir, ckpt);
}

GanModel load_gan(const std::filesystem::path& dir) {
  const nn::Checkpoint ckpt = nn::load_checkpoint(dir);
  try {
    const auto g = nlohmann::json::parse(ckpt.metadata.at("generator"));
    const auto d = nlohmann::json::parse(ckpt.metadata.at("discriminator"));
    GeneratorConfig gen;
    gen.input_features = g.at("input_features");
    gen.hidden = g.at("hidden");
    gen.sequence_length = g.at("sequence_length");
    gen.latent_dim = g.at("latent_dim");
    gen.output_dim = g.at("output_dim");
    gen.forget_bias = g.at("forget_bias");
    DiscriminatorConfig disc;
    disc.conv_channels = d.at("conv_channels");
    disc.kernel = d.at("kernel");
    disc.stride = d.at("stride");
    disc.leaky_alpha = d.at("leaky_alpha");
    disc.dense_hidden = d.at("dense_hidden");
    disc.bn_momentum = d.at("bn_momentum");
    disc.bn_eps = d.at("bn_eps");
    const std::uint64_t seed = std::stoull(ckpt.metadata.at("seed"));
    GanModel m = make_gan(gen, disc, std::vector<double>(gen.latent_dim, 0.0), seed);
    m.use_latent = ckpt.metadata.at("use_latent") == "true";
    m.target_ticker = ckpt.metadata.at("target_ticker");
    m.epoch = std::stoull(ckpt.metadata.at("epoch"));
    if (auto it = ckpt.metadata.find("kind"); it != ckpt.metadata.end()) m.kind = it->second;
    auto fetch = [&](const std::string& name) -> const Tensor& {
      auto it = ckpt.tensors.find(name);
      if (it == ckpt.tensors.end()) throw ValidationError("checkpoint lacks tensor " + name);
      return it->second;
    };
    for (auto* p : all_parameters(m)) {
      const Tensor& t = fetch(p->name);
      if (t.shape() != p->value.shape()) throw ValidationError("checkpoint tensor " + p->name + " has the wrong shape");
      p->value = t;
      p->grad = Tensor::zeros_like(t);
    }
    for (auto& bn : m.discriminator.norms) {
      bn.state.running_mean = fetch(bn.name + ".running_mean");
      bn.state.running_var = fetch(bn.name + ".running_var");
    }
    const Tensor& ps = fetch("scaler.price");
    m.price_scaler = {ps[0], ps[1]};
    m.feature_scaler.mean = fetch("scaler.feature_mean").values();
    m.feature_scaler.stddev = fetch("scaler.feature_std").values();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(dir.string() + ": bad checkpoint metadata: " + e.what());
  } catch (const std::out_of_range& e) {
    throw ValidationError(dir.string() + ": incomplete checkpoint metadata");
  }
}

std::string to_json(const TrainingLog& log) {
  nlohmann::ordered_json j;
  j["seed"] = log.seed;
  j["config_hash"] = log.config_hash;
  auto hist = nlohmann::json::array();
  for (std::size_t e = 0; e < log.history.size(); ++e) {
    const auto& h = log.history[e];
    hist.push_back({{"epoch", e + 1}, {"discriminator", h.discriminator}, {"generator", h.generator}, {"gan", h.gan}});
  }
  j["history"] = std::move(hist);
  j["checkpoints"] = log.checkpoints;
  return j.dump(2);
}

}  // namespace stgan
