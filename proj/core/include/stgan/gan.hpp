#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stgan/indicators.hpp"
#include "stgan/ingest.hpp"
#include "stgan/nn/layers.hpp"
#include "stgan/nn/optim.hpp"
#include "stgan/random.hpp"

namespace stgan {

struct GeneratorConfig {
  std::size_t input_features = kFeatureWidth;
  std::size_t hidden = 500;
  std::size_t sequence_length = 30;
  std::size_t latent_dim = 100;
  std::size_t output_dim = 1;
  double forget_bias = 1.0;
};

struct DiscriminatorConfig {
  std::array<std::size_t, 3> conv_channels = {32, 64, 128};
  std::size_t kernel = 5;
  std::size_t stride = 2;
  double leaky_alpha = 0.01;
  std::size_t dense_hidden = 64;
  double bn_momentum = 0.9;
  double bn_eps = 1e-5;
};

enum class GanLossKind { Paper, Bce };

struct TrainConfig {
  std::size_t epochs = 500;
  std::size_t batch_size = 16;
  double lr_generator = 0.01;
  double lr_discriminator = 0.01;
  double lr_latent = 0.01;
  double l1_lambda = 1e-4;
  bool train_latent = true;
  GanLossKind loss = GanLossKind::Paper;
  std::size_t checkpoint_every = 50;
  std::optional<std::filesystem::path> checkpoint_dir;
  std::uint64_t seed = 42;
};

/// Min-max map of prices onto [0, 1] fitted on the training span.
struct MinMaxScaler {
  double lo = 0.0;
  double hi = 1.0;

  static MinMaxScaler fit(std::span<const double> values);
  double scale(double v) const { return (v - lo) / (hi - lo); }
  double unscale(double s) const { return lo + s * (hi - lo); }
};

/// Per-column z-scoring of feature rows fitted on the training span.
struct FeatureScaler {
  std::vector<double> mean;
  std::vector<double> stddev;

  static FeatureScaler fit(const FeatureMatrix& m);
  std::vector<double> apply(std::span<const double> row) const;
};

/// LSTM generator: the latent seed is projected to the initial hidden and
/// cell states, the LSTM reads a 30-day feature window and a dense head
/// emits one (scaled) price.
class Generator {
 public:
  Generator() = default;
  Generator(const GeneratorConfig& config, std::uint64_t seed);

  /// features[B, T, F] -> [B, 1]. `latent` [1, latent_dim] may be null, in
  /// which case the LSTM starts from zero state.
  nn::Var forward(nn::Tape& tape, nn::Var features, const nn::Var* latent);

  std::vector<nn::Parameter*> parameters();
  /// LSTM weight matrices (the L1-regularized set).
  std::vector<nn::Parameter*> lstm_weights() { return {&lstm.w_x, &lstm.w_h}; }

  nn::Lstm lstm;
  nn::Parameter latent_to_h;
  nn::Parameter latent_to_c;
  nn::Dense head;
};

/// Three valid stride-2 convolutions with LeakyReLU (BatchNorm after the
/// first two), a ReLU dense layer and a one-unit dense layer squashed to (0, 1).
/// Convolutions are right-aligned: when (L - K) is not a multiple of the
/// stride the oldest samples are skipped, never the newest.
class Discriminator {
 public:
  Discriminator() = default;
  Discriminator(const DiscriminatorConfig& config, std::size_t window, std::uint64_t seed);

  /// windows[B, 1, L] -> [B, 1].
  nn::Var forward(nn::Tape& tape, nn::Var windows, nn::Mode mode, bool update_running = true);

  std::vector<nn::Parameter*> parameters();

  DiscriminatorConfig config;
  std::array<nn::Conv1d, 3> convs;
  std::array<nn::BatchNorm, 2> norms;
  nn::Dense dense1;
  nn::Dense dense2;
};

/// Conv output length for a valid convolution.
constexpr std::size_t conv_output_length(std::size_t len, std::size_t kernel, std::size_t stride) {
  return len < kernel ? 0 : (len - kernel) / stride + 1;
}

struct GanModel {
  GeneratorConfig gen_config;
  DiscriminatorConfig disc_config;
  Generator generator;
  Discriminator discriminator;
  nn::Parameter latent;  // [1, latent_dim]
  bool use_latent = true;
  MinMaxScaler price_scaler;
  FeatureScaler feature_scaler;
  std::string target_ticker;
  std::uint64_t seed = 0;
  std::size_t epoch = 0;
  std::string kind = "st_gan";
};

/// Builds a model whose latent starts at `latent_values` (length latent_dim).
GanModel make_gan(const GeneratorConfig& gen, const DiscriminatorConfig& disc, std::span<const double> latent_values,
                  std::uint64_t seed);

/// Generator-only model (zero initial LSTM state, no latent).
GanModel make_generator_only(const GeneratorConfig& gen, std::uint64_t seed);

/// Raw generator output in scaled price units for pre-scaled features[B, T, F].
std::vector<double> generator_forward(GanModel& model, const nn::Tensor& features);

/// Discriminator score (eval-mode BatchNorm) for one scaled price window.
double discriminator_forward(GanModel& model, std::span<const double> window);

/// 1/2 (mean(1 - d_real) + mean(d_fake)).
double gan_loss(std::span<const double> d_real, std::span<const double> d_fake);

struct EpochLoss {
  double discriminator = 0.0;  // objective minimized by D
  double generator = 0.0;      // objective minimized by G (includes L1)
  double gan = 0.0;            // paper loss on the discriminator step
};

struct TrainingLog {
  std::vector<EpochLoss> history;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<std::string> checkpoints;
};

/// Supervised windows cut from a feature matrix and the target's closes.
struct WindowDataset {
  std::size_t sequence_length = 0;
  std::size_t width = 0;
  std::vector<std::vector<double>> scaled_rows;  // z-scored feature rows
  std::vector<double> scaled_close;              // target close per row, min-max scaled
  std::vector<Date> dates;
  /// Window k covers rows [k, k + T) and targets the close of row k + T.
  std::size_t size() const {
    return scaled_close.size() > sequence_length ? scaled_close.size() - sequence_length : 0;
  }
};

/// Fits the model's scalers on `features`/`target` and cuts windows.
WindowDataset prepare_dataset(GanModel& model, const FeatureMatrix& features, const PriceSeries& target);

/// Windows using the model's existing scalers.
WindowDataset make_dataset(const GanModel& model, const FeatureMatrix& features, const PriceSeries& target);

struct Batch {
  nn::Tensor features;  // [B, T, F]
  nn::Tensor prefix;    // [B, T - 1] real closes preceding the target
  nn::Tensor real;      // [B, 1, T] prefix + true next close
  nn::Tensor target;    // [B, 1]
};

Batch make_batch(const WindowDataset& data, std::span<const std::size_t> indices);

/// Seeded per-epoch batch order; a trailing batch of one window is dropped
/// (BatchNorm needs two samples).
std::vector<std::vector<std::size_t>> epoch_batches(std::size_t count, std::size_t batch_size, Rng& rng);

/// Adversarial training. Each batch takes one discriminator Adam step on the
/// loss, then one generator (and latent) Adam step on its negation plus the
/// L1 penalty. Throws NumericError on a non-finite loss after restoring the
/// last good parameters.
TrainingLog train(GanModel& model, const FeatureMatrix& features, const PriceSeries& target,
                  const TrainConfig& config);

/// Squared-error training of the generator alone (the FC-LSTM baseline).
TrainingLog train_supervised(GanModel& model, const FeatureMatrix& features, const PriceSeries& target,
                             const TrainConfig& config);

/// One adversarial batch update; returns (D objective, G objective, gan loss).
EpochLoss adversarial_step(GanModel& model, const Batch& batch, nn::Adam& opt_d, nn::Adam& opt_g,
                           nn::Adam* opt_latent, const TrainConfig& config);

/// Inputs for autoregressive forecasting. `series` may extend past `origin`;
/// nothing after `origin` is ever read.
struct ForecastContext {
  std::vector<PriceSeries> series;
  std::string target;
  Date origin;
  FeatureOptions features;
  std::map<std::string, ArimaFit> arima_fits;

  /// Every series truncated at `origin`.
  std::vector<PriceSeries> history() const;
  const PriceSeries& target_series() const;
};

/// Rolls the 8-ticker history forward one day: the target gets a bar at
/// `close` (volume and adj/close ratio carried from its last bar), every
/// other ticker repeats its last bar.
std::vector<PriceSeries> extend_history(std::span<const PriceSeries> history, const std::string& target,
                                        double close);

/// Next-close predictor over the latest 30 feature rows of a history.
using WindowPredictor = std::function<double(const FeatureMatrix& features)>;

/// Generic leakage-free rollout: day 1 uses real history, later days append
/// the predicted close and recompute every feature.
std::vector<double> rollout(const ForecastContext& context, std::size_t horizon, const WindowPredictor& predict);

/// N-day forecast of target closes from the model.
std::vector<double> forecast_horizon(GanModel& model, const ForecastContext& context, std::size_t horizon);

/// Unscaled next-close prediction from the last `sequence_length` rows.
double predict_next_close(GanModel& model, const FeatureMatrix& features);

void save_gan(const std::filesystem::path& dir, const GanModel& model, const TrainConfig* config = nullptr);
GanModel load_gan(const std::filesystem::path& dir);

std::string to_json(const TrainingLog& log);

/// FNV-1a over a canonical text rendering of the configuration.
std::string config_hash(const GeneratorConfig& gen, const DiscriminatorConfig& disc, const TrainConfig& train);

}  // namespace stgan
