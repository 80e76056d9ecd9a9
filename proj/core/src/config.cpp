#include "stgan/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "stgan/errors.hpp"
#include "stgan/eval.hpp"
#include "stgan/latent.hpp"
#include "toml.hpp"

namespace stgan {

namespace {

/// Reads keys out of one TOML table and remembers which were consumed so
/// leftovers can be reported.
class Section {
 public:
  Section(const toml::table* table, std::string name) : table_(table), name_(std::move(name)) {}

  template <typename T>
  void get(std::string_view key, T& out) {
    if (table_ == nullptr) return;
    const toml::node* node = table_->get(key);
    if (node == nullptr) return;
    seen_.insert(std::string(key));
    read(*node, key, out);
  }

  void mark(std::string_view key) { seen_.insert(std::string(key)); }

  void finish() const {
    if (table_ == nullptr) return;
    for (const auto& [key, node] : *table_) {
      if (!seen_.contains(std::string(key.str()))) throw ValidationError("unknown config key '" + where(key.str()) + "'");
    }
  }

 private:
  std::string where(std::string_view key) const { return name_.empty() ? std::string(key) : name_ + "." + std::string(key); }

  [[noreturn]] void bad(std::string_view key, std::string_view expected) const {
    throw ValidationError("config key '" + where(key) + "' must be " + std::string(expected));
  }

  void read(const toml::node& n, std::string_view key, double& out) const {
    if (auto v = n.value<double>()) out = *v;
    else bad(key, "a number");
  }
  void read(const toml::node& n, std::string_view key, bool& out) const {
    if (auto v = n.value<bool>(); v && n.is_boolean()) out = *v;
    else bad(key, "a boolean");
  }
  void read(const toml::node& n, std::string_view key, std::size_t& out) const {
    auto v = n.value<std::int64_t>();
    if (!n.is_integer() || !v || *v < 0) bad(key, "a non-negative integer");
    out = static_cast<std::size_t>(*v);
  }
  void read(const toml::node& n, std::string_view key, std::string& out) const {
    if (auto v = n.value<std::string>(); v && n.is_string()) out = *v;
    else bad(key, "a string");
  }
  void read(const toml::node& n, std::string_view key, Date& out) const {
    if (n.is_date()) {
      const auto d = *n.as_date();
      out = Date::from_ymd(d->year, d->month, d->day);
      return;
    }
    std::string s;
    read(n, key, s);
    out = Date::parse(s);
  }
  void read(const toml::node& n, std::string_view key, std::filesystem::path& out) const {
    std::string s;
    read(n, key, s);
    out = s;
  }
  template <typename T>
  void read(const toml::node& n, std::string_view key, std::vector<T>& out) const {
    const toml::array* arr = n.as_array();
    if (arr == nullptr) bad(key, "an array");
    out.clear();
    for (const auto& item : *arr) {
      T v{};
      read(item, key, v);
      out.push_back(v);
    }
  }
  void read(const toml::node& n, std::string_view key, std::array<std::size_t, 3>& out) const {
    std::vector<std::size_t> v;
    read(n, key, v);
    if (v.size() != 3) bad(key, "an array of three integers");
    std::copy(v.begin(), v.end(), out.begin());
  }

  const toml::table* table_;
  std::string name_;
  std::set<std::string> seen_;
};

const toml::table* subtable(const toml::table& root, std::string_view name) {
  const toml::node* n = root.get(name);
  if (n == nullptr) return nullptr;
  if (!n->is_table()) throw ValidationError("config key '" + std::string(name) + "' must be a table");
  return n->as_table();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.models = model_names();
  return c;
}

void RunConfig::validate() const {
  if (tickers.size() != kTickerCount) {
    throw ValidationError("data.tickers must list " + std::to_string(kTickerCount) + " symbols");
  }
  if (std::set<std::string>(tickers.begin(), tickers.end()).size() != tickers.size()) {
    throw ValidationError("data.tickers contains duplicates");
  }
  if (std::find(tickers.begin(), tickers.end(), target) == tickers.end()) {
    throw ValidationError("data.target '" + target + "' is not in data.tickers");
  }
  if (weight_initializer != "xavier") throw ValidationError("generator.weight_initializer must be \"xavier\"");
  if (optimizer != "adam") throw ValidationError("train.optimizer must be \"adam\"");
  if (regularization != "l1") throw ValidationError("train.regularization must be \"l1\"");
  if (conv_padding != "none") throw ValidationError("discriminator.padding must be \"none\"");
  if (generator.input_features != kFeatureWidth) {
    throw ValidationError("generator.input_features must be " + std::to_string(kFeatureWidth));
  }
  if (generator.latent_dim != kLatentDim) throw ValidationError("generator.latent_dim must be 100");
  if (generator.hidden == 0 || generator.sequence_length == 0 || generator.output_dim != 1) {
    throw ValidationError("generator sizes must be positive with one output");
  }
  std::size_t len = generator.sequence_length;
  for (int i = 0; i < 3; ++i) len = conv_output_length(len, discriminator.kernel, discriminator.stride);
  if (discriminator.kernel == 0 || discriminator.stride == 0 || len == 0) {
    throw ValidationError("discriminator convolutions do not fit a window of " +
                          std::to_string(generator.sequence_length));
  }
  if (train.batch_size < 2) throw ValidationError("train.batch_size must be at least 2");
  if (!(train.lr_generator > 0) || !(train.lr_discriminator > 0) || !(train.lr_latent > 0)) {
    throw ValidationError("learning rates must be positive");
  }
  if (!(train.l1_lambda >= 0)) throw ValidationError("train.l1_lambda must be non-negative");
  if (!(nb_alpha > 0)) throw ValidationError("sentiment.alpha must be positive");
  if (context_window == 0) throw ValidationError("latent.window must be at least 1");
  if (features.fourier_k_low == 0 || features.fourier_k_high < features.fourier_k_low) {
    throw ValidationError("features.fourier_k_low/high must satisfy 1 <= low <= high");
  }
  stgan::validate(features.arima_spec);
  if (horizons.empty()) throw ValidationError("evaluate.horizons must not be empty");
  for (auto h : horizons) {
    if (h == 0) throw ValidationError("evaluate.horizons must be positive");
  }
  for (const auto& m : models) {
    const auto& known = model_names();
    if (std::find(known.begin(), known.end(), m) == known.end()) throw ValidationError("unknown model '" + m + "'");
  }
}

RunConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config: " << e.description() << " at line " << e.source().begin.line;
    throw ValidationError(msg.str());
  }
  RunConfig c = default_config();
  std::string loss = "paper";

  Section top(&root, "");
  top.get("seed", c.train.seed);
  for (const char* name : {"paths", "data", "features", "sentiment", "latent", "generator", "discriminator", "train",
                           "evaluate"}) {
    top.mark(name);
  }
  top.finish();

  Section paths(subtable(root, "paths"), "paths");
  paths.get("prices_dir", c.paths.prices_dir);
  paths.get("corpus", c.paths.corpus);
  paths.get("seed_corpus", c.paths.seed_corpus);
  paths.get("output_dir", c.paths.output_dir);
  paths.finish();

  Section data(subtable(root, "data"), "data");
  data.get("tickers", c.tickers);
  data.get("target", c.target);
  data.get("cutoff", c.cutoff);
  data.finish();

  Section feat(subtable(root, "features"), "features");
  feat.get("fourier_k_low", c.features.fourier_k_low);
  feat.get("fourier_k_high", c.features.fourier_k_high);
  feat.get("arima_p", c.features.arima_spec.p);
  feat.get("arima_d", c.features.arima_spec.d);
  feat.get("acf_window", c.features.acf_window);
  feat.finish();

  Section sent(subtable(root, "sentiment"), "sentiment");
  sent.get("alpha", c.nb_alpha);
  sent.finish();

  Section lat(subtable(root, "latent"), "latent");
  lat.get("signed", c.latent_signed);
  lat.get("window", c.context_window);
  lat.finish();

  Section gen(subtable(root, "generator"), "generator");
  gen.get("input_features", c.generator.input_features);
  gen.get("hidden", c.generator.hidden);
  gen.get("sequence_length", c.generator.sequence_length);
  gen.get("latent_dim", c.generator.latent_dim);
  gen.get("output_dim", c.generator.output_dim);
  gen.get("forget_bias", c.generator.forget_bias);
  gen.get("weight_initializer", c.weight_initializer);
  gen.finish();

  Section disc(subtable(root, "discriminator"), "discriminator");
  disc.get("conv_channels", c.discriminator.conv_channels);
  disc.get("kernel", c.discriminator.kernel);
  disc.get("stride", c.discriminator.stride);
  disc.get("padding", c.conv_padding);
  disc.get("leaky_alpha", c.discriminator.leaky_alpha);
  disc.get("dense_hidden", c.discriminator.dense_hidden);
  disc.get("bn_momentum", c.discriminator.bn_momentum);
  disc.get("bn_eps", c.discriminator.bn_eps);
  disc.finish();

  Section tr(subtable(root, "train"), "train");
  tr.get("epochs", c.train.epochs);
  tr.get("batch_size", c.train.batch_size);
  tr.get("lr_generator", c.train.lr_generator);
  tr.get("lr_discriminator", c.train.lr_discriminator);
  tr.get("lr_latent", c.train.lr_latent);
  tr.get("l1_lambda", c.train.l1_lambda);
  tr.get("train_latent", c.train.train_latent);
  tr.get("loss", loss);
  tr.get("checkpoint_every", c.train.checkpoint_every);
  tr.get("train_window", c.train_window);
  tr.get("optimizer", c.optimizer);
  tr.get("regularization", c.regularization);
  tr.finish();

  Section ev(subtable(root, "evaluate"), "evaluate");
  ev.get("models", c.models);
  ev.get("horizons", c.horizons);
  ev.finish();

  if (loss == "paper") {
    c.train.loss = GanLossKind::Paper;
  } else if (loss == "bce") {
    c.train.loss = GanLossKind::Bce;
  } else {
    throw ValidationError("train.loss must be \"paper\" or \"bce\"");
  }
  c.paths.prices_dir = resolve(base_dir, c.paths.prices_dir);
  c.paths.corpus = resolve(base_dir, c.paths.corpus);
  c.paths.seed_corpus = resolve(base_dir, c.paths.seed_corpus);
  c.paths.output_dir = resolve(base_dir, c.paths.output_dir);
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError(path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

std::string RunConfig::to_toml() const {
  auto arr = [](const auto& xs) {
    toml::array a;
    for (const auto& x : xs) {
      if constexpr (std::is_same_v<std::decay_t<decltype(x)>, std::string>) a.push_back(x);
      else a.push_back(static_cast<std::int64_t>(x));
    }
    return a;
  };
  auto i64 = [](std::size_t v) { return static_cast<std::int64_t>(v); };
  toml::table t{
      {"seed", static_cast<std::int64_t>(train.seed)},
      {"data", toml::table{{"tickers", arr(tickers)}, {"target", target}, {"cutoff", cutoff.iso()}}},
      {"features", toml::table{{"fourier_k_low", i64(features.fourier_k_low)},
                               {"fourier_k_high", i64(features.fourier_k_high)},
                               {"arima_p", i64(features.arima_spec.p)},
                               {"arima_d", i64(features.arima_spec.d)},
                               {"acf_window", i64(features.acf_window)}}},
      {"sentiment", toml::table{{"alpha", nb_alpha}}},
      {"latent", toml::table{{"signed", latent_signed}, {"window", i64(context_window)}}},
      {"generator", toml::table{{"input_features", i64(generator.input_features)},
                                {"hidden", i64(generator.hidden)},
                                {"sequence_length", i64(generator.sequence_length)},
                                {"latent_dim", i64(generator.latent_dim)},
                                {"output_dim", i64(generator.output_dim)},
                                {"forget_bias", generator.forget_bias},
                                {"weight_initializer", weight_initializer}}},
      {"discriminator", toml::table{{"conv_channels", arr(discriminator.conv_channels)},
                                    {"kernel", i64(discriminator.kernel)},
                                    {"stride", i64(discriminator.stride)},
                                    {"padding", conv_padding},
                                    {"leaky_alpha", discriminator.leaky_alpha},
                                    {"dense_hidden", i64(discriminator.dense_hidden)},
                                    {"bn_momentum", discriminator.bn_momentum},
                                    {"bn_eps", discriminator.bn_eps}}},
      {"train", toml::table{{"epochs", i64(train.epochs)},
                            {"batch_size", i64(train.batch_size)},
                            {"lr_generator", train.lr_generator},
                            {"lr_discriminator", train.lr_discriminator},
                            {"lr_latent", train.lr_latent},
                            {"l1_lambda", train.l1_lambda},
                            {"train_latent", train.train_latent},
                            {"loss", train.loss == GanLossKind::Paper ? "paper" : "bce"},
                            {"checkpoint_every", i64(train.checkpoint_every)},
                            {"train_window", i64(train_window)},
                            {"optimizer", optimizer},
                            {"regularization", regularization}}},
      {"evaluate", toml::table{{"models", arr(models)}, {"horizons", arr(horizons)}}},
  };
  std::ostringstream out;
  out << t << "\n";
  return out.str();
}

std::string RunConfig::hash() const {
  const std::string text = to_toml();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace stgan
