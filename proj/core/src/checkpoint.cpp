#include "stgan/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "stgan/errors.hpp"

namespace stgan::nn {

namespace {

void put_le(std::ostream& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

double get_le(const unsigned char* buf) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ckpt) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["format"] = "stgan-checkpoint";
  manifest["version"] = 1;
  manifest["dtype"] = "float64-le";
  manifest["payload"] = "params.bin";
  auto entries = nlohmann::json::array();
  std::ofstream payload(dir / "params.bin", std::ios::binary);
  if (!payload) throw ValidationError("cannot write " + (dir / "params.bin").string());
  std::uint64_t offset = 0;
  for (const auto& [name, t] : ckpt.tensors) {
    entries.push_back({{"name", name}, {"shape", t.shape()}, {"offset", offset}, {"count", t.size()}});
    for (double v : t.data()) put_le(payload, v);
    offset += 8 * t.size();
  }
  manifest["tensors"] = std::move(entries);
  manifest["metadata"] = ckpt.metadata;
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  const auto payload_path = dir / "params.bin";
  if (!std::filesystem::exists(manifest_path)) throw MissingArtifactError(manifest_path.string());
  if (!std::filesystem::exists(payload_path)) throw MissingArtifactError(payload_path.string());
  std::ifstream min(manifest_path);
  std::ifstream pin(payload_path, std::ios::binary);
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(pin)), std::istreambuf_iterator<char>());
  Checkpoint ckpt;
  try {
    const auto manifest = nlohmann::json::parse(min);
    if (manifest.at("format") != "stgan-checkpoint") throw ValidationError("unknown checkpoint format");
    for (const auto& e : manifest.at("tensors")) {
      const auto shape = e.at("shape").get<Shape>();
      const auto offset = e.at("offset").get<std::uint64_t>();
      const auto count = e.at("count").get<std::uint64_t>();
      if (count != numel(shape)) throw ValidationError("checkpoint entry count does not match shape");
      if (offset + 8 * count > bytes.size()) throw ValidationError("checkpoint payload truncated");
      std::vector<double> data(count);
      for (std::uint64_t i = 0; i < count; ++i) data[i] = get_le(bytes.data() + offset + 8 * i);
      ckpt.tensors.emplace(e.at("name").get<std::string>(), Tensor(shape, std::move(data)));
    }
    if (manifest.contains("metadata")) {
      ckpt.metadata = manifest.at("metadata").get<std::map<std::string, std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(manifest_path.string() + ": " + e.what());
  }
  return ckpt;
}

}  // namespace stgan::nn
