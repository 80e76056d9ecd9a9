#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stgan/nn/tensor.hpp"

namespace stgan::nn {

/// Flat checkpoint: `<dir>/manifest.json` lists every tensor's name, shape
/// and byte offset into `<dir>/params.bin`, a little-endian float64 payload.
/// Extra string metadata rides along in the manifest.
struct Checkpoint {
  std::map<std::string, Tensor> tensors;
  std::map<std::string, std::string> metadata;
};

void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ckpt);

/// Throws MissingArtifactError if either file is absent, ValidationError on a
/// malformed manifest or truncated payload.
Checkpoint load_checkpoint(const std::filesystem::path& dir);

}  // namespace stgan::nn
