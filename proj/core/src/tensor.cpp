#include "stgan/nn/tensor.hpp"

#include <cmath>
#include <numeric>

#include "stgan/errors.hpp"
#include "stgan/random.hpp"

namespace stgan::nn {

std::size_t numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string to_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)), data_(numel(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != numel(shape_)) {
    throw ValidationError("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                          to_string(shape_));
  }
}

Tensor Tensor::reshaped(Shape shape) const {
  if (numel(shape) != data_.size()) {
    throw ValidationError("cannot reshape " + to_string(shape_) + " to " + to_string(shape));
  }
  return Tensor(std::move(shape), data_);
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double Tensor::item() const {
  if (data_.size() != 1) throw ValidationError("item() on a tensor of shape " + to_string(shape_));
  return data_[0];
}

Parameter::Parameter(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)) {
  grad = Tensor::zeros_like(value);
}

std::pair<std::size_t, std::size_t> fan_in_out(const Shape& shape) {
  if (shape.size() < 2) throw ValidationError("xavier_init needs at least 2 dimensions, got " + to_string(shape));
  if (shape.size() == 2) return {shape[0], shape[1]};
  std::size_t receptive = 1;
  for (std::size_t i = 2; i < shape.size(); ++i) receptive *= shape[i];
  return {shape[1] * receptive, shape[0] * receptive};
}

Tensor xavier_init(const Shape& shape, std::uint64_t seed) {
  const auto [fan_in, fan_out] = fan_in_out(shape);
  if (fan_in + fan_out == 0 || numel(shape) == 0) throw ValidationError("xavier_init: empty shape");
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Rng rng(seed);
  Tensor t(shape);
  for (auto& v : t.data()) v = rng.uniform(-bound, bound);
  return t;
}

}  // namespace stgan::nn
