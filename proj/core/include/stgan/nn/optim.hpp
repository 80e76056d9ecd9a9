#pragma once

#include <vector>

#include "stgan/nn/tensor.hpp"

namespace stgan::nn {

struct AdamOptions {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction. Holds first/second moments for a fixed set of
/// parameters; the parameters themselves are owned elsewhere.
class Adam {
 public:
  Adam() = default;
  Adam(std::vector<Parameter*> params, AdamOptions options = {});

  /// Throws NumericError naming the first parameter whose gradient is not finite;
  /// no parameter is modified in that case.
  void step();
  void zero_grad();

  std::size_t step_count() const noexcept { return step_; }
  const AdamOptions& options() const noexcept { return options_; }
  const std::vector<Tensor>& first_moments() const noexcept { return m_; }
  const std::vector<Tensor>& second_moments() const noexcept { return v_; }
  const std::vector<Parameter*>& parameters() const noexcept { return params_; }

 private:
  std::vector<Parameter*> params_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  AdamOptions options_;
  std::size_t step_ = 0;
};

}  // namespace stgan::nn
