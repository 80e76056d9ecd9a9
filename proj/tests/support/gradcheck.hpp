#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "stgan/nn/tape.hpp"
#include "stgan/random.hpp"

namespace stgan::support {

/// Builds a scalar loss on `tape` from one Var per parameter.
using LossBuilder = std::function<nn::Var(nn::Tape& tape, const std::vector<nn::Var>& params)>;

struct GradCheck {
  double max_rel_err = 0.0;
  std::string worst;
  std::size_t checked = 0;
};

inline double eval_loss(const std::vector<nn::Parameter*>& params, const LossBuilder& build) {
  nn::Tape tape;
  std::vector<nn::Var> vars;
  for (auto* p : params) vars.push_back(tape.parameter(*p));
  return build(tape, vars).value()[0];
}

/// Central differences against the tape's gradient. With `per_param` > 0
/// only that many randomly chosen entries of each parameter are probed.
inline GradCheck check_gradients(const std::vector<nn::Parameter*>& params, const LossBuilder& build,
                                 double step = 1e-5, std::size_t per_param = 0, std::uint64_t seed = 1) {
  for (auto* p : params) p->zero_grad();
  {
    nn::Tape tape;
    std::vector<nn::Var> vars;
    for (auto* p : params) vars.push_back(tape.parameter(*p));
    tape.backward(build(tape, vars));
  }
  std::vector<nn::Tensor> analytic;
  for (auto* p : params) analytic.push_back(p->grad);

  GradCheck out;
  Rng rng(seed);
  for (std::size_t k = 0; k < params.size(); ++k) {
    nn::Parameter& p = *params[k];
    std::vector<std::size_t> idx(p.value.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    if (per_param > 0 && per_param < idx.size()) {
      rng.shuffle(std::span<std::size_t>(idx));
      idx.resize(per_param);
    }
    for (std::size_t i : idx) {
      const double orig = p.value[i];
      p.value[i] = orig + step;
      const double up = eval_loss(params, build);
      p.value[i] = orig - step;
      const double down = eval_loss(params, build);
      p.value[i] = orig;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[k][i];
      const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
      ++out.checked;
      if (err > out.max_rel_err) {
        out.max_rel_err = err;
        out.worst = p.name + "[" + std::to_string(i) + "] analytic " + std::to_string(a) + " numeric " +
                    std::to_string(numeric);
      }
    }
  }
  return out;
}

inline nn::Tensor random_tensor(nn::Shape shape, Rng& rng, double scale = 1.0) {
  nn::Tensor t(std::move(shape));
  for (auto& v : t.data()) v = scale * rng.normal();
  return t;
}

}  // namespace stgan::support
