#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stgan/nn/ops.hpp"

namespace stgan::nn {

/// x[B, in] W[in, out] + b[out].
Var dense_forward(Var x, Var w, Var b);

struct LstmState {
  Var h;
  Var c;
};

/// Single-layer LSTM over x_seq[B, T, in] with gate layout [i | f | g | o] in
/// the 4H columns of w_x[in, 4H], w_h[H, 4H] and b[4H]. Returns the final
/// hidden state [B, H]; zero initial state unless `initial` is given.
Var lstm_forward(Var x_seq, Var w_x, Var w_h, Var b, std::optional<LstmState> initial = std::nullopt);

/// One LSTM cell application from elementary ops; returns (h', c'). Folding
/// it over time reproduces lstm_forward.
LstmState lstm_cell(Var x_t, const LstmState& prev, Var w_x, Var w_h, Var b);

/// Valid 1-D convolution (no padding).
Var conv1d_forward(Var x, Var w, Var b, std::size_t stride = 2);

Var batchnorm_forward(Var x, Var gamma, Var beta, BatchNormState& state, Mode mode);

/// lambda * sum |w| over `weights`.
Var l1_penalty(const std::vector<Var>& weights, double lambda);

class Dense {
 public:
  Dense() = default;
  Dense(std::string name, std::size_t in, std::size_t out, std::uint64_t seed);

  Var forward(Tape& tape, Var x);
  std::vector<Parameter*> parameters() { return {&weight, &bias}; }

  Parameter weight;
  Parameter bias;
};

class Lstm {
 public:
  Lstm() = default;
  /// Xavier weights, zero biases except the forget gate at `forget_bias`.
  Lstm(std::string name, std::size_t in, std::size_t hidden, std::uint64_t seed, double forget_bias = 1.0);

  Var forward(Tape& tape, Var x_seq, std::optional<LstmState> initial = std::nullopt);
  std::size_t hidden() const { return w_h.value.dim(0); }
  std::vector<Parameter*> parameters() { return {&w_x, &w_h, &bias}; }

  Parameter w_x;
  Parameter w_h;
  Parameter bias;
};

class Conv1d {
 public:
  Conv1d() = default;
  Conv1d(std::string name, std::size_t in_channels, std::size_t out_channels, std::size_t kernel,
         std::size_t stride, std::uint64_t seed);

  Var forward(Tape& tape, Var x);
  std::vector<Parameter*> parameters() { return {&weight, &bias}; }

  Parameter weight;
  Parameter bias;
  std::size_t stride = 2;
};

class BatchNorm {
 public:
  BatchNorm() = default;
  BatchNorm(std::string name, std::size_t channels, double momentum, double eps);

  Var forward(Tape& tape, Var x, Mode mode, bool update_running = true);
  std::vector<Parameter*> parameters() { return {&gamma, &beta}; }

  Parameter gamma;
  Parameter beta;
  BatchNormState state;
  std::string name;
};

}  // namespace stgan::nn
