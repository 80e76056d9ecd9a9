#include "stgan/nn/layers.hpp"

#include "stgan/errors.hpp"

namespace stgan::nn {

Var dense_forward(Var x, Var w, Var b) { return add_row_bias(matmul(x, w), b); }

LstmState lstm_cell(Var x_t, const LstmState& prev, Var w_x, Var w_h, Var b) {
  const std::size_t hidden = w_h.dim(0);
  const Var z = add_row_bias(add(matmul(x_t, w_x), matmul(prev.h, w_h)), b);
  const Var in_gate = sigmoid(slice_cols(z, 0, hidden));
  const Var forget_gate = sigmoid(slice_cols(z, hidden, hidden));
  const Var candidate = tanh(slice_cols(z, 2 * hidden, hidden));
  const Var out_gate = sigmoid(slice_cols(z, 3 * hidden, hidden));
  const Var c = add(mul(forget_gate, prev.c), mul(in_gate, candidate));
  const Var h = mul(out_gate, tanh(c));
  return {h, c};
}

Var lstm_forward(Var x_seq, Var w_x, Var w_h, Var b, std::optional<LstmState> initial) {
  if (x_seq.value().rank() != 3) throw ValidationError("lstm_forward: input must be [batch, steps, features]");
  const std::size_t batch = x_seq.dim(0), steps = x_seq.dim(1), features = x_seq.dim(2);
  const std::size_t hidden = w_h.dim(0);
  if (w_x.value().rank() != 2 || w_x.dim(0) != features || w_x.dim(1) != 4 * hidden) {
    throw ValidationError("lstm_forward: input weights must be [" + std::to_string(features) + ", " +
                          std::to_string(4 * hidden) + "], got " + to_string(w_x.shape()));
  }
  if (w_h.dim(1) != 4 * hidden) throw ValidationError("lstm_forward: recurrent weights must be [H, 4H]");
  if (steps == 0) throw ValidationError("lstm_forward: empty sequence");
  Tape& tape = *x_seq.tape();
  LstmState state = initial ? *initial
                            : LstmState{tape.constant(Tensor({batch, hidden})), tape.constant(Tensor({batch, hidden}))};
  if (state.h.shape() != Shape{batch, hidden} || state.c.shape() != Shape{batch, hidden}) {
    throw ValidationError("lstm_forward: initial state must be [batch, hidden]");
  }
  return lstm_sequence(x_seq, w_x, w_h, b, state.h, state.c);
}

Var conv1d_forward(Var x, Var w, Var b, std::size_t stride) { return conv1d(x, w, b, stride); }

Var batchnorm_forward(Var x, Var gamma, Var beta, BatchNormState& state, Mode mode) {
  return batchnorm(x, gamma, beta, state, mode, true);
}

Var l1_penalty(const std::vector<Var>& weights, double lambda) {
  if (lambda < 0) throw ValidationError("l1_penalty: lambda must be non-negative");
  if (weights.empty()) throw ValidationError("l1_penalty: no weights");
  Var total = abs_sum(weights.front());
  for (std::size_t i = 1; i < weights.size(); ++i) total = add(total, abs_sum(weights[i]));
  return scale(total, lambda);
}

Dense::Dense(std::string name, std::size_t in, std::size_t out, std::uint64_t seed)
    : weight(name + ".weight", xavier_init({in, out}, seed)), bias(name + ".bias", Tensor({out})) {}

Var Dense::forward(Tape& tape, Var x) {
  return dense_forward(x, tape.parameter(weight), tape.parameter(bias));
}

Lstm::Lstm(std::string name, std::size_t in, std::size_t hidden, std::uint64_t seed, double forget_bias)
    : w_x(name + ".w_x", xavier_init({in, 4 * hidden}, seed)),
      w_h(name + ".w_h", xavier_init({hidden, 4 * hidden}, seed ^ 0x9e3779b97f4a7c15ULL)),
      bias(name + ".bias", Tensor({4 * hidden})) {
  for (std::size_t j = hidden; j < 2 * hidden; ++j) bias.value[j] = forget_bias;
}

Var Lstm::forward(Tape& tape, Var x_seq, std::optional<LstmState> initial) {
  return lstm_forward(x_seq, tape.parameter(w_x), tape.parameter(w_h), tape.parameter(bias), initial);
}

Conv1d::Conv1d(std::string name, std::size_t in_channels, std::size_t out_channels, std::size_t kernel,
               std::size_t stride_, std::uint64_t seed)
    : weight(name + ".weight", xavier_init({out_channels, in_channels, kernel}, seed)),
      bias(name + ".bias", Tensor({out_channels})),
      stride(stride_) {}

Var Conv1d::forward(Tape& tape, Var x) {
  return conv1d_forward(x, tape.parameter(weight), tape.parameter(bias), stride);
}

BatchNorm::BatchNorm(std::string name_, std::size_t channels, double momentum, double eps)
    : gamma(name_ + ".gamma", Tensor({channels}, 1.0)),
      beta(name_ + ".beta", Tensor({channels}, 0.0)),
      name(std::move(name_)) {
  state.running_mean = Tensor({channels}, 0.0);
  state.running_var = Tensor({channels}, 1.0);
  state.momentum = momentum;
  state.eps = eps;
}

Var BatchNorm::forward(Tape& tape, Var x, Mode mode, bool update_running) {
  return batchnorm(x, tape.parameter(gamma), tape.parameter(beta), state, mode, update_running);
}

}  // namespace stgan::nn
