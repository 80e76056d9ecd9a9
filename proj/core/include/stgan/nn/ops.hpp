#pragma once

#include "stgan/nn/tape.hpp"

namespace stgan::nn {

/// [m, k] x [k, n] -> [m, n]
Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
/// Elementwise product.
Var mul(Var a, Var b);
Var scale(Var a, double s);
Var add_scalar(Var a, double s);
/// x[m, n] + b[n] broadcast over rows.
Var add_row_bias(Var x, Var b);

Var sigmoid(Var x);
Var tanh(Var x);
Var relu(Var x);
Var leaky_relu(Var x, double alpha = 0.01);
/// Natural log; inputs are clamped below at 1e-12.
Var log(Var x);
Var square(Var x);

/// Columns [start, start + len) of a rank-2 tensor.
Var slice_cols(Var x, std::size_t start, std::size_t len);
/// Concatenates rank-2 tensors along columns.
Var concat_cols(Var a, Var b);
/// Row `t` of every batch entry of x[B, T, F] -> [B, F].
Var time_step(Var x, std::size_t t);
/// x[1, n] repeated to [m, n].
Var repeat_rows(Var x, std::size_t m);
Var reshape(Var x, Shape shape);

Var sum(Var x);
Var mean(Var x);
/// sum |x|, subgradient sign(x) (0 at 0).
Var abs_sum(Var x);

/// Valid cross-correlation: x[B, Cin, L], w[Cout, Cin, K], b[Cout] ->
/// [B, Cout, (L - K) / stride + 1].
Var conv1d(Var x, Var w, Var b, std::size_t stride);

/// Fused single-layer LSTM over x[B, T, F] (gate layout [i | f | g | o]) from
/// the state (h0, c0); returns h_T [B, H]. One tape node with hand-written
/// backpropagation through time.
Var lstm_sequence(Var x, Var w_x, Var w_h, Var b, Var h0, Var c0);

/// Running statistics and options for batch normalization.
struct BatchNormState {
  Tensor running_mean;
  Tensor running_var;
  double momentum = 0.9;
  double eps = 1e-5;
};

enum class Mode { Train, Eval };

/// Per-feature normalization. x is [B, C] or [B, C, L] with statistics over
/// every axis but C. Train mode uses biased batch statistics and, when
/// `update_running`, sets running = momentum * running + (1 - momentum) * batch.
Var batchnorm(Var x, Var gamma, Var beta, BatchNormState& state, Mode mode, bool update_running = true);

}  // namespace stgan::nn
