#include "stgan/nn/ops.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>

#include "stgan/errors.hpp"

namespace stgan::nn {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;

ConstMap as_matrix(const Tensor& t) {
  return ConstMap(t.ptr(), static_cast<Eigen::Index>(t.dim(0)), static_cast<Eigen::Index>(t.dim(1)));
}
MutMap as_matrix(Tensor& t) {
  return MutMap(t.ptr(), static_cast<Eigen::Index>(t.dim(0)), static_cast<Eigen::Index>(t.dim(1)));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

void require_same_shape(const Var& a, const Var& b, const char* op) {
  require(a.shape() == b.shape(),
          std::string(op) + ": shape mismatch " + to_string(a.shape()) + " vs " + to_string(b.shape()));
}

void require_rank(const Var& a, std::size_t rank, const char* op) {
  require(a.value().rank() == rank, std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                                        to_string(a.shape()));
}

// Elementwise unary op: out = f(x), dx += dy * df(x, out).
template <typename F, typename DF>
Var unary(Var x, F f, DF df) {
  Tape& tape = *x.tape();
  const Tensor& xv = x.value();
  Tensor out(xv.shape());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = f(xv[i]);
  const std::size_t xi = x.id();
  return tape.record(std::move(out), {xi}, [xi, df](Tape& t, std::size_t self) {
    const Tensor& dy = t.grad(self);
    const Tensor& xv = t.value(xi);
    const Tensor& yv = t.value(self);
    Tensor& dx = t.grad_buffer(xi);
    for (std::size_t i = 0; i < dy.size(); ++i) dx[i] += dy[i] * df(xv[i], yv[i]);
  });
}

}  // namespace

Var matmul(Var a, Var b) {
  require_rank(a, 2, "matmul");
  require_rank(b, 2, "matmul");
  require(a.dim(1) == b.dim(0), "matmul: inner dimensions differ " + to_string(a.shape()) + " x " +
                                    to_string(b.shape()));
  Tape& tape = *a.tape();
  Tensor out({a.dim(0), b.dim(1)});
  as_matrix(out).noalias() = as_matrix(a.value()) * as_matrix(b.value());
  const std::size_t ai = a.id(), bi = b.id();
  return tape.record(std::move(out), {ai, bi}, [ai, bi](Tape& t, std::size_t self) {
    const auto dy = as_matrix(t.grad(self));
    if (t.requires_grad(ai)) as_matrix(t.grad_buffer(ai)).noalias() += dy * as_matrix(t.value(bi)).transpose();
    if (t.requires_grad(bi)) as_matrix(t.grad_buffer(bi)).noalias() += as_matrix(t.value(ai)).transpose() * dy;
  });
}

Var add(Var a, Var b) {
  require_same_shape(a, b, "add");
  Tape& tape = *a.tape();
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.value()[i];
  const std::size_t ai = a.id(), bi = b.id();
  return tape.record(std::move(out), {ai, bi}, [ai, bi](Tape& t, std::size_t self) {
    const Tensor& dy = t.grad(self);
    for (std::size_t in : {ai, bi}) {
      if (!t.requires_grad(in)) continue;
      Tensor& g = t.grad_buffer(in);
      for (std::size_t i = 0; i < dy.size(); ++i) g[i] += dy[i];
    }
  });
}

Var sub(Var a, Var b) { return add(a, scale(b, -1.0)); }

Var mul(Var a, Var b) {
  require_same_shape(a, b, "mul");
  Tape& tape = *a.tape();
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.value()[i];
  const std::size_t ai = a.id(), bi = b.id();
  return tape.record(std::move(out), {ai, bi}, [ai, bi](Tape& t, std::size_t self) {
    const Tensor& dy = t.grad(self);
    if (t.requires_grad(ai)) {
      Tensor& g = t.grad_buffer(ai);
      const Tensor& bv = t.value(bi);
      for (std::size_t i = 0; i < dy.size(); ++i) g[i] += dy[i] * bv[i];
    }
    if (t.requires_grad(bi)) {
      Tensor& g = t.grad_buffer(bi);
      const Tensor& av = t.value(ai);
      for (std::size_t i = 0; i < dy.size(); ++i) g[i] += dy[i] * av[i];
    }
  });
}

Var scale(Var a, double s) {
  return unary(a, [s](double x) { return s * x; }, [s](double, double) { return s; });
}

Var add_scalar(Var a, double s) {
  return unary(a, [s](double x) { return x + s; }, [](double, double) { return 1.0; });
}

Var add_row_bias(Var x, Var b) {
  require_rank(x, 2, "add_row_bias");
  require(b.value().size() == x.dim(1), "add_row_bias: bias length " + std::to_string(b.value().size()) +
                                            " does not match " + std::to_string(x.dim(1)) + " columns");
  Tape& tape = *x.tape();
  Tensor out = x.value();
  const std::size_t rows = x.dim(0), cols = x.dim(1);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] += b.value()[c];
  const std::size_t xi = x.id(), bi = b.id();
  return tape.record(std::move(out), {xi, bi}, [xi, bi, rows, cols](Tape& t, std::size_t self) {
    const Tensor& dy = t.grad(self);
    if (t.requires_grad(xi)) {
      Tensor& g = t.grad_buffer(xi);
      for (std::size_t i = 0; i < dy.size(); ++i) g[i] += dy[i];
    }
    if (t.requires_grad(bi)) {
      Tensor& g = t.grad_buffer(bi);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) g[c] += dy[r * cols + c];
    }
  });
}

Var sigmoid(Var x) {
  return unary(
      x,
      [](double v) {
        if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var tanh(Var x) {
  return unary(x, [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

Var relu(Var x) {
  return unary(x, [](double v) { return v > 0 ? v : 0.0; }, [](double v, double) { return v > 0 ? 1.0 : 0.0; });
}

Var leaky_relu(Var x, double alpha) {
  return unary(
      x, [alpha](double v) { return v > 0 ? v : alpha * v; },
      [alpha](double v, double) { return v > 0 ? 1.0 : alpha; });
}

namespace {
constexpr double kLogFloor = 1e-12;
}

Var log(Var x) {
  return unary(
      x, [](double v) { return std::log(std::max(v, kLogFloor)); },
      [](double v, double) { return v > kLogFloor ? 1.0 / v : 0.0; });
}

Var square(Var x) {
  return unary(x, [](double v) { return v * v; }, [](double v, double) { return 2.0 * v; });
}

Var slice_cols(Var x, std::size_t start, std::size_t len) {
  require_rank(x, 2, "slice_cols");
  require(start + len <= x.dim(1), "slice_cols: range exceeds column count");
  Tape& tape = *x.tape();
  const std::size_t rows = x.dim(0), cols = x.dim(1);
  Tensor out({rows, len});
  for (std::size_t r = 0; r < rows; ++r)
    std::copy_n(x.value().ptr() + r * cols + start, len, out.ptr() + r * len);
  const std::size_t xi = x.id();
  return tape.record(std::move(out), {xi}, [xi, rows, cols, start, len](Tape& t, std::size_t self) {
    const Tensor& dy = t.grad(self);
    Tensor& g = t.grad_buffer(xi);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < len; ++c) g[r * cols + start + c] += dy[r * len + c];
  });
}

Var concat_cols(Var a, Var b) {
  require_rank(a, 2, "concat_cols");
  require_rank(b, 2, "concat_cols");
  require(a.dim(0) == b.dim(0), "concat_cols: row counts differ");
  Tape& tape = *a.tape();
  const std::size_t rows = a.dim(0), ca = a.dim(1), cb = b.dim(1);
  Tensor out({rows, ca + cb});
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(a.value().ptr() + r * ca, ca, out.ptr() + r * (ca + cb));
    std::copy_n(b.value().ptr() + r * cb, cb, out.ptr() + r * (ca + cb) + ca);
  }
  const std::size_t ai = a.id(), bi = b.id();
  return tape.record(std::move(out), {ai, bi}, [ai, bi, rows, ca, cb](Tape& t, std::size_t self) {
    const Tensor& dy = t.grad(self);
    if (t.requires_grad(ai)) {
      Tensor& g = t.grad_buffer(ai);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < ca; ++c) g[r * ca + c] += dy[r * (ca + cb) + c];
    }
    if (t.requires_grad(bi)) {
      Tensor& g = t.grad_buffer(bi);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cb; ++c) g[r * cb + c] += dy[r * (ca + cb) + ca + c];
    }
  });
}

Var time_step(Var x, std::size_t step) {
  require_rank(x, 3, "time_step");
  require(step < x.dim(1), "time_step: step out of range");
  Tape& tape = *x.tape();
  const std::size_t batch = x.dim(0), steps = x.dim(1), feat = x.dim(2);
  Tensor out({batch, feat});
  for (std::size_t b = 0; b < batch; ++b)
    std::copy_n(x.value().ptr() + (b * steps + step) * feat, feat, out.ptr() + b * feat);
  const std::size_t xi = x.id();
  return tape.record(std::move(out), {xi}, [xi, batch, steps, feat, step](Tape& t, std::size_t self) {
    const Tensor& dy = t.grad(self);
    Tensor& g = t.grad_buffer(xi);
    for (std::size_t b = 0; b < batch; ++b)
      for (std::size_t f = 0; f < feat; ++f) g[(b * steps + step) * feat + f] += dy[b * feat + f];
  });
}

Var repeat_rows(Var x, std::size_t m) {
  require_rank(x, 2, "repeat_rows");
  require(x.dim(0) == 1, "repeat_rows: input must have one row");
  Tape& tape = *x.tape();
  const std::size_t n = x.dim(1);
  Tensor out({m, n});
  for (std::size_t r = 0; r < m; ++r) std::copy_n(x.value().ptr(), n, out.ptr() + r * n);
  const std::size_t xi = x.id();
  return tape.record(std::move(out), {xi}, [xi, m, n](Tape& t, std::size_t self) {
    const Tensor& dy = t.grad(self);
    Tensor& g = t.grad_buffer(xi);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < n; ++c) g[c] += dy[r * n + c];
  });
}

Var reshape(Var x, Shape shape) {
  Tape& tape = *x.tape();
  Tensor out = x.value().reshaped(std::move(shape));
  const std::size_t xi = x.id();
  return tape.record(std::move(out), {xi}, [xi](Tape& t, std::size_t self) {
    const Tensor& dy = t.grad(self);
    Tensor& g = t.grad_buffer(xi);
    for (std::size_t i = 0; i < dy.size(); ++i) g[i] += dy[i];
  });
}

Var sum(Var x) {
  Tape& tape = *x.tape();
  double s = 0.0;
  for (double v : x.value().data()) s += v;
  const std::size_t xi = x.id();
  return tape.record(Tensor::scalar(s), {xi}, [xi](Tape& t, std::size_t self) {
    const double dy = t.grad(self)[0];
    Tensor& g = t.grad_buffer(xi);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += dy;
  });
}

Var mean(Var x) {
  require(x.value().size() > 0, "mean of an empty tensor");
  return scale(sum(x), 1.0 / static_cast<double>(x.value().size()));
}

Var abs_sum(Var x) {
  Tape& tape = *x.tape();
  double s = 0.0;
  for (double v : x.value().data()) s += std::abs(v);
  const std::size_t xi = x.id();
  return tape.record(Tensor::scalar(s), {xi}, [xi](Tape& t, std::size_t self) {
    const double dy = t.grad(self)[0];
    const Tensor& xv = t.value(xi);
    Tensor& g = t.grad_buffer(xi);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += dy * (xv[i] > 0 ? 1.0 : (xv[i] < 0 ? -1.0 : 0.0));
  });
}

Var conv1d(Var x, Var w, Var b, std::size_t stride) {
  require_rank(x, 3, "conv1d input");
  require_rank(w, 3, "conv1d kernel");
  require(stride >= 1, "conv1d: stride must be positive");
  const std::size_t batch = x.dim(0), cin = x.dim(1), len = x.dim(2);
  const std::size_t cout = w.dim(0), k = w.dim(2);
  require(w.dim(1) == cin, "conv1d: kernel expects " + std::to_string(w.dim(1)) + " input channels, got " +
                               std::to_string(cin));
  require(b.value().size() == cout, "conv1d: bias length must equal output channels");
  require(len >= k, "conv1d: input length " + std::to_string(len) + " shorter than kernel " + std::to_string(k));
  const std::size_t lout = (len - k) / stride + 1;
  Tape& tape = *x.tape();
  const Tensor& xv = x.value();
  const Tensor& wv = w.value();
  Tensor out({batch, cout, lout});
  for (std::size_t n = 0; n < batch; ++n)
    for (std::size_t co = 0; co < cout; ++co)
      for (std::size_t t = 0; t < lout; ++t) {
        double acc = b.value()[co];
        for (std::size_t ci = 0; ci < cin; ++ci) {
          const double* xr = xv.ptr() + (n * cin + ci) * len + t * stride;
          const double* wr = wv.ptr() + (co * cin + ci) * k;
          for (std::size_t j = 0; j < k; ++j) acc += xr[j] * wr[j];
        }
        out[(n * cout + co) * lout + t] = acc;
      }
  const std::size_t xi = x.id(), wi = w.id(), bi = b.id();
  return tape.record(std::move(out), {xi, wi, bi},
                     [=](Tape& tp, std::size_t self) {
                       const Tensor& dy = tp.grad(self);
                       const Tensor& xv = tp.value(xi);
                       const Tensor& wv = tp.value(wi);
                       Tensor* dx = tp.requires_grad(xi) ? &tp.grad_buffer(xi) : nullptr;
                       Tensor* dw = tp.requires_grad(wi) ? &tp.grad_buffer(wi) : nullptr;
                       Tensor* db = tp.requires_grad(bi) ? &tp.grad_buffer(bi) : nullptr;
                       for (std::size_t n = 0; n < batch; ++n)
                         for (std::size_t co = 0; co < cout; ++co)
                           for (std::size_t t = 0; t < lout; ++t) {
                             const double g = dy[(n * cout + co) * lout + t];
                             if (db) (*db)[co] += g;
                             for (std::size_t ci = 0; ci < cin; ++ci) {
                               const std::size_t xoff = (n * cin + ci) * len + t * stride;
                               const std::size_t woff = (co * cin + ci) * k;
                               for (std::size_t j = 0; j < k; ++j) {
                                 if (dx) (*dx)[xoff + j] += g * wv[woff + j];
                                 if (dw) (*dw)[woff + j] += g * xv[xoff + j];
                               }
                             }
                           }
                     });
}

Var batchnorm(Var x, Var gamma, Var beta, BatchNormState& state, Mode mode, bool update_running) {
  const std::size_t rank = x.value().rank();
  require(rank == 2 || rank == 3, "batchnorm: input must be [B, C] or [B, C, L]");
  const std::size_t batch = x.dim(0), ch = x.dim(1), len = rank == 3 ? x.dim(2) : 1;
  require(gamma.value().size() == ch && beta.value().size() == ch, "batchnorm: gamma/beta length must equal C");
  if (state.running_mean.size() != ch) state.running_mean = Tensor({ch}, 0.0);
  if (state.running_var.size() != ch) state.running_var = Tensor({ch}, 1.0);
  const Tensor& xv = x.value();
  const double count = static_cast<double>(batch * len);

  Tensor mu({ch}), var({ch});
  if (mode == Mode::Train) {
    require(batch >= 2, "batchnorm: training mode needs a batch of at least 2");
    for (std::size_t c = 0; c < ch; ++c) {
      double s = 0.0;
      for (std::size_t n = 0; n < batch; ++n)
        for (std::size_t l = 0; l < len; ++l) s += xv[(n * ch + c) * len + l];
      const double m = s / count;
      double ss = 0.0;
      for (std::size_t n = 0; n < batch; ++n)
        for (std::size_t l = 0; l < len; ++l) {
          const double d = xv[(n * ch + c) * len + l] - m;
          ss += d * d;
        }
      mu[c] = m;
      var[c] = ss / count;
    }
    if (update_running) {
      for (std::size_t c = 0; c < ch; ++c) {
        state.running_mean[c] = state.momentum * state.running_mean[c] + (1.0 - state.momentum) * mu[c];
        state.running_var[c] = state.momentum * state.running_var[c] + (1.0 - state.momentum) * var[c];
      }
    }
  } else {
    mu = state.running_mean;
    var = state.running_var;
  }

  Tensor inv_std({ch});
  for (std::size_t c = 0; c < ch; ++c) inv_std[c] = 1.0 / std::sqrt(var[c] + state.eps);
  Tensor xhat(xv.shape()), out(xv.shape());
  for (std::size_t n = 0; n < batch; ++n)
    for (std::size_t c = 0; c < ch; ++c)
      for (std::size_t l = 0; l < len; ++l) {
        const std::size_t i = (n * ch + c) * len + l;
        xhat[i] = (xv[i] - mu[c]) * inv_std[c];
        out[i] = gamma.value()[c] * xhat[i] + beta.value()[c];
      }

  const std::size_t xi = x.id(), gi = gamma.id(), bi = beta.id();
  const bool train = mode == Mode::Train;
  return x.tape()->record(
      std::move(out), {xi, gi, bi},
      [=, xhat = std::move(xhat), inv_std = std::move(inv_std)](Tape& t, std::size_t self) {
        const Tensor& dy = t.grad(self);
        const Tensor& gv = t.value(gi);
        std::vector<double> sum_dy(ch, 0.0), sum_dy_xhat(ch, 0.0);
        for (std::size_t n = 0; n < batch; ++n)
          for (std::size_t c = 0; c < ch; ++c)
            for (std::size_t l = 0; l < len; ++l) {
              const std::size_t i = (n * ch + c) * len + l;
              sum_dy[c] += dy[i];
              sum_dy_xhat[c] += dy[i] * xhat[i];
            }
        if (t.requires_grad(gi)) {
          Tensor& g = t.grad_buffer(gi);
          for (std::size_t c = 0; c < ch; ++c) g[c] += sum_dy_xhat[c];
        }
        if (t.requires_grad(bi)) {
          Tensor& g = t.grad_buffer(bi);
          for (std::size_t c = 0; c < ch; ++c) g[c] += sum_dy[c];
        }
        if (t.requires_grad(xi)) {
          Tensor& g = t.grad_buffer(xi);
          for (std::size_t n = 0; n < batch; ++n)
            for (std::size_t c = 0; c < ch; ++c)
              for (std::size_t l = 0; l < len; ++l) {
                const std::size_t i = (n * ch + c) * len + l;
                if (train) {
                  g[i] += gv[c] * inv_std[c] / count * (count * dy[i] - sum_dy[c] - xhat[i] * sum_dy_xhat[c]);
                } else {
                  g[i] += gv[c] * inv_std[c] * dy[i];
                }
              }
        }
      });
}

namespace {

double logistic(double v) {
  if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

}  // namespace

Var lstm_sequence(Var x, Var w_x, Var w_h, Var b, Var h0, Var c0) {
  require_rank(x, 3, "lstm_sequence");
  const std::size_t batch = x.dim(0), steps = x.dim(1), feat = x.dim(2);
  const std::size_t hidden = w_h.dim(0), gates = 4 * hidden;
  require(w_x.shape() == Shape{feat, gates} && w_h.shape() == Shape{hidden, gates} && b.shape() == Shape{gates},
          "lstm_sequence: weight shapes do not match input " + to_string(x.shape()));
  require(h0.shape() == Shape{batch, hidden} && c0.shape() == Shape{batch, hidden},
          "lstm_sequence: initial state must be [batch, hidden]");
  require(steps > 0, "lstm_sequence: empty sequence");
  const auto rows = static_cast<Eigen::Index>(steps * batch);

  // Time-major copy of the input so every step is a contiguous row block.
  RowMat xt(rows, static_cast<Eigen::Index>(feat));
  for (std::size_t t = 0; t < steps; ++t)
    for (std::size_t i = 0; i < batch; ++i)
      for (std::size_t f = 0; f < feat; ++f) xt(t * batch + i, f) = x.value()[(i * steps + t) * feat + f];

  struct Saved {
    RowMat xt;     // [T*B, F]
    RowMat act;    // activated gates [T*B, 4H]
    RowMat h;      // h_0..h_T stacked [(T+1)*B, H]
    RowMat c;      // c_0..c_T stacked
  };
  auto saved = std::make_shared<Saved>();
  saved->act.noalias() = xt * as_matrix(w_x.value());
  saved->xt = std::move(xt);
  saved->h.resize(rows + static_cast<Eigen::Index>(batch), static_cast<Eigen::Index>(hidden));
  saved->c.resize(saved->h.rows(), saved->h.cols());
  saved->h.topRows(static_cast<Eigen::Index>(batch)) = as_matrix(h0.value());
  saved->c.topRows(static_cast<Eigen::Index>(batch)) = as_matrix(c0.value());
  const auto bias = b.value().data();
  const auto wh = as_matrix(w_h.value());
  const auto bsz = static_cast<Eigen::Index>(batch);
  const auto hsz = static_cast<Eigen::Index>(hidden);

  for (std::size_t t = 0; t < steps; ++t) {
    const Eigen::Index r = static_cast<Eigen::Index>(t) * bsz;
    auto z = saved->act.middleRows(r, bsz);
    z.noalias() += saved->h.middleRows(r, bsz) * wh;
    for (Eigen::Index i = 0; i < bsz; ++i) {
      for (Eigen::Index j = 0; j < hsz; ++j) {
        const double ig = logistic(z(i, j) + bias[j]);
        const double fg = logistic(z(i, hsz + j) + bias[hidden + j]);
        const double gg = std::tanh(z(i, 2 * hsz + j) + bias[2 * hidden + j]);
        const double og = logistic(z(i, 3 * hsz + j) + bias[3 * hidden + j]);
        z(i, j) = ig;
        z(i, hsz + j) = fg;
        z(i, 2 * hsz + j) = gg;
        z(i, 3 * hsz + j) = og;
        const double c = fg * saved->c(r + i, j) + ig * gg;
        saved->c(r + bsz + i, j) = c;
        saved->h(r + bsz + i, j) = og * std::tanh(c);
      }
    }
  }

  Tensor out({batch, hidden});
  as_matrix(out) = saved->h.bottomRows(bsz);
  Tape& tape = *x.tape();
  const std::size_t xi = x.id(), wxi = w_x.id(), whi = w_h.id(), bi = b.id(), hi = h0.id(), ci = c0.id();
  return tape.record(std::move(out), {xi, wxi, whi, bi, hi, ci},
                     [=](Tape& tp, std::size_t self) {
    const Saved& sv = *saved;
    const auto whm = as_matrix(tp.value(whi));
    RowMat dz(rows, static_cast<Eigen::Index>(gates));
    RowMat dh = as_matrix(tp.grad(self));
    RowMat dc = RowMat::Zero(bsz, hsz);
    for (std::size_t step = steps; step-- > 0;) {
      const Eigen::Index r = static_cast<Eigen::Index>(step) * bsz;
      for (Eigen::Index i = 0; i < bsz; ++i) {
        for (Eigen::Index j = 0; j < hsz; ++j) {
          const double ig = sv.act(r + i, j), fg = sv.act(r + i, hsz + j);
          const double gg = sv.act(r + i, 2 * hsz + j), og = sv.act(r + i, 3 * hsz + j);
          const double tc = std::tanh(sv.c(r + bsz + i, j));
          const double dct = dc(i, j) + dh(i, j) * og * (1.0 - tc * tc);
          dz(r + i, j) = dct * gg * ig * (1.0 - ig);
          dz(r + i, hsz + j) = dct * sv.c(r + i, j) * fg * (1.0 - fg);
          dz(r + i, 2 * hsz + j) = dct * ig * (1.0 - gg * gg);
          dz(r + i, 3 * hsz + j) = dh(i, j) * tc * og * (1.0 - og);
          dc(i, j) = dct * fg;
        }
      }
      dh.noalias() = dz.middleRows(r, bsz) * whm.transpose();
    }
    if (tp.requires_grad(hi)) as_matrix(tp.grad_buffer(hi)) += dh;
    if (tp.requires_grad(ci)) as_matrix(tp.grad_buffer(ci)) += dc;
    if (tp.requires_grad(whi)) {
      as_matrix(tp.grad_buffer(whi)).noalias() += sv.h.topRows(rows).transpose() * dz;
    }
    if (tp.requires_grad(wxi)) as_matrix(tp.grad_buffer(wxi)).noalias() += sv.xt.transpose() * dz;
    if (tp.requires_grad(bi)) {
      Tensor& g = tp.grad_buffer(bi);
      const Eigen::RowVectorXd col = dz.colwise().sum();
      for (std::size_t k = 0; k < gates; ++k) g[k] += col(static_cast<Eigen::Index>(k));
    }
    if (tp.requires_grad(xi)) {
      const RowMat dxt = dz * as_matrix(tp.value(wxi)).transpose();
      Tensor& g = tp.grad_buffer(xi);
      for (std::size_t t = 0; t < steps; ++t)
        for (std::size_t i = 0; i < batch; ++i)
          for (std::size_t f = 0; f < feat; ++f)
            g[(i * steps + t) * feat + f] += dxt(static_cast<Eigen::Index>(t * batch + i), static_cast<Eigen::Index>(f));
    }
  });
}

}  // namespace stgan::nn
