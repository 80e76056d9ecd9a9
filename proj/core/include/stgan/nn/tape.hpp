#pragma once

#include <deque>
#include <functional>
#include <unordered_map>
#include <vector>

#include "stgan/nn/tensor.hpp"

namespace stgan::nn {

class Tape;

/// Handle to a node recorded on a Tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t dim(std::size_t i) const { return value().dim(i); }
  bool requires_grad() const;

  Tape* tape() const noexcept { return tape_; }
  std::size_t id() const noexcept { return id_; }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode recording: every op appends a node holding its value, its
/// inputs and a closure that pushes the node's gradient to those inputs.
class Tape {
 public:
  using Backward = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf that never receives gradient.
  Var constant(Tensor value);

  /// Leaf bound to a parameter; backward() adds into `p.grad`. Repeated calls
  /// with the same parameter return the same node.
  Var parameter(Parameter& p);

  /// Appends an op node. `backward` runs only if some input requires grad.
  Var record(Tensor value, std::vector<std::size_t> inputs, Backward backward);

  /// Seeds d(root)/d(root) = 1 (root must hold one element) and propagates
  /// to every parameter leaf.
  void backward(Var root);

  const Tensor& value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  const Tensor& grad(std::size_t id) const { return nodes_[id].grad; }
  /// Gradient buffer of `id`, allocated as zeros on first use.
  Tensor& grad_buffer(std::size_t id);
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::vector<std::size_t> inputs;
    Backward backward;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };
  std::deque<Node> nodes_;
  std::unordered_map<Parameter*, std::size_t> param_nodes_;
};

}  // namespace stgan::nn
