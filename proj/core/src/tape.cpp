#include "stgan/nn/tape.hpp"

#include "stgan/errors.hpp"

namespace stgan::nn {

const Tensor& Var::value() const { return tape_->value(id_); }
bool Var::requires_grad() const { return tape_->requires_grad(id_); }

Var Tape::constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, {}, {}, nullptr, false});
  return Var(this, nodes_.size() - 1);
}

Var Tape::parameter(Parameter& p) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) return Var(this, it->second);
  nodes_.push_back(Node{p.value, {}, {}, {}, &p, true});
  param_nodes_[&p] = nodes_.size() - 1;
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Tensor value, std::vector<std::size_t> inputs, Backward backward) {
  bool needs = false;
  for (auto in : inputs) needs = needs || nodes_[in].requires_grad;
  nodes_.push_back(Node{std::move(value), {}, std::move(inputs), needs ? std::move(backward) : Backward{}, nullptr,
                        needs});
  return Var(this, nodes_.size() - 1);
}

Tensor& Tape::grad_buffer(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty() && !n.value.empty()) n.grad = Tensor::zeros_like(n.value);
  return n.grad;
}

void Tape::backward(Var root) {
  if (root.tape() != this) throw ValidationError("backward: variable belongs to another tape");
  const std::size_t r = root.id();
  if (nodes_[r].value.size() != 1) throw ValidationError("backward: root must be a scalar");
  if (!nodes_[r].requires_grad) return;
  grad_buffer(r)[0] = 1.0;
  for (std::size_t i = r + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.param != nullptr) {
      auto& g = n.param->grad;
      if (g.shape() != n.value.shape()) g = Tensor::zeros_like(n.value);
      for (std::size_t k = 0; k < g.size(); ++k) g[k] += n.grad[k];
    } else if (n.backward) {
      n.backward(*this, i);
    }
  }
}

}  // namespace stgan::nn
