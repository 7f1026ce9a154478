#include "semcom/autograd.hpp"

#include "semcom/errors.hpp"

namespace semcom::nn {

const Tensor& Var::value() const {
  if (!tape_) throw StateError("value() on an unbound Var");
  return tape_->value(*this);
}

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

void Tape::check_owned(Var v) const {
  if (v.tape() != this || v.id() >= nodes_.size())
    throw StateError("Var does not belong to this tape");
}

Var Tape::constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::parameter(std::string name, Tensor value) {
  Node n;
  n.value = std::move(value);
  n.param_name = std::move(name);
  n.needs_grad = true;
  return push(std::move(n));
}

Var Tape::record(Tensor value, std::initializer_list<Var> parents, BackwardFn backward) {
  return record(std::move(value), std::vector<Var>(parents), std::move(backward));
}

Var Tape::record(Tensor value, const std::vector<Var>& parents, BackwardFn backward) {
  Node n;
  n.value = std::move(value);
  for (const Var& p : parents) {
    check_owned(p);
    n.needs_grad = n.needs_grad || nodes_[p.id()].needs_grad;
  }
  if (n.needs_grad) n.backward = std::move(backward);
  return push(std::move(n));
}

const Tensor& Tape::value(Var v) const {
  check_owned(v);
  return nodes_[v.id()].value;
}

bool Tape::needs_grad(Var v) const {
  check_owned(v);
  return nodes_[v.id()].needs_grad;
}

Tensor& Tape::grad(Var v) {
  check_owned(v);
  Node& n = nodes_[v.id()];
  if (n.grad.shape() != n.value.shape()) n.grad = Tensor(n.value.shape(), 0.0);
  return n.grad;
}

Gradients Tape::backward(Var loss) {
  if (!loss.valid() || nodes_.empty())
    throw StateError("backward called before a forward pass was recorded");
  check_owned(loss);
  if (value(loss).size() != 1) throw InvalidArgument("backward requires a single-element loss");

  for (Node& n : nodes_) n.grad = Tensor();
  grad(loss)[0] = 1.0;

  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.backward || n.grad.empty()) continue;
    // The callback may touch other nodes' gradients; keep this one alive locally.
    Tensor g = n.grad;
    n.backward(g, n.value, *this);
  }

  Gradients out;
  for (Node& n : nodes_) {
    if (n.param_name.empty()) continue;
    Tensor g = n.grad.empty() ? Tensor(n.value.shape(), 0.0) : n.grad;
    auto [it, inserted] = out.emplace(n.param_name, g);
    if (!inserted) it->second += g;
  }
  return out;
}

}  // namespace semcom::nn
