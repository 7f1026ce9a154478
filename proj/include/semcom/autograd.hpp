#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "semcom/tensor.hpp"

namespace semcom::nn {

class Tape;

/// Handle to a value recorded on a Tape.
class Var {
public:
  Var() = default;

  bool valid() const { return tape_ != nullptr; }
  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  const Tensor& value() const;
  const std::vector<std::size_t>& shape() const { return value().shape(); }

private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

using Gradients = std::map<std::string, Tensor>;

/// Records a forward computation so that reverse-mode gradients of a scalar
/// can be computed afterwards. Nodes are appended in topological order.
class Tape {
public:
  /// Called during backward with the accumulated gradient of the node's output
  /// and the output value itself.
  using BackwardFn =
      std::function<void(const Tensor& grad_out, const Tensor& out, Tape& tape)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  Var parameter(std::string name, Tensor value);
  Var record(Tensor value, std::initializer_list<Var> parents, BackwardFn backward);
  Var record(Tensor value, const std::vector<Var>& parents, BackwardFn backward);

  const Tensor& value(Var v) const;
  bool needs_grad(Var v) const;
  /// Zero-initialized gradient buffer of v, for in-place accumulation by BackwardFns.
  Tensor& grad(Var v);

  /// Reverse sweep from a single-element loss. Returns the gradient of every
  /// parameter leaf, keyed by its name; unreached parameters get zeros.
  Gradients backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

private:
  struct Node {
    Tensor value;
    Tensor grad;
    BackwardFn backward;
    std::string param_name;
    bool needs_grad = false;
  };

  Var push(Node node);
  void check_owned(Var v) const;

  std::vector<Node> nodes_;
};

}  // namespace semcom::nn
