#pragma once

#include <map>
#include <string>
#include <vector>

#include "semcom/autograd.hpp"
#include "semcom/tensor.hpp"

namespace semcom::nn {

/// Which network a parameter belongs to. Keys carry the group as a path prefix,
/// so the partition is exhaustive and disjoint by construction.
enum class ParamGroup { semantic_encoder, channel_encoder, channel_decoder };

const char* group_prefix(ParamGroup group);

class ModelParams {
public:
  /// Adds `<group prefix>/<name>`; duplicate keys are rejected.
  void add(ParamGroup group, const std::string& name, Tensor value);
  /// Adds a fully qualified key; the prefix must name a known group.
  void add(const std::string& key, Tensor value);

  const Tensor& at(const std::string& key) const;
  Tensor& at(const std::string& key);
  bool contains(const std::string& key) const { return tensors_.count(key) != 0; }

  const std::map<std::string, Tensor>& tensors() const { return tensors_; }
  std::vector<std::string> keys(ParamGroup group) const;
  std::size_t count() const;  // total scalar parameters

  static ParamGroup group_of(const std::string& key);

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
  std::map<std::string, Tensor> tensors_;
};

/// Parameters registered on a tape as named leaves.
class BoundParams {
public:
  BoundParams(Tape& tape, const ModelParams& params);
  Var operator[](const std::string& key) const;

private:
  std::map<std::string, Var> vars_;
};

/// theta <- theta - lr * grad, elementwise. Keys and shapes must match exactly.
ModelParams sgd_step(const ModelParams& params, const Gradients& grads, double learning_rate);

}  // namespace semcom::nn
