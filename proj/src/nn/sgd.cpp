#include "semcom/errors.hpp"
#include "semcom/params.hpp"

namespace semcom::nn {

const char* group_prefix(ParamGroup group) {
  switch (group) {
    case ParamGroup::semantic_encoder: return "semantic_encoder";
    case ParamGroup::channel_encoder: return "channel_encoder";
    case ParamGroup::channel_decoder: return "channel_decoder";
  }
  return "";
}

ParamGroup ModelParams::group_of(const std::string& key) {
  for (ParamGroup g : {ParamGroup::semantic_encoder, ParamGroup::channel_encoder,
                       ParamGroup::channel_decoder}) {
    const std::string prefix = std::string(group_prefix(g)) + "/";
    if (key.size() > prefix.size() && key.compare(0, prefix.size(), prefix) == 0) return g;
  }
  throw InvalidArgument("parameter key '" + key + "' has no known group prefix");
}

void ModelParams::add(ParamGroup group, const std::string& name, Tensor value) {
  add(std::string(group_prefix(group)) + "/" + name, std::move(value));
}

void ModelParams::add(const std::string& key, Tensor value) {
  group_of(key);
  if (!tensors_.emplace(key, std::move(value)).second)
    throw InvalidArgument("duplicate parameter key '" + key + "'");
}

const Tensor& ModelParams::at(const std::string& key) const {
  auto it = tensors_.find(key);
  if (it == tensors_.end()) throw InvalidArgument("unknown parameter '" + key + "'");
  return it->second;
}

Tensor& ModelParams::at(const std::string& key) {
  auto it = tensors_.find(key);
  if (it == tensors_.end()) throw InvalidArgument("unknown parameter '" + key + "'");
  return it->second;
}

std::vector<std::string> ModelParams::keys(ParamGroup group) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : tensors_)
    if (group_of(k) == group) out.push_back(k);
  return out;
}

std::size_t ModelParams::count() const {
  std::size_t n = 0;
  for (const auto& [k, v] : tensors_) n += v.size();
  return n;
}

BoundParams::BoundParams(Tape& tape, const ModelParams& params) {
  for (const auto& [k, v] : params.tensors()) vars_.emplace(k, tape.parameter(k, v));
}

Var BoundParams::operator[](const std::string& key) const {
  auto it = vars_.find(key);
  if (it == vars_.end()) throw InvalidArgument("unbound parameter '" + key + "'");
  return it->second;
}

ModelParams sgd_step(const ModelParams& params, const Gradients& grads, double learning_rate) {
  if (grads.size() != params.tensors().size())
    throw InvalidArgument("gradient set does not match parameter set");
  ModelParams next = params;
  for (const auto& [key, g] : grads) {
    if (!params.contains(key)) throw InvalidArgument("gradient for unknown parameter '" + key + "'");
    Tensor& p = next.at(key);
    if (p.shape() != g.shape())
      throw InvalidArgument("gradient shape mismatch for '" + key + "'");
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= learning_rate * g[i];
  }
  return next;
}

}  // namespace semcom::nn
