#pragma once

#include <cstddef>
#include <vector>

#include "semcom/autograd.hpp"
#include "semcom/tensor.hpp"

namespace semcom::nn {

enum class Activation { none, relu, tanh };

struct Stride {
  std::size_t time = 1;
  std::size_t freq = 1;
  friend bool operator==(const Stride&, const Stride&) = default;
};

/// Weights of one GRU direction. Gate blocks are laid out [update | reset | candidate]
/// along the last axis: input [in, 3H], hidden [H, 3H], bias [3H].
struct GruWeights {
  Var input;
  Var hidden;
  Var bias;
};

/// y = act(x W + b) along the last axis of x.
Var dense(Var x, Var weight, Var bias, Activation act);

/// 2-D convolution over x[B,C,H,W] with kernel[C',C,kh,kw] and bias[C'],
/// "same" zero padding followed by striding, so H' = ceil(H/sh), W' = ceil(W/sw).
Var conv2d(Var x, Var kernel, Var bias, Stride stride, Activation act);

/// Bidirectional GRU over x[B,T,in]; returns [B,T,2H] with the forward direction
/// in the first H channels. Both directions start from a zero state.
Var bigru(Var x, const GruWeights& forward, const GruWeights& backward);

/// Softmax along the last axis (max-subtracted).
Var softmax(Var x);

Var reshape(Var x, std::vector<std::size_t> shape);

/// [B,C,T,F] -> [B,T,C*F], channel-major within each step.
Var conv_to_sequence(Var x);

Var sum(Var x);
Var mul(Var a, Var b);
Var square(Var x);

// Tensor-level conveniences for inference and tests.
Tensor dense_forward(const Tensor& x, const Tensor& weight, const Tensor& bias, Activation act);
Tensor conv2d_forward(const Tensor& x, const Tensor& kernel, const Tensor& bias, Stride stride,
                      Activation act);
Tensor softmax(const Tensor& x);

struct GruTensors {
  Tensor input;
  Tensor hidden;
  Tensor bias;
};
Tensor bigru_forward(const Tensor& x, const GruTensors& forward, const GruTensors& backward);

}  // namespace semcom::nn
