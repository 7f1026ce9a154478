#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "semcom/autograd.hpp"
#include "semcom/errors.hpp"
#include "semcom/layers.hpp"
#include "semcom/params.hpp"

using namespace semcom;
using namespace semcom::nn;
using semcom::testing::central_difference;
using semcom::testing::random_tensor;
using semcom::testing::relative_error;

namespace {

// Direct transcription of "same" padding + stride, written independently of
// the library's loop order.
Tensor naive_conv(const Tensor& x, const Tensor& k, const Tensor& b, std::size_t sh,
                  std::size_t sw) {
  const std::size_t B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  const std::size_t O = k.dim(0), kh = k.dim(2), kw = k.dim(3);
  const std::size_t Ho = (H + sh - 1) / sh, Wo = (W + sw - 1) / sw;
  const long pad_h = std::max<long>(0, static_cast<long>((Ho - 1) * sh + kh) - static_cast<long>(H));
  const long pad_w = std::max<long>(0, static_cast<long>((Wo - 1) * sw + kw) - static_cast<long>(W));
  // zero-padded copy
  const std::size_t Hp = H + pad_h, Wp = W + pad_w;
  std::vector<double> xp(B * C * Hp * Wp, 0.0);
  for (std::size_t n = 0; n < B; ++n)
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t i = 0; i < H; ++i)
        for (std::size_t j = 0; j < W; ++j)
          xp[((n * C + c) * Hp + i + pad_h / 2) * Wp + j + pad_w / 2] =
              x[((n * C + c) * H + i) * W + j];
  Tensor y({B, O, Ho, Wo});
  for (std::size_t n = 0; n < B; ++n)
    for (std::size_t o = 0; o < O; ++o)
      for (std::size_t i = 0; i < Ho; ++i)
        for (std::size_t j = 0; j < Wo; ++j) {
          double acc = b[o];
          for (std::size_t c = 0; c < C; ++c)
            for (std::size_t u = 0; u < kh; ++u)
              for (std::size_t v = 0; v < kw; ++v)
                acc += k[((o * C + c) * kh + u) * kw + v] *
                       xp[((n * C + c) * Hp + i * sh + u) * Wp + j * sw + v];
          y[((n * O + o) * Ho + i) * Wo + j] = acc;
        }
  return y;
}

GruTensors random_gru(std::size_t in, std::size_t h, std::mt19937_64& rng) {
  return {random_tensor({in, 3 * h}, rng, 0.5), random_tensor({h, 3 * h}, rng, 0.5),
          random_tensor({3 * h}, rng, 0.5)};
}

}  // namespace

TEST_CASE("dense: identity weight passes input through") {
  Tensor x({2, 3}, {1, -2, 3, 0.5, 4, -1});
  Tensor w({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  CHECK(dense_forward(x, w, Tensor({3}, 0.0), Activation::none) == x);
}

TEST_CASE("dense: hand arithmetic") {
  Tensor y = dense_forward(Tensor({1, 2}, {1, 1}), Tensor({2, 2}, {1, 3, 2, 4}), Tensor({2}, 0.0),
                           Activation::none);
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 7.0);
}

TEST_CASE("dense: shape mismatch is rejected") {
  CHECK_THROWS_AS(dense_forward(Tensor({1, 3}), Tensor({2, 2}), Tensor({2}), Activation::none),
                  InvalidArgument);
  CHECK_THROWS_AS(dense_forward(Tensor({1, 2}), Tensor({2, 2}), Tensor({3}), Activation::none),
                  InvalidArgument);
}

TEST_CASE("dense: gradients match central differences") {
  std::mt19937_64 rng(11);
  for (Activation act : {Activation::none, Activation::tanh, Activation::relu}) {
    Tensor x = random_tensor({3, 2, 4}, rng), w = random_tensor({4, 5}, rng),
           b = random_tensor({5}, rng);
    Tape tape;
    Var xv = tape.parameter("x", x), wv = tape.parameter("w", w), bv = tape.parameter("b", b);
    Gradients g = tape.backward(sum(dense(xv, wv, bv, act)));
    auto loss = [&] {
      const Tensor y = dense_forward(x, w, b, act);
      double s = 0;
      for (double v : y.data()) s += v;
      return s;
    };
    for (auto* p : {&x, &w, &b}) {
      const std::string key = p == &x ? "x" : p == &w ? "w" : "b";
      for (std::size_t i = 0; i < p->size(); ++i)
        CHECK(relative_error(g[key][i], central_difference(loss, (*p)[i])) <= 1e-6);
    }
  }
}

TEST_CASE("conv2d: 1x1 unit kernel is the identity") {
  std::mt19937_64 rng(3);
  Tensor x = random_tensor({2, 1, 5, 7}, rng);
  CHECK(conv2d_forward(x, Tensor({1, 1, 1, 1}, 1.0), Tensor({1}, 0.0), {1, 1},
                       Activation::none) == x);
}

TEST_CASE("conv2d: same padding with stride 2 halves with ceil") {
  Tensor x({1, 1, 99, 9}, 1.0);
  Tensor k({1, 1, 3, 3}, 0.1);
  Tensor y = conv2d_forward(x, k, Tensor({1}, 0.0), {2, 2}, Activation::relu);
  CHECK(y.dim(2) == 50);
  y = conv2d_forward(y, k, Tensor({1}, 0.0), {2, 2}, Activation::relu);
  CHECK(y.dim(2) == 25);
}

TEST_CASE("conv2d: matches naive padded convolution") {
  std::mt19937_64 rng(5);
  for (auto [sh, sw] : {std::pair{1, 1}, {2, 2}, {2, 1}, {3, 2}}) {
    Tensor x = random_tensor({2, 3, 9, 8}, rng), k = random_tensor({4, 3, 3, 3}, rng),
           b = random_tensor({4}, rng);
    Tensor got = conv2d_forward(x, k, b, {std::size_t(sh), std::size_t(sw)}, Activation::none);
    Tensor want = naive_conv(x, k, b, sh, sw);
    REQUIRE(got.shape() == want.shape());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-10);
  }
}

TEST_CASE("conv2d: gradients match central differences") {
  std::mt19937_64 rng(7);
  Tensor x = random_tensor({1, 2, 6, 5}, rng), k = random_tensor({3, 2, 3, 3}, rng),
         b = random_tensor({3}, rng);
  Tape tape;
  Var xv = tape.parameter("x", x), kv = tape.parameter("k", k), bv = tape.parameter("b", b);
  Gradients g = tape.backward(sum(square(conv2d(xv, kv, bv, {2, 2}, Activation::tanh))));
  auto loss = [&] {
    const Tensor y = conv2d_forward(x, k, b, {2, 2}, Activation::tanh);
    double s = 0;
    for (double v : y.data()) s += v * v;
    return s;
  };
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(relative_error(g["x"][i], central_difference(loss, x[i])) <= 1e-6);
  for (std::size_t i = 0; i < k.size(); ++i)
    CHECK(relative_error(g["k"][i], central_difference(loss, k[i])) <= 1e-6);
  for (std::size_t i = 0; i < b.size(); ++i)
    CHECK(relative_error(g["b"][i], central_difference(loss, b[i])) <= 1e-6);
}

TEST_CASE("bigru: zero parameters give zero output") {
  std::mt19937_64 rng(1);
  GruTensors zero{Tensor({3, 6}, 0.0), Tensor({2, 6}, 0.0), Tensor({6}, 0.0)};
  Tensor y = bigru_forward(random_tensor({2, 4, 3}, rng), zero, zero);
  CHECK(y.shape() == std::vector<std::size_t>{2, 4, 4});
  for (double v : y.data()) CHECK(v == 0.0);
}

TEST_CASE("bigru: reversing time swaps the direction halves") {
  std::mt19937_64 rng(2);
  const std::size_t T = 5, H = 3, in = 2;
  GruTensors w = random_gru(in, H, rng);
  Tensor x = random_tensor({1, T, in}, rng);
  Tensor xr({1, T, in});
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t i = 0; i < in; ++i) xr[t * in + i] = x[(T - 1 - t) * in + i];
  Tensor y = bigru_forward(x, w, w), yr = bigru_forward(xr, w, w);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t j = 0; j < H; ++j) {
      CHECK(y[t * 2 * H + j] == doctest::Approx(yr[(T - 1 - t) * 2 * H + H + j]).epsilon(1e-12));
      CHECK(y[t * 2 * H + H + j] == doctest::Approx(yr[(T - 1 - t) * 2 * H + j]).epsilon(1e-12));
    }
}

TEST_CASE("bigru: gradients match central differences") {
  std::mt19937_64 rng(9);
  const std::size_t T = 2, H = 2, in = 3;
  GruTensors f = random_gru(in, H, rng), b = random_gru(in, H, rng);
  Tensor x = random_tensor({1, T, in}, rng), probe = random_tensor({1, T, 2 * H}, rng);
  Tape tape;
  Var xv = tape.parameter("x", x);
  GruWeights fv{tape.parameter("fi", f.input), tape.parameter("fh", f.hidden),
                tape.parameter("fb", f.bias)};
  GruWeights bv{tape.parameter("bi", b.input), tape.parameter("bh", b.hidden),
                tape.parameter("bb", b.bias)};
  Gradients g = tape.backward(sum(mul(bigru(xv, fv, bv), tape.constant(probe))));
  auto loss = [&] {
    Tensor y = bigru_forward(x, f, b);
    double s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * probe[i];
    return s;
  };
  const std::vector<std::pair<std::string, Tensor*>> all{
      {"x", &x},         {"fi", &f.input}, {"fh", &f.hidden}, {"fb", &f.bias},
      {"bi", &b.input},  {"bh", &b.hidden}, {"bb", &b.bias}};
  for (const auto& [key, t] : all)
    for (std::size_t i = 0; i < t->size(); ++i)
      CHECK(relative_error(g[key][i], central_difference(loss, (*t)[i])) <= 1e-5);
}

TEST_CASE("softmax: closed forms and stability") {
  Tensor u = softmax(Tensor({1, 4}, 2.5));
  for (double v : u.data()) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));

  Tensor p = softmax(Tensor({1, 2}, {0.0, std::log(3.0)}));
  CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(0.75).epsilon(1e-14));

  std::mt19937_64 rng(4);
  Tensor x = random_tensor({6, 29}, rng, 5.0);
  Tensor shifted = x;
  for (std::size_t i = 0; i < 29; ++i) shifted[i] += 1234.5;
  Tensor a = softmax(x), b = softmax(shifted);
  for (std::size_t i = 0; i < 29; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
  for (std::size_t r = 0; r < 6; ++r) {
    double s = 0;
    for (std::size_t k = 0; k < 29; ++k) {
      CHECK(a.at(r, k) >= 0.0);
      s += a.at(r, k);
    }
    CHECK(std::abs(s - 1.0) <= 1e-9);
  }
}

TEST_CASE("softmax: backward matches central differences") {
  std::mt19937_64 rng(8);
  Tensor x = random_tensor({3, 5}, rng), probe = random_tensor({3, 5}, rng);
  Tape tape;
  Gradients g = tape.backward(sum(mul(softmax(tape.parameter("x", x)), tape.constant(probe))));
  auto loss = [&] {
    Tensor y = softmax(x);
    double s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * probe[i];
    return s;
  };
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(relative_error(g["x"][i], central_difference(loss, x[i])) <= 1e-6);
}

TEST_CASE("backward: closed-form and constant losses") {
  {
    Tape tape;
    Var w = tape.parameter("w", Tensor::scalar(3.0));
    Var y = mul(w, tape.constant(Tensor::scalar(1.0)));
    CHECK(tape.backward(square(y))["w"][0] == 6.0);
  }
  {
    Tape tape;
    tape.parameter("w", Tensor({2, 2}, 1.0));
    Var c = tape.constant(Tensor::scalar(4.0));
    Gradients g = tape.backward(c);
    for (double v : g["w"].data()) CHECK(v == 0.0);
  }
}

TEST_CASE("backward: before any forward pass is a state error") {
  Tape tape;
  CHECK_THROWS_AS(tape.backward(Var{}), StateError);
  Tape other;
  Var foreign = other.constant(Tensor::scalar(1.0));
  tape.constant(Tensor::scalar(2.0));
  CHECK_THROWS_AS(tape.backward(foreign), StateError);
}

TEST_CASE("forward ops are deterministic") {
  std::mt19937_64 rng(12);
  GruTensors w = random_gru(3, 4, rng);
  Tensor x = random_tensor({2, 6, 3}, rng);
  CHECK(bigru_forward(x, w, w) == bigru_forward(x, w, w));
}

TEST_CASE("sgd_step") {
  ModelParams p;
  p.add(ParamGroup::channel_decoder, "w", Tensor::scalar(1.0));
  p.add(ParamGroup::semantic_encoder, "v", Tensor({2}, {0.5, -0.5}));

  SUBCASE("zero gradient leaves parameters unchanged") {
    Gradients g{{"channel_decoder/w", Tensor::scalar(0.0)},
                {"semantic_encoder/v", Tensor({2}, 0.0)}};
    CHECK(sgd_step(p, g, 0.1) == p);
  }
  SUBCASE("single update") {
    Gradients g{{"channel_decoder/w", Tensor::scalar(2.0)},
                {"semantic_encoder/v", Tensor({2}, 0.0)}};
    CHECK(sgd_step(p, g, 0.0001).at("channel_decoder/w")[0] == doctest::Approx(0.9998).epsilon(1e-15));
  }
  SUBCASE("two steps equal one step with summed gradients") {
    Gradients g1{{"channel_decoder/w", Tensor::scalar(0.3)},
                 {"semantic_encoder/v", Tensor({2}, {1.0, 2.0})}};
    Gradients g2{{"channel_decoder/w", Tensor::scalar(-0.7)},
                 {"semantic_encoder/v", Tensor({2}, {0.25, -4.0})}};
    Gradients gs = g1;
    for (auto& [k, t] : gs) t += g2.at(k);
    ModelParams two = sgd_step(sgd_step(p, g1, 0.01), g2, 0.01);
    ModelParams one = sgd_step(p, gs, 0.01);
    for (const auto& [k, t] : one.tensors())
      for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(two.at(k)[i] == doctest::Approx(t[i]).epsilon(1e-14));
  }
  SUBCASE("key mismatch") {
    Gradients g{{"channel_decoder/w", Tensor::scalar(0.0)},
                {"semantic_encoder/other", Tensor({2}, 0.0)}};
    CHECK_THROWS_AS(sgd_step(p, g, 0.1), InvalidArgument);
    CHECK_THROWS_AS(sgd_step(p, Gradients{}, 0.1), InvalidArgument);
  }
}

TEST_CASE("ModelParams partition") {
  ModelParams p;
  p.add(ParamGroup::semantic_encoder, "a", Tensor({1}));
  p.add(ParamGroup::channel_encoder, "b", Tensor({1}));
  p.add(ParamGroup::channel_decoder, "c", Tensor({1}));
  CHECK(p.keys(ParamGroup::semantic_encoder).size() == 1);
  CHECK(ModelParams::group_of("channel_encoder/b") == ParamGroup::channel_encoder);
  CHECK_THROWS_AS(p.add("misc/d", Tensor({1})), InvalidArgument);
  CHECK_THROWS_AS(p.add(ParamGroup::channel_decoder, "c", Tensor({1})), InvalidArgument);
}
