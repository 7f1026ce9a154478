#include "semcom/layers.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "semcom/errors.hpp"

namespace semcom::nn {
namespace {

double activate(double v, Activation act) {
  switch (act) {
    case Activation::relu: return v > 0.0 ? v : 0.0;
    case Activation::tanh: return std::tanh(v);
    case Activation::none: break;
  }
  return v;
}

// Derivative expressed through the activation output y.
double activate_grad(double y, Activation act) {
  switch (act) {
    case Activation::relu: return y > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: return 1.0 - y * y;
    case Activation::none: break;
  }
  return 1.0;
}

double sigmoid(double v) {
  if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

// Scales the gradient by the activation derivative.
Tensor through_activation(const Tensor& grad_out, const Tensor& y, Activation act) {
  if (act == Activation::none) return grad_out;
  Tensor g = grad_out;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= activate_grad(y[i], act);
  return g;
}

struct ConvGeometry {
  std::size_t batch, in_ch, height, width;
  std::size_t out_ch, kh, kw;
  std::size_t sh, sw;
  std::size_t out_h, out_w;
  std::size_t pad_top, pad_left;
};

ConvGeometry conv_geometry(const Tensor& x, const Tensor& k, const Tensor& b, Stride stride) {
  require(x.rank() == 4, "conv2d expects x[B,C,H,W], got " + shape_string(x.shape()));
  require(k.rank() == 4, "conv2d expects kernel[C',C,kh,kw], got " + shape_string(k.shape()));
  require(k.dim(1) == x.dim(1), "conv2d channel mismatch: " + shape_string(x.shape()) + " vs " +
                                    shape_string(k.shape()));
  require(b.rank() == 1 && b.dim(0) == k.dim(0), "conv2d bias must be [C']");
  require(stride.time > 0 && stride.freq > 0, "conv2d stride must be positive");
  ConvGeometry g{};
  g.batch = x.dim(0);
  g.in_ch = x.dim(1);
  g.height = x.dim(2);
  g.width = x.dim(3);
  g.out_ch = k.dim(0);
  g.kh = k.dim(2);
  g.kw = k.dim(3);
  g.sh = stride.time;
  g.sw = stride.freq;
  g.out_h = (g.height + g.sh - 1) / g.sh;
  g.out_w = (g.width + g.sw - 1) / g.sw;
  const auto pad_total = [](std::size_t out, std::size_t s, std::size_t kk, std::size_t in) {
    const std::size_t need = (out - 1) * s + kk;
    return need > in ? need - in : std::size_t{0};
  };
  g.pad_top = pad_total(g.out_h, g.sh, g.kh, g.height) / 2;
  g.pad_left = pad_total(g.out_w, g.sw, g.kw, g.width) / 2;
  return g;
}

Tensor conv_raw(const Tensor& x, const Tensor& k, const Tensor& b, const ConvGeometry& g) {
  Tensor y({g.batch, g.out_ch, g.out_h, g.out_w});
  for (std::size_t n = 0; n < g.batch; ++n)
    for (std::size_t o = 0; o < g.out_ch; ++o) {
      double* yo = &y[((n * g.out_ch + o) * g.out_h) * g.out_w];
      for (std::size_t i = 0; i < g.out_h * g.out_w; ++i) yo[i] = b[o];
      for (std::size_t c = 0; c < g.in_ch; ++c) {
        const double* xc = &x[((n * g.in_ch + c) * g.height) * g.width];
        for (std::size_t u = 0; u < g.kh; ++u)
          for (std::size_t v = 0; v < g.kw; ++v) {
            const double w = k[((o * g.in_ch + c) * g.kh + u) * g.kw + v];
            for (std::size_t i = 0; i < g.out_h; ++i) {
              const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(i * g.sh + u) -
                                       static_cast<std::ptrdiff_t>(g.pad_top);
              if (r < 0 || r >= static_cast<std::ptrdiff_t>(g.height)) continue;
              const double* xr = xc + static_cast<std::size_t>(r) * g.width;
              double* yr = yo + i * g.out_w;
              for (std::size_t j = 0; j < g.out_w; ++j) {
                const std::ptrdiff_t col = static_cast<std::ptrdiff_t>(j * g.sw + v) -
                                           static_cast<std::ptrdiff_t>(g.pad_left);
                if (col < 0 || col >= static_cast<std::ptrdiff_t>(g.width)) continue;
                yr[j] += w * xr[col];
              }
            }
          }
      }
    }
  return y;
}

// One GRU direction: caches everything the backward sweep needs.
struct GruTrace {
  std::size_t batch, steps, in, hidden;
  bool reversed;
  std::vector<double> z, r, c, h_prev, q;  // each [B,T,H] in processing order
  Tensor out;                              // [B,T,H] in time order
};

GruTrace gru_run(const Tensor& x, const Tensor& wx, const Tensor& wh, const Tensor& bias,
                 bool reversed) {
  GruTrace tr{};
  tr.batch = x.dim(0);
  tr.steps = x.dim(1);
  tr.in = x.dim(2);
  tr.hidden = wh.dim(0);
  tr.reversed = reversed;
  const std::size_t H = tr.hidden, H3 = 3 * H;
  const std::size_t cells = tr.batch * tr.steps * H;
  tr.z.assign(cells, 0.0);
  tr.r.assign(cells, 0.0);
  tr.c.assign(cells, 0.0);
  tr.h_prev.assign(cells, 0.0);
  tr.q.assign(cells, 0.0);
  tr.out = Tensor({tr.batch, tr.steps, H});

  std::vector<double> a(H3), hh(H3), h(H), qh(H);
  for (std::size_t n = 0; n < tr.batch; ++n) {
    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t s = 0; s < tr.steps; ++s) {
      const std::size_t t = reversed ? tr.steps - 1 - s : s;
      const double* xt = &x[(n * tr.steps + t) * tr.in];
      for (std::size_t j = 0; j < H3; ++j) a[j] = bias[j];
      for (std::size_t i = 0; i < tr.in; ++i) {
        const double xv = xt[i];
        if (xv == 0.0) continue;
        const double* w = &wx[i * H3];
        for (std::size_t j = 0; j < H3; ++j) a[j] += xv * w[j];
      }
      // update and reset gates use h_{t-1} directly
      std::fill(hh.begin(), hh.begin() + 2 * H, 0.0);
      for (std::size_t i = 0; i < H; ++i) {
        const double hv = h[i];
        if (hv == 0.0) continue;
        const double* w = &wh[i * H3];
        for (std::size_t j = 0; j < 2 * H; ++j) hh[j] += hv * w[j];
      }
      const std::size_t base = (n * tr.steps + s) * H;
      for (std::size_t j = 0; j < H; ++j) {
        tr.z[base + j] = sigmoid(a[j] + hh[j]);
        tr.r[base + j] = sigmoid(a[H + j] + hh[H + j]);
        tr.h_prev[base + j] = h[j];
        qh[j] = tr.r[base + j] * h[j];
        tr.q[base + j] = qh[j];
      }
      for (std::size_t j = 0; j < H; ++j) hh[2 * H + j] = 0.0;
      for (std::size_t i = 0; i < H; ++i) {
        const double qv = qh[i];
        if (qv == 0.0) continue;
        const double* w = &wh[i * H3 + 2 * H];
        for (std::size_t j = 0; j < H; ++j) hh[2 * H + j] += qv * w[j];
      }
      double* o = &tr.out[(n * tr.steps + t) * H];
      for (std::size_t j = 0; j < H; ++j) {
        const double c = std::tanh(a[2 * H + j] + hh[2 * H + j]);
        tr.c[base + j] = c;
        const double z = tr.z[base + j];
        h[j] = (1.0 - z) * h[j] + z * c;
        o[j] = h[j];
      }
    }
  }
  return tr;
}

// Backpropagation through time for one direction. grad_out is [B,T,H] in time order.
void gru_backprop(const GruTrace& tr, const Tensor& x, const Tensor& wx, const Tensor& wh,
                  const std::vector<double>& grad_out, Tensor* dx, Tensor* dwx, Tensor* dwh,
                  Tensor* db) {
  const std::size_t H = tr.hidden, H3 = 3 * H;
  std::vector<double> dh(H), dh_prev(H), da(H3), dq(H);
  for (std::size_t n = 0; n < tr.batch; ++n) {
    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t s = tr.steps; s-- > 0;) {
      const std::size_t t = tr.reversed ? tr.steps - 1 - s : s;
      const std::size_t base = (n * tr.steps + s) * H;
      const double* go = &grad_out[(n * tr.steps + t) * H];
      for (std::size_t j = 0; j < H; ++j) dh[j] += go[j];

      for (std::size_t j = 0; j < H; ++j) {
        const double z = tr.z[base + j], c = tr.c[base + j], hp = tr.h_prev[base + j];
        const double dz = dh[j] * (c - hp);
        const double dc = dh[j] * z;
        dh_prev[j] = dh[j] * (1.0 - z);
        da[j] = dz * z * (1.0 - z);
        da[2 * H + j] = dc * (1.0 - c * c);
      }
      // candidate path through q = r * h_prev
      for (std::size_t i = 0; i < H; ++i) {
        const double* w = &wh[i * H3 + 2 * H];
        double acc = 0.0;
        for (std::size_t j = 0; j < H; ++j) acc += w[j] * da[2 * H + j];
        dq[i] = acc;
      }
      for (std::size_t j = 0; j < H; ++j) {
        const double r = tr.r[base + j], hp = tr.h_prev[base + j];
        const double dr = dq[j] * hp;
        dh_prev[j] += dq[j] * r;
        da[H + j] = dr * r * (1.0 - r);
      }
      if (dwh) {
        for (std::size_t i = 0; i < H; ++i) {
          const double hp = tr.h_prev[base + i], qv = tr.q[base + i];
          double* w = &(*dwh)[i * H3];
          for (std::size_t j = 0; j < 2 * H; ++j) w[j] += hp * da[j];
          for (std::size_t j = 0; j < H; ++j) w[2 * H + j] += qv * da[2 * H + j];
        }
      }
      for (std::size_t i = 0; i < H; ++i) {
        const double* w = &wh[i * H3];
        double acc = 0.0;
        for (std::size_t j = 0; j < 2 * H; ++j) acc += w[j] * da[j];
        dh_prev[i] += acc;
      }
      if (db)
        for (std::size_t j = 0; j < H3; ++j) (*db)[j] += da[j];
      const double* xt = &x[(n * tr.steps + t) * tr.in];
      if (dwx) {
        for (std::size_t i = 0; i < tr.in; ++i) {
          const double xv = xt[i];
          if (xv == 0.0) continue;
          double* w = &(*dwx)[i * H3];
          for (std::size_t j = 0; j < H3; ++j) w[j] += xv * da[j];
        }
      }
      if (dx) {
        double* dxt = &(*dx)[(n * tr.steps + t) * tr.in];
        for (std::size_t i = 0; i < tr.in; ++i) {
          const double* w = &wx[i * H3];
          double acc = 0.0;
          for (std::size_t j = 0; j < H3; ++j) acc += w[j] * da[j];
          dxt[i] += acc;
        }
      }
      dh.swap(dh_prev);
    }
  }
}

void check_gru(const Tensor& x, const Tensor& wx, const Tensor& wh, const Tensor& b) {
  require(x.rank() == 3, "bigru expects x[B,T,in], got " + shape_string(x.shape()));
  require(wh.rank() == 2 && wh.dim(1) == 3 * wh.dim(0), "GRU hidden weights must be [H,3H]");
  const std::size_t H = wh.dim(0);
  require(wx.rank() == 2 && wx.dim(0) == x.dim(2) && wx.dim(1) == 3 * H,
          "GRU input weights must be [in,3H], got " + shape_string(wx.shape()));
  require(b.rank() == 1 && b.dim(0) == 3 * H, "GRU bias must be [3H]");
}

Tensor softmax_raw(const Tensor& x) {
  require(x.rank() >= 1, "softmax of a scalar-less tensor");
  Tensor y = x;
  const std::size_t K = x.shape().back();
  for (std::size_t r = 0; r < x.size() / K; ++r) {
    double* row = &y[r * K];
    const double mx = *std::max_element(row, row + K);
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      row[k] = std::exp(row[k] - mx);
      total += row[k];
    }
    for (std::size_t k = 0; k < K; ++k) row[k] /= total;
  }
  return y;
}

}  // namespace

Var dense(Var x, Var weight, Var bias, Activation act) {
  const Tensor& xv = x.value();
  const Tensor& w = weight.value();
  const Tensor& b = bias.value();
  require(w.rank() == 2, "dense weight must be [in,out], got " + shape_string(w.shape()));
  const std::size_t in = w.dim(0), out = w.dim(1);
  require(xv.rank() >= 1 && xv.shape().back() == in,
          "dense input " + shape_string(xv.shape()) + " does not match weight " +
              shape_string(w.shape()));
  require(b.rank() == 1 && b.dim(0) == out, "dense bias must be [out]");
  const std::size_t rows = xv.size() / in;

  std::vector<std::size_t> yshape = xv.shape();
  yshape.back() = out;
  Tensor y(yshape);
  for (std::size_t r = 0; r < rows; ++r) {
    double* yr = &y[r * out];
    for (std::size_t o = 0; o < out; ++o) yr[o] = b[o];
    for (std::size_t i = 0; i < in; ++i) {
      const double v = xv[r * in + i];
      if (v == 0.0) continue;
      const double* wr = &w[i * out];
      for (std::size_t o = 0; o < out; ++o) yr[o] += v * wr[o];
    }
    for (std::size_t o = 0; o < out; ++o) yr[o] = activate(yr[o], act);
  }

  return x.tape()->record(
      std::move(y), {x, weight, bias},
      [x, weight, bias, act, rows, in, out](const Tensor& grad_out, const Tensor& yv, Tape& t) {
        const Tensor g = through_activation(grad_out, yv, act);
        const Tensor& xv = x.value();
        const Tensor& w = weight.value();
        if (t.needs_grad(weight)) {
          Tensor& dw = t.grad(weight);
          for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t i = 0; i < in; ++i) {
              const double v = xv[r * in + i];
              if (v == 0.0) continue;
              double* d = &dw[i * out];
              for (std::size_t o = 0; o < out; ++o) d[o] += v * g[r * out + o];
            }
        }
        if (t.needs_grad(bias)) {
          Tensor& db = t.grad(bias);
          for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t o = 0; o < out; ++o) db[o] += g[r * out + o];
        }
        if (t.needs_grad(x)) {
          Tensor& dx = t.grad(x);
          for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t i = 0; i < in; ++i) {
              const double* wr = &w[i * out];
              double acc = 0.0;
              for (std::size_t o = 0; o < out; ++o) acc += wr[o] * g[r * out + o];
              dx[r * in + i] += acc;
            }
        }
      });
}

Var conv2d(Var x, Var kernel, Var bias, Stride stride, Activation act) {
  const ConvGeometry g = conv_geometry(x.value(), kernel.value(), bias.value(), stride);
  Tensor y = conv_raw(x.value(), kernel.value(), bias.value(), g);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = activate(y[i], act);

  return x.tape()->record(
      std::move(y), {x, kernel, bias},
      [x, kernel, bias, act, g](const Tensor& grad_out, const Tensor& yv, Tape& t) {
        const Tensor go = through_activation(grad_out, yv, act);
        const Tensor& xv = x.value();
        const Tensor& k = kernel.value();
        Tensor* dx = t.needs_grad(x) ? &t.grad(x) : nullptr;
        Tensor* dk = t.needs_grad(kernel) ? &t.grad(kernel) : nullptr;
        if (t.needs_grad(bias)) {
          Tensor& db = t.grad(bias);
          for (std::size_t n = 0; n < g.batch; ++n)
            for (std::size_t o = 0; o < g.out_ch; ++o) {
              const double* gp = &go[((n * g.out_ch + o) * g.out_h) * g.out_w];
              for (std::size_t i = 0; i < g.out_h * g.out_w; ++i) db[o] += gp[i];
            }
        }
        if (!dx && !dk) return;
        for (std::size_t n = 0; n < g.batch; ++n)
          for (std::size_t o = 0; o < g.out_ch; ++o) {
            const double* gp = &go[((n * g.out_ch + o) * g.out_h) * g.out_w];
            for (std::size_t c = 0; c < g.in_ch; ++c) {
              const std::size_t xoff = ((n * g.in_ch + c) * g.height) * g.width;
              for (std::size_t u = 0; u < g.kh; ++u)
                for (std::size_t v = 0; v < g.kw; ++v) {
                  const std::size_t kidx = ((o * g.in_ch + c) * g.kh + u) * g.kw + v;
                  const double w = k[kidx];
                  double kacc = 0.0;
                  for (std::size_t i = 0; i < g.out_h; ++i) {
                    const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(i * g.sh + u) -
                                             static_cast<std::ptrdiff_t>(g.pad_top);
                    if (r < 0 || r >= static_cast<std::ptrdiff_t>(g.height)) continue;
                    const std::size_t row = xoff + static_cast<std::size_t>(r) * g.width;
                    for (std::size_t j = 0; j < g.out_w; ++j) {
                      const std::ptrdiff_t col = static_cast<std::ptrdiff_t>(j * g.sw + v) -
                                                 static_cast<std::ptrdiff_t>(g.pad_left);
                      if (col < 0 || col >= static_cast<std::ptrdiff_t>(g.width)) continue;
                      const double gv = gp[i * g.out_w + j];
                      kacc += gv * xv[row + static_cast<std::size_t>(col)];
                      if (dx) (*dx)[row + static_cast<std::size_t>(col)] += gv * w;
                    }
                  }
                  if (dk) (*dk)[kidx] += kacc;
                }
            }
          }
      });
}

Var bigru(Var x, const GruWeights& fw, const GruWeights& bw) {
  const Tensor& xv = x.value();
  check_gru(xv, fw.input.value(), fw.hidden.value(), fw.bias.value());
  check_gru(xv, bw.input.value(), bw.hidden.value(), bw.bias.value());
  require(fw.hidden.value().dim(0) == bw.hidden.value().dim(0),
          "bigru directions must share the hidden size");

  auto ftr = std::make_shared<GruTrace>(
      gru_run(xv, fw.input.value(), fw.hidden.value(), fw.bias.value(), false));
  auto btr = std::make_shared<GruTrace>(
      gru_run(xv, bw.input.value(), bw.hidden.value(), bw.bias.value(), true));
  const std::size_t B = xv.dim(0), T = xv.dim(1), H = ftr->hidden;
  Tensor y({B, T, 2 * H});
  for (std::size_t i = 0; i < B * T; ++i)
    for (std::size_t j = 0; j < H; ++j) {
      y[i * 2 * H + j] = ftr->out[i * H + j];
      y[i * 2 * H + H + j] = btr->out[i * H + j];
    }

  std::vector<Var> parents{x, fw.input, fw.hidden, fw.bias, bw.input, bw.hidden, bw.bias};
  return x.tape()->record(
      std::move(y), parents,
      [x, fw, bw, ftr, btr, B, T, H](const Tensor& grad_out, const Tensor&, Tape& t) {
        std::vector<double> gf(B * T * H), gb(B * T * H);
        for (std::size_t i = 0; i < B * T; ++i)
          for (std::size_t j = 0; j < H; ++j) {
            gf[i * H + j] = grad_out[i * 2 * H + j];
            gb[i * H + j] = grad_out[i * 2 * H + H + j];
          }
        Tensor* dx = t.needs_grad(x) ? &t.grad(x) : nullptr;
        const auto run = [&](const GruTrace& tr, const GruWeights& w,
                             const std::vector<double>& go) {
          gru_backprop(tr, x.value(), w.input.value(), w.hidden.value(), go, dx,
                       t.needs_grad(w.input) ? &t.grad(w.input) : nullptr,
                       t.needs_grad(w.hidden) ? &t.grad(w.hidden) : nullptr,
                       t.needs_grad(w.bias) ? &t.grad(w.bias) : nullptr);
        };
        run(*ftr, fw, gf);
        run(*btr, bw, gb);
      });
}

Var softmax(Var x) {
  Tensor y = softmax_raw(x.value());
  return x.tape()->record(std::move(y), {x}, [x](const Tensor& g, const Tensor& yv, Tape& t) {
    const std::size_t K = yv.shape().back();
    Tensor& dx = t.grad(x);
    for (std::size_t r = 0; r < yv.size() / K; ++r) {
      double dot = 0.0;
      for (std::size_t k = 0; k < K; ++k) dot += g[r * K + k] * yv[r * K + k];
      for (std::size_t k = 0; k < K; ++k) dx[r * K + k] += yv[r * K + k] * (g[r * K + k] - dot);
    }
  });
}

Var reshape(Var x, std::vector<std::size_t> shape) {
  Tensor y = x.value().reshaped(std::move(shape));
  return x.tape()->record(std::move(y), {x}, [x](const Tensor& g, const Tensor&, Tape& t) {
    Tensor& dx = t.grad(x);
    for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i];
  });
}

Var conv_to_sequence(Var x) {
  const Tensor& xv = x.value();
  require(xv.rank() == 4, "conv_to_sequence expects [B,C,T,F]");
  const std::size_t B = xv.dim(0), C = xv.dim(1), T = xv.dim(2), F = xv.dim(3);
  Tensor y({B, T, C * F});
  for (std::size_t n = 0; n < B; ++n)
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t tt = 0; tt < T; ++tt)
        for (std::size_t f = 0; f < F; ++f)
          y[(n * T + tt) * C * F + c * F + f] = xv[((n * C + c) * T + tt) * F + f];
  return x.tape()->record(std::move(y), {x},
                          [x, B, C, T, F](const Tensor& g, const Tensor&, Tape& t) {
                            Tensor& dx = t.grad(x);
                            for (std::size_t n = 0; n < B; ++n)
                              for (std::size_t c = 0; c < C; ++c)
                                for (std::size_t tt = 0; tt < T; ++tt)
                                  for (std::size_t f = 0; f < F; ++f)
                                    dx[((n * C + c) * T + tt) * F + f] +=
                                        g[(n * T + tt) * C * F + c * F + f];
                          });
}

Var sum(Var x) {
  double total = 0.0;
  for (double v : x.value().data()) total += v;
  return x.tape()->record(Tensor::scalar(total), {x},
                          [x](const Tensor& g, const Tensor&, Tape& t) {
                            Tensor& dx = t.grad(x);
                            for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += g[0];
                          });
}

Var mul(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require(av.shape() == bv.shape(), "mul shape mismatch");
  Tensor y = av;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= bv[i];
  return a.tape()->record(std::move(y), {a, b}, [a, b](const Tensor& g, const Tensor&, Tape& t) {
    if (t.needs_grad(a)) {
      Tensor& da = t.grad(a);
      for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i] * b.value()[i];
    }
    if (t.needs_grad(b)) {
      Tensor& db = t.grad(b);
      for (std::size_t i = 0; i < g.size(); ++i) db[i] += g[i] * a.value()[i];
    }
  });
}

Var square(Var x) { return mul(x, x); }

Tensor dense_forward(const Tensor& x, const Tensor& weight, const Tensor& bias, Activation act) {
  Tape tape;
  return dense(tape.constant(x), tape.constant(weight), tape.constant(bias), act).value();
}

Tensor conv2d_forward(const Tensor& x, const Tensor& kernel, const Tensor& bias, Stride stride,
                      Activation act) {
  const ConvGeometry g = conv_geometry(x, kernel, bias, stride);
  Tensor y = conv_raw(x, kernel, bias, g);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = activate(y[i], act);
  return y;
}

Tensor softmax(const Tensor& x) { return softmax_raw(x); }

Tensor bigru_forward(const Tensor& x, const GruTensors& fw, const GruTensors& bw) {
  Tape tape;
  const GruWeights f{tape.constant(fw.input), tape.constant(fw.hidden), tape.constant(fw.bias)};
  const GruWeights b{tape.constant(bw.input), tape.constant(bw.hidden), tape.constant(bw.bias)};
  return bigru(tape.constant(x), f, b).value();
}

}  // namespace semcom::nn
