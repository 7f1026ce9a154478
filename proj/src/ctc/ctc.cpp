#include <algorithm>
#include <cmath>
#include <limits>

#include "semcom/ctc.hpp"
#include "semcom/errors.hpp"

namespace semcom::ctc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

void check_matrix(const nn::Tensor& m, const char* what) {
  if (m.rank() != 2 || m.dim(1) != static_cast<std::size_t>(kAlphabetSize))
    throw InvalidArgument(std::string(what) + " must be [L, 29], got " +
                          nn::shape_string(m.shape()));
}

void check_target(const TextSequence& t) {
  for (Token tok : t)
    if (tok < 0 || tok >= kBlank) throw InvalidArgument("target contains an invalid token");
}

// Blank-interleaved target: blank, t1, blank, t2, ..., tK, blank.
std::vector<Token> extend(const TextSequence& t) {
  std::vector<Token> ext(2 * t.size() + 1, kBlank);
  for (std::size_t k = 0; k < t.size(); ++k) ext[2 * k + 1] = t[k];
  return ext;
}

struct Lattice {
  std::vector<Token> ext;
  std::size_t steps = 0;
  std::vector<double> alpha;  // [L, S], includes the emission at step l
  std::vector<double> beta;   // [L, S], excludes the emission at step l
  double log_likelihood = kNegInf;
};

// log_probs is [L, 29] of natural-log probabilities.
Lattice forward_backward(const nn::Tensor& log_probs, const TextSequence& t, bool with_beta) {
  Lattice lat;
  lat.ext = extend(t);
  lat.steps = log_probs.dim(0);
  const std::size_t L = lat.steps, S = lat.ext.size();
  const auto lp = [&](std::size_t l, std::size_t s) { return log_probs.at(l, lat.ext[s]); };
  const auto can_skip = [&](std::size_t s) {
    return s >= 2 && lat.ext[s] != kBlank && lat.ext[s] != lat.ext[s - 2];
  };

  lat.alpha.assign(L * S, kNegInf);
  lat.alpha[0] = lp(0, 0);
  if (S > 1) lat.alpha[1] = lp(0, 1);
  for (std::size_t l = 1; l < L; ++l)
    for (std::size_t s = 0; s < S; ++s) {
      double a = lat.alpha[(l - 1) * S + s];
      if (s >= 1) a = log_add(a, lat.alpha[(l - 1) * S + s - 1]);
      if (can_skip(s)) a = log_add(a, lat.alpha[(l - 1) * S + s - 2]);
      lat.alpha[l * S + s] = a == kNegInf ? kNegInf : a + lp(l, s);
    }
  lat.log_likelihood = lat.alpha[(L - 1) * S + S - 1];
  if (S > 1) lat.log_likelihood = log_add(lat.log_likelihood, lat.alpha[(L - 1) * S + S - 2]);

  if (!with_beta) return lat;
  lat.beta.assign(L * S, kNegInf);
  lat.beta[(L - 1) * S + S - 1] = 0.0;
  if (S > 1) lat.beta[(L - 1) * S + S - 2] = 0.0;
  for (std::size_t l = L - 1; l-- > 0;)
    for (std::size_t s = 0; s < S; ++s) {
      const auto next = [&](std::size_t s2) {
        const double b = lat.beta[(l + 1) * S + s2];
        return b == kNegInf ? kNegInf : b + lp(l + 1, s2);
      };
      double b = next(s);
      if (s + 1 < S) b = log_add(b, next(s + 1));
      if (s + 2 < S && can_skip(s + 2)) b = log_add(b, next(s + 2));
      lat.beta[l * S + s] = b;
    }
  return lat;
}

nn::Tensor log_softmax_rows(const nn::Tensor& logits) {
  nn::Tensor out = logits;
  const std::size_t K = logits.dim(1);
  for (std::size_t l = 0; l < logits.dim(0); ++l) {
    double* row = &out[l * K];
    const double mx = *std::max_element(row, row + K);
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) total += std::exp(row[k] - mx);
    const double lse = mx + std::log(total);
    for (std::size_t k = 0; k < K; ++k) row[k] -= lse;
  }
  return out;
}

}  // namespace

CtcResult ctc_loss(const nn::Tensor& probs, const TextSequence& t) {
  check_matrix(probs, "probability matrix");
  check_target(t);
  if (probs.dim(0) < min_alignment_length(t))
    return {std::numeric_limits<double>::infinity(), CtcStatus::infeasible};
  nn::Tensor logp = probs;
  for (auto& v : logp.raw()) v = std::log(v);
  const Lattice lat = forward_backward(logp, t, false);
  return {-lat.log_likelihood, CtcStatus::ok};
}

CtcGradient ctc_grad(const nn::Tensor& logits, const TextSequence& t) {
  check_matrix(logits, "logits");
  check_target(t);
  CtcGradient out;
  out.grad = nn::Tensor(logits.shape(), 0.0);
  if (logits.dim(0) < min_alignment_length(t)) {
    out.loss = std::numeric_limits<double>::infinity();
    out.status = CtcStatus::infeasible;
    return out;
  }
  const nn::Tensor logp = log_softmax_rows(logits);
  const Lattice lat = forward_backward(logp, t, true);
  out.loss = -lat.log_likelihood;

  const std::size_t L = lat.steps, S = lat.ext.size(), K = kAlphabetSize;
  for (std::size_t l = 0; l < L; ++l) {
    double* g = &out.grad[l * K];
    for (std::size_t k = 0; k < K; ++k) g[k] = std::exp(logp.at(l, k));
    for (std::size_t s = 0; s < S; ++s) {
      const double a = lat.alpha[l * S + s], b = lat.beta[l * S + s];
      if (a == kNegInf || b == kNegInf) continue;
      g[lat.ext[s]] -= std::exp(a + b - lat.log_likelihood);
    }
  }
  return out;
}

nn::Var ctc_loss(nn::Var logits, const TextSequence& t) {
  const nn::Tensor& v = logits.value();
  if (!(v.rank() == 2 || (v.rank() == 3 && v.dim(0) == 1)))
    throw InvalidArgument("ctc_loss expects [L,29] or [1,L,29] logits");
  const nn::Tensor flat = v.reshaped({v.size() / kAlphabetSize, kAlphabetSize});
  CtcGradient g = ctc_grad(flat, t);
  nn::Tensor grad = g.grad.reshaped(v.shape());
  return logits.tape()->record(
      nn::Tensor::scalar(g.loss), {logits},
      [logits, grad = std::move(grad)](const nn::Tensor& go, const nn::Tensor&, nn::Tape& tape) {
        nn::Tensor& dx = tape.grad(logits);
        for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += go[0] * grad[i];
      });
}

Alignment best_path(const nn::Tensor& probs) {
  check_matrix(probs, "probability matrix");
  Alignment a(probs.dim(0));
  for (std::size_t l = 0; l < probs.dim(0); ++l) {
    int best = -1;
    double best_v = 0.0;
    for (int k = 0; k < kAlphabetSize; ++k) {
      const double v = probs.at(l, static_cast<std::size_t>(k));
      if (std::isnan(v)) continue;
      if (best < 0 || v > best_v) {
        best = k;
        best_v = v;
      }
    }
    a[l] = best < 0 ? 0 : best;
  }
  return a;
}

TextSequence greedy_decode(const nn::Tensor& probs) { return collapse_alignment(best_path(probs)); }

}  // namespace semcom::ctc
