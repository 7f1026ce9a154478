#include <algorithm>
#include <cmath>
#include <numeric>

#include "semcom/baselines.hpp"
#include "semcom/errors.hpp"

namespace semcom::baselines {
namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

// Check-node update 2 atanh(tanh(a/2) tanh(b/2)) in a form that stays finite.
double check_node(double a, double b) {
  const double sign = (a < 0) != (b < 0) ? -1.0 : 1.0;
  const double m = sign * std::min(std::abs(a), std::abs(b));
  const double corr = std::log1p(std::exp(-std::abs(a + b))) - std::log1p(std::exp(-std::abs(a - b)));
  return std::isfinite(corr) ? m + corr : m;
}

double bit_node(double left, double right, Bit partial) {
  return partial ? right - left : right + left;
}

BitVector combine(const BitVector& a, const BitVector& b) {
  const std::size_t h = a.size();
  BitVector x(2 * h);
  for (std::size_t i = 0; i < h; ++i) {
    x[i] = a[i] ^ b[i];
    x[h + i] = b[i];
  }
  return x;
}

BitVector sc_node(const std::vector<double>& llr, const std::vector<bool>& frozen,
                  std::size_t offset, BitVector& u) {
  const std::size_t n = llr.size();
  if (n == 1) {
    const Bit bit = frozen[offset] ? 0 : (llr[0] < 0 ? 1 : 0);
    u[offset] = bit;
    return {bit};
  }
  const std::size_t h = n / 2;
  std::vector<double> l(h);
  for (std::size_t i = 0; i < h; ++i) l[i] = check_node(llr[i], llr[h + i]);
  const BitVector a = sc_node(l, frozen, offset, u);
  for (std::size_t i = 0; i < h; ++i) l[i] = bit_node(llr[i], llr[h + i], a[i]);
  const BitVector b = sc_node(l, frozen, offset + h, u);
  return combine(a, b);
}

struct ListOut {
  std::vector<std::size_t> origin;  // index of the input path each survivor extends
  std::vector<BitVector> u;         // decided bits of this subtree
  std::vector<BitVector> x;         // re-encoded subtree codeword
  std::vector<double> metric;
};

ListOut scl_node(const std::vector<std::vector<double>>& llr, const std::vector<double>& metric,
                 const std::vector<bool>& frozen, std::size_t offset, std::size_t list_size) {
  const std::size_t paths = llr.size();
  const std::size_t n = llr.front().size();
  ListOut out;
  if (n == 1) {
    struct Candidate {
      double metric;
      std::size_t origin;
      Bit bit;
    };
    std::vector<Candidate> cands;
    for (std::size_t p = 0; p < paths; ++p) {
      const double l = llr[p][0];
      cands.push_back({metric[p] + softplus(-l), p, 0});
      if (!frozen[offset]) cands.push_back({metric[p] + softplus(l), p, 1});
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.metric < b.metric; });
    if (cands.size() > list_size) cands.resize(list_size);
    for (const auto& c : cands) {
      out.origin.push_back(c.origin);
      out.u.push_back({c.bit});
      out.x.push_back({c.bit});
      out.metric.push_back(c.metric);
    }
    return out;
  }

  const std::size_t h = n / 2;
  std::vector<std::vector<double>> sub(paths, std::vector<double>(h));
  for (std::size_t p = 0; p < paths; ++p)
    for (std::size_t i = 0; i < h; ++i) sub[p][i] = check_node(llr[p][i], llr[p][h + i]);
  const ListOut left = scl_node(sub, metric, frozen, offset, list_size);

  sub.assign(left.origin.size(), std::vector<double>(h));
  for (std::size_t q = 0; q < left.origin.size(); ++q) {
    const auto& parent = llr[left.origin[q]];
    for (std::size_t i = 0; i < h; ++i) sub[q][i] = bit_node(parent[i], parent[h + i], left.x[q][i]);
  }
  const ListOut right = scl_node(sub, left.metric, frozen, offset + h, list_size);

  for (std::size_t r = 0; r < right.origin.size(); ++r) {
    const std::size_t lp = right.origin[r];
    out.origin.push_back(left.origin[lp]);
    BitVector u = left.u[lp];
    u.insert(u.end(), right.u[r].begin(), right.u[r].end());
    out.u.push_back(std::move(u));
    out.x.push_back(combine(left.x[lp], right.x[r]));
    out.metric.push_back(right.metric[r]);
  }
  return out;
}

BitVector extract_info(const BitVector& u, const PolarConfig& cfg) {
  BitVector info;
  info.reserve(cfg.k);
  for (std::size_t i = 0; i < cfg.n; ++i)
    if (!cfg.frozen[i]) info.push_back(u[i]);
  return info;
}

void check_llr(std::span<const double> llr, const PolarConfig& cfg) {
  cfg.validate();
  if (llr.size() != cfg.n) throw InvalidArgument("polar decode: LLR count must equal n");
  for (double v : llr)
    if (std::isnan(v)) throw InvalidArgument("polar decode: NaN LLR");
}

}  // namespace

std::vector<std::size_t> PolarConfig::info_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < frozen.size(); ++i)
    if (!frozen[i]) idx.push_back(i);
  return idx;
}

void PolarConfig::validate() const {
  if (!is_power_of_two(n)) throw InvalidArgument("polar: block length must be a power of two");
  if (k == 0 || k > n) throw InvalidArgument("polar: need 0 < k <= n");
  if (list_size == 0) throw InvalidArgument("polar: list size must be positive");
  if (frozen.size() != n || static_cast<std::size_t>(std::count(frozen.begin(), frozen.end(), true)) != n - k)
    throw InvalidArgument("polar: frozen set must mark exactly n - k indices");
}

std::vector<double> bhattacharyya(std::size_t n, double design_snr_db) {
  if (!is_power_of_two(n)) throw InvalidArgument("polar: block length must be a power of two");
  std::vector<double> z{std::exp(-std::pow(10.0, design_snr_db / 10.0))};
  while (z.size() < n) {
    std::vector<double> next(2 * z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      next[i] = 2.0 * z[i] - z[i] * z[i];
      next[z.size() + i] = z[i] * z[i];
    }
    z = std::move(next);
  }
  return z;
}

PolarConfig make_polar_config(std::size_t n, std::size_t k, std::size_t list_size,
                              double design_snr_db) {
  PolarConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.list_size = list_size;
  cfg.design_snr_db = design_snr_db;
  const std::vector<double> z = bhattacharyya(n, design_snr_db);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Least reliable first; equal parameters freeze the lower index first.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return z[a] > z[b]; });
  cfg.frozen.assign(n, false);
  if (k > n) throw InvalidArgument("polar: need 0 < k <= n");
  for (std::size_t i = 0; i < n - k; ++i) cfg.frozen[order[i]] = true;
  cfg.validate();
  return cfg;
}

BitVector polar_transform(std::span<const Bit> u) {
  if (!is_power_of_two(u.size())) throw InvalidArgument("polar: length must be a power of two");
  BitVector x(u.begin(), u.end());
  for (std::size_t half = u.size() / 2; half >= 1; half /= 2)
    for (std::size_t start = 0; start < x.size(); start += 2 * half)
      for (std::size_t i = start; i < start + half; ++i) x[i] ^= x[i + half];
  return x;
}

BitVector polar_encode(std::span<const Bit> info, const PolarConfig& cfg) {
  cfg.validate();
  if (info.size() != cfg.k) throw InvalidArgument("polar encode: need exactly k info bits");
  BitVector u(cfg.n, 0);
  std::size_t j = 0;
  for (std::size_t i = 0; i < cfg.n; ++i)
    if (!cfg.frozen[i]) u[i] = info[j++] & 1u;
  return polar_transform(u);
}

BitVector polar_sc_decode(std::span<const double> llr, const PolarConfig& cfg) {
  check_llr(llr, cfg);
  BitVector u(cfg.n, 0);
  sc_node(std::vector<double>(llr.begin(), llr.end()), cfg.frozen, 0, u);
  return extract_info(u, cfg);
}

BitVector polar_scl_decode(std::span<const double> llr, const PolarConfig& cfg) {
  check_llr(llr, cfg);
  const ListOut out = scl_node({std::vector<double>(llr.begin(), llr.end())}, {0.0}, cfg.frozen, 0,
                               cfg.list_size);
  const auto best = static_cast<std::size_t>(
      std::min_element(out.metric.begin(), out.metric.end()) - out.metric.begin());
  return extract_info(out.u[best], cfg);
}

}  // namespace semcom::baselines
