#include "tmimo/coding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tmimo {

double max_star(double a, double b) {
  if (a <= kLogZero) return std::max(a, b);
  if (b <= kLogZero) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(-std::fabs(a - b)));
}

const Trellis& Trellis::rsc57() {
  static const Trellis t = [] {
    Trellis tr;
    int idx = 0;
    for (int s = 0; s < kNumStates; ++s) {
      const int a1 = (s >> 1) & 1;  // a_{t-1}
      const int a2 = s & 1;         // a_{t-2}
      for (int u = 0; u < 2; ++u) {
        const int a = u ^ a1 ^ a2;
        const int p = a ^ a2;
        const int ns = (a << 1) | a1;
        tr.next[s][u] = ns;
        tr.parity[s][u] = p;
        tr.branches[idx++] = {s, ns, u, p};
      }
    }
    return tr;
  }();
  return t;
}

int Trellis::termination_input(int state) const {
  const int a1 = (state >> 1) & 1;
  const int a2 = state & 1;
  return a1 ^ a2;
}

std::size_t info_length(std::size_t coded_length) {
  if (coded_length % 2 != 0 || coded_length < 2 * Trellis::kMemory)
    throw std::invalid_argument("coded length must be even and cover the tail");
  return coded_length / 2 - Trellis::kMemory;
}

std::vector<int> encode(std::span<const int> info_bits) {
  const Trellis& tr = Trellis::rsc57();
  std::vector<int> out;
  out.reserve(2 * (info_bits.size() + Trellis::kMemory));
  int state = 0;
  auto step = [&](int u) {
    out.push_back(u ? +1 : -1);
    out.push_back(tr.parity[state][u] ? +1 : -1);
    state = tr.next[state][u];
  };
  for (int b : info_bits) step(b > 0 ? 1 : 0);
  for (int i = 0; i < Trellis::kMemory; ++i) step(tr.termination_input(state));
  return out;
}

std::vector<int> information_bits(std::span<const int> coded) {
  const std::size_t n = info_length(coded.size());
  std::vector<int> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = coded[2 * t];
  return out;
}

std::vector<double> information_llrs(std::span<const double> app_llrs) {
  const std::size_t n = info_length(app_llrs.size());
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = app_llrs[2 * t];
  return out;
}

std::vector<std::uint8_t> selective_stages(std::span<const std::uint8_t> rwc, std::size_t window) {
  if (window < 1) throw std::invalid_argument("selective decoding window must be >= 1");
  if (rwc.size() % 2 != 0) throw std::invalid_argument("flag length must be even");
  const std::size_t stages = rwc.size() / 2;
  std::vector<std::uint8_t> sel(stages, 0);
  const std::size_t reach = window - 1;
  // Sweep with the last non-RWC stage seen on the left and the next on the right.
  std::vector<std::uint8_t> anchor(stages, 0);
  for (std::size_t t = 0; t < stages; ++t) anchor[t] = (!rwc[2 * t] || !rwc[2 * t + 1]) ? 1 : 0;
  std::size_t last = std::numeric_limits<std::size_t>::max();
  for (std::size_t t = 0; t < stages; ++t) {
    if (anchor[t]) last = t;
    if (last != std::numeric_limits<std::size_t>::max() && t - last <= reach) sel[t] = 1;
  }
  last = std::numeric_limits<std::size_t>::max();
  for (std::size_t t = stages; t-- > 0;) {
    if (anchor[t]) last = t;
    if (last != std::numeric_limits<std::size_t>::max() && last - t <= reach) sel[t] = 1;
  }
  return sel;
}

SisoResult siso_decode(std::span<const double> apriori, const Trellis& trellis, const DecodeMode& mode,
                       const SisoResult* previous) {
  const std::size_t k = apriori.size();
  if (k % 2 != 0 || k < 2) throw std::invalid_argument("siso_decode: a-priori length must be even");
  const std::size_t stages = k / 2;
  constexpr int ns = Trellis::kNumStates;

  std::vector<std::uint8_t> stage_sel;
  if (mode.kind == DecodeMode::Kind::kSelective) {
    if (mode.rwc.size() != k) throw std::invalid_argument("siso_decode: flag length mismatch");
    stage_sel = selective_stages(mode.rwc, mode.window);
  } else {
    stage_sel.assign(stages, 1);
  }
  const bool all_selected = std::all_of(stage_sel.begin(), stage_sel.end(), [](auto v) { return v != 0; });
  if (!all_selected) {
    if (previous == nullptr) throw std::invalid_argument("siso_decode: selective mode needs the previous result");
    if (previous->app_llrs.size() != k || previous->apriori_used.size() != k)
      throw std::invalid_argument("siso_decode: previous result length mismatch");
  }

  SisoResult res;
  res.apriori_used.assign(apriori.begin(), apriori.end());
  if (!all_selected) {
    res.app_llrs = previous->app_llrs;
    res.ext_llrs = previous->ext_llrs;
    for (std::size_t t = 0; t < stages; ++t)
      if (!stage_sel[t]) {
        res.apriori_used[2 * t] = previous->apriori_used[2 * t];
        res.apriori_used[2 * t + 1] = previous->apriori_used[2 * t + 1];
      }
  } else {
    res.app_llrs.assign(k, 0.0);
    res.ext_llrs.assign(k, 0.0);
  }
  res.decoded.assign(k, 0);

  const auto& la = res.apriori_used;
  auto gamma = [&](std::size_t t, const Trellis::Branch& b) {
    const double c0 = b.input ? 1.0 : -1.0;
    const double c1 = b.parity ? 1.0 : -1.0;
    return 0.5 * (c0 * la[2 * t] + c1 * la[2 * t + 1]);
  };

  auto normalize = [](std::array<double, ns>& m) {
    const double top = *std::max_element(m.begin(), m.end());
    for (auto& v : m)
      if (v > kLogZero) v -= top;
  };

  // Backward pass; beta_{t+1} is stored only when stage t is recomputed.
  std::vector<std::array<double, ns>> beta_store(stages);
  std::array<double, ns> beta{};
  beta.fill(kLogZero);
  beta[0] = 0.0;
  for (std::size_t t = stages; t-- > 0;) {
    if (stage_sel[t]) {
      beta_store[t] = beta;
      ++res.beta_store_count;
    }
    std::array<double, ns> prev{};
    prev.fill(kLogZero);
    for (const auto& b : trellis.branches) prev[b.from] = max_star(prev[b.from], gamma(t, b) + beta[b.to]);
    normalize(prev);
    beta = prev;
  }

  std::array<double, ns> alpha{};
  alpha.fill(kLogZero);
  alpha[0] = 0.0;
  for (std::size_t t = 0; t < stages; ++t) {
    if (stage_sel[t]) {
      const auto& bnext = beta_store[t];
      double sys_pos = kLogZero, sys_neg = kLogZero, par_pos = kLogZero, par_neg = kLogZero;
      for (const auto& b : trellis.branches) {
        const double delta = alpha[b.from] + gamma(t, b) + bnext[b.to];
        (b.input ? sys_pos : sys_neg) = max_star(b.input ? sys_pos : sys_neg, delta);
        (b.parity ? par_pos : par_neg) = max_star(b.parity ? par_pos : par_neg, delta);
      }
      for (std::size_t x = 0; x < 2; ++x) {
        const std::size_t pos = 2 * t + x;
        res.app_llrs[pos] = x == 0 ? sys_pos - sys_neg : par_pos - par_neg;
        res.ext_llrs[pos] = res.app_llrs[pos] - la[pos];
        res.decoded[pos] = 1;
      }
    }
    std::array<double, ns> nxt{};
    nxt.fill(kLogZero);
    for (const auto& b : trellis.branches) nxt[b.to] = max_star(nxt[b.to], alpha[b.from] + gamma(t, b));
    normalize(nxt);
    alpha = nxt;
  }
  return res;
}

double estimate_ber(std::span<const double> app_llrs_info) {
  if (app_llrs_info.empty()) throw std::invalid_argument("estimate_ber: empty input");
  double s = 0.0;
  for (double l : app_llrs_info) s += 1.0 / (1.0 + std::exp(std::fabs(l)));
  return s / static_cast<double>(app_llrs_info.size());
}

}  // namespace tmimo
