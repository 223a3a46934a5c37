#include "tmimo/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tmimo {

std::string_view to_string(ClipMode mode) {
  switch (mode) {
    case ClipMode::kExact: return "exact";
    case ClipMode::kSuOnly: return "su";
    case ClipMode::kSuPdc: return "su_pdc";
    case ClipMode::kSuSpdc: return "su_spdc";
    case ClipMode::kSuDapdc: return "su_dapdc";
    case ClipMode::kSuSdapdc: return "su_sdapdc";
  }
  return "?";
}

ClipMode parse_clip_mode(std::string_view name) {
  if (name == "exact") return ClipMode::kExact;
  if (name == "su" || name == "su_only") return ClipMode::kSuOnly;
  if (name == "su_pdc") return ClipMode::kSuPdc;
  if (name == "su_spdc") return ClipMode::kSuSpdc;
  if (name == "su_dapdc") return ClipMode::kSuDapdc;
  if (name == "su_sdapdc") return ClipMode::kSuSdapdc;
  throw std::invalid_argument("unknown demapper mode: " + std::string(name));
}

double prior_metric_block(std::span<const int> bits, std::span<const double> l_a, std::optional<std::size_t> exclude_bit) {
  if (bits.size() != l_a.size()) throw std::invalid_argument("prior_metric_block: length mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (exclude_bit && *exclude_bit == j) continue;
    s += 0.5 * (std::fabs(l_a[j]) - bits[j] * l_a[j]);
  }
  return s;
}

double partial_distance(double parent_pd, std::size_t level, std::span<const std::size_t> labels,
                        const ChannelUse& use, const Constellation& c, std::span<const double> l_a) {
  const std::size_t n = use.r.cols();
  const std::size_t m = c.bits_per_symbol();
  if (level >= n || labels.size() != n || l_a.size() != n * m)
    throw std::invalid_argument("partial_distance: inconsistent sizes");
  Complex e = use.y_rot[level];
  for (std::size_t j = level; j < n; ++j) e -= use.r(level, j) * c.point(labels[j]);
  std::vector<int> bits(m);
  for (std::size_t b = 0; b < m; ++b) bits[b] = c.bit(labels[level], b);
  return parent_pd + std::norm(e) / use.noise_var + prior_metric_block(bits, l_a.subspan(level * m, m));
}

namespace {

int sign_of(double v) { return v < 0.0 ? -1 : +1; }

}  // namespace

double clip_radius(ClipMode mode, double l_a, double lambda_map, int c_map, double l_ter) {
  if (!clips(mode) || !std::isfinite(lambda_map)) return kInf;
  const double s = sign_of(l_a);
  const double c = c_map;
  switch (mode) {
    case ClipMode::kSuPdc: return lambda_map + std::fabs(l_a) + l_ter + 0.5 * (c - s) * l_a;
    case ClipMode::kSuSpdc: return lambda_map + std::fabs(l_a) + l_ter + (c - s) * l_a;
    case ClipMode::kSuDapdc: return lambda_map + l_ter + 0.5 * (c - s) * (c * std::fabs(l_a) + l_a);
    case ClipMode::kSuSdapdc: return lambda_map + l_ter;
    default: return kInf;
  }
}

double fallback_radius(ClipMode mode, double l_a, double lambda_map, int c_map, double l_ter) {
  switch (mode) {
    case ClipMode::kSuPdc:
    case ClipMode::kSuDapdc: return clip_radius(ClipMode::kSuPdc, l_a, lambda_map, c_map, l_ter);
    case ClipMode::kSuSpdc:
    case ClipMode::kSuSdapdc: return clip_radius(ClipMode::kSuSpdc, l_a, lambda_map, c_map, l_ter);
    default: return kInf;
  }
}

double constraint_radius(std::span<const int> node_bits, const RadiusSet& radii, const ClipContext& ctx) {
  if (node_bits.size() != radii.r2.size() || ctx.l_a.size() != radii.r2.size())
    throw std::invalid_argument("constraint_radius: size mismatch");
  double best = -kInf;
  for (std::size_t k = 0; k < node_bits.size(); ++k) {
    const double clip = clip_radius(ctx.mode, ctx.l_a[k], radii.lambda_map, radii.c_map[k], ctx.l_ter);
    const double neg = std::min(radii.r2[k][0], clip);
    const double pos = std::min(radii.r2[k][1], clip);
    if (node_bits[k] == 0)
      best = std::max({best, neg, pos});
    else
      best = std::max(best, node_bits[k] > 0 ? pos : neg);
  }
  return best;
}

bool prune_check(double pd, std::span<const int> node_bits, const RadiusSet& radii, const ClipContext& ctx) {
  return pd > constraint_radius(node_bits, radii, ctx);
}

namespace {

class TreeSearch {
 public:
  TreeSearch(const ChannelUse& use, const Constellation& c, std::span<const double> l_a,
             std::span<const std::uint8_t> flags, const SdConfig& cfg)
      : use_(use),
        c_(c),
        l_a_(l_a),
        cfg_(cfg),
        n_(use.r.cols()),
        m_(c.bits_per_symbol()),
        nbits_(n_ * m_),
        radii_(nbits_),
        active_(nbits_, 1),
        eff_(nbits_),
        labels_(n_, 0),
        prior_(n_, std::vector<double>(c.size())),
        inc_(n_, std::vector<double>(c.size())),
        order_(n_, std::vector<std::size_t>(c.size())) {
    if (skips_rwc_bits(cfg.mode))
      for (std::size_t k = 0; k < nbits_; ++k)
        if (flags[k]) {
          active_[k] = 0;
          radii_.r2[k] = {0.0, 0.0};
          ++skipped_;
        }
    std::vector<int> bits(m_);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t sym = 0; sym < c.size(); ++sym) {
        for (std::size_t b = 0; b < m_; ++b) bits[b] = c.bit(sym, b);
        prior_[a][sym] = prior_metric_block(bits, l_a.subspan(a * m_, m_));
      }
    refresh_effective();
  }

  void run() {
    if (skipped_ < nbits_) expand(n_ - 1, 0.0);
  }

  std::size_t visited() const { return visited_; }
  std::size_t skipped() const { return skipped_; }
  const RadiusSet& radii() const { return radii_; }
  bool active(std::size_t k) const { return active_[k] != 0; }

 private:
  void refresh_effective() {
    for (std::size_t k = 0; k < nbits_; ++k) {
      if (!active_[k]) {
        eff_[k] = {0.0, 0.0};
        continue;
      }
      const double clip = clip_radius(cfg_.mode, l_a_[k], radii_.lambda_map, radii_.c_map[k], cfg_.l_ter);
      eff_[k] = {std::min(radii_.r2[k][0], clip), std::min(radii_.r2[k][1], clip)};
    }
  }

  // Antennas >= first_fixed hold labels_, the rest are undetermined.
  double bound(std::size_t first_fixed) const {
    double best = -kInf;
    for (std::size_t a = 0; a < n_; ++a) {
      const std::size_t k0 = a * m_;
      if (a < first_fixed) {
        for (std::size_t b = 0; b < m_; ++b) best = std::max({best, eff_[k0 + b][0], eff_[k0 + b][1]});
      } else {
        const std::size_t sym = labels_[a];
        for (std::size_t b = 0; b < m_; ++b) best = std::max(best, eff_[k0 + b][RadiusSet::slot(c_.bit(sym, b))]);
      }
    }
    return best;
  }

  void expand(std::size_t level, double pd) {
    Complex base = use_.y_rot[level];
    for (std::size_t j = level + 1; j < n_; ++j) base -= use_.r(level, j) * c_.point(labels_[j]);
    const Complex rll = use_.r(level, level);
    auto& inc = inc_[level];
    auto& order = order_[level];
    for (std::size_t sym = 0; sym < c_.size(); ++sym)
      inc[sym] = std::norm(base - rll * c_.point(sym)) / use_.noise_var + prior_[level][sym];
    visited_ += c_.size();
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return inc[x] < inc[y] || (inc[x] == inc[y] && x < y);
    });

    for (std::size_t sym : order) {
      const double d = pd + inc[sym];
      // Parent constraint covers every sibling; SE order makes the rest no better.
      if (d > bound(level + 1)) break;
      labels_[level] = sym;
      if (d > bound(level)) continue;
      if (level == 0)
        leaf(d);
      else
        expand(level - 1, d);
    }
  }

  void leaf(double d) {
    const bool new_map = d < radii_.lambda_map;
    if (new_map) {
      radii_.lambda_map = d;
      for (std::size_t k = 0; k < nbits_; ++k) radii_.c_map[k] = c_.bit(labels_[k / m_], k % m_);
    }
    for (std::size_t k = 0; k < nbits_; ++k) {
      if (!active_[k]) continue;
      auto& r = radii_.r2[k][RadiusSet::slot(c_.bit(labels_[k / m_], k % m_))];
      r = std::min(r, d);
    }
    if (new_map && clips(cfg_.mode)) {
      for (std::size_t k = 0; k < nbits_; ++k) {
        if (!active_[k]) continue;
        const int ch = radii_.c_map[k];
        auto& counter = radii_.r2[k][RadiusSet::slot(-ch)];
        counter = std::min(counter, fallback_radius(cfg_.mode, l_a_[k], radii_.lambda_map, ch, cfg_.l_ter));
      }
    }
    refresh_effective();
  }

  const ChannelUse& use_;
  const Constellation& c_;
  std::span<const double> l_a_;
  SdConfig cfg_;
  std::size_t n_;
  std::size_t m_;
  std::size_t nbits_;
  RadiusSet radii_;
  std::vector<std::uint8_t> active_;
  std::vector<std::array<double, 2>> eff_;
  std::vector<std::size_t> labels_;
  std::vector<std::vector<double>> prior_;
  std::vector<std::vector<double>> inc_;
  std::vector<std::vector<std::size_t>> order_;
  std::size_t visited_ = 0;
  std::size_t skipped_ = 0;
};

}  // namespace

SdResult soft_demap(const ChannelUse& use, const Constellation& c, std::span<const double> l_a,
                    std::span<const std::uint8_t> rwc_flags, const SdConfig& cfg, const PreviousLlrs& prev) {
  const std::size_t n = use.r.cols();
  const std::size_t nbits = n * c.bits_per_symbol();
  if (use.r.rows() != n || use.y_rot.size() != n || l_a.size() != nbits || rwc_flags.size() != nbits)
    throw std::invalid_argument("soft_demap: inconsistent block sizes");
  if (clips(cfg.mode) && !(cfg.l_ter >= 0.0 && std::isfinite(cfg.l_ter)))
    throw std::invalid_argument("soft_demap: clipping modes need a finite non-negative L_TER");
  const bool any_skip =
      skips_rwc_bits(cfg.mode) && std::any_of(rwc_flags.begin(), rwc_flags.end(), [](auto f) { return f != 0; });
  if (any_skip && (prev.app.size() != nbits || prev.ext.size() != nbits))
    throw std::invalid_argument("soft_demap: previous LLRs required when bits are skipped");

  TreeSearch search(use, c, l_a, rwc_flags, cfg);
  search.run();

  SdResult res;
  res.app_llrs.resize(nbits);
  res.ext_llrs.resize(nbits);
  res.visited_nodes = search.visited();
  res.skipped_bits = search.skipped();
  res.radii = search.radii();
  for (std::size_t k = 0; k < nbits; ++k) {
    if (!search.active(k)) {
      res.app_llrs[k] = prev.app[k];
      res.ext_llrs[k] = prev.ext[k];
      continue;
    }
    const auto& r = res.radii.r2[k];
    if (!std::isfinite(r[0]) || !std::isfinite(r[1]))
      throw std::logic_error("soft_demap: unresolved hypothesis for an active bit");
    res.app_llrs[k] = r[0] - r[1];
    res.ext_llrs[k] = res.app_llrs[k] - l_a[k];
  }
  return res;
}

std::vector<double> brute_force_maxlog(const ChannelUse& use, const Constellation& c, std::span<const double> l_a) {
  const std::size_t n = use.h.cols();
  const std::size_t mr = use.h.rows();
  const std::size_t m = c.bits_per_symbol();
  const std::size_t nbits = n * m;
  if (l_a.size() != nbits || use.y.size() != mr) throw std::invalid_argument("brute_force_maxlog: size mismatch");
  const double total = std::pow(static_cast<double>(c.size()), static_cast<double>(n));
  if (total > static_cast<double>(1u << 20)) throw std::invalid_argument("brute_force_maxlog: search space too large");

  std::vector<double> best_neg(nbits, kInf), best_pos(nbits, kInf);
  std::vector<std::size_t> labels(n, 0);
  const auto count = static_cast<std::size_t>(total);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t v = idx;
    for (std::size_t a = 0; a < n; ++a) {
      labels[a] = v % c.size();
      v /= c.size();
    }
    double metric = 0.0;
    for (std::size_t i = 0; i < mr; ++i) {
      Complex e = use.y[i];
      for (std::size_t a = 0; a < n; ++a) e -= use.h(i, a) * c.point(labels[a]);
      metric += std::norm(e);
    }
    metric /= use.noise_var;
    for (std::size_t k = 0; k < nbits; ++k) {
      const int bit = c.bit(labels[k / m], k % m);
      metric += 0.5 * (std::fabs(l_a[k]) - bit * l_a[k]);
    }
    for (std::size_t k = 0; k < nbits; ++k) {
      auto& slot = c.bit(labels[k / m], k % m) > 0 ? best_pos[k] : best_neg[k];
      slot = std::min(slot, metric);
    }
  }
  std::vector<double> out(nbits);
  for (std::size_t k = 0; k < nbits; ++k) out[k] = best_neg[k] - best_pos[k];
  return out;
}

}  // namespace tmimo
