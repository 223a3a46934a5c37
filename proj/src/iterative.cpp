#include "tmimo/iterative.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tmimo {

void LinkConfig::validate() const {
  if (m_t == 0 || m_r < m_t) throw std::invalid_argument("link: need 1 <= M_T <= M_R");
  const Constellation c = Constellation::by_name(constellation);
  if (code_length == 0 || code_length % (m_t * c.bits_per_symbol()) != 0)
    throw std::invalid_argument("link: K must be divisible by M_T * log2|S|");
  if (code_length % 2 != 0 || code_length <= 2 * Trellis::kMemory)
    throw std::invalid_argument("link: K must be even and longer than the tail");
}

TransmittedFrame transmit_frame(const LinkConfig& link, const Permutation& perm, double noise_var,
                                std::uint64_t master_seed, std::uint64_t frame_index) {
  link.validate();
  if (perm.size() != link.code_length) throw std::invalid_argument("transmit_frame: interleaver size mismatch");
  const Constellation c = Constellation::by_name(link.constellation);

  TransmittedFrame tx;
  Rng data = make_rng(master_seed, frame_index, Stream::kData);
  std::bernoulli_distribution coin(0.5);
  tx.info_bits.resize(info_length(link.code_length));
  for (auto& b : tx.info_bits) b = coin(data) ? +1 : -1;
  tx.coded_bits = encode(tx.info_bits);

  const auto interleaved = perm.interleave(tx.coded_bits);
  const auto symbols = frame_bits(interleaved, link.m_t, c);

  Rng chan = make_rng(master_seed, frame_index, Stream::kChannel);
  Rng noise = make_rng(master_seed, frame_index, Stream::kNoise);
  tx.uses.reserve(symbols.size());
  for (const auto& s : symbols) {
    ComplexMatrix h = sample_channel(link.m_r, link.m_t, chan);
    ComplexVector y = transmit(h, s, noise_var, noise);
    tx.uses.push_back(ChannelUse::prepare(std::move(h), std::move(y), std::max(noise_var, kMinDetectorNoiseVar)));
  }
  return tx;
}

RwcFlags update_rwc_flags(std::span<const double> dec_ext, std::span<const double> dec_app, double l_ter,
                          const Permutation& perm) {
  if (dec_ext.size() != dec_app.size()) throw std::invalid_argument("update_rwc_flags: length mismatch");
  RwcFlags f;
  f.g.resize(dec_ext.size());
  for (std::size_t k = 0; k < dec_ext.size(); ++k)
    f.g[k] = (std::fabs(dec_ext[k]) > l_ter && std::fabs(dec_app[k]) > l_ter) ? 1 : 0;
  f.g_interleaved = perm.interleave(f.g);
  return f;
}

double ter_threshold(double ter) {
  if (!(ter > 0.0 && ter <= 0.5)) throw std::invalid_argument("TER must lie in (0, 0.5]");
  return std::log(1.0 / ter - 1.0);
}

bool check_early_stop(std::span<const double> app_llrs_info, double ter) {
  return estimate_ber(app_llrs_info) <= ter;
}

std::size_t demap_all_uses(std::span<const ChannelUse> uses, const Constellation& c, std::span<const double> l_a,
                           std::span<const std::uint8_t> flags, const SdConfig& cfg, std::span<const double> prev_app,
                           std::span<const double> prev_ext, std::span<double> out_app, std::span<double> out_ext,
                           Execution exec) {
  if (uses.empty()) return 0;
  const std::size_t per_use = uses.front().r.cols() * c.bits_per_symbol();
  const std::size_t k = uses.size() * per_use;
  if (l_a.size() != k || flags.size() != k || prev_app.size() != k || prev_ext.size() != k || out_app.size() != k ||
      out_ext.size() != k)
    throw std::invalid_argument("demap_all_uses: block length mismatch");

  auto one = [&](std::size_t u) -> std::size_t {
    const std::size_t off = u * per_use;
    const SdResult r = soft_demap(uses[u], c, l_a.subspan(off, per_use), flags.subspan(off, per_use), cfg,
                                  {prev_app.subspan(off, per_use), prev_ext.subspan(off, per_use)});
    std::copy(r.app_llrs.begin(), r.app_llrs.end(), out_app.begin() + static_cast<std::ptrdiff_t>(off));
    std::copy(r.ext_llrs.begin(), r.ext_llrs.end(), out_ext.begin() + static_cast<std::ptrdiff_t>(off));
    return r.visited_nodes;
  };

  std::size_t visited = 0;
  const auto n = static_cast<std::ptrdiff_t>(uses.size());
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : visited)
    for (std::ptrdiff_t u = 0; u < n; ++u) visited += one(static_cast<std::size_t>(u));
  } else {
    for (std::ptrdiff_t u = 0; u < n; ++u) visited += one(static_cast<std::size_t>(u));
  }
  return visited;
}

FrameTrace run_frame(const TransmittedFrame& tx, const LinkConfig& link, const Permutation& perm,
                     const ReceiverConfig& cfg, bool keep_history) {
  link.validate();
  if (cfg.max_iterations < 1) throw std::invalid_argument("run_frame: need at least one iteration");
  if (cfg.selective_decoding && cfg.window < 1) throw std::invalid_argument("run_frame: window must be >= 1");
  const Constellation c = Constellation::by_name(link.constellation);
  const std::size_t k = link.code_length;
  if (tx.coded_bits.size() != k || perm.size() != k) throw std::invalid_argument("run_frame: frame length mismatch");

  const double l_ter = ter_threshold(cfg.ter);
  const SdConfig sd{cfg.mode, clips(cfg.mode) ? l_ter : kInf};
  const bool flags_consulted = skips_rwc_bits(cfg.mode) || cfg.selective_decoding;
  const Trellis& trellis = Trellis::rsc57();

  FrameTrace trace;
  trace.inconsistent_config = cfg.selective_decoding && cfg.mode == ClipMode::kExact;

  std::vector<double> l_a(k, 0.0), app(k, 0.0), ext(k, 0.0), prev_app(k, 0.0), prev_ext(k, 0.0);
  RwcFlags flags{std::vector<std::uint8_t>(k, 0), std::vector<std::uint8_t>(k, 0)};
  SisoResult prev_dec;
  bool have_prev = false;
  std::size_t cum_visited = 0, cum_beta = 0;

  for (std::size_t q = 0; q < cfg.max_iterations; ++q) {
    cum_visited += demap_all_uses(tx.uses, c, l_a, flags.g_interleaved, sd, prev_app, prev_ext, app, ext, cfg.exec);

    const auto dec_apriori = perm.deinterleave(ext);
    const DecodeMode mode =
        cfg.selective_decoding ? DecodeMode::selective(cfg.window, flags.g) : DecodeMode::full();
    SisoResult dec = siso_decode(dec_apriori, trellis, mode, have_prev ? &prev_dec : nullptr);
    cum_beta += dec.beta_store_count;

    const auto info_app = information_llrs(dec.app_llrs);
    IterationStats st;
    st.iteration = q;
    st.ber_estimate = estimate_ber(info_app);
    std::size_t errors = 0;
    for (std::size_t i = 0; i < info_app.size(); ++i)
      if ((info_app[i] > 0.0 ? 1 : -1) != tx.info_bits[i]) ++errors;
    st.ber_true = static_cast<double>(errors) / static_cast<double>(info_app.size());
    st.visited_nodes = cum_visited;
    st.beta_stores = cum_beta;
    st.non_rwc_count =
        flags_consulted ? static_cast<std::size_t>(std::count(flags.g.begin(), flags.g.end(), std::uint8_t{0})) : k;
    st.stopped = st.ber_estimate <= cfg.ter;
    trace.stats.push_back(st);

    if (keep_history) {
      trace.llr_history.push_back({q, l_a, app, ext, dec_apriori, dec.app_llrs, dec.ext_llrs});
      trace.flag_history.push_back(flags);
    }

    trace.decisions.resize(info_app.size());
    for (std::size_t i = 0; i < info_app.size(); ++i) trace.decisions[i] = info_app[i] > 0.0 ? 1 : -1;

    if (st.stopped) break;

    // Stop check precedes the RWC update.
    flags = update_rwc_flags(dec.ext_llrs, dec.app_llrs, l_ter, perm);
    if (!flags_consulted) {
      std::fill(flags.g.begin(), flags.g.end(), std::uint8_t{0});
      std::fill(flags.g_interleaved.begin(), flags.g_interleaved.end(), std::uint8_t{0});
    }
    l_a = perm.interleave(dec.ext_llrs);
    prev_app.swap(app);
    prev_ext.swap(ext);
    prev_dec = std::move(dec);
    have_prev = true;
  }
  return trace;
}

}  // namespace tmimo
