#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tmimo/channel.hpp"
#include "tmimo/modem.hpp"

namespace tmimo {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Soft-demapper operating mode: exact max-log, selective update only, or
/// selective update combined with one of the performance-driven clipping
/// policies.
enum class ClipMode { kExact, kSuOnly, kSuPdc, kSuSpdc, kSuDapdc, kSuSdapdc };

std::string_view to_string(ClipMode mode);
/// Accepts "exact", "su", "su_only", "su_pdc", "su_spdc", "su_dapdc", "su_sdapdc".
ClipMode parse_clip_mode(std::string_view name);

inline bool skips_rwc_bits(ClipMode m) { return m != ClipMode::kExact; }
inline bool clips(ClipMode m) { return m != ClipMode::kExact && m != ClipMode::kSuOnly; }

struct SdConfig {
  ClipMode mode = ClipMode::kExact;
  double l_ter = kInf;  // LLR-domain TER threshold; only read by clipping modes
};

/// Single-tree-search bookkeeping for one channel use. Index 0 of each pair is
/// the -1 subset, index 1 the +1 subset.
struct RadiusSet {
  std::vector<std::array<double, 2>> r2;
  double lambda_map = kInf;
  std::vector<int> c_map;  // bipolar bits of the best leaf so far

  explicit RadiusSet(std::size_t num_bits = 0) : r2(num_bits, {kInf, kInf}), c_map(num_bits, 0) {}
  static constexpr std::size_t slot(int bipolar) { return bipolar > 0 ? 1 : 0; }
};

struct SdResult {
  std::vector<double> app_llrs;
  std::vector<double> ext_llrs;
  std::size_t visited_nodes = 0;
  std::size_t skipped_bits = 0;
  RadiusSet radii;
};

/// Sum of 1/2 (|L_A| - c L_A) over one symbol's bits, optionally leaving one out.
double prior_metric_block(std::span<const int> bits, std::span<const double> l_a,
                          std::optional<std::size_t> exclude_bit = std::nullopt);

/// D(s^(l)) = D(s^(l+1)) + |y'_l - sum_{j>=l} R_lj s_j|^2 / noise_var + I_prior^(l).
/// `labels` holds a constellation label per antenna; only entries >= level are read.
/// `l_a` covers the whole channel use.
double partial_distance(double parent_pd, std::size_t level, std::span<const std::size_t> labels,
                        const ChannelUse& use, const Constellation& c, std::span<const double> l_a);

/// Hypersphere radius of the clipping policy for one bit (+inf when the mode
/// does not clip or no leaf has been reached).
double clip_radius(ClipMode mode, double l_a, double lambda_map, int c_map, double l_ter);

/// Radius assigned to counter-hypothesis searches whenever a better MAP leaf is found.
double fallback_radius(ClipMode mode, double l_a, double lambda_map, int c_map, double l_ter);

/// Context needed to evaluate the clipped constraint for a given channel use.
struct ClipContext {
  ClipMode mode = ClipMode::kExact;
  double l_ter = kInf;
  std::span<const double> l_a;
};

/// Largest effective radius over the searches a node can still affect.
/// node_bits: bipolar value of each fixed bit, 0 for undetermined bits.
double constraint_radius(std::span<const int> node_bits, const RadiusSet& radii, const ClipContext& ctx);

/// True when the node (and its subtree) can be discarded.
bool prune_check(double pd, std::span<const int> node_bits, const RadiusSet& radii, const ClipContext& ctx);

/// Previous-iteration outputs for the bits of one channel use.
struct PreviousLlrs {
  std::span<const double> app;
  std::span<const double> ext;
};

/// Depth-first single-tree-search soft-input soft-output sphere decoder with
/// Schnorr-Euchner child ordering.
///
/// Bits with rwc_flags[k] != 0 are skipped (their radii are zeroed) when the
/// mode uses selective update, and their outputs are copied from `prev`.
SdResult soft_demap(const ChannelUse& use, const Constellation& c, std::span<const double> l_a,
                    std::span<const std::uint8_t> rwc_flags, const SdConfig& cfg, const PreviousLlrs& prev);

/// Exhaustive max-log LLRs straight from ||y - H s||^2. Throws when
/// |S|^M_T exceeds 2^20.
std::vector<double> brute_force_maxlog(const ChannelUse& use, const Constellation& c, std::span<const double> l_a);

}  // namespace tmimo
