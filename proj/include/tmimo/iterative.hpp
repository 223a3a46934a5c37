#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tmimo/channel.hpp"
#include "tmimo/coding.hpp"
#include "tmimo/interleave.hpp"
#include "tmimo/modem.hpp"
#include "tmimo/sphere.hpp"

namespace tmimo {

enum class Execution { kSerial, kParallel };

/// Static link parameters shared by every frame of a run.
struct LinkConfig {
  std::size_t m_t = 4;
  std::size_t m_r = 4;
  std::string constellation = "16qam";
  std::size_t code_length = 18432;  // K coded bits per block

  void validate() const;
};

/// Everything the transmitter produced for one code block.
struct TransmittedFrame {
  std::vector<int> info_bits;   // bipolar, N_I
  std::vector<int> coded_bits;  // bipolar, decoder order, K
  std::vector<ChannelUse> uses;
};

/// Receiver floor on the noise variance so that a noiseless channel still
/// yields finite metrics.
inline constexpr double kMinDetectorNoiseVar = 1e-9;

/// Draws data, channel and noise from the (master_seed, frame_index) substreams.
TransmittedFrame transmit_frame(const LinkConfig& link, const Permutation& perm, double noise_var,
                                std::uint64_t master_seed, std::uint64_t frame_index);

struct LlrFrame {
  std::size_t iteration = 0;
  std::vector<double> l_a, l_d, l_e;      // demapper side
  std::vector<double> dl_a, dl_d, dl_e;   // decoder side
};

struct RwcFlags {
  std::vector<std::uint8_t> g;              // decoder order
  std::vector<std::uint8_t> g_interleaved;  // demapper order
};

struct IterationStats {
  std::size_t iteration = 0;  // q, zero based
  double ber_estimate = 0.0;
  double ber_true = 0.0;
  std::size_t visited_nodes = 0;  // cumulative
  std::size_t beta_stores = 0;    // cumulative
  std::size_t non_rwc_count = 0;  // bits not flagged RWC during this iteration
  bool stopped = false;
};

/// g(k) = |ext(k)| > l_ter && |app(k)| > l_ter. Recomputed from scratch each call.
RwcFlags update_rwc_flags(std::span<const double> dec_ext, std::span<const double> dec_app, double l_ter,
                          const Permutation& perm);

/// ln(1/ter - 1); ter must lie in (0, 0.5].
double ter_threshold(double ter);

/// True when the estimated BER over the information bits is <= ter.
bool check_early_stop(std::span<const double> app_llrs_info, double ter);

struct ReceiverConfig {
  ClipMode mode = ClipMode::kExact;
  double ter = 2e-3;
  bool selective_decoding = false;
  std::size_t window = 1;
  std::size_t max_iterations = 5;
  Execution exec = Execution::kSerial;
};

struct FrameTrace {
  std::vector<IterationStats> stats;
  std::vector<int> decisions;  // hard info-bit decisions at the last iteration run
  /// Populated when history is requested: LLRs and the flags consumed by each iteration.
  std::vector<LlrFrame> llr_history;
  std::vector<RwcFlags> flag_history;
  /// Selective decoding combined with the exact demapper.
  bool inconsistent_config = false;
};

/// Per-use soft demapping of a whole block. Returns the number of visited nodes.
std::size_t demap_all_uses(std::span<const ChannelUse> uses, const Constellation& c, std::span<const double> l_a,
                           std::span<const std::uint8_t> flags, const SdConfig& cfg, std::span<const double> prev_app,
                           std::span<const double> prev_ext, std::span<double> out_app, std::span<double> out_ext,
                           Execution exec);

/// The iterative detection and decoding loop for one frame.
FrameTrace run_frame(const TransmittedFrame& tx, const LinkConfig& link, const Permutation& perm,
                     const ReceiverConfig& cfg, bool keep_history = false);

}  // namespace tmimo
