#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tmimo {

/// log-domain zero used by the BCJR recursions.
inline constexpr double kLogZero = -1e30;

/// Jacobian logarithm ln(e^a + e^b). Absorbs kLogZero and -inf exactly.
double max_star(double a, double b);

/// Four-state trellis of the rate-1/2 recursive systematic (5/7)_8 code:
/// feedback 1 + D + D^2, feedforward 1 + D^2. Bits here are logical {0, 1}.
struct Trellis {
  static constexpr int kNumStates = 4;
  static constexpr int kMemory = 2;

  struct Branch {
    int from = 0;
    int to = 0;
    int input = 0;   // == systematic output
    int parity = 0;
  };

  std::array<std::array<int, 2>, kNumStates> next{};
  std::array<std::array<int, 2>, kNumStates> parity{};
  std::array<Branch, 2 * kNumStates> branches{};

  static const Trellis& rsc57();

  /// Input that drives the register toward state 0 (tail bit).
  int termination_input(int state) const;
};

/// Number of information bits carried by a K-bit terminated codeword.
std::size_t info_length(std::size_t coded_length);

/// Rate-1/2 encoding with two tail steps. Output is [sys_0, par_0, sys_1, par_1, ...]
/// in bipolar form, length 2 * (N_I + 2).
std::vector<int> encode(std::span<const int> info_bits);

/// Bipolar systematic bits (including tail) of a coded bipolar sequence.
std::vector<int> information_bits(std::span<const int> coded);

/// A-posteriori LLRs at the N_I information positions (tail excluded).
std::vector<double> information_llrs(std::span<const double> app_llrs);

struct SisoResult {
  std::vector<double> app_llrs;
  std::vector<double> ext_llrs;
  /// A-priori values the recursions actually used, per position.
  std::vector<double> apriori_used;
  std::vector<std::uint8_t> decoded;  // 1 where outputs were recomputed
  std::size_t beta_store_count = 0;
};

struct DecodeMode {
  enum class Kind { kFull, kSelective };
  Kind kind = Kind::kFull;
  std::size_t window = 1;             // stages on each side, centre included
  std::span<const std::uint8_t> rwc;  // 1 = reliable and well converging

  static DecodeMode full() { return {}; }
  static DecodeMode selective(std::size_t w, std::span<const std::uint8_t> rwc_flags) {
    return {Kind::kSelective, w, rwc_flags};
  }
};

/// Trellis stages recomputed in selective mode: every stage within w - 1 of a
/// stage holding a non-RWC bit.
std::vector<std::uint8_t> selective_stages(std::span<const std::uint8_t> rwc, std::size_t window);

/// Log-MAP BCJR over the terminated trellis.
///
/// In selective mode only the chosen stages are recomputed. Outside them the
/// a-priori of the previous call is reused and its outputs are carried over,
/// so `previous` is required whenever some stage is skipped. Only the beta
/// vectors consumed by recomputed stages are stored and counted.
SisoResult siso_decode(std::span<const double> apriori, const Trellis& trellis, const DecodeMode& mode,
                       const SisoResult* previous = nullptr);

/// Mean of 1 / (1 + exp|L|) over the given LLRs.
double estimate_ber(std::span<const double> app_llrs_info);

}  // namespace tmimo
