#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tmimo/numerics.hpp"

namespace tmimo {

/// Gray-labelled constellation with unit average energy: square QAM, or BPSK.
///
/// A label is read MSB first from a block of bipolar bits (logical 1 <-> +1).
/// The first half of the block selects the in-phase PAM level, the second
/// half the quadrature level; each axis is an independent Gray-coded PAM.
class Constellation {
 public:
  /// Real antipodal {-1, +1}; label 1 is +1.
  static Constellation bpsk();
  static Constellation qpsk();
  static Constellation qam16();
  /// "bpsk", "qpsk" or "16qam"; throws std::invalid_argument otherwise.
  static Constellation by_name(std::string_view name);

  const std::string& name() const { return name_; }
  std::size_t bits_per_symbol() const { return bits_per_symbol_; }
  std::size_t size() const { return points_.size(); }

  /// Point for label `index` (bit 0 of the block is the MSB of the index).
  const Complex& point(std::size_t index) const { return points_[index]; }
  const std::vector<Complex>& points() const { return points_; }

  /// Bipolar value of bit `b` (0 = first bit of the block) of label `index`.
  int bit(std::size_t index, std::size_t b) const {
    return ((index >> (bits_per_symbol_ - 1 - b)) & 1U) ? +1 : -1;
  }

  /// Label index of a bipolar bit block.
  std::size_t label_of(std::span<const int> bits) const;

 private:
  Constellation(std::string name, std::size_t bits_per_axis);
  Constellation(std::string name, std::size_t bits_per_symbol, std::vector<Complex> points)
      : name_(std::move(name)), bits_per_symbol_(bits_per_symbol), points_(std::move(points)) {}

  std::string name_;
  std::size_t bits_per_symbol_ = 0;
  std::vector<Complex> points_;
};

/// Maps one block B_{t,u} of bipolar bits. Throws on length mismatch.
Complex map_block(const Constellation& c, std::span<const int> block);

/// Where coded bit k sits: bit `bit` of antenna `antenna` in channel use `use`.
struct BitPosition {
  std::size_t use = 0;
  std::size_t antenna = 0;
  std::size_t bit = 0;
};

/// Bit-to-(use, antenna, bit) bookkeeping for a code block of K bits.
class FrameLayout {
 public:
  FrameLayout(std::size_t num_bits, std::size_t num_tx, std::size_t bits_per_symbol);

  std::size_t num_bits() const { return num_bits_; }
  std::size_t num_tx() const { return num_tx_; }
  std::size_t bits_per_symbol() const { return bits_per_symbol_; }
  std::size_t bits_per_use() const { return num_tx_ * bits_per_symbol_; }
  std::size_t num_uses() const { return num_bits_ / bits_per_use(); }

  BitPosition position(std::size_t k) const {
    const std::size_t per_use = bits_per_use();
    const std::size_t within = k % per_use;
    return {k / per_use, within / bits_per_symbol_, within % bits_per_symbol_};
  }
  std::size_t index(const BitPosition& p) const {
    return p.use * bits_per_use() + p.antenna * bits_per_symbol_ + p.bit;
  }

 private:
  std::size_t num_bits_;
  std::size_t num_tx_;
  std::size_t bits_per_symbol_;
};

/// Groups interleaved coded bits into per-use symbol vectors.
std::vector<ComplexVector> frame_bits(std::span<const int> coded_bits, std::size_t num_tx,
                                      const Constellation& c);

/// Recovers the bipolar bit sequence from framed symbol vectors (exact points only).
std::vector<int> unframe_symbols(std::span<const ComplexVector> symbols, const Constellation& c);

}  // namespace tmimo
