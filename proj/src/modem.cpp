#include "tmimo/modem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tmimo {

namespace {

// Gray-coded PAM amplitude for an axis label (unnormalized, odd integers).
double gray_pam_level(std::size_t label, std::size_t bits_per_axis) {
  std::size_t binary = label;
  for (std::size_t shift = 1; shift < bits_per_axis; shift <<= 1) binary ^= binary >> shift;
  const std::size_t levels = std::size_t{1} << bits_per_axis;
  return 2.0 * static_cast<double>(binary) - static_cast<double>(levels - 1);
}

}  // namespace

Constellation::Constellation(std::string name, std::size_t bits_per_axis)
    : name_(std::move(name)), bits_per_symbol_(2 * bits_per_axis) {
  const std::size_t levels = std::size_t{1} << bits_per_axis;
  // mean of level^2 over an M-PAM grid of odd integers is (M^2 - 1) / 3
  const double axis_energy = (static_cast<double>(levels * levels) - 1.0) / 3.0;
  const double norm = 1.0 / std::sqrt(2.0 * axis_energy);
  points_.resize(levels * levels);
  for (std::size_t idx = 0; idx < points_.size(); ++idx) {
    const std::size_t re_label = idx >> bits_per_axis;
    const std::size_t im_label = idx & (levels - 1);
    points_[idx] = Complex(gray_pam_level(re_label, bits_per_axis), gray_pam_level(im_label, bits_per_axis)) * norm;
  }
}

Constellation Constellation::bpsk() { return Constellation("bpsk", 1, {Complex(-1.0, 0.0), Complex(1.0, 0.0)}); }
Constellation Constellation::qpsk() { return Constellation("qpsk", 1); }
Constellation Constellation::qam16() { return Constellation("16qam", 2); }

Constellation Constellation::by_name(std::string_view name) {
  if (name == "bpsk") return bpsk();
  if (name == "qpsk") return qpsk();
  if (name == "16qam") return qam16();
  throw std::invalid_argument("unknown constellation: " + std::string(name));
}

std::size_t Constellation::label_of(std::span<const int> bits) const {
  if (bits.size() != bits_per_symbol_) throw std::invalid_argument("bit block length mismatch");
  std::size_t idx = 0;
  for (int b : bits) idx = (idx << 1) | (b > 0 ? 1U : 0U);
  return idx;
}

Complex map_block(const Constellation& c, std::span<const int> block) {
  return c.point(c.label_of(block));
}

FrameLayout::FrameLayout(std::size_t num_bits, std::size_t num_tx, std::size_t bits_per_symbol)
    : num_bits_(num_bits), num_tx_(num_tx), bits_per_symbol_(bits_per_symbol) {
  if (num_tx == 0 || bits_per_symbol == 0) throw std::invalid_argument("frame layout: zero dimension");
  if (num_bits % (num_tx * bits_per_symbol) != 0)
    throw std::invalid_argument("frame layout: K not divisible by M_T * log2|S|");
}

std::vector<ComplexVector> frame_bits(std::span<const int> coded_bits, std::size_t num_tx,
                                      const Constellation& c) {
  const FrameLayout layout(coded_bits.size(), num_tx, c.bits_per_symbol());
  std::vector<ComplexVector> out(layout.num_uses(), ComplexVector(num_tx));
  const std::size_t m = c.bits_per_symbol();
  for (std::size_t u = 0; u < layout.num_uses(); ++u)
    for (std::size_t t = 0; t < num_tx; ++t) {
      const std::size_t k0 = layout.index({u, t, 0});
      out[u][t] = map_block(c, coded_bits.subspan(k0, m));
    }
  return out;
}

std::vector<int> unframe_symbols(std::span<const ComplexVector> symbols, const Constellation& c) {
  std::vector<int> bits;
  const std::size_t m = c.bits_per_symbol();
  for (const auto& s : symbols)
    for (std::size_t t = 0; t < s.size(); ++t) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < c.size(); ++i) {
        const double d = std::norm(s[t] - c.point(i));
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      for (std::size_t b = 0; b < m; ++b) bits.push_back(c.bit(best, b));
    }
  return bits;
}

}  // namespace tmimo
