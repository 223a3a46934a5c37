#include <algorithm>
#include <bitset>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "tmimo/modem.hpp"
#include "tmimo/rng.hpp"

using namespace tmimo;

namespace {

std::vector<int> label_bits(const Constellation& c, std::size_t idx) {
  std::vector<int> b(c.bits_per_symbol());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = c.bit(idx, i);
  return b;
}

int hamming(std::size_t a, std::size_t b) { return static_cast<int>(std::bitset<16>(a ^ b).count()); }

}  // namespace

TEST_CASE("qpsk maps +1,+1 to the first-quadrant point") {
  const auto c = Constellation::qpsk();
  const std::vector<int> b{+1, +1};
  const Complex s = map_block(c, b);
  CHECK(s.real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(s.imag() == doctest::Approx(1.0 / std::sqrt(2.0)));
  const std::vector<int> b2{-1, +1};
  CHECK(map_block(c, b2).real() < 0.0);
  CHECK(map_block(c, b2).imag() > 0.0);
}

TEST_CASE("16qam labels form a bijection with unit mean energy") {
  const auto c = Constellation::qam16();
  REQUIRE(c.size() == 16);
  REQUIRE(c.bits_per_symbol() == 4);
  std::set<std::pair<double, double>> seen;
  double energy = 0.0;
  for (std::size_t idx = 0; idx < 16; ++idx) {
    const auto bits = label_bits(c, idx);
    CHECK(c.label_of(bits) == idx);
    const Complex s = map_block(c, bits);
    seen.insert({s.real(), s.imag()});
    energy += std::norm(s);
  }
  CHECK(seen.size() == 16);
  CHECK(std::fabs(energy / 16.0 - 1.0) <= 1e-12);
}

TEST_CASE("16qam amplitudes lie on the normalized odd grid") {
  const auto c = Constellation::qam16();
  const double step = 1.0 / std::sqrt(10.0);
  for (const auto& p : c.points()) {
    for (double v : {p.real(), p.imag()}) {
      const double lvl = v / step;
      CHECK(std::fabs(lvl - std::round(lvl)) < 1e-12);
      CHECK(std::fabs(std::fmod(std::fabs(std::round(lvl)), 2.0) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("first half of the block drives the real axis") {
  const auto c = Constellation::qam16();
  for (std::size_t a = 0; a < 16; ++a)
    for (std::size_t b = 0; b < 16; ++b) {
      const bool same_re_bits = (a >> 2) == (b >> 2);
      const bool same_im_bits = (a & 3) == (b & 3);
      if (same_re_bits) CHECK(c.point(a).real() == c.point(b).real());
      if (same_im_bits) CHECK(c.point(a).imag() == c.point(b).imag());
    }
}

TEST_CASE("gray property along each axis") {
  for (const auto& c : {Constellation::qpsk(), Constellation::qam16()}) {
    // Group points by the other axis, sort along this axis, then compare neighbours.
    for (int axis = 0; axis < 2; ++axis) {
      std::map<long, std::vector<std::pair<double, std::size_t>>> lines;
      for (std::size_t i = 0; i < c.size(); ++i) {
        const Complex p = c.point(i);
        const double along = axis == 0 ? p.real() : p.imag();
        const double across = axis == 0 ? p.imag() : p.real();
        lines[std::lround(across * 1e9)].push_back({along, i});
      }
      for (auto& [key, line] : lines) {
        std::sort(line.begin(), line.end());
        for (std::size_t j = 1; j < line.size(); ++j) CHECK(hamming(line[j - 1].second, line[j].second) == 1);
      }
    }
  }
}

TEST_CASE("bpsk is the real antipodal pair") {
  const auto c = Constellation::bpsk();
  CHECK(c.bits_per_symbol() == 1);
  CHECK(c.point(1) == Complex(1.0, 0.0));
  CHECK(c.point(0) == Complex(-1.0, 0.0));
}

TEST_CASE("constellation lookup by name") {
  CHECK(Constellation::by_name("qpsk").size() == 4);
  CHECK(Constellation::by_name("16qam").size() == 16);
  CHECK_THROWS_AS(Constellation::by_name("64qam"), std::invalid_argument);
}

TEST_CASE("map_block rejects a wrong block length") {
  const std::vector<int> b{+1, -1, +1};
  CHECK_THROWS_AS(map_block(Constellation::qam16(), b), std::invalid_argument);
}

TEST_CASE("framing sizes") {
  CHECK(FrameLayout(16, 4, 4).num_uses() == 1);
  CHECK(FrameLayout(18432, 4, 4).num_uses() == 1152);
  CHECK_THROWS_AS(FrameLayout(18, 4, 4), std::invalid_argument);
  std::vector<int> bits(18, 1);
  CHECK_THROWS_AS(frame_bits(bits, 4, Constellation::qam16()), std::invalid_argument);
}

TEST_CASE("position map follows use, antenna, bit order and inverts") {
  const FrameLayout layout(18432, 4, 4);
  for (std::size_t k = 0; k < layout.num_bits(); ++k) {
    const auto p = layout.position(k);
    CHECK(p.use == k / 16);
    CHECK(p.antenna == (k % 16) / 4);
    CHECK(p.bit == k % 4);
    CHECK(layout.index(p) == k);
  }
}

TEST_CASE("frame then unframe recovers the bits") {
  Rng rng(5);
  std::bernoulli_distribution coin(0.5);
  for (const auto& c : {Constellation::qpsk(), Constellation::qam16()}) {
    std::vector<int> bits(4 * c.bits_per_symbol() * 37);
    for (auto& b : bits) b = coin(rng) ? 1 : -1;
    const auto sym = frame_bits(bits, 4, c);
    CHECK(sym.size() == 37);
    CHECK(unframe_symbols(sym, c) == bits);
  }
}

TEST_CASE("framed symbol equals the mapped block at its position") {
  const auto c = Constellation::qam16();
  std::vector<int> bits(32);
  for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = (k * 7 + 3) % 5 < 2 ? 1 : -1;
  const auto sym = frame_bits(bits, 4, c);
  const FrameLayout layout(32, 4, 4);
  for (std::size_t u = 0; u < 2; ++u)
    for (std::size_t t = 0; t < 4; ++t) {
      const std::size_t k0 = layout.index({u, t, 0});
      CHECK(sym[u][t] == map_block(c, std::span<const int>(bits).subspan(k0, 4)));
    }
}
