#include "tmimo/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace tmimo {

ChannelUse ChannelUse::prepare(ComplexMatrix h, ComplexVector y, double noise_var) {
  ChannelUse use;
  auto [q, r] = qr_decompose(h);
  use.y_rot = rotate_received(q, y);
  use.h = std::move(h);
  use.q = std::move(q);
  use.r = std::move(r);
  use.y = std::move(y);
  use.noise_var = noise_var;
  return use;
}

ComplexMatrix sample_channel(std::size_t m_r, std::size_t m_t, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  ComplexMatrix h(m_r, m_t);
  for (std::size_t i = 0; i < m_r; ++i)
    for (std::size_t j = 0; j < m_t; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      h(i, j) = Complex(re, im);
    }
  return h;
}

ComplexMatrix sample_channel(std::size_t m_r, std::size_t m_t, std::uint64_t seed) {
  Rng rng(seed);
  return sample_channel(m_r, m_t, rng);
}

ComplexVector transmit(const ComplexMatrix& h, const ComplexVector& s, double noise_var, Rng& rng) {
  if (noise_var < 0.0) throw std::invalid_argument("transmit: negative noise variance");
  ComplexVector y = h * s;
  // Unit draws are always consumed so that the noise stream stays aligned
  // across SNR points.
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  const double scale = std::sqrt(noise_var);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    if (scale > 0.0) y[i] += scale * Complex(re, im);
  }
  return y;
}

double snr_to_noise_var(double snr_db, std::size_t m_t) {
  return static_cast<double>(m_t) / std::pow(10.0, snr_db / 10.0);
}

}  // namespace tmimo
