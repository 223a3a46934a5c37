#pragma once

#include <cstddef>
#include <cstdint>

#include "tmimo/numerics.hpp"
#include "tmimo/rng.hpp"

namespace tmimo {

/// One MIMO channel realization with its receive-side preprocessing.
struct ChannelUse {
  ComplexMatrix h;      // M_R x M_T
  ComplexMatrix q;      // thin Q, M_R x M_T
  ComplexMatrix r;      // M_T x M_T upper triangular
  ComplexVector y;      // M_R
  ComplexVector y_rot;  // Q^H y
  double noise_var = 1.0;  // total complex noise variance per receive entry (2 sigma_n^2)

  /// Factorizes h and rotates y.
  static ChannelUse prepare(ComplexMatrix h, ComplexVector y, double noise_var);
};

/// I.i.d. CN(0, 1) entries (variance 0.5 per real dimension).
ComplexMatrix sample_channel(std::size_t m_r, std::size_t m_t, Rng& rng);
ComplexMatrix sample_channel(std::size_t m_r, std::size_t m_t, std::uint64_t seed);

/// y = h s + n with n ~ CN(0, noise_var I). Throws on negative noise_var.
ComplexVector transmit(const ComplexMatrix& h, const ComplexVector& s, double noise_var, Rng& rng);

/// Total complex noise variance for a given SNR: M_T / 10^(snr_db / 10).
///
/// Convention: SNR is the total received signal energy per receive antenna
/// over the noise power, with unit-energy symbols and unit-variance channel
/// taps.
double snr_to_noise_var(double snr_db, std::size_t m_t);

inline constexpr const char* kSnrConvention =
    "snr = M_T * Es / N0 per receive antenna, Es = 1, E|h_ij|^2 = 1, noise_var = M_T / 10^(snr_db/10)";

}  // namespace tmimo
