#pragma once

#include <array>
#include <span>
#include <vector>

#include "marcsim/common.hpp"

namespace marc {

// Constellation points for symbol indices 0..3 (bit pair MSB-first).
inline constexpr std::array<Complex, 4> kQamPoints = {
    Complex{-1.0, 1.0}, Complex{-1.0, -1.0}, Complex{1.0, 1.0}, Complex{1.0, -1.0}};

inline constexpr double kQamScale = 0.70710678118654752440;  // 1/sqrt(2)

// Modulated symbols. `samples` hold the unnormalized constellation values;
// the transmitted waveform is scale * samples.
struct SymbolBlock {
  std::vector<Complex> samples;
  Modulation modulation = Modulation::kBpsk;
  double scale = 1.0;

  std::size_t size() const { return samples.size(); }
  Complex transmitted(std::size_t i) const { return scale * samples[i]; }
  // Average of |scale * sample|^2.
  double mean_energy() const;
};

SymbolBlock bpsk_map(std::span<const Bit> bits);
Bits bpsk_demap(std::span<const Complex> samples);

SymbolBlock qam_map(std::span<const Bit> bits);
Bits qam_demap(const SymbolBlock& block);
int qam_nearest_index(Complex z);

SymbolBlock modulate(std::span<const Bit> bits, Modulation m);
// Hard demap of samples already expressed in constellation units.
Bits demodulate(std::span<const Complex> samples, Modulation m);

// ML detection over every (x1, x2) pair of the superposed constellation
// y = g1*x1 + g2*x2 + z, returning the XOR of the two detected bit labels.
// g1, g2 are the effective amplitudes of the unnormalized constellation
// (including any transmit scale).
Bits joint_xor_demap(std::span<const Complex> superposed, Modulation m, Complex g1 = 1.0,
                     Complex g2 = 1.0);

}  // namespace marc
