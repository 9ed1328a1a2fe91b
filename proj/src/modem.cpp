#include "marcsim/modem.hpp"

#include <limits>
#include <stdexcept>

namespace marc {

double SymbolBlock::mean_energy() const {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& s : samples) acc += std::norm(s);
  return scale * scale * acc / static_cast<double>(samples.size());
}

SymbolBlock bpsk_map(std::span<const Bit> bits) {
  SymbolBlock block;
  block.modulation = Modulation::kBpsk;
  block.scale = 1.0;
  block.samples.reserve(bits.size());
  for (Bit b : bits) block.samples.emplace_back(2.0 * static_cast<double>(b & 1U) - 1.0, 0.0);
  return block;
}

Bits bpsk_demap(std::span<const Complex> samples) {
  Bits bits(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) bits[i] = samples[i].real() >= 0.0 ? 1 : 0;
  return bits;
}

SymbolBlock qam_map(std::span<const Bit> bits) {
  if (bits.size() % 2 != 0) throw std::invalid_argument("qam_map: odd number of bits");
  SymbolBlock block;
  block.modulation = Modulation::kQam4;
  block.scale = kQamScale;
  block.samples.reserve(bits.size() / 2);
  for (std::size_t i = 0; i < bits.size(); i += 2) {
    const int index = 2 * (bits[i] & 1) + (bits[i + 1] & 1);
    block.samples.push_back(kQamPoints[static_cast<std::size_t>(index)]);
  }
  return block;
}

int qam_nearest_index(Complex z) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    const double d = std::norm(z - kQamPoints[static_cast<std::size_t>(k)]);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

namespace {

Bits qam_demap_units(std::span<const Complex> samples) {
  Bits bits;
  bits.reserve(samples.size() * 2);
  for (const auto& s : samples) {
    const int k = qam_nearest_index(s);
    bits.push_back(static_cast<Bit>(k >> 1));
    bits.push_back(static_cast<Bit>(k & 1));
  }
  return bits;
}

}  // namespace

Bits qam_demap(const SymbolBlock& block) {
  if (!(block.scale > 0.0)) throw std::invalid_argument("qam_demap: scale must be positive");
  std::vector<Complex> units(block.samples.size());
  for (std::size_t i = 0; i < units.size(); ++i) units[i] = block.samples[i] / block.scale;
  return qam_demap_units(units);
}

SymbolBlock modulate(std::span<const Bit> bits, Modulation m) {
  return m == Modulation::kBpsk ? bpsk_map(bits) : qam_map(bits);
}

Bits demodulate(std::span<const Complex> samples, Modulation m) {
  return m == Modulation::kBpsk ? bpsk_demap(samples) : qam_demap_units(samples);
}

Bits joint_xor_demap(std::span<const Complex> superposed, Modulation m, Complex g1, Complex g2) {
  struct Candidate {
    Complex point;
    int xor_label;
  };
  std::vector<Candidate> candidates;
  int labels = 0;
  switch (m) {
    case Modulation::kBpsk: {
      labels = 2;
      const double pts[2] = {-1.0, 1.0};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) candidates.push_back({g1 * pts[a] + g2 * pts[b], a ^ b});
      break;
    }
    case Modulation::kQam4:
      labels = 4;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          candidates.push_back({g1 * kQamPoints[static_cast<std::size_t>(a)] +
                                    g2 * kQamPoints[static_cast<std::size_t>(b)],
                                a ^ b});
      break;
    default:
      throw ConfigError("joint_xor_demap: unknown modulation");
  }

  const int width = labels == 2 ? 1 : 2;
  Bits out;
  out.reserve(superposed.size() * static_cast<std::size_t>(width));
  for (const auto& y : superposed) {
    // Candidates are scanned in (label1, label2) order; strict < keeps the lowest.
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const double d = std::norm(y - candidates[c].point);
      if (d < best_d) {
        best_d = d;
        best = candidates[c].xor_label;
      }
    }
    if (width == 1) {
      out.push_back(static_cast<Bit>(best));
    } else {
      out.push_back(static_cast<Bit>(best >> 1));
      out.push_back(static_cast<Bit>(best & 1));
    }
  }
  return out;
}

}  // namespace marc
