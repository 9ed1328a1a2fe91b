#pragma once

#include <limits>
#include <string_view>

#include "marcsim/bitsource.hpp"
#include "marcsim/common.hpp"
#include "marcsim/modem.hpp"

namespace marc {

enum class ChannelKind { kAwgn, kRayleighBlock };
enum class LinkId { kS1R, kS2R, kS1D, kS2D, kRD };

std::string_view to_string(ChannelKind k);
ChannelKind parse_channel_kind(std::string_view name);

// Requesting this SNR disables noise entirely.
inline constexpr double kNoiselessSnrDb = std::numeric_limits<double>::infinity();

struct ChannelConfig {
  ChannelKind kind = ChannelKind::kAwgn;
  double power_s1 = 1.0;
  double power_s2 = 1.0;
  double power_r = 1.0;

  void validate() const;
  bool operator==(const ChannelConfig&) const = default;
};

struct ChannelDraw {
  Complex h{1.0, 0.0};
  double noise_var = 0.0;  // complex N0; each dimension gets N0/2
  double snr_db = 0.0;
  LinkId link = LinkId::kS1R;
};

// N0 = Es / 10^(snr/10); zero for the noiseless sentinel.
double noise_variance(double snr_db, double symbol_energy = 1.0);

// AWGN: h = 1. Rayleigh block: h = a * exp(-j theta), E[a^2] = 1,
// theta uniform on (-pi, pi]; one draw per call (i.e. per packet).
ChannelDraw draw_channel(const ChannelConfig& config, LinkId link, double snr_db, RngStream& rng);

// y = sqrt(power) * h * (scale * x) + z. The result carries scale 1.
SymbolBlock apply_link(const SymbolBlock& block, const ChannelDraw& draw, double power, RngStream& rng);

// y = sqrt(p1) h1 x1 + sqrt(p2) h2 x2 + z with a single noise draw of variance noise_var.
SymbolBlock superpose(const SymbolBlock& block1, const SymbolBlock& block2, const ChannelDraw& draw1,
                      const ChannelDraw& draw2, double power1, double power2, double noise_var,
                      RngStream& rng);

// A received block together with what the receiver knows about it: the
// effective complex amplitude applied to the unnormalized constellation
// (sqrt(P) * h * scale) and the noise variance.
struct Observation {
  SymbolBlock y;
  Complex gain{1.0, 0.0};
  double noise_var = 0.0;

  // Samples divided by the gain, i.e. in constellation units.
  std::vector<Complex> equalized() const;
};

// Superposed reception with the effective gains of both sources.
struct SuperposedObservation {
  SymbolBlock y;
  Complex gain1{1.0, 0.0};
  Complex gain2{1.0, 0.0};
  double noise_var = 0.0;
};

// Sends a modulated block over one link and packages the result.
Observation transmit(const SymbolBlock& block, const ChannelDraw& draw, double power, RngStream& rng);

}  // namespace marc
