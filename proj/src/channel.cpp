#include "marcsim/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace marc {

std::string_view to_string(ChannelKind k) { return k == ChannelKind::kAwgn ? "awgn" : "rayleigh"; }

ChannelKind parse_channel_kind(std::string_view name) {
  if (name == "awgn") return ChannelKind::kAwgn;
  if (name == "rayleigh") return ChannelKind::kRayleighBlock;
  throw ConfigError("unknown channel '" + std::string(name) + "'");
}

void ChannelConfig::validate() const {
  if (!(power_s1 > 0.0) || !(power_s2 > 0.0) || !(power_r > 0.0)) {
    throw ConfigError("transmit powers must be positive");
  }
}

double noise_variance(double snr_db, double symbol_energy) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  return symbol_energy / std::pow(10.0, snr_db / 10.0);
}

ChannelDraw draw_channel(const ChannelConfig& config, LinkId link, double snr_db, RngStream& rng) {
  ChannelDraw d;
  d.link = link;
  d.snr_db = snr_db;
  d.noise_var = noise_variance(snr_db);
  if (config.kind == ChannelKind::kRayleighBlock) {
    const double amplitude = std::sqrt(-std::log(1.0 - rng.uniform()));
    const double theta = std::numbers::pi - 2.0 * std::numbers::pi * rng.uniform();  // (-pi, pi]
    d.h = std::polar(amplitude, -theta);
  }
  return d;
}

namespace {

void add_noise(std::vector<Complex>& y, double noise_var, RngStream& rng) {
  if (noise_var <= 0.0) return;
  const double sigma = std::sqrt(noise_var / 2.0);
  for (auto& s : y) {
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    s += Complex{sigma * re, sigma * im};
  }
}

}  // namespace

SymbolBlock apply_link(const SymbolBlock& block, const ChannelDraw& draw, double power, RngStream& rng) {
  if (block.samples.empty()) throw std::invalid_argument("apply_link: empty block");
  SymbolBlock out;
  out.modulation = block.modulation;
  out.scale = 1.0;
  const Complex g = std::sqrt(power) * draw.h * block.scale;
  out.samples.resize(block.size());
  for (std::size_t i = 0; i < block.size(); ++i) out.samples[i] = g * block.samples[i];
  add_noise(out.samples, draw.noise_var, rng);
  return out;
}

SymbolBlock superpose(const SymbolBlock& block1, const SymbolBlock& block2, const ChannelDraw& draw1,
                      const ChannelDraw& draw2, double power1, double power2, double noise_var,
                      RngStream& rng) {
  if (block1.size() != block2.size()) throw std::invalid_argument("superpose: block lengths differ");
  SymbolBlock out;
  out.modulation = block1.modulation;
  out.scale = 1.0;
  const Complex g1 = std::sqrt(power1) * draw1.h * block1.scale;
  const Complex g2 = std::sqrt(power2) * draw2.h * block2.scale;
  out.samples.resize(block1.size());
  for (std::size_t i = 0; i < block1.size(); ++i) {
    out.samples[i] = g1 * block1.samples[i] + g2 * block2.samples[i];
  }
  add_noise(out.samples, noise_var, rng);
  return out;
}

std::vector<Complex> Observation::equalized() const {
  std::vector<Complex> z(y.size());
  if (std::abs(gain) == 0.0) return z;
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = y.samples[i] / gain;
  return z;
}

Observation transmit(const SymbolBlock& block, const ChannelDraw& draw, double power, RngStream& rng) {
  Observation obs;
  obs.y = apply_link(block, draw, power, rng);
  obs.gain = std::sqrt(power) * draw.h * block.scale;
  obs.noise_var = draw.noise_var;
  return obs;
}

}  // namespace marc
