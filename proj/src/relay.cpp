#include "marcsim/relay.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace marc {

std::string_view to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::kAnalogNc: return "analog-nc";
    case SchemeKind::kDmnc: return "dmnc";
    case SchemeKind::kDfNc: return "df-nc";
    case SchemeKind::kQdfNc: return "qdf-nc";
    case SchemeKind::kAdaptive: return "adaptive";
    case SchemeKind::kPointToPoint: return "p2p";
  }
  return "?";
}

SchemeKind parse_scheme_kind(std::string_view name) {
  for (auto k : {SchemeKind::kAnalogNc, SchemeKind::kDmnc, SchemeKind::kDfNc, SchemeKind::kQdfNc,
                 SchemeKind::kAdaptive, SchemeKind::kPointToPoint}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(RelayRxMode m) { return m == RelayRxMode::kOrthogonal ? "orthogonal" : "superposed"; }

RelayRxMode parse_rx_mode(std::string_view name) {
  if (name == "orthogonal") return RelayRxMode::kOrthogonal;
  if (name == "superposed") return RelayRxMode::kSuperposed;
  throw ConfigError("unknown relay reception mode '" + std::string(name) + "'");
}

std::string_view to_string(BerProxyKind k) { return k == BerProxyKind::kLlr ? "llr" : "mismatch"; }

BerProxyKind parse_proxy_kind(std::string_view name) {
  if (name == "llr") return BerProxyKind::kLlr;
  if (name == "mismatch") return BerProxyKind::kMismatch;
  throw ConfigError("unknown error-probability proxy '" + std::string(name) + "'");
}

void SchemeConfig::validate(bool coded) const {
  if (quantizer_bits < 1 || quantizer_bits > 16) throw ConfigError("quantizer bits must be in [1, 16]");
  const bool needs_decoding =
      kind == SchemeKind::kDfNc || kind == SchemeKind::kQdfNc || kind == SchemeKind::kAdaptive;
  if (needs_decoding && !coded) {
    throw ConfigError(std::string(to_string(kind)) + " decodes at the relay and needs a channel code");
  }
  if (needs_decoding && rx_mode != RelayRxMode::kOrthogonal) {
    throw ConfigError(std::string(to_string(kind)) + " requires orthogonal relay reception");
  }
  if (kind == SchemeKind::kAdaptive) {
    if (!p_th) throw ConfigError("adaptive scheme requires a threshold p_th");
    if (!(*p_th >= 0.0 && *p_th <= 1.0)) throw ConfigError("p_th must lie in [0, 1]");
  }
}

std::string SchemeConfig::label() const {
  std::string out{to_string(kind)};
  if (kind == SchemeKind::kQdfNc && quantizer_bits != 3) out += "-" + std::to_string(quantizer_bits) + "b";
  if (kind == SchemeKind::kAdaptive && p_th) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), *p_th);
    out += "-" + std::string(buf, ptr);
  }
  return out;
}

double Quantizer::step() const { return 2.0 * clip / static_cast<double>(1L << bits); }

std::vector<double> Quantizer::levels() const {
  const long count = 1L << bits;
  const double d = step();
  std::vector<double> out(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = (static_cast<double>(i - count / 2) + 0.5) * d;
  return out;
}

double Quantizer::apply(double x) const {
  const long half = 1L << (bits - 1);
  const double d = step();
  const double clamped = std::clamp(x, -clip, clip);
  // Cell k covers (k*d, (k+1)*d]; a value on a boundary goes to the lower level.
  long k = static_cast<long>(std::ceil(clamped / d)) - 1;
  k = std::clamp(k, -half, half - 1);
  return (static_cast<double>(k) + 0.5) * d;
}

double normalization_factor(const SymbolBlock& y) { return std::sqrt(y.mean_energy()); }

SymbolBlock analog_nc_forward(const SymbolBlock& y) {
  const double beta = normalization_factor(y);
  if (!(beta > 0.0)) throw DegenerateInputError("analog_nc_forward: block has zero energy");
  SymbolBlock out;
  out.modulation = y.modulation;
  out.scale = 1.0;
  out.samples.resize(y.size());
  const double factor = y.scale / beta;
  for (std::size_t i = 0; i < y.size(); ++i) out.samples[i] = y.samples[i] * factor;
  return out;
}

SymbolBlock dmnc_forward(const Observation& y1, const Observation& y2, Modulation m) {
  if (y1.y.size() != y2.y.size()) throw std::invalid_argument("dmnc_forward: stream lengths differ");
  const Bits combined = xor_bits(demodulate(y1.equalized(), m), demodulate(y2.equalized(), m));
  return modulate(combined, m);
}

SymbolBlock dmnc_forward(const SuperposedObservation& y, Modulation m) {
  return modulate(joint_xor_demap(y.y.samples, m, y.gain1, y.gain2), m);
}

namespace {

// y * conj(g) / |g|: phase corrected, amplitude preserved.
std::vector<Complex> matched_filter(const Observation& obs) {
  std::vector<Complex> z(obs.y.size());
  const double mag = std::abs(obs.gain);
  const Complex rot = mag > 0.0 ? std::conj(obs.gain) / mag : Complex{1.0, 0.0};
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = obs.y.samples[i] * rot;
  return z;
}

std::size_t info_length_for(std::size_t coded_bits, const CodeConfig& code) {
  if (coded_bits % code.outputs() != 0 || coded_bits / code.outputs() <= static_cast<std::size_t>(code.memory())) {
    throw std::invalid_argument("block length is not a codeword length of the configured code");
  }
  return coded_bits / code.outputs() - static_cast<std::size_t>(code.memory());
}

Bits decode_xor_reencode(const Bits& hard1, const Bits& hard2, const CodeConfig& code) {
  const std::size_t info_length = info_length_for(hard1.size(), code);
  const Bits info1 = viterbi_decode(hard1, info_length, code);
  const Bits info2 = viterbi_decode(hard2, info_length, code);
  return conv_encode(xor_bits(info1, info2), code).bits;
}

}  // namespace

double default_clip(const Observation& obs) {
  const auto z = matched_filter(obs);
  double energy = 0.0;
  for (const auto& s : z) energy += std::norm(s);
  energy /= std::max<std::size_t>(z.size(), 1);
  const double signal_rms = std::sqrt(std::max(energy - obs.noise_var, 0.0));
  const double noise_std = std::sqrt(obs.noise_var / 2.0);
  const double clip = 4.0 * (signal_rms + noise_std);
  return clip > 0.0 ? clip : 1.0;
}

SymbolBlock quantize(const SymbolBlock& block, const Quantizer& q) {
  SymbolBlock out = block;
  for (auto& s : out.samples) s = Complex{q.apply(s.real()), q.apply(s.imag())};
  return out;
}

Bits quantized_hard_decisions(const Observation& obs, const Quantizer& q) {
  auto z = matched_filter(obs);
  for (auto& s : z) s = Complex{q.apply(s.real()), q.apply(s.imag())};
  return demodulate(z, obs.y.modulation);
}

SymbolBlock df_nc_forward(const Observation& y1, const Observation& y2, const CodeConfig& code, Modulation m) {
  if (y1.y.size() != y2.y.size()) throw std::invalid_argument("df_nc_forward: stream lengths differ");
  const Bits hard1 = demodulate(y1.equalized(), m);
  const Bits hard2 = demodulate(y2.equalized(), m);
  return modulate(decode_xor_reencode(hard1, hard2, code), m);
}

SymbolBlock qdf_nc_forward(const Observation& y1, const Observation& y2, int quantizer_bits,
                           const CodeConfig& code, Modulation m) {
  if (y1.y.size() != y2.y.size()) throw std::invalid_argument("qdf_nc_forward: stream lengths differ");
  if (quantizer_bits < 1) throw std::invalid_argument("qdf_nc_forward: quantizer needs at least one bit");
  const Bits hard1 = quantized_hard_decisions(y1, Quantizer{quantizer_bits, default_clip(y1)});
  const Bits hard2 = quantized_hard_decisions(y2, Quantizer{quantizer_bits, default_clip(y2)});
  return modulate(decode_xor_reencode(hard1, hard2, code), m);
}

NoiseStats equivalent_noise_stats(std::span<const int> hard_bits, std::span<const int> reference_bits) {
  if (hard_bits.empty()) throw std::invalid_argument("equivalent_noise_stats: empty input");
  if (hard_bits.size() != reference_bits.size()) {
    throw std::invalid_argument("equivalent_noise_stats: length mismatch");
  }
  const double n = static_cast<double>(hard_bits.size());
  double mu = 0.0;
  for (std::size_t i = 0; i < hard_bits.size(); ++i) {
    if (std::abs(hard_bits[i]) != 1 || std::abs(reference_bits[i]) != 1) {
      throw std::invalid_argument("equivalent_noise_stats: values must be -1 or +1");
    }
    mu += 1.0 - hard_bits[i] * reference_bits[i];
  }
  mu /= n;
  double var = 0.0;
  for (std::size_t i = 0; i < hard_bits.size(); ++i) {
    const double e = 1.0 - hard_bits[i] * reference_bits[i] - mu;
    var += e * e;
  }
  return {mu, var / n};
}

NoiseStats mismatch_stats(const Observation& y, const CodeConfig& code, Modulation m) {
  const Bits raw = demodulate(y.equalized(), m);
  const std::size_t info_length = info_length_for(raw.size(), code);
  const Bits clean = conv_encode(viterbi_decode(raw, info_length, code), code).bits;
  std::vector<int> raw_bipolar(raw.size());
  std::vector<int> clean_bipolar(clean.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw_bipolar[i] = 2 * raw[i] - 1;
    clean_bipolar[i] = 2 * clean[i] - 1;
  }
  return equivalent_noise_stats(clean_bipolar, raw_bipolar);
}

double estimate_ber_proxy(const Observation& y, const CodeConfig& code, Modulation m) {
  return std::clamp(mismatch_stats(y, code, m).mu_z / 2.0, 0.0, 1.0);
}

double estimate_ber_llr(const Observation& y) {
  if (y.y.samples.empty()) throw std::invalid_argument("estimate_ber_llr: empty block");
  const double gain2 = std::norm(y.gain);
  if (gain2 == 0.0) return 0.5;
  if (y.noise_var <= 0.0) return 0.0;
  // Per-dimension noise variance after dividing by the gain.
  const double sigma2 = (y.noise_var / 2.0) / gain2;
  const auto z = y.equalized();
  const bool both_dims = y.y.modulation == Modulation::kQam4;
  double acc = 0.0;
  for (const auto& s : z) {
    acc += 1.0 / (1.0 + std::exp(std::abs(2.0 * s.real() / sigma2)));
    if (both_dims) acc += 1.0 / (1.0 + std::exp(std::abs(2.0 * s.imag() / sigma2)));
  }
  return acc / static_cast<double>(z.size() * (both_dims ? 2 : 1));
}

RelayDecision adaptive_select(double p_ber, double p_th) {
  if (!(p_ber >= 0.0 && p_ber <= 1.0)) throw std::invalid_argument("adaptive_select: p_ber outside [0, 1]");
  if (!(p_th >= 0.0 && p_th <= 1.0)) throw std::invalid_argument("adaptive_select: p_th outside [0, 1]");
  RelayDecision d;
  d.p_ber = p_ber;
  d.chosen = p_ber > p_th ? SchemeKind::kQdfNc : SchemeKind::kAnalogNc;
  return d;
}

}  // namespace marc
