#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "marcsim/channel.hpp"
#include "marcsim/fec.hpp"
#include "marcsim/modem.hpp"

namespace marc {

// kPointToPoint is the no-relay reference mode (direct links only).
enum class SchemeKind { kAnalogNc, kDmnc, kDfNc, kQdfNc, kAdaptive, kPointToPoint };
enum class RelayRxMode { kOrthogonal, kSuperposed };

// How the adaptive relay estimates the error probability of what it received.
//   kLlr:      mean of 1/(1+exp|L|) over channel LLRs of the raw samples.
//   kMismatch: fraction of raw hard decisions that disagree with the
//              decoded-and-re-encoded sequence (mu_z / 2).
enum class BerProxyKind { kLlr, kMismatch };

std::string_view to_string(SchemeKind k);
SchemeKind parse_scheme_kind(std::string_view name);
std::string_view to_string(RelayRxMode m);
RelayRxMode parse_rx_mode(std::string_view name);
std::string_view to_string(BerProxyKind k);
BerProxyKind parse_proxy_kind(std::string_view name);

struct SchemeConfig {
  SchemeKind kind = SchemeKind::kAnalogNc;
  std::optional<double> p_th;  // adaptive only
  int quantizer_bits = 3;
  RelayRxMode rx_mode = RelayRxMode::kOrthogonal;
  BerProxyKind proxy = BerProxyKind::kLlr;

  // `coded` tells whether a channel code is configured.
  void validate(bool coded) const;
  // Curve label, e.g. "qdf-nc" or "adaptive-0.3".
  std::string label() const;

  bool operator==(const SchemeConfig&) const = default;
};

// Uniform midrise quantizer over [-clip, clip], 2^bits levels per dimension.
struct Quantizer {
  int bits = 3;
  double clip = 4.0;

  double step() const;
  std::vector<double> levels() const;
  double apply(double x) const;
};

struct RelayDecision {
  SchemeKind chosen = SchemeKind::kAnalogNc;
  double p_ber = 0.0;
  double mu_z = 0.0;
  double sigma2_z = 0.0;
};

struct NoiseStats {
  double mu_z = 0.0;
  double sigma2_z = 0.0;
};

// beta = sqrt(mean |y|^2) of the block (physical samples).
double normalization_factor(const SymbolBlock& y);
// y / beta, so the forwarded block has unit average energy.
SymbolBlock analog_nc_forward(const SymbolBlock& y);

SymbolBlock dmnc_forward(const Observation& y1, const Observation& y2, Modulation m);
SymbolBlock dmnc_forward(const SuperposedObservation& y, Modulation m);

// Clip range used when none is given: 4 * (estimated signal RMS + noise std).
double default_clip(const Observation& obs);

SymbolBlock quantize(const SymbolBlock& block, const Quantizer& q);

// Hard decisions on an observation after quantizing the phase-corrected
// matched-filter output with q.
Bits quantized_hard_decisions(const Observation& obs, const Quantizer& q);

SymbolBlock df_nc_forward(const Observation& y1, const Observation& y2, const CodeConfig& code,
                          Modulation m);
// quantizer_bits > 0; the clip range is chosen per stream by default_clip.
SymbolBlock qdf_nc_forward(const Observation& y1, const Observation& y2, int quantizer_bits,
                           const CodeConfig& code, Modulation m);

// Literal sample mean / variance of 1 - b * b_hat over bipolar sequences.
NoiseStats equivalent_noise_stats(std::span<const int> hard_bits, std::span<const int> reference_bits);

// Mismatch proxy: demap, decode, re-encode; returns mu_z / 2 in [0, 1].
double estimate_ber_proxy(const Observation& y, const CodeConfig& code, Modulation m);
NoiseStats mismatch_stats(const Observation& y, const CodeConfig& code, Modulation m);

// LLR proxy: mean over all raw bit positions of 1 / (1 + exp|L|). In [0, 0.5].
double estimate_ber_llr(const Observation& y);

RelayDecision adaptive_select(double p_ber, double p_th);

}  // namespace marc
