#include "marcsim/destination.hpp"

#include <stdexcept>
#include <string>

namespace marc {

std::string_view to_string(Topology t) { return t == Topology::kDirect ? "direct" : "no-direct"; }

Topology parse_topology(std::string_view name) {
  if (name == "direct") return Topology::kDirect;
  if (name == "no-direct") return Topology::kNoDirect;
  throw ConfigError("unknown topology '" + std::string(name) + "'");
}

std::size_t count_bit_errors(std::span<const Bit> estimate, std::span<const Bit> truth) {
  if (estimate.size() != truth.size()) throw std::invalid_argument("count_bit_errors: length mismatch");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < estimate.size(); ++i) errors += (estimate[i] ^ truth[i]) & 1U;
  return errors;
}

namespace {

Bits decode_if_coded(const Bits& hard, const std::optional<CodeConfig>& code, std::size_t info_length) {
  if (code) return viterbi_decode(hard, info_length, *code);
  if (hard.size() != info_length) throw std::invalid_argument("uncoded block length differs from packet length");
  return hard;
}

Bits encode_if_coded(const Bits& info, const std::optional<CodeConfig>& code) {
  return code ? conv_encode(info, *code).bits : info;
}

}  // namespace

Bits detect_info(const Observation& obs, const std::optional<CodeConfig>& code, std::size_t info_length) {
  return decode_if_coded(demodulate(obs.equalized(), obs.y.modulation), code, info_length);
}

Bits analog_nc_destination_detect(const Observation& relay_block, const AnalogRelayInfo& analog,
                                  int known_source, const SymbolBlock& rebuilt_known,
                                  const Bits& fallback_bits) {
  if (known_source != 1 && known_source != 2) throw std::invalid_argument("known_source must be 1 or 2");
  if (rebuilt_known.size() != relay_block.y.size()) {
    throw std::invalid_argument("analog_nc_destination_detect: rebuilt block length differs");
  }
  const Complex through = analog.beta > 0.0 ? relay_block.gain / analog.beta : Complex{0.0, 0.0};
  const Complex known_gain = through * (known_source == 1 ? analog.gain1 : analog.gain2);
  const Complex other_gain = through * (known_source == 1 ? analog.gain2 : analog.gain1);
  if (std::abs(other_gain) == 0.0) return fallback_bits;

  std::vector<Complex> residual(relay_block.y.size());
  for (std::size_t i = 0; i < residual.size(); ++i) {
    residual[i] = (relay_block.y.samples[i] - known_gain * rebuilt_known.samples[i]) / other_gain;
  }
  return demodulate(residual, relay_block.y.modulation);
}

RecoveryResult recover(const ReceptionSet& reception, const SchemeConfig& scheme,
                       const std::optional<CodeConfig>& code, Modulation m, const Packet& truth1,
                       const Packet& truth2) {
  if (truth1.size() != truth2.size()) throw std::invalid_argument("recover: source packets differ in length");
  const std::size_t info_length = truth1.size();
  RecoveryResult result;

  if (reception.direct_s1) result.direct_s1 = detect_info(*reception.direct_s1, code, info_length);
  if (reception.direct_s2) result.direct_s2 = detect_info(*reception.direct_s2, code, info_length);
  if (result.direct_s1) result.direct_errors += count_bit_errors(*result.direct_s1, truth1.bits);
  if (result.direct_s2) result.direct_errors += count_bit_errors(*result.direct_s2, truth2.bits);

  if (scheme.kind == SchemeKind::kPointToPoint) {
    if (!result.direct_s1 || !result.direct_s2) {
      throw TopologyError("point-to-point reference needs both direct links");
    }
    result.est_s1 = result.direct_s1;
    result.est_s2 = result.direct_s2;
    result.errors_s1 = count_bit_errors(*result.est_s1, truth1.bits);
    result.errors_s2 = count_bit_errors(*result.est_s2, truth2.bits);
    return result;
  }

  if (!reception.relay) throw TopologyError("relay scheme without a relay block");
  const Observation& relay = *reception.relay;
  const SchemeKind branch = scheme.kind == SchemeKind::kAdaptive ? reception.relay_branch_used : scheme.kind;
  if (branch == SchemeKind::kAdaptive || branch == SchemeKind::kPointToPoint) {
    throw TopologyError("relay branch tag must name a concrete forwarding scheme");
  }

  if (branch == SchemeKind::kAnalogNc) {
    const AnalogRelayInfo& analog = reception.analog;
    const Complex through = analog.beta > 0.0 ? relay.gain / analog.beta : Complex{};
    const Bits xor_hard = joint_xor_demap(relay.y.samples, m, through * analog.gain1, through * analog.gain2);
    result.xor_estimate = decode_if_coded(xor_hard, code, info_length);

    // Each direct estimate is rebuilt and cancelled to expose the other source.
    if (result.direct_s1) {
      const SymbolBlock rebuilt = modulate(encode_if_coded(*result.direct_s1, code), m);
      const Bits fallback = reception.direct_s2 ? demodulate(reception.direct_s2->equalized(), m)
                                                : Bits(rebuilt.size() * bits_per_symbol(m), 0);
      result.est_s2 = decode_if_coded(analog_nc_destination_detect(relay, analog, 1, rebuilt, fallback), code,
                                      info_length);
    }
    if (result.direct_s2) {
      const SymbolBlock rebuilt = modulate(encode_if_coded(*result.direct_s2, code), m);
      const Bits fallback = reception.direct_s1 ? demodulate(reception.direct_s1->equalized(), m)
                                                : Bits(rebuilt.size() * bits_per_symbol(m), 0);
      result.est_s1 = decode_if_coded(analog_nc_destination_detect(relay, analog, 2, rebuilt, fallback), code,
                                      info_length);
    }
  } else {
    result.xor_estimate = detect_info(relay, code, info_length);
    if (result.direct_s1) result.est_s2 = xor_bits(*result.xor_estimate, *result.direct_s1);
    if (result.direct_s2) result.est_s1 = xor_bits(*result.xor_estimate, *result.direct_s2);
  }

  result.xor_errors = count_bit_errors(*result.xor_estimate, xor_bits(truth1.bits, truth2.bits));
  if (result.est_s1) result.errors_s1 = count_bit_errors(*result.est_s1, truth1.bits);
  if (result.est_s2) result.errors_s2 = count_bit_errors(*result.est_s2, truth2.bits);
  return result;
}

}  // namespace marc
