#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "marcsim/bitsource.hpp"
#include "marcsim/channel.hpp"
#include "marcsim/fec.hpp"
#include "marcsim/relay.hpp"

namespace marc {

enum class Topology { kDirect, kNoDirect };

std::string_view to_string(Topology t);
Topology parse_topology(std::string_view name);

// What the relay's analog branch did, needed to cancel self-interference:
// the effective source->relay gains and the normalization factor beta.
struct AnalogRelayInfo {
  Complex gain1{1.0, 0.0};
  Complex gain2{1.0, 0.0};
  double beta = 1.0;
};

struct ReceptionSet {
  std::optional<Observation> direct_s1;
  std::optional<Observation> direct_s2;
  std::optional<Observation> relay;  // gain = sqrt(P_R) * h_RD * scale of the forwarded block
  SchemeKind relay_branch_used = SchemeKind::kAnalogNc;
  AnalogRelayInfo analog;  // meaningful when relay_branch_used == kAnalogNc
};

struct RecoveryResult {
  // Per-source estimates; empty when the topology cannot separate the sources.
  std::optional<Bits> est_s1;
  std::optional<Bits> est_s2;
  std::size_t errors_s1 = 0;
  std::size_t errors_s2 = 0;
  // Direct-link-only estimates and their errors (direct topology only).
  std::optional<Bits> direct_s1;
  std::optional<Bits> direct_s2;
  std::size_t direct_errors = 0;
  // XOR message estimate (b1 ^ b2) and its errors; empty for point-to-point.
  std::optional<Bits> xor_estimate;
  std::size_t xor_errors = 0;

  bool per_source_available() const { return est_s1.has_value() && est_s2.has_value(); }
};

// Demap (and decode, when coded) one observation to information bits.
Bits detect_info(const Observation& obs, const std::optional<CodeConfig>& code, std::size_t info_length);

// Self-interference cancellation on the analog relay block: subtracts the
// rebuilt contribution of `known_source` (1 or 2) and hard-demaps the residual
// to the other source's coded bits. Falls back to `fallback_bits` when the
// relay link carries no power.
Bits analog_nc_destination_detect(const Observation& relay_block, const AnalogRelayInfo& analog,
                                  int known_source, const SymbolBlock& rebuilt_known,
                                  const Bits& fallback_bits);

RecoveryResult recover(const ReceptionSet& reception, const SchemeConfig& scheme,
                       const std::optional<CodeConfig>& code, Modulation m, const Packet& truth1,
                       const Packet& truth2);

std::size_t count_bit_errors(std::span<const Bit> estimate, std::span<const Bit> truth);

}  // namespace marc
