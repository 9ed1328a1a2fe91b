#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "marcsim/channel.hpp"
#include "marcsim/destination.hpp"
#include "marcsim/fec.hpp"
#include "marcsim/relay.hpp"
#include "marcsim/stats.hpp"

namespace marc {

// Meaning of the SNR grid values. Noise is always set from Es/N0; with kEbN0
// the grid value is converted using bits per symbol and the code rate.
enum class SnrAxis { kEsN0, kEbN0 };

std::string_view to_string(SnrAxis a);
SnrAxis parse_snr_axis(std::string_view name);

struct SweepConfig {
  std::vector<double> snr_grid;
  std::size_t packets_max = 2000;
  std::size_t min_bit_errors = 100;  // 0 disables early stopping
  SchemeConfig scheme;
  std::optional<CodeConfig> code;  // empty = uncoded
  ChannelConfig channel;
  Modulation modulation = Modulation::kBpsk;
  std::size_t packet_len = 1000;
  std::uint64_t master_seed = 1;
  Topology topology = Topology::kDirect;
  SnrAxis snr_axis = SnrAxis::kEsN0;

  // Throws ConfigError on any inconsistency; called before simulating.
  void validate() const;
  // Es/N0 in dB used to set the noise for a grid value.
  double es_n0_db(double grid_snr_db) const;

  bool operator==(const SweepConfig&) const = default;
};

struct BerRecord {
  std::string scheme;
  double snr_db = 0.0;
  std::uint64_t bits_simulated = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t packets = 0;
  std::uint64_t qdf_selected = 0;
  // Errors of the direct-link-only estimates over the same bits (direct topology).
  std::uint64_t direct_bit_errors = 0;

  double ber() const {
    return bits_simulated == 0 ? 0.0 : static_cast<double>(bit_errors) / static_cast<double>(bits_simulated);
  }
  double qdf_fraction() const {
    return packets == 0 ? 0.0 : static_cast<double>(qdf_selected) / static_cast<double>(packets);
  }
  Interval ci() const { return wilson_interval(bit_errors, bits_simulated); }
  double ci_half_width() const { return wilson_half_width(bit_errors, bits_simulated); }

  bool operator==(const BerRecord&) const = default;
};

// Result of pushing one packet pair through the whole chain.
struct PacketOutcome {
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  std::uint64_t direct_errors = 0;
  bool qdf_selected = false;
};

// Simulates packet `packet_index` at one SNR point. The random streams are a
// pure function of (master_seed, snr_db, packet_index, link), so every scheme
// sees the same source bits and the same channel realizations.
PacketOutcome simulate_packet(const SweepConfig& config, double snr_db, std::uint64_t packet_index);
// Same chain with caller-chosen source packets (length packet_len each).
PacketOutcome simulate_packet(const SweepConfig& config, double snr_db, std::uint64_t packet_index,
                              const Packet& p1, const Packet& p2);

// Runs packets until packets_max or min_bit_errors. Packets are evaluated in
// parallel batches but accumulated in index order, so the record does not
// depend on `threads`.
BerRecord run_point(const SweepConfig& config, double snr_db, unsigned threads = 1);

std::vector<BerRecord> run_sweep(const SweepConfig& config, unsigned threads = 1);

struct ComparisonRow {
  double snr_db = 0.0;
  std::vector<BerRecord> cells;  // one per scheme, in config order
};

struct ComparisonTable {
  std::vector<std::string> schemes;
  std::vector<ComparisonRow> rows;

  std::vector<BerRecord> flatten() const;
};

ComparisonTable compare_schemes(std::span<const SweepConfig> configs, unsigned threads = 1);

}  // namespace marc
