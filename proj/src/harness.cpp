#include "marcsim/harness.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "marcsim/bitsource.hpp"

namespace marc {

std::string_view to_string(SnrAxis a) { return a == SnrAxis::kEsN0 ? "esn0" : "ebn0"; }

SnrAxis parse_snr_axis(std::string_view name) {
  if (name == "esn0") return SnrAxis::kEsN0;
  if (name == "ebn0") return SnrAxis::kEbN0;
  throw ConfigError("unknown SNR axis '" + std::string(name) + "'");
}

void SweepConfig::validate() const {
  if (packets_max < 1) throw ConfigError("packets_max must be at least 1");
  if (packet_len < 1) throw ConfigError("packet length must be at least 1");
  for (std::size_t i = 0; i < snr_grid.size(); ++i) {
    if (std::isnan(snr_grid[i])) throw ConfigError("SNR grid contains NaN");
    if (i > 0 && !(snr_grid[i] > snr_grid[i - 1])) throw ConfigError("SNR grid must be strictly increasing");
  }
  if (code) code->validate();
  channel.validate();
  scheme.validate(code.has_value());
  if (scheme.kind == SchemeKind::kPointToPoint && topology == Topology::kNoDirect) {
    throw ConfigError("point-to-point reference needs the direct topology");
  }
  const std::size_t coded_len = code ? code->codeword_length(packet_len) : packet_len;
  if (coded_len % static_cast<std::size_t>(bits_per_symbol(modulation)) != 0) {
    throw ConfigError("block of " + std::to_string(coded_len) + " bits does not fill whole " +
                      std::string(to_string(modulation)) + " symbols");
  }
}

double SweepConfig::es_n0_db(double grid_snr_db) const {
  if (snr_axis == SnrAxis::kEsN0) return grid_snr_db;
  const double rate = code ? 1.0 / static_cast<double>(code->outputs()) : 1.0;
  return grid_snr_db + 10.0 * std::log10(static_cast<double>(bits_per_symbol(modulation)) * rate);
}

namespace {

enum class StreamTag : std::uint64_t { kBitsS1 = 1, kBitsS2, kS1R, kS2R, kS1D, kS2D, kRD, kRelayRx };

struct Streams {
  std::uint64_t seed;
  std::uint64_t point;
  std::uint64_t packet;

  RngStream operator()(StreamTag tag) const {
    return RngStream(seed, stream_key({point, packet, static_cast<std::uint64_t>(tag)}));
  }
};

SymbolBlock sum_blocks(const SymbolBlock& a, const SymbolBlock& b) {
  SymbolBlock out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] = a.transmitted(i) + b.transmitted(i);
  out.scale = 1.0;
  return out;
}

}  // namespace

PacketOutcome simulate_packet(const SweepConfig& config, double snr_db, std::uint64_t packet_index) {
  const Streams streams{config.master_seed, std::bit_cast<std::uint64_t>(snr_db), packet_index};
  RngStream bits1 = streams(StreamTag::kBitsS1);
  RngStream bits2 = streams(StreamTag::kBitsS2);
  const Packet p1 = generate_packet(config.packet_len, SourceId::kS1, bits1);
  const Packet p2 = generate_packet(config.packet_len, SourceId::kS2, bits2);
  return simulate_packet(config, snr_db, packet_index, p1, p2);
}

PacketOutcome simulate_packet(const SweepConfig& config, double snr_db, std::uint64_t packet_index,
                              const Packet& p1, const Packet& p2) {
  if (p1.size() != config.packet_len || p2.size() != config.packet_len) {
    throw std::invalid_argument("simulate_packet: packet length differs from the configuration");
  }
  const Streams streams{config.master_seed, std::bit_cast<std::uint64_t>(snr_db), packet_index};
  const double es_n0 = config.es_n0_db(snr_db);
  const Modulation m = config.modulation;
  const ChannelConfig& ch = config.channel;
  const Bits c1 = config.code ? conv_encode(p1.bits, *config.code).bits : p1.bits;
  const Bits c2 = config.code ? conv_encode(p2.bits, *config.code).bits : p2.bits;
  const SymbolBlock x1 = modulate(c1, m);
  const SymbolBlock x2 = modulate(c2, m);

  ReceptionSet rx;
  if (config.topology == Topology::kDirect) {
    RngStream s1d = streams(StreamTag::kS1D);
    RngStream s2d = streams(StreamTag::kS2D);
    rx.direct_s1 = transmit(x1, draw_channel(ch, LinkId::kS1D, es_n0, s1d), ch.power_s1, s1d);
    rx.direct_s2 = transmit(x2, draw_channel(ch, LinkId::kS2D, es_n0, s2d), ch.power_s2, s2d);
  }

  PacketOutcome outcome;
  const SchemeConfig& scheme = config.scheme;
  if (scheme.kind != SchemeKind::kPointToPoint) {
    RngStream s1r = streams(StreamTag::kS1R);
    RngStream s2r = streams(StreamTag::kS2R);
    const ChannelDraw h1 = draw_channel(ch, LinkId::kS1R, es_n0, s1r);
    const ChannelDraw h2 = draw_channel(ch, LinkId::kS2R, es_n0, s2r);

    std::optional<Observation> o1;
    std::optional<Observation> o2;
    std::optional<SuperposedObservation> sup;
    if (scheme.rx_mode == RelayRxMode::kOrthogonal) {
      o1 = transmit(x1, h1, ch.power_s1, s1r);
      o2 = transmit(x2, h2, ch.power_s2, s2r);
    } else {
      RngStream relay_rx = streams(StreamTag::kRelayRx);
      SuperposedObservation s;
      s.y = superpose(x1, x2, h1, h2, ch.power_s1, ch.power_s2, h1.noise_var, relay_rx);
      s.gain1 = std::sqrt(ch.power_s1) * h1.h * x1.scale;
      s.gain2 = std::sqrt(ch.power_s2) * h2.h * x2.scale;
      s.noise_var = h1.noise_var;
      sup = std::move(s);
    }

    SchemeKind branch = scheme.kind;
    if (scheme.kind == SchemeKind::kAdaptive) {
      double p_ber = 0.0;
      if (scheme.proxy == BerProxyKind::kLlr) {
        p_ber = 0.5 * (estimate_ber_llr(*o1) + estimate_ber_llr(*o2));
      } else {
        p_ber = 0.5 * (estimate_ber_proxy(*o1, *config.code, m) + estimate_ber_proxy(*o2, *config.code, m));
      }
      branch = adaptive_select(p_ber, *scheme.p_th).chosen;
      outcome.qdf_selected = branch == SchemeKind::kQdfNc;
    }

    SymbolBlock forwarded;
    switch (branch) {
      case SchemeKind::kAnalogNc: {
        const SymbolBlock combined = sup ? sup->y : sum_blocks(o1->y, o2->y);
        rx.analog.gain1 = sup ? sup->gain1 : o1->gain;
        rx.analog.gain2 = sup ? sup->gain2 : o2->gain;
        rx.analog.beta = normalization_factor(combined);
        if (rx.analog.beta > 0.0) {
          forwarded = analog_nc_forward(combined);
        } else {
          // Noiseless antipodal sources cancel exactly; a zero block needs no scaling.
          forwarded = combined;
          rx.analog.beta = 1.0;
        }
        break;
      }
      case SchemeKind::kDmnc:
        forwarded = sup ? dmnc_forward(*sup, m) : dmnc_forward(*o1, *o2, m);
        break;
      case SchemeKind::kDfNc:
        forwarded = df_nc_forward(*o1, *o2, *config.code, m);
        break;
      case SchemeKind::kQdfNc:
        forwarded = qdf_nc_forward(*o1, *o2, scheme.quantizer_bits, *config.code, m);
        break;
      default:
        throw ConfigError("unsupported relay branch");
    }
    rx.relay_branch_used = branch;

    RngStream rd = streams(StreamTag::kRD);
    rx.relay = transmit(forwarded, draw_channel(ch, LinkId::kRD, es_n0, rd), ch.power_r, rd);
  }

  const RecoveryResult r = recover(rx, scheme, config.code, m, p1, p2);
  if (r.per_source_available()) {
    outcome.bits = 2 * config.packet_len;
    outcome.errors = r.errors_s1 + r.errors_s2;
    outcome.direct_errors = r.direct_errors;
  } else {
    outcome.bits = config.packet_len;
    outcome.errors = r.xor_errors;
    outcome.direct_errors = r.xor_errors;
  }
  return outcome;
}

BerRecord run_point(const SweepConfig& config, double snr_db, unsigned threads) {
  config.validate();
  BerRecord rec;
  rec.scheme = config.scheme.label();
  rec.snr_db = snr_db;

  auto done = [&] {
    return rec.packets >= config.packets_max ||
           (config.min_bit_errors > 0 && rec.bit_errors >= config.min_bit_errors);
  };
  auto accumulate = [&](const PacketOutcome& o) {
    rec.packets += 1;
    rec.bits_simulated += o.bits;
    rec.bit_errors += o.errors;
    rec.direct_bit_errors += o.direct_errors;
    rec.qdf_selected += o.qdf_selected ? 1 : 0;
  };

  if (threads <= 1) {
    while (!done()) accumulate(simulate_packet(config, snr_db, rec.packets));
    return rec;
  }

  // Batches are computed concurrently, then folded in packet order so the
  // stopping point is the same as in the serial loop.
  const std::size_t batch = static_cast<std::size_t>(threads) * 4;
  std::vector<PacketOutcome> outcomes(batch);
  while (!done()) {
    const std::uint64_t first = rec.packets;
    const std::size_t count = std::min<std::uint64_t>(batch, config.packets_max - first);
    {
      std::vector<std::jthread> workers;
      workers.reserve(threads);
      for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
          for (std::size_t i = t; i < count; i += threads) outcomes[i] = simulate_packet(config, snr_db, first + i);
        });
      }
    }
    for (std::size_t i = 0; i < count && !done(); ++i) accumulate(outcomes[i]);
  }
  return rec;
}

std::vector<BerRecord> run_sweep(const SweepConfig& config, unsigned threads) {
  config.validate();
  std::vector<BerRecord> out;
  out.reserve(config.snr_grid.size());
  for (double snr : config.snr_grid) out.push_back(run_point(config, snr, threads));
  return out;
}

std::vector<BerRecord> ComparisonTable::flatten() const {
  std::vector<BerRecord> out;
  for (std::size_t s = 0; s < schemes.size(); ++s)
    for (const auto& row : rows) out.push_back(row.cells[s]);
  return out;
}

ComparisonTable compare_schemes(std::span<const SweepConfig> configs, unsigned threads) {
  ComparisonTable table;
  if (configs.empty()) return table;
  for (const auto& c : configs) {
    if (c.snr_grid != configs.front().snr_grid) throw std::invalid_argument("compare_schemes: SNR grids differ");
  }
  std::vector<std::vector<BerRecord>> columns;
  for (const auto& c : configs) {
    table.schemes.push_back(c.scheme.label());
    columns.push_back(run_sweep(c, threads));
  }
  for (std::size_t i = 0; i < configs.front().snr_grid.size(); ++i) {
    ComparisonRow row;
    row.snr_db = configs.front().snr_grid[i];
    for (const auto& col : columns) row.cells.push_back(col[i]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace marc
