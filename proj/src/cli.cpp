#include "marcsim/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

namespace marc::cli {

using nlohmann::json;

namespace {

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw UsageError("--snr-step: must be positive");
  if (stop < start) throw UsageError("--snr-stop: must not be below --snr-start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = start + static_cast<double>(i) * step;
  return grid;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::kCsv ? "csv" : "json"; }

OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  throw ConfigError("unknown format '" + std::string(s) + "'");
}

json sweep_to_json(const SweepConfig& c) {
  json j;
  j["snr_grid"] = c.snr_grid;
  j["packets_max"] = c.packets_max;
  j["min_bit_errors"] = c.min_bit_errors;
  j["scheme"] = {{"kind", to_string(c.scheme.kind)},
                 {"p_th", c.scheme.p_th ? json(*c.scheme.p_th) : json(nullptr)},
                 {"quantizer_bits", c.scheme.quantizer_bits},
                 {"rx_mode", to_string(c.scheme.rx_mode)},
                 {"proxy", to_string(c.scheme.proxy)}};
  j["code"] = c.code ? json(c.code->to_string()) : json(nullptr);
  j["channel"] = {{"kind", to_string(c.channel.kind)},
                  {"power_s1", c.channel.power_s1},
                  {"power_s2", c.channel.power_s2},
                  {"power_r", c.channel.power_r}};
  j["modulation"] = to_string(c.modulation);
  j["packet_len"] = c.packet_len;
  j["master_seed"] = c.master_seed;
  j["topology"] = to_string(c.topology);
  j["snr_axis"] = to_string(c.snr_axis);
  return j;
}

SweepConfig sweep_from_json(const json& j) {
  SweepConfig c;
  c.snr_grid = j.at("snr_grid").get<std::vector<double>>();
  c.packets_max = j.at("packets_max").get<std::size_t>();
  c.min_bit_errors = j.at("min_bit_errors").get<std::size_t>();
  const json& s = j.at("scheme");
  c.scheme.kind = parse_scheme_kind(s.at("kind").get<std::string>());
  if (!s.at("p_th").is_null()) c.scheme.p_th = s.at("p_th").get<double>();
  c.scheme.quantizer_bits = s.at("quantizer_bits").get<int>();
  c.scheme.rx_mode = parse_rx_mode(s.at("rx_mode").get<std::string>());
  c.scheme.proxy = parse_proxy_kind(s.at("proxy").get<std::string>());
  if (!j.at("code").is_null()) c.code = CodeConfig::parse(j.at("code").get<std::string>());
  const json& ch = j.at("channel");
  c.channel.kind = parse_channel_kind(ch.at("kind").get<std::string>());
  c.channel.power_s1 = ch.at("power_s1").get<double>();
  c.channel.power_s2 = ch.at("power_s2").get<double>();
  c.channel.power_r = ch.at("power_r").get<double>();
  c.modulation = parse_modulation(j.at("modulation").get<std::string>());
  c.packet_len = j.at("packet_len").get<std::size_t>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.topology = parse_topology(j.at("topology").get<std::string>());
  c.snr_axis = parse_snr_axis(j.at("snr_axis").get<std::string>());
  return c;
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig6", "fig7", "fig8"}; }

std::vector<SweepConfig> preset_configs(std::string_view name, const SweepConfig& base,
                                        const std::vector<double>& thresholds) {
  std::vector<SweepConfig> out;
  if (name == "fig6") {
    // Uncoded QAM over AWGN; both schemes receive the over-the-air sum.
    SweepConfig b = base;
    b.modulation = Modulation::kQam4;
    b.code.reset();
    b.channel.kind = ChannelKind::kAwgn;
    b.snr_grid = make_grid(0.0, 20.0, 2.0);
    b.snr_axis = SnrAxis::kEbN0;
    b.packets_max = 1000;
    b.min_bit_errors = 0;
    b.scheme.rx_mode = RelayRxMode::kSuperposed;
    b.scheme.p_th.reset();
    for (auto kind : {SchemeKind::kAnalogNc, SchemeKind::kDmnc}) {
      b.scheme.kind = kind;
      out.push_back(b);
    }
    return out;
  }

  SweepConfig coded = base;
  coded.modulation = Modulation::kBpsk;
  if (!coded.code) coded.code = CodeConfig::default_k6();
  coded.snr_axis = SnrAxis::kEsN0;
  coded.packets_max = 2000;
  coded.min_bit_errors = 100;

  auto make = [&](SchemeKind kind) {
    SweepConfig c = coded;
    c.scheme.kind = kind;
    c.scheme.rx_mode = RelayRxMode::kOrthogonal;
    c.scheme.p_th.reset();
    return c;
  };

  if (name == "fig7") {
    coded.snr_grid = make_grid(0.0, 20.0, 2.0);
    out.push_back(make(SchemeKind::kAnalogNc));
    out.push_back(make(SchemeKind::kDfNc));
    out.push_back(make(SchemeKind::kQdfNc));
    return out;
  }
  if (name == "fig8") {
    coded.snr_grid = make_grid(-20.0, 10.0, 2.0);
    out.push_back(make(SchemeKind::kAnalogNc));
    out.push_back(make(SchemeKind::kQdfNc));
    for (double th : thresholds) {
      SweepConfig c = make(SchemeKind::kAdaptive);
      c.scheme.p_th = th;
      out.push_back(c);
    }
    return out;
  }
  throw UsageError("--preset: unknown preset '" + std::string(name) + "' (expected fig6, fig7 or fig8)");
}

std::string usage_text() {
  std::ostringstream os;
  os << kToolName << " " << kToolVersion
     << " - Monte Carlo BER simulator for network-coded relaying over the two-source multiple access relay "
        "channel\n\n"
     << "Usage: " << kToolName << " (--preset fig6|fig7|fig8 | --scheme NAME | --from-manifest FILE) [options]\n"
     << "Run '" << kToolName << " --help' for the full option list.\n";
  return os.str();
}

RunManifest parse_args(std::span<const std::string> args, const char* env_seed) {
  if (args.empty()) throw UsageError(usage_text());

  CLI::App app{"Monte Carlo BER simulator for network-coded relaying (two-source multiple access relay channel)",
               std::string(kToolName)};
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string preset, scheme, channel = "awgn", mod = "bpsk", code = "6:23,35", rx_mode = "orthogonal";
  std::string topology = "direct", format = "csv", snr_axis = "esn0", proxy = "llr";
  std::string out = "-", manifest_path, from_manifest;
  double snr_start = 0.0, snr_stop = 20.0, snr_step = 2.0, pth = 0.3, doppler = 0.0, slot = 0.0;
  std::size_t packets = 2000, packet_len = 1000, min_errors = 100;
  int quantizer_bits = 3;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  bool direct_ber = false;

  const auto presets = preset_names();
  auto* o_preset = app.add_option("--preset", preset, "Experiment preset")->check(CLI::IsMember(presets));
  auto* o_scheme = app.add_option("--scheme", scheme, "Relay scheme")
                       ->check(CLI::IsMember({"analog-nc", "dmnc", "df-nc", "qdf-nc", "adaptive", "p2p"}));
  o_preset->excludes(o_scheme);
  auto* o_from = app.add_option("--from-manifest", from_manifest, "Re-run the sweeps recorded in a manifest")
                     ->check(CLI::ExistingFile);
  o_from->excludes(o_preset)->excludes(o_scheme);
  auto* o_start = app.add_option("--snr-start", snr_start, "First SNR point [dB]");
  auto* o_stop = app.add_option("--snr-stop", snr_stop, "Last SNR point [dB]");
  auto* o_step = app.add_option("--snr-step", snr_step, "SNR step [dB]")->check(CLI::PositiveNumber);
  auto* o_packets = app.add_option("--packets", packets, "Maximum packets per SNR point")->check(CLI::PositiveNumber);
  auto* o_len = app.add_option("--packet-len", packet_len, "Information bits per packet")->check(CLI::PositiveNumber);
  auto* o_min = app.add_option("--min-errors", min_errors, "Stop a point after this many bit errors (0 = never)");
  auto* o_pth = app.add_option("--pth", pth, "Adaptive threshold P_th")->check(CLI::Range(0.0, 1.0));
  auto* o_qbits = app.add_option("--quantizer-bits", quantizer_bits, "QDF-NC quantizer depth")->check(CLI::Range(1, 16));
  auto* o_channel = app.add_option("--channel", channel, "Channel model")->check(CLI::IsMember({"awgn", "rayleigh"}));
  auto* o_mod = app.add_option("--mod", mod, "Modulation")->check(CLI::IsMember({"bpsk", "qam4"}));
  auto* o_code = app.add_option("--code", code, "Convolutional code K:g1,g2 (octal) or 'none'");
  auto* o_rx = app.add_option("--rx-mode", rx_mode, "Relay reception")->check(CLI::IsMember({"orthogonal", "superposed"}));
  auto* o_topo = app.add_option("--topology", topology, "Direct links present or not")
                     ->check(CLI::IsMember({"direct", "no-direct"}));
  auto* o_axis = app.add_option("--snr-axis", snr_axis, "Meaning of SNR values")->check(CLI::IsMember({"esn0", "ebn0"}));
  app.add_option("--proxy", proxy, "Adaptive error-probability estimate")
                      ->check(CLI::IsMember({"llr", "mismatch"}));
  auto* o_seed = app.add_option("--seed", seed, "Master seed (falls back to $MARC_SIM_SEED)");
  app.add_option("--out", out, "Results file ('-' for stdout)");
  app.add_option("--manifest", manifest_path, "Manifest path (default: <out>.manifest.json)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1U, 1024U));
  app.add_flag("--direct-ber", direct_ber, "Also report direct-link-only BER rows");
  app.add_option("--doppler", doppler, "Recorded in the manifest; not used by any channel model");
  app.add_option("--slot-duration", slot, "Recorded in the manifest; not used");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested(std::string(kToolVersion) + "\n");
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunManifest m;
  m.timestamp = utc_timestamp();
  m.threads = threads;
  m.report_direct = direct_ber;
  m.doppler_hz = doppler;
  m.slot_duration_s = slot;
  m.out_path = out;
  m.format = parse_format(format);

  if (!from_manifest.empty()) {
    std::ifstream in(from_manifest);
    std::stringstream buf;
    buf << in.rdbuf();
    RunManifest loaded = manifest_from_json(buf.str());
    m.sweeps = std::move(loaded.sweeps);
    m.master_seed = loaded.master_seed;
    m.preset = loaded.preset;
    m.doppler_hz = loaded.doppler_hz;
    m.slot_duration_s = loaded.slot_duration_s;
    m.report_direct = loaded.report_direct || direct_ber;
  } else {
    if (preset.empty() && scheme.empty()) throw UsageError("one of --preset, --scheme or --from-manifest is required");

    if (o_seed->count() == 0 && env_seed != nullptr && *env_seed != '\0') {
      const std::string_view sv{env_seed};
      auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), seed);
      if (ec != std::errc{} || ptr != sv.data() + sv.size()) {
        throw UsageError(std::string(kSeedEnvVar) + ": not an unsigned integer");
      }
    }
    m.master_seed = seed;

    SweepConfig base;
    try {
      base.snr_grid = make_grid(snr_start, snr_stop, snr_step);
      base.packets_max = packets;
      base.min_bit_errors = min_errors;
      base.packet_len = packet_len;
      base.master_seed = seed;
      base.scheme.quantizer_bits = quantizer_bits;
      base.scheme.rx_mode = parse_rx_mode(rx_mode);
      base.scheme.proxy = parse_proxy_kind(proxy);
      base.channel.kind = parse_channel_kind(channel);
      base.modulation = parse_modulation(mod);
      if (code != "none") base.code = CodeConfig::parse(code);
      base.topology = parse_topology(topology);
      base.snr_axis = parse_snr_axis(snr_axis);
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }

    if (!preset.empty()) {
      m.preset = preset;
      SweepConfig template_base = base;
      if (o_code->count() == 0) template_base.code.reset();
      const std::vector<double> thresholds =
          o_pth->count() > 0 ? std::vector<double>{pth} : std::vector<double>{0.2, 0.3, 0.4};
      m.sweeps = preset_configs(preset, template_base, thresholds);
      // Explicit flags win over preset values.
      for (auto& c : m.sweeps) {
        if (o_start->count() || o_stop->count() || o_step->count()) c.snr_grid = base.snr_grid;
        if (o_packets->count()) c.packets_max = packets;
        if (o_min->count()) c.min_bit_errors = min_errors;
        if (o_len->count()) c.packet_len = packet_len;
        if (o_channel->count()) c.channel.kind = base.channel.kind;
        if (o_mod->count()) c.modulation = base.modulation;
        if (o_code->count()) c.code = base.code;
        if (o_rx->count()) c.scheme.rx_mode = base.scheme.rx_mode;
        if (o_topo->count()) c.topology = base.topology;
        if (o_axis->count()) c.snr_axis = base.snr_axis;
        if (o_qbits->count()) c.scheme.quantizer_bits = quantizer_bits;
      }
    } else {
      SweepConfig c = base;
      c.scheme.kind = parse_scheme_kind(scheme);
      if (c.scheme.kind == SchemeKind::kAdaptive) c.scheme.p_th = pth;
      if (o_code->count() == 0 && c.scheme.kind != SchemeKind::kDfNc && c.scheme.kind != SchemeKind::kQdfNc &&
          c.scheme.kind != SchemeKind::kAdaptive) {
        // Schemes that do not decode at the relay default to uncoded.
        c.code.reset();
      }
      m.sweeps.push_back(c);
    }
  }

  for (const auto& c : m.sweeps) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  }

  if (m.out_path != "-") {
    m.manifest_path = manifest_path.empty() ? m.out_path + ".manifest.json" : manifest_path;
  } else {
    m.manifest_path = manifest_path;
  }
  return m;
}

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string render_csv(std::span<const BerRecord> records) {
  std::string out{kCsvHeader};
  out += '\n';
  for (const auto& r : records) {
    out += r.scheme;
    out += ',' + format_double(r.snr_db);
    out += ',' + std::to_string(r.bits_simulated);
    out += ',' + std::to_string(r.bit_errors);
    out += ',' + format_double(r.ber());
    out += ',' + format_double(r.ci_half_width());
    out += ',' + std::to_string(r.packets);
    out += ',' + format_double(r.qdf_fraction());
    out += '\n';
  }
  return out;
}

std::string render_json(std::span<const BerRecord> records) {
  json arr = json::array();
  for (const auto& r : records) {
    arr.push_back({{"scheme", r.scheme},
                   {"snr_db", r.snr_db},
                   {"bits", r.bits_simulated},
                   {"errors", r.bit_errors},
                   {"ber", r.ber()},
                   {"ci_half_width", r.ci_half_width()},
                   {"packets", r.packets},
                   {"qdf_selected_fraction", r.qdf_fraction()},
                   {"qdf_selected", r.qdf_selected},
                   {"direct_errors", r.direct_bit_errors}});
  }
  return arr.dump(2) + "\n";
}

std::vector<BerRecord> parse_json_records(std::string_view text) {
  const json arr = json::parse(text);
  std::vector<BerRecord> out;
  for (const auto& j : arr) {
    BerRecord r;
    r.scheme = j.at("scheme").get<std::string>();
    r.snr_db = j.at("snr_db").get<double>();
    r.bits_simulated = j.at("bits").get<std::uint64_t>();
    r.bit_errors = j.at("errors").get<std::uint64_t>();
    r.packets = j.at("packets").get<std::uint64_t>();
    r.qdf_selected = j.at("qdf_selected").get<std::uint64_t>();
    r.direct_bit_errors = j.at("direct_errors").get<std::uint64_t>();
    out.push_back(std::move(r));
  }
  return out;
}

void emit_results(std::span<const BerRecord> records, OutputFormat format, const std::string& path) {
  const std::string text = format == OutputFormat::kCsv ? render_csv(records) : render_json(records);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["tool"] = kToolName;
  j["tool_version"] = m.tool_version;
  j["master_seed"] = m.master_seed;
  j["timestamp"] = m.timestamp;
  j["preset"] = m.preset;
  j["outputs"] = {{"results", m.out_path}, {"manifest", m.manifest_path}, {"format", to_string(m.format)}};
  j["threads"] = m.threads;
  j["report_direct"] = m.report_direct;
  j["unused"] = {{"doppler_hz", m.doppler_hz}, {"slot_duration_s", m.slot_duration_s}};
  json sweeps = json::array();
  for (const auto& c : m.sweeps) sweeps.push_back(sweep_to_json(c));
  j["sweeps"] = sweeps;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(std::string_view text) {
  RunManifest m;
  try {
    const json j = json::parse(text);
    m.tool_version = j.at("tool_version").get<std::string>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.timestamp = j.at("timestamp").get<std::string>();
    m.preset = j.at("preset").get<std::string>();
    m.out_path = j.at("outputs").at("results").get<std::string>();
    m.manifest_path = j.at("outputs").at("manifest").get<std::string>();
    m.format = parse_format(j.at("outputs").at("format").get<std::string>());
    m.threads = j.at("threads").get<unsigned>();
    m.report_direct = j.at("report_direct").get<bool>();
    m.doppler_hz = j.at("unused").at("doppler_hz").get<double>();
    m.slot_duration_s = j.at("unused").at("slot_duration_s").get<double>();
    for (const auto& s : j.at("sweeps")) m.sweeps.push_back(sweep_from_json(s));
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed manifest: ") + e.what());
  } catch (const ConfigError& e) {
    throw UsageError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

std::vector<BerRecord> execute(const RunManifest& manifest) {
  std::vector<BerRecord> out;
  for (const auto& c : manifest.sweeps) {
    auto records = run_sweep(c, manifest.threads);
    out.insert(out.end(), records.begin(), records.end());
    if (manifest.report_direct && c.scheme.kind != SchemeKind::kPointToPoint && c.topology == Topology::kDirect) {
      for (auto r : records) {
        r.scheme += "/direct";
        r.bit_errors = r.direct_bit_errors;
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  try {
    manifest = parse_args(args, std::getenv(std::string(kSeedEnvVar).c_str()));
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const UsageError& e) {
    err << e.what();
    if (std::string_view(e.what()).back() != '\n') err << "\n";
    return 2;
  }

  try {
    const auto records = execute(manifest);
    if (manifest.out_path == "-") {
      out << (manifest.format == OutputFormat::kCsv ? render_csv(records) : render_json(records));
    } else {
      emit_results(records, manifest.format, manifest.out_path);
    }
    if (!manifest.manifest_path.empty()) {
      std::ofstream f(manifest.manifest_path, std::ios::binary | std::ios::trunc);
      if (!f) throw IoError("cannot open '" + manifest.manifest_path + "' for writing");
      f << manifest_to_json(manifest);
      if (!f) throw IoError("failed writing '" + manifest.manifest_path + "'");
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace marc::cli
