#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "marcsim/harness.hpp"

namespace marc::cli {

inline constexpr std::string_view kToolName = "marc-sim";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kCsvHeader =
    "scheme,snr_db,bits,errors,ber,ci_half_width,packets,qdf_selected_fraction";
inline constexpr std::string_view kSeedEnvVar = "MARC_SIM_SEED";

enum class OutputFormat { kCsv, kJson };

// Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --help / --version; what() holds the text to print. Exit code 0.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exit code 1.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything needed to re-run an experiment bit-identically.
struct RunManifest {
  std::vector<SweepConfig> sweeps;
  std::string tool_version{kToolVersion};
  std::uint64_t master_seed = 1;
  std::string timestamp;
  std::string preset;  // empty when built from --scheme
  std::string out_path;
  std::string manifest_path;
  OutputFormat format = OutputFormat::kCsv;
  unsigned threads = 1;
  bool report_direct = false;
  // Accepted and recorded only; no shipped channel model uses them.
  double doppler_hz = 0.0;
  double slot_duration_s = 0.0;
};

std::vector<std::string> preset_names();

// Sweep configurations of a named preset (fig6, fig7, fig8) built on top of
// `base` for the fields the preset does not pin. Unknown name -> UsageError.
std::vector<SweepConfig> preset_configs(std::string_view name, const SweepConfig& base,
                                        const std::vector<double>& thresholds);

// Parses argv (without the program name). Throws UsageError on bad input or
// an empty argument list, HelpRequested for --help/--version. `env_seed` is
// the value of MARC_SIM_SEED, if set.
RunManifest parse_args(std::span<const std::string> args, const char* env_seed = nullptr);
std::string usage_text();

std::string format_double(double v);
std::string render_csv(std::span<const BerRecord> records);
std::string render_json(std::span<const BerRecord> records);
std::vector<BerRecord> parse_json_records(std::string_view text);

// Writes records to `path`; throws IoError when the file cannot be written.
void emit_results(std::span<const BerRecord> records, OutputFormat format, const std::string& path);

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(std::string_view text);

// Runs every sweep of the manifest in order. With report_direct, each sweep
// is followed by "<label>/direct" rows counting direct-link-only errors.
std::vector<BerRecord> execute(const RunManifest& manifest);

// Full command-line entry point; returns the process exit code.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace marc::cli
