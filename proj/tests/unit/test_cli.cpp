#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "marcsim/cli.hpp"

using namespace marc;
using namespace marc::cli;

namespace {

RunManifest parse(std::vector<std::string> args, const char* env = nullptr) { return parse_args(args, env); }

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "marcsim_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

BerRecord record(std::string scheme, double snr, std::uint64_t bits, std::uint64_t errors) {
  BerRecord r;
  r.scheme = std::move(scheme);
  r.snr_db = snr;
  r.bits_simulated = bits;
  r.bit_errors = errors;
  r.packets = bits / 1000;
  return r;
}

}  // namespace

TEST_CASE("fig8 preset with a single threshold") {
  const RunManifest m = parse({"--preset", "fig8", "--pth", "0.3", "--seed", "42", "--out", "results.csv"});
  REQUIRE(m.sweeps.size() == 3);
  CHECK(m.sweeps[0].scheme.kind == SchemeKind::kAnalogNc);
  CHECK(m.sweeps[1].scheme.kind == SchemeKind::kQdfNc);
  CHECK(m.sweeps[2].scheme.kind == SchemeKind::kAdaptive);
  CHECK(*m.sweeps[2].scheme.p_th == 0.3);
  CHECK(m.master_seed == 42);
  for (const auto& c : m.sweeps) CHECK(c.master_seed == 42);
  CHECK(m.out_path == "results.csv");
  CHECK(m.manifest_path == "results.csv.manifest.json");
  CHECK(m.preset == "fig8");
}

TEST_CASE("preset sizes") {
  CHECK(parse({"--preset", "fig6"}).sweeps.size() == 2);
  CHECK(parse({"--preset", "fig7"}).sweeps.size() == 3);
  const RunManifest m = parse({"--preset", "fig8"});
  REQUIRE(m.sweeps.size() == 5);
  std::vector<std::string> labels;
  for (const auto& c : m.sweeps) labels.push_back(c.scheme.label());
  CHECK(labels == std::vector<std::string>{"analog-nc", "qdf-nc", "adaptive-0.2", "adaptive-0.3", "adaptive-0.4"});
}

TEST_CASE("fig6 preset is uncoded qam on an eb/n0 axis") {
  const RunManifest m = parse({"--preset", "fig6"});
  for (const auto& c : m.sweeps) {
    CHECK_FALSE(c.code);
    CHECK(c.modulation == Modulation::kQam4);
    CHECK(c.snr_axis == SnrAxis::kEbN0);
    CHECK(c.snr_grid.size() == 11);
  }
}

TEST_CASE("explicit flags override preset values") {
  const RunManifest m = parse({"--preset", "fig7", "--packets", "10", "--snr-start", "0", "--snr-stop", "4"});
  for (const auto& c : m.sweeps) {
    CHECK(c.packets_max == 10);
    CHECK(c.snr_grid == std::vector<double>{0.0, 2.0, 4.0});
    CHECK(c.code == CodeConfig::default_k6());
  }
}

TEST_CASE("single scheme runs") {
  RunManifest m = parse({"--scheme", "dmnc", "--mod", "qam4"});
  REQUIRE(m.sweeps.size() == 1);
  CHECK_FALSE(m.sweeps[0].code);
  m = parse({"--scheme", "df-nc", "--code", "5:23,35"});
  CHECK(*m.sweeps[0].code == CodeConfig::preset_k5());
  CHECK(parse({"--scheme", "adaptive", "--pth", "0.25"}).sweeps[0].scheme.label() == "adaptive-0.25");
}

TEST_CASE("usage errors") {
  CHECK_THROWS_AS(parse({}), UsageError);
  CHECK_THROWS_AS(parse({"--preset", "fig9"}), UsageError);
  CHECK_THROWS_AS(parse({"--bogus"}), UsageError);
  CHECK_THROWS_AS(parse({"--preset", "fig7", "--scheme", "dmnc"}), UsageError);
  CHECK_THROWS_AS(parse({"--scheme", "df-nc", "--code", "none"}), UsageError);
  CHECK_THROWS_AS(parse({"--scheme", "qdf-nc", "--rx-mode", "superposed"}), UsageError);
  CHECK_THROWS_AS(parse({"--scheme", "dmnc", "--code", "3:77,5"}), UsageError);
  try {
    parse({"--preset", "fig8", "--pth", "1.5"});
    FAIL("expected a usage error");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("--pth") != std::string::npos);
  }
}

TEST_CASE("seed falls back to the environment") {
  CHECK(parse({"--scheme", "dmnc"}, "17").master_seed == 17);
  CHECK(parse({"--scheme", "dmnc", "--seed", "3"}, "17").master_seed == 3);
  CHECK(parse({"--scheme", "dmnc"}).master_seed == 1);
  CHECK_THROWS_AS(parse({"--scheme", "dmnc"}, "abc"), UsageError);
}

TEST_CASE("csv rendering") {
  const std::vector<BerRecord> recs{record("dmnc", 0, 2000, 20), record("dmnc", 2, 2000, 0),
                                    record("analog-nc", 0, 2000, 1)};
  const std::string csv = render_csv(recs);
  std::istringstream in(csv);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "scheme,snr_db,bits,errors,ber,ci_half_width,packets,qdf_selected_fraction");
  CHECK(lines[1].rfind("dmnc,0,2000,20,0.01,", 0) == 0);
  // No errors: half-width is z^2 / (2 (n + z^2)).
  const double hw = 9.0 / (2.0 * (2000.0 + 9.0));
  REQUIRE(lines[2].rfind("dmnc,2,2000,0,0,", 0) == 0);
  CHECK(lines[2].substr(lines[2].size() - 4) == ",2,0");
  const std::string field = lines[2].substr(16, lines[2].size() - 20);
  CHECK(std::stod(field) == doctest::Approx(hw).epsilon(1e-12));
}

TEST_CASE("json round trip") {
  std::vector<BerRecord> recs{record("qdf-nc", -4, 10000, 321), record("adaptive-0.3", 6, 5000, 0)};
  recs[1].qdf_selected = 2;
  recs[1].direct_bit_errors = 7;
  CHECK(parse_json_records(render_json(recs)) == recs);
}

TEST_CASE("manifest round trip") {
  RunManifest m = parse({"--preset", "fig8", "--seed", "5", "--doppler", "30", "--out", "x.csv"});
  const RunManifest back = manifest_from_json(manifest_to_json(m));
  CHECK(back.sweeps == m.sweeps);
  CHECK(back.master_seed == 5);
  CHECK(back.doppler_hz == 30.0);
  CHECK(back.preset == "fig8");
  CHECK_THROWS_AS(manifest_from_json("{}"), UsageError);
}

TEST_CASE("unwritable output path") {
  const std::vector<BerRecord> recs{record("dmnc", 0, 1000, 1)};
  CHECK_THROWS_AS(emit_results(recs, OutputFormat::kCsv, "/nonexistent-dir/x.csv"), IoError);
  std::string err;
  CHECK(run_cli({"--scheme", "dmnc", "--packets", "1", "--snr-stop", "0", "--out", "/nonexistent-dir/x.csv"},
                nullptr, &err) == 1);
  CHECK(err.find("nonexistent") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run_cli({}) == 2);
  CHECK(run_cli({"--bogus"}) == 2);
  std::string out;
  CHECK(run_cli({"--help"}, &out) == 0);
  CHECK(out.find("--preset") != std::string::npos);
  CHECK(run_cli({"--version"}, &out) == 0);
  CHECK(out == "0.1.0\n");
}

TEST_CASE("runs are repeatable and write a manifest") {
  const auto a = scratch("a.csv");
  const auto b = scratch("b.csv");
  const std::vector<std::string> common{"--preset", "fig7", "--packets", "3", "--packet-len", "64",
                                        "--snr-stop", "4", "--seed", "11"};
  auto with_out = [&](const std::filesystem::path& p, const char* threads) {
    auto args = common;
    args.insert(args.end(), {"--out", p.string(), "--threads", threads});
    return args;
  };
  REQUIRE(run_cli(with_out(a, "1")) == 0);
  REQUIRE(run_cli(with_out(b, "4")) == 0);
  CHECK(slurp(a) == slurp(b));
  const RunManifest m = manifest_from_json(slurp(a.string() + ".manifest.json"));
  CHECK(m.sweeps.size() == 3);

  // Re-running from the manifest reproduces the results.
  const auto c = scratch("c.csv");
  REQUIRE(run_cli({"--from-manifest", a.string() + ".manifest.json", "--out", c.string()}) == 0);
  CHECK(slurp(c) == slurp(a));
}

TEST_CASE("direct-link rows") {
  std::string out;
  REQUIRE(run_cli({"--scheme", "dmnc", "--packets", "2", "--packet-len", "50", "--snr-start", "0", "--snr-stop",
                   "0", "--direct-ber"},
                  &out) == 0);
  CHECK(out.find("\ndmnc/direct,0,") != std::string::npos);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-4.0) == "-4");
  CHECK(format_double(0.25) == "0.25");
}
