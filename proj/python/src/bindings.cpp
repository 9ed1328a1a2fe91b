#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "marcsim/cli.hpp"
#include "marcsim/harness.hpp"

namespace py = pybind11;
using namespace marc;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Monte Carlo BER simulation for network-coded relaying on the multiple access relay channel";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<TopologyError>(m, "TopologyError", PyExc_ValueError);

  py::enum_<Modulation>(m, "Modulation").value("BPSK", Modulation::kBpsk).value("QAM4", Modulation::kQam4);
  py::enum_<SchemeKind>(m, "SchemeKind")
      .value("ANALOG_NC", SchemeKind::kAnalogNc)
      .value("DMNC", SchemeKind::kDmnc)
      .value("DF_NC", SchemeKind::kDfNc)
      .value("QDF_NC", SchemeKind::kQdfNc)
      .value("ADAPTIVE", SchemeKind::kAdaptive)
      .value("P2P", SchemeKind::kPointToPoint);
  py::enum_<ChannelKind>(m, "ChannelKind")
      .value("AWGN", ChannelKind::kAwgn)
      .value("RAYLEIGH", ChannelKind::kRayleighBlock);
  py::enum_<Topology>(m, "Topology").value("DIRECT", Topology::kDirect).value("NO_DIRECT", Topology::kNoDirect);
  py::enum_<RelayRxMode>(m, "RelayRxMode")
      .value("ORTHOGONAL", RelayRxMode::kOrthogonal)
      .value("SUPERPOSED", RelayRxMode::kSuperposed);
  py::enum_<BerProxyKind>(m, "BerProxyKind").value("LLR", BerProxyKind::kLlr).value("MISMATCH", BerProxyKind::kMismatch);
  py::enum_<SnrAxis>(m, "SnrAxis").value("ESN0", SnrAxis::kEsN0).value("EBN0", SnrAxis::kEbN0);

  py::class_<CodeConfig>(m, "CodeConfig")
      .def(py::init<>())
      .def_readwrite("constraint_length", &CodeConfig::constraint_length)
      .def_readwrite("generators", &CodeConfig::generators)
      .def("codeword_length", &CodeConfig::codeword_length)
      .def("validate", &CodeConfig::validate)
      .def("__str__", &CodeConfig::to_string)
      .def("__eq__", &CodeConfig::operator==)
      .def_static("parse", &CodeConfig::parse)
      .def_static("default_k6", &CodeConfig::default_k6)
      .def_static("preset_k5", &CodeConfig::preset_k5);

  m.def(
      "conv_encode", [](const Bits& info, const CodeConfig& code) { return conv_encode(info, code).bits; },
      py::arg("info"), py::arg("code"));
  m.def(
      "viterbi_decode",
      [](const Bits& received, std::size_t info_length, const CodeConfig& code) {
        return viterbi_decode(received, info_length, code);
      },
      py::arg("received"), py::arg("info_length"), py::arg("code"));

  // Symbols cross the boundary as transmitted (unit-energy) values.
  m.def(
      "modulate",
      [](const Bits& bits, Modulation mod) {
        const SymbolBlock b = modulate(bits, mod);
        std::vector<Complex> out(b.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = b.transmitted(i);
        return out;
      },
      py::arg("bits"), py::arg("modulation"));
  m.def(
      "demodulate",
      [](std::vector<Complex> samples, Modulation mod) {
        if (mod == Modulation::kQam4)
          for (auto& s : samples) s /= kQamScale;
        return demodulate(samples, mod);
      },
      py::arg("samples"), py::arg("modulation"));

  py::class_<SchemeConfig>(m, "SchemeConfig")
      .def(py::init<>())
      .def_readwrite("kind", &SchemeConfig::kind)
      .def_readwrite("p_th", &SchemeConfig::p_th)
      .def_readwrite("quantizer_bits", &SchemeConfig::quantizer_bits)
      .def_readwrite("rx_mode", &SchemeConfig::rx_mode)
      .def_readwrite("proxy", &SchemeConfig::proxy)
      .def("label", &SchemeConfig::label);

  py::class_<ChannelConfig>(m, "ChannelConfig")
      .def(py::init<>())
      .def_readwrite("kind", &ChannelConfig::kind)
      .def_readwrite("power_s1", &ChannelConfig::power_s1)
      .def_readwrite("power_s2", &ChannelConfig::power_s2)
      .def_readwrite("power_r", &ChannelConfig::power_r);

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("snr_grid", &SweepConfig::snr_grid)
      .def_readwrite("packets_max", &SweepConfig::packets_max)
      .def_readwrite("min_bit_errors", &SweepConfig::min_bit_errors)
      .def_readwrite("scheme", &SweepConfig::scheme)
      .def_readwrite("code", &SweepConfig::code)
      .def_readwrite("channel", &SweepConfig::channel)
      .def_readwrite("modulation", &SweepConfig::modulation)
      .def_readwrite("packet_len", &SweepConfig::packet_len)
      .def_readwrite("master_seed", &SweepConfig::master_seed)
      .def_readwrite("topology", &SweepConfig::topology)
      .def_readwrite("snr_axis", &SweepConfig::snr_axis)
      .def("validate", &SweepConfig::validate)
      .def("es_n0_db", &SweepConfig::es_n0_db);

  py::class_<BerRecord>(m, "BerRecord")
      .def_readonly("scheme", &BerRecord::scheme)
      .def_readonly("snr_db", &BerRecord::snr_db)
      .def_readonly("bits", &BerRecord::bits_simulated)
      .def_readonly("errors", &BerRecord::bit_errors)
      .def_readonly("packets", &BerRecord::packets)
      .def_readonly("qdf_selected", &BerRecord::qdf_selected)
      .def_readonly("direct_errors", &BerRecord::direct_bit_errors)
      .def_property_readonly("ber", &BerRecord::ber)
      .def_property_readonly("qdf_fraction", &BerRecord::qdf_fraction)
      .def_property_readonly("ci_half_width", &BerRecord::ci_half_width)
      .def_property_readonly("ci", [](const BerRecord& r) {
        const Interval ci = r.ci();
        return py::make_tuple(ci.lo, ci.hi);
      })
      .def("__repr__", [](const BerRecord& r) {
        return "<BerRecord " + r.scheme + " snr=" + cli::format_double(r.snr_db) + " ber=" +
               cli::format_double(r.ber()) + ">";
      });

  m.def("run_point", &run_point, py::arg("config"), py::arg("snr_db"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("run_sweep", &run_sweep, py::arg("config"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "preset_configs",
      [](const std::string& name, const std::vector<double>& thresholds) {
        return cli::preset_configs(name, SweepConfig{}, thresholds);
      },
      py::arg("name"), py::arg("thresholds") = std::vector<double>{0.2, 0.3, 0.4});
  m.def(
      "render_csv", [](const std::vector<BerRecord>& records) { return cli::render_csv(records); },
      py::arg("records"));

  m.def(
      "wilson_interval",
      [](std::uint64_t k, std::uint64_t n, double z) {
        const Interval ci = wilson_interval(k, n, z);
        return py::make_tuple(ci.lo, ci.hi);
      },
      py::arg("errors"), py::arg("trials"), py::arg("z") = kWilsonZ);
  m.def("q_function", &q_function);

  m.attr("__version__") = std::string(cli::kToolVersion);
}
