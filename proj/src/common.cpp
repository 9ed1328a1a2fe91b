#include "marcsim/common.hpp"

#include <string>

namespace marc {

std::string_view to_string(Modulation m) { return m == Modulation::kBpsk ? "bpsk" : "qam4"; }

Modulation parse_modulation(std::string_view name) {
  if (name == "bpsk") return Modulation::kBpsk;
  if (name == "qam4" || name == "qam") return Modulation::kQam4;
  throw ConfigError("unknown modulation '" + std::string(name) + "'");
}

Bits xor_bits(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) throw std::invalid_argument("xor_bits: length mismatch");
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

}  // namespace marc
