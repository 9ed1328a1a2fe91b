#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace marc {

using Bit = std::uint8_t;
using Bits = std::vector<Bit>;
using Complex = std::complex<double>;

enum class Modulation { kBpsk, kQam4 };

constexpr int bits_per_symbol(Modulation m) { return m == Modulation::kBpsk ? 1 : 2; }

std::string_view to_string(Modulation m);
Modulation parse_modulation(std::string_view name);

// Raised when a configuration is internally inconsistent (bad code, scheme/mode
// combination, unknown enum name).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a reception set lacks the links a scheme needs.
class TopologyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised on inputs for which an operation is undefined (e.g. an all-zero
// block handed to the analog normalizer).
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// XOR of two equal-length bit vectors.
Bits xor_bits(const Bits& a, const Bits& b);

}  // namespace marc
