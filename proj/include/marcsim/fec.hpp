#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "marcsim/common.hpp"

namespace marc {

// Feedforward convolutional code, rate 1/n, zero-tail terminated.
//
// Generators are given as octal literals in the usual textbook/poly2trellis
// form: written in binary and right-aligned to `constraint_length` bits, the
// most significant bit taps the current input and the least significant bit
// taps the oldest register stage.
struct CodeConfig {
  int constraint_length = 6;
  std::vector<unsigned> generators;  // values as written in octal, e.g. 023

  int memory() const { return constraint_length - 1; }
  std::size_t outputs() const { return generators.size(); }
  std::size_t codeword_length(std::size_t info_length) const {
    return outputs() * (info_length + static_cast<std::size_t>(memory()));
  }

  // Throws ConfigError when a generator does not fit in constraint_length
  // bits, fewer than two generators are given, or K is out of [2, 16].
  void validate() const;

  // "K:g1,g2" with octal generators, e.g. "6:23,35".
  std::string to_string() const;
  static CodeConfig parse(std::string_view text);

  // K = 6 with 023, 035 zero-padded to six bits (the shipped default).
  static CodeConfig default_k6();
  // K = 5 with 23, 35 (the generators' natural width).
  static CodeConfig preset_k5();

  bool operator==(const CodeConfig&) const = default;
};

struct Codeword {
  Bits bits;
  std::size_t info_length = 0;
};

Codeword conv_encode(std::span<const Bit> info, const CodeConfig& code);

// Hard-decision (Hamming metric) Viterbi decoder for a zero-tail codeword.
// Returns the info sequence whose codeword is nearest to `received`. Among
// equal-metric survivors the predecessor with the lower state index wins.
Bits viterbi_decode(std::span<const Bit> received, std::size_t info_length, const CodeConfig& code);

std::size_t hamming_distance(std::span<const Bit> a, std::span<const Bit> b);

}  // namespace marc
