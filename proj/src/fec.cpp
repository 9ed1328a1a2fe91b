#include "marcsim/fec.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace marc {
namespace {

constexpr int kMaxConstraintLength = 16;
constexpr std::size_t kMaxOutputs = 8;

// Output bits (bit j = generator j) for every register value (u_t << m | state).
std::vector<std::uint8_t> branch_table(const CodeConfig& code) {
  const std::size_t regs = std::size_t{1} << code.constraint_length;
  std::vector<std::uint8_t> table(regs);
  for (std::size_t reg = 0; reg < regs; ++reg) {
    std::uint8_t out = 0;
    for (std::size_t j = 0; j < code.outputs(); ++j) {
      const unsigned parity = std::popcount(static_cast<unsigned>(reg) & code.generators[j]) & 1U;
      out |= static_cast<std::uint8_t>(parity << j);
    }
    table[reg] = out;
  }
  return table;
}

}  // namespace

void CodeConfig::validate() const {
  if (constraint_length < 2 || constraint_length > kMaxConstraintLength) {
    throw ConfigError("constraint length must be in [2, 16], got " + std::to_string(constraint_length));
  }
  if (generators.size() < 2 || generators.size() > kMaxOutputs) {
    throw ConfigError("a code needs between 2 and 8 generators");
  }
  const unsigned limit = 1U << constraint_length;
  for (unsigned g : generators) {
    if (g == 0 || g >= limit) {
      std::ostringstream os;
      os << "generator " << std::oct << g << " does not fit in " << std::dec << constraint_length << " bits";
      throw ConfigError(os.str());
    }
  }
}

std::string CodeConfig::to_string() const {
  std::ostringstream os;
  os << constraint_length << ':';
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (i) os << ',';
    os << std::oct << generators[i] << std::dec;
  }
  return os.str();
}

CodeConfig CodeConfig::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ConfigError("code must look like K:g1,g2 (octal generators)");
  CodeConfig code;
  code.generators.clear();
  {
    const auto k = text.substr(0, colon);
    auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), code.constraint_length);
    if (ec != std::errc{} || ptr != k.data() + k.size()) throw ConfigError("bad constraint length in code string");
  }
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    unsigned g = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), g, 8);
    if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty()) {
      throw ConfigError("bad octal generator '" + std::string(item) + "'");
    }
    code.generators.push_back(g);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  code.validate();
  return code;
}

CodeConfig CodeConfig::default_k6() { return CodeConfig{6, {023, 035}}; }

CodeConfig CodeConfig::preset_k5() { return CodeConfig{5, {023, 035}}; }

Codeword conv_encode(std::span<const Bit> info, const CodeConfig& code) {
  code.validate();
  if (info.empty()) throw std::invalid_argument("conv_encode: empty packet");
  const int m = code.memory();
  const unsigned state_mask = (1U << m) - 1U;
  const auto table = branch_table(code);
  const std::size_t n = code.outputs();

  Codeword cw;
  cw.info_length = info.size();
  cw.bits.reserve(code.codeword_length(info.size()));
  unsigned state = 0;
  const std::size_t steps = info.size() + static_cast<std::size_t>(m);
  for (std::size_t t = 0; t < steps; ++t) {
    const unsigned u = t < info.size() ? (info[t] & 1U) : 0U;
    const unsigned reg = (u << m) | state;
    const std::uint8_t out = table[reg];
    for (std::size_t j = 0; j < n; ++j) cw.bits.push_back(static_cast<Bit>((out >> j) & 1U));
    state = (reg >> 1) & state_mask;
  }
  return cw;
}

Bits viterbi_decode(std::span<const Bit> received, std::size_t info_length, const CodeConfig& code) {
  code.validate();
  if (info_length == 0) throw std::invalid_argument("viterbi_decode: info_length must be positive");
  if (received.size() != code.codeword_length(info_length)) {
    throw std::invalid_argument("viterbi_decode: received length " + std::to_string(received.size()) +
                                " does not match codeword length " +
                                std::to_string(code.codeword_length(info_length)));
  }
  const int m = code.memory();
  const std::size_t n = code.outputs();
  const std::size_t states = std::size_t{1} << m;
  const std::size_t mask = states - 1;
  const std::size_t steps = info_length + static_cast<std::size_t>(m);
  const auto table = branch_table(code);
  constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max() / 4;

  std::vector<std::uint32_t> metric(states, kUnreachable);
  std::vector<std::uint32_t> next(states);
  metric[0] = 0;
  std::vector<std::uint8_t> decision(steps * states);

  for (std::size_t t = 0; t < steps; ++t) {
    std::uint8_t r = 0;
    for (std::size_t j = 0; j < n; ++j) r |= static_cast<std::uint8_t>((received[t * n + j] & 1U) << j);
    const bool tail = t >= info_length;
    std::uint8_t* dec = decision.data() + t * states;
    for (std::size_t ns = 0; ns < states; ++ns) {
      const std::size_t reg0 = ns << 1;  // predecessor's oldest bit = 0
      const std::size_t reg1 = reg0 | 1U;
      const std::uint32_t m0 = metric[reg0 & mask] + static_cast<std::uint32_t>(std::popcount(
                                                         static_cast<unsigned>(table[reg0] ^ r)));
      const std::uint32_t m1 = metric[reg1 & mask] + static_cast<std::uint32_t>(std::popcount(
                                                         static_cast<unsigned>(table[reg1] ^ r)));
      if (m1 < m0) {
        next[ns] = m1;
        dec[ns] = 1;
      } else {
        next[ns] = m0;
        dec[ns] = 0;
      }
      // Tail steps only admit zero inputs (new state MSB = input bit).
      if (tail && (ns >> (m - 1)) != 0) next[ns] = kUnreachable;
      if (next[ns] > kUnreachable) next[ns] = kUnreachable;
    }
    metric.swap(next);
  }

  Bits info(info_length);
  std::size_t state = 0;
  for (std::size_t t = steps; t-- > 0;) {
    const Bit u = static_cast<Bit>(state >> (m - 1));
    if (t < info_length) info[t] = u;
    state = ((state << 1) | decision[t * states + state]) & mask;
  }
  return info;
}

std::size_t hamming_distance(std::span<const Bit> a, std::span<const Bit> b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] ^ b[i]) & 1U;
  return d;
}

}  // namespace marc
