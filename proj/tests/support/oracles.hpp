#pragma once

// Reference models written from the definitions, sharing no code with the
// library paths they check.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

using Word = std::vector<std::uint8_t>;

// Closed-form BPSK bit error rates Q(sqrt(2 * 10^(snr/10))) for 0..10 dB step 2,
// frozen from an independent evaluation.
inline constexpr double kBpskBer[6] = {0.07864960352514257,   0.03750612835892598,
                                       0.012500818040737556,  0.0023882907809328075,
                                       0.00019090777407599314, 3.872108215522037e-06};

// Tap i (0 = current input) of an octal generator right-aligned to K bits.
inline int tap(unsigned generator, int k, int i) { return (generator >> (k - 1 - i)) & 1U; }

// c_j[t] = sum_i g_j[i] u[t - i] over GF(2), u padded with K-1 zeros.
inline Word encode(const Word& info, int k, const std::vector<unsigned>& gens) {
  const std::size_t steps = info.size() + static_cast<std::size_t>(k - 1);
  Word out;
  out.reserve(steps * gens.size());
  for (std::size_t t = 0; t < steps; ++t) {
    for (unsigned g : gens) {
      int acc = 0;
      for (int i = 0; i < k; ++i) {
        if (t < static_cast<std::size_t>(i)) continue;
        const std::size_t idx = t - static_cast<std::size_t>(i);
        const int u = idx < info.size() ? info[idx] : 0;
        acc ^= tap(g, k, i) & u;
      }
      out.push_back(static_cast<std::uint8_t>(acc));
    }
  }
  return out;
}

inline Word word_from_index(std::uint64_t v, std::size_t len) {
  Word w(len);
  for (std::size_t i = 0; i < len; ++i) w[i] = static_cast<std::uint8_t>((v >> (len - 1 - i)) & 1U);
  return w;
}

inline std::size_t distance(const Word& a, const Word& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

// Minimum Hamming distance from `received` to any codeword of length-k info.
inline std::size_t ml_distance(const Word& received, std::size_t k, int K, const std::vector<unsigned>& gens) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) {
    const std::size_t d = distance(encode(word_from_index(v, k), K, gens), received);
    if (d < best) best = d;
  }
  return best;
}

// Minimum weight of a nonzero terminated codeword with up to `k` info bits.
inline std::size_t free_distance(std::size_t k, int K, const std::vector<unsigned>& gens) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::uint64_t v = 1; v < (std::uint64_t{1} << k); ++v) {
    std::size_t w = 0;
    for (auto b : encode(word_from_index(v, k), K, gens)) w += b;
    if (w < best) best = w;
  }
  return best;
}

}  // namespace oracle
