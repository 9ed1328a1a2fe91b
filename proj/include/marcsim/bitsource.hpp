#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "marcsim/common.hpp"

namespace marc {

enum class SourceId { kS1, kS2 };

struct Packet {
  Bits bits;
  SourceId source = SourceId::kS1;

  std::size_t size() const { return bits.size(); }
};

// Mixes an ordered list of integers into a single 64-bit stream index.
// Used to give every (SNR point, packet, link) its own stream.
std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts);

// A deterministic random stream identified by (master_seed, stream_index).
// The engine seed is derived by hashing both values, so streams with distinct
// indices are decorrelated and any stream can be created independently of
// the others (no shared state, no sequential jump-ahead).
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  Bit next_bit();
  // Uniform on [0, 1).
  double uniform();
  // Standard normal.
  double gaussian();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uint64_t bit_word_ = 0;
  int bits_left_ = 0;
};

Packet generate_packet(std::size_t length, SourceId source, RngStream& rng);

}  // namespace marc
