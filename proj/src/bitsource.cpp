#include "marcsim/bitsource.hpp"

#include <stdexcept>

namespace marc {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6A09E667F3BCC909ULL;
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed), stream_index_(stream_index) {
  const std::uint64_t a = splitmix64(master_seed ^ 0xD1B54A32D192ED03ULL);
  const std::uint64_t b = splitmix64(stream_index + a);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  engine_.seed(seq);
}

Bit RngStream::next_bit() {
  if (bits_left_ == 0) {
    bit_word_ = engine_();
    bits_left_ = 64;
  }
  const Bit b = static_cast<Bit>(bit_word_ & 1U);
  bit_word_ >>= 1;
  --bits_left_;
  return b;
}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double RngStream::gaussian() { return normal_(engine_); }

Packet generate_packet(std::size_t length, SourceId source, RngStream& rng) {
  if (length == 0) throw std::invalid_argument("generate_packet: length must be at least 1");
  Packet p;
  p.source = source;
  p.bits.resize(length);
  for (auto& b : p.bits) b = rng.next_bit();
  return p;
}

}  // namespace marc
