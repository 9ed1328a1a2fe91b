#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "marcsim/destination.hpp"

using namespace marc;

namespace {

Bits random_bits(std::size_t n, RngStream& rng) {
  Bits b(n);
  for (auto& x : b) x = rng.next_bit();
  return b;
}

Observation clean(const SymbolBlock& x) {
  RngStream rng(0, 0);
  return transmit(x, draw_channel(ChannelConfig{}, LinkId::kS1D, kNoiselessSnrDb, rng), 1.0, rng);
}

SchemeConfig scheme(SchemeKind k) {
  SchemeConfig s;
  s.kind = k;
  return s;
}

// Builds a noiseless reception for the decode-at-relay schemes.
ReceptionSet digital_reception(const Packet& p1, const Packet& p2, const std::optional<CodeConfig>& code,
                               Modulation m, bool direct) {
  auto enc = [&](const Bits& b) { return code ? conv_encode(b, *code).bits : b; };
  ReceptionSet rx;
  if (direct) {
    rx.direct_s1 = clean(modulate(enc(p1.bits), m));
    rx.direct_s2 = clean(modulate(enc(p2.bits), m));
  }
  rx.relay = clean(modulate(enc(xor_bits(p1.bits, p2.bits)), m));
  rx.relay_branch_used = SchemeKind::kDfNc;
  return rx;
}

}  // namespace

TEST_CASE("bit error counting") {
  CHECK(count_bit_errors(Bits{0, 1, 1, 0}, Bits{0, 1, 0, 1}) == 2);
  CHECK(count_bit_errors(Bits{}, Bits{}) == 0);
  CHECK_THROWS_AS(count_bit_errors(Bits{1}, Bits{1, 0}), std::invalid_argument);
}

TEST_CASE("noiseless digital relay with direct links recovers both sources") {
  RngStream rng(1, 0);
  const Packet p1{random_bits(40, rng), SourceId::kS1};
  const Packet p2{random_bits(40, rng), SourceId::kS2};
  const auto code = CodeConfig::default_k6();
  const RecoveryResult r =
      recover(digital_reception(p1, p2, code, Modulation::kBpsk, true), scheme(SchemeKind::kDfNc), code,
              Modulation::kBpsk, p1, p2);
  REQUIRE(r.per_source_available());
  CHECK(*r.est_s1 == p1.bits);
  CHECK(*r.est_s2 == p2.bits);
  CHECK(r.errors_s1 + r.errors_s2 + r.xor_errors + r.direct_errors == 0);
}

TEST_CASE("without direct links only the xor message is available") {
  RngStream rng(2, 0);
  const Packet p1{random_bits(16, rng), SourceId::kS1};
  const Packet p2{random_bits(16, rng), SourceId::kS2};
  const RecoveryResult r = recover(digital_reception(p1, p2, std::nullopt, Modulation::kQam4, false),
                                   scheme(SchemeKind::kDmnc), std::nullopt, Modulation::kQam4, p1, p2);
  CHECK_FALSE(r.per_source_available());
  REQUIRE(r.xor_estimate);
  CHECK(*r.xor_estimate == xor_bits(p1.bits, p2.bits));
  CHECK(r.xor_errors == 0);
}

TEST_CASE("one direct link plus the relay recovers the other source") {
  RngStream rng(3, 0);
  const Packet p1{random_bits(20, rng), SourceId::kS1};
  const Packet p2{random_bits(20, rng), SourceId::kS2};
  ReceptionSet rx = digital_reception(p1, p2, std::nullopt, Modulation::kBpsk, true);
  rx.direct_s2.reset();
  const RecoveryResult r = recover(rx, scheme(SchemeKind::kDmnc), std::nullopt, Modulation::kBpsk, p1, p2);
  REQUIRE(r.est_s2);
  CHECK(*r.est_s2 == p2.bits);
  CHECK_FALSE(r.est_s1);
}

TEST_CASE("missing relay block is a topology error") {
  RngStream rng(4, 0);
  const Packet p1{random_bits(8, rng), SourceId::kS1};
  const Packet p2{random_bits(8, rng), SourceId::kS2};
  ReceptionSet rx = digital_reception(p1, p2, std::nullopt, Modulation::kBpsk, true);
  rx.relay.reset();
  CHECK_THROWS_AS(recover(rx, scheme(SchemeKind::kDmnc), std::nullopt, Modulation::kBpsk, p1, p2), TopologyError);
  rx.direct_s1.reset();
  CHECK_THROWS_AS(recover(rx, scheme(SchemeKind::kPointToPoint), std::nullopt, Modulation::kBpsk, p1, p2),
                  TopologyError);
}

TEST_CASE("analog cancellation error stays on the wrong symbol") {
  // Uncoded BPSK, noiseless, unit gains: relay block y = (x1 + x2) / beta.
  RngStream rng(5, 0);
  const Bits b1 = random_bits(32, rng);
  const Bits b2 = random_bits(32, rng);
  const SymbolBlock x1 = bpsk_map(b1);
  const SymbolBlock x2 = bpsk_map(b2);
  SymbolBlock sum = x1;
  for (std::size_t i = 0; i < sum.size(); ++i) sum.samples[i] += x2.samples[i];
  AnalogRelayInfo info;
  info.beta = std::sqrt(sum.mean_energy());
  if (info.beta == 0.0) info.beta = 1.0;
  Observation relay;
  relay.y = sum;
  for (auto& s : relay.y.samples) s /= info.beta;
  relay.gain = 1.0;

  CHECK(analog_nc_destination_detect(relay, info, 1, x1, Bits(32, 0)) == b2);

  for (std::size_t k = 0; k < 32; ++k) {
    Bits wrong = b1;
    wrong[k] ^= 1;
    const Bits got = analog_nc_destination_detect(relay, info, 1, bpsk_map(wrong), Bits(32, 0));
    for (std::size_t i = 0; i < 32; ++i) {
      // Residual at k is x2 + 2 x1: the decision flips only where x1 = -x2.
      const bool expect_error = i == k && b1[k] != b2[k];
      CHECK((got[i] != b2[i]) == expect_error);
    }
  }
}

TEST_CASE("analog cancellation falls back when the relay carries nothing") {
  Observation relay;
  relay.y = bpsk_map(Bits{1, 0, 1});
  relay.gain = 0.0;
  const Bits fallback{0, 1, 1};
  CHECK(analog_nc_destination_detect(relay, AnalogRelayInfo{}, 2, bpsk_map(Bits{1, 1, 1}), fallback) == fallback);
  CHECK_THROWS_AS(analog_nc_destination_detect(relay, AnalogRelayInfo{}, 3, relay.y, fallback),
                  std::invalid_argument);
}

TEST_CASE("swapping the sources swaps the estimates") {
  RngStream rng(6, 0);
  const auto code = CodeConfig::default_k6();
  const Packet p1{random_bits(30, rng), SourceId::kS1};
  const Packet p2{random_bits(30, rng), SourceId::kS2};
  ReceptionSet rx;
  RngStream n1(6, 1), n2(6, 2), nr(6, 3);
  const auto d = draw_channel(ChannelConfig{}, LinkId::kS1D, 1.0, n1);
  rx.direct_s1 = transmit(bpsk_map(conv_encode(p1.bits, code).bits), d, 1.0, n1);
  rx.direct_s2 = transmit(bpsk_map(conv_encode(p2.bits, code).bits), d, 1.0, n2);
  rx.relay = transmit(bpsk_map(conv_encode(xor_bits(p1.bits, p2.bits), code).bits), d, 1.0, nr);
  rx.relay_branch_used = SchemeKind::kDfNc;
  const RecoveryResult a = recover(rx, scheme(SchemeKind::kDfNc), code, Modulation::kBpsk, p1, p2);
  std::swap(rx.direct_s1, rx.direct_s2);
  const RecoveryResult b = recover(rx, scheme(SchemeKind::kDfNc), code, Modulation::kBpsk, p2, p1);
  CHECK(*a.est_s1 == *b.est_s2);
  CHECK(*a.est_s2 == *b.est_s1);
  CHECK(a.errors_s1 == b.errors_s2);
}

TEST_CASE("adaptive reception needs a concrete branch tag") {
  RngStream rng(7, 0);
  const Packet p1{random_bits(8, rng), SourceId::kS1};
  const Packet p2{random_bits(8, rng), SourceId::kS2};
  const auto code = CodeConfig::default_k6();
  ReceptionSet rx = digital_reception(p1, p2, code, Modulation::kBpsk, true);
  SchemeConfig s = scheme(SchemeKind::kAdaptive);
  s.p_th = 0.3;
  rx.relay_branch_used = SchemeKind::kQdfNc;
  CHECK(recover(rx, s, code, Modulation::kBpsk, p1, p2).errors_s1 == 0);
  rx.relay_branch_used = SchemeKind::kAdaptive;
  CHECK_THROWS_AS(recover(rx, s, code, Modulation::kBpsk, p1, p2), TopologyError);
}
