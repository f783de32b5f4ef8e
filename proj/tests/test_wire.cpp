#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "genstream/rng.hpp"
#include "genstream/wire.hpp"

using namespace genstream;

namespace {

SymbolVector random_vector(const Field& f, std::size_t n, Rng& rng) {
  SymbolVector v(f, n);
  v.fill_random(rng);
  return v;
}

}  // namespace

TEST_CASE("completion datagram is the fixed 9-byte form") {
  auto bytes = encode_completion(SchemeKind::rls);
  std::vector<std::uint8_t> want = {0x47, 0x43, 0x01, 0x01, 0x02, 0x00, 0x00, 0x00, 0x00};
  CHECK(bytes == want);

  WirePacket wp;
  REQUIRE(parse_wire(bytes, wp) == WireError::ok);
  CHECK(wp.completion);
  CHECK(wp.scheme == SchemeKind::rls);
  CHECK(wp.generation_index == 0);
  CHECK(wp.payload.empty());
}

TEST_CASE("systematic packet header layout") {
  const Field& f = Field::gf2();
  CodedPacket pkt;
  pkt.generation_index = 3;
  pkt.descriptor = CodingDescriptor::systematic(7);
  pkt.payload = SymbolVector(f, 1400 * 8);

  auto bytes = encode_wire(pkt, SchemeKind::rls);
  REQUIRE(bytes.size() == 11 + 1400);
  std::vector<std::uint8_t> head = {0x47, 0x43, 0x01, 0x01, 0x01, 0x00, 0x03,
                                    0x00, 0x07, 0x05, 0x78};
  CHECK(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 11) == head);
}

TEST_CASE("wire round-trip identity across schemes and descriptor kinds") {
  Rng rng(1234);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    SchemeKind scheme = SchemeKind(rng.next_u64() % 5);
    const Field& f = scheme == SchemeKind::rs    ? Field::gf256()
                     : scheme == SchemeKind::rl  ? Field::with_bits(1u << (rng.next_u64() % 4))
                     : scheme == SchemeKind::rls ? Field::with_bits(1u << (rng.next_u64() % 4))
                                                 : Field::gf2();
    std::uint32_t g = 1 + std::uint32_t(rng.next_u64() % 32);
    std::size_t payload_syms = (1 + std::size_t(rng.next_u64() % 64)) * 8 / f.bits() * 8;
    if (payload_syms == 0) payload_syms = 8 / f.bits();

    CodedPacket pkt;
    pkt.generation_index = std::uint32_t(rng.next_u64() % 65536);
    pkt.payload = random_vector(f, payload_syms, rng);
    switch (scheme) {
      case SchemeKind::rl: pkt.descriptor = CodingDescriptor::random_vector(random_vector(f, g, rng)); break;
      case SchemeKind::rls:
        if (rng.next_u64() % 2)
          pkt.descriptor = CodingDescriptor::systematic(std::uint32_t(rng.next_u64() % g));
        else
          pkt.descriptor = CodingDescriptor::random_vector(random_vector(f, g, rng));
        break;
      default: pkt.descriptor = CodingDescriptor::mds_symbol(std::uint32_t(rng.next_u64() % 256)); break;
    }

    auto bytes = encode_wire(pkt, scheme);
    REQUIRE(bytes.size() <= kMaxDatagram);
    WirePacket wp;
    REQUIRE(parse_wire(bytes, wp) == WireError::ok);
    CHECK(wp.scheme == scheme);
    CHECK(wp.generation_index == pkt.generation_index);
    CHECK_FALSE(wp.completion);

    CodedPacket back = to_coded_packet(wp, g, f, payload_syms);
    CHECK(back.generation_index == pkt.generation_index);
    CHECK(back.descriptor.kind == pkt.descriptor.kind);
    CHECK(back.descriptor.index == pkt.descriptor.index);
    if (pkt.descriptor.kind == CodingDescriptor::Kind::random_vector)
      CHECK(back.descriptor.vector == pkt.descriptor.vector);
    CHECK(back.payload == pkt.payload);
    ++checked;
  }
  CHECK(checked == 10000);
}

TEST_CASE("parser rejects malformed datagrams") {
  WirePacket wp;
  CHECK(parse_wire({}, wp) == WireError::truncated);

  std::vector<std::uint8_t> ok = encode_completion(SchemeKind::rl);

  auto bad_magic = ok;
  bad_magic[0] = 0x00;
  CHECK(parse_wire(bad_magic, wp) == WireError::bad_magic);

  auto bad_version = ok;
  bad_version[2] = 0x02;
  CHECK(parse_wire(bad_version, wp) == WireError::bad_version);

  auto bad_scheme = ok;
  bad_scheme[3] = 0x09;
  CHECK(parse_wire(bad_scheme, wp) == WireError::bad_version);

  // a real packet, chopped and padded
  CodedPacket pkt;
  pkt.generation_index = 1;
  pkt.descriptor = CodingDescriptor::mds_symbol(4);
  pkt.payload = SymbolVector(Field::gf2(), 64);
  auto bytes = encode_wire(pkt, SchemeKind::rs);
  for (std::size_t cut : {std::size_t(3), std::size_t(8), std::size_t(10), bytes.size() - 1})
    CHECK(parse_wire(std::span(bytes.data(), cut), wp) == WireError::truncated);
  auto padded = bytes;
  padded.push_back(0);
  CHECK(parse_wire(padded, wp) == WireError::bad_length);

  // completion with a nonzero payload count
  auto bad_completion = encode_completion(SchemeKind::rl);
  bad_completion[8] = 1;
  CHECK(parse_wire(bad_completion, wp) == WireError::bad_length);
}

TEST_CASE("oversize datagrams are refused at encode time") {
  const Field& f = Field::gf2();
  CodedPacket pkt;
  pkt.descriptor = CodingDescriptor::systematic(0);
  pkt.payload = SymbolVector(f, 1470 * 8);
  CHECK_THROWS_AS((void)encode_wire(pkt, SchemeKind::rls), Error);

  CodedPacket vec;
  vec.descriptor = CodingDescriptor::random_vector(SymbolVector(f, 2048));  // 256 bytes packed
  vec.payload = SymbolVector(f, 64);
  CHECK_THROWS_AS((void)encode_wire(vec, SchemeKind::rl), Error);
}

TEST_CASE("vector length must match the session geometry") {
  const Field& f = Field::gf2();
  CodedPacket pkt;
  pkt.generation_index = 0;
  pkt.descriptor = CodingDescriptor::random_vector(SymbolVector(f, 16));
  pkt.payload = SymbolVector(f, 64);
  auto bytes = encode_wire(pkt, SchemeKind::rl);
  WirePacket wp;
  REQUIRE(parse_wire(bytes, wp) == WireError::ok);
  CHECK_THROWS_AS((void)to_coded_packet(wp, 64, f, 64), Error);  // g says 8 bytes, wire has 2
}
