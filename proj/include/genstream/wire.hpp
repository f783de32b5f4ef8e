#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "genstream/scheme.hpp"

namespace genstream {

// Datagram layout, all multi-byte fields big-endian:
//
//   0      magic 0x47
//   1      magic 0x43
//   2      version 0x01
//   3      scheme (0=rl 1=rls 2=rs 3=pc 4=rep)
//   4      flags (bit0 systematic, bit1 completion, rest zero)
//   5..6   generation index
//   then, unless the completion flag is set:
//     random-vector packets: u16 vector byte count, packed coefficients
//     all others:            u16 block / codebook symbol index
//   u16 payload byte count, payload
//
// Completion datagrams stop after the generation index plus a zero payload
// count: 9 bytes total.
constexpr std::size_t kMaxDatagram = 1472;
constexpr std::uint8_t kWireVersion = 0x01;

enum class WireError {
  ok,
  bad_magic,
  bad_version,  // unknown version or scheme
  truncated,
  bad_length,
};

const char* to_string(WireError e);

struct WirePacket {
  SchemeKind scheme = SchemeKind::rl;
  bool systematic = false;
  bool completion = false;
  std::uint16_t generation_index = 0;
  std::uint16_t index = 0;                      // systematic block or mds symbol
  std::vector<std::uint8_t> vector_bytes;       // packed coding coefficients
  std::vector<std::uint8_t> payload;

  bool carries_vector() const {
    return !completion &&
           (scheme == SchemeKind::rl || (scheme == SchemeKind::rls && !systematic));
  }
};

// throws Errc::oversize when the datagram would exceed kMaxDatagram or the
// coding vector 1024 bits
std::vector<std::uint8_t> encode_wire(const CodedPacket& pkt, SchemeKind scheme);

std::vector<std::uint8_t> encode_completion(SchemeKind scheme);

WireError parse_wire(std::span<const std::uint8_t> datagram, WirePacket& out);

// rebuild the codec-level packet under the session's geometry; throws
// Errc::length_mismatch when vector or payload sizes disagree with it
CodedPacket to_coded_packet(const WirePacket& wire, std::uint32_t g, const Field& f,
                            std::size_t payload_symbols);

}  // namespace genstream
