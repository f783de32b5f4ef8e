#include "genstream/wire.hpp"

namespace genstream {

namespace {

constexpr std::uint8_t kMagic0 = 0x47;
constexpr std::uint8_t kMagic1 = 0x43;
constexpr std::uint8_t kFlagSystematic = 0x01;
constexpr std::uint8_t kFlagCompletion = 0x02;
constexpr std::size_t kMaxVectorBytes = 128;  // 1024-bit coding vector cap

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v & 0xff));
}

std::uint16_t get_u16(std::span<const std::uint8_t> in, std::size_t off) {
  return std::uint16_t(in[off]) << 8 | in[off + 1];
}

}  // namespace

const char* to_string(WireError e) {
  switch (e) {
    case WireError::ok: return "ok";
    case WireError::bad_magic: return "bad_magic";
    case WireError::bad_version: return "bad_version";
    case WireError::truncated: return "truncated";
    case WireError::bad_length: return "bad_length";
  }
  return "?";
}

std::vector<std::uint8_t> encode_wire(const CodedPacket& pkt, SchemeKind scheme) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + pkt.payload.packed_size());
  out.push_back(kMagic0);
  out.push_back(kMagic1);
  out.push_back(kWireVersion);
  out.push_back(std::uint8_t(scheme));
  out.push_back(pkt.descriptor.kind == CodingDescriptor::Kind::systematic ? kFlagSystematic : 0);
  put_u16(out, std::uint16_t(pkt.generation_index));

  switch (pkt.descriptor.kind) {
    case CodingDescriptor::Kind::systematic:
    case CodingDescriptor::Kind::mds_symbol:
      put_u16(out, std::uint16_t(pkt.descriptor.index));
      break;
    case CodingDescriptor::Kind::random_vector: {
      std::size_t nbytes = pkt.descriptor.vector.packed_size();
      if (nbytes > kMaxVectorBytes)
        raise(Errc::oversize, "coding vector exceeds 1024 bits");
      put_u16(out, std::uint16_t(nbytes));
      pkt.descriptor.vector.append_packed(out);
      break;
    }
  }

  put_u16(out, std::uint16_t(pkt.payload.packed_size()));
  pkt.payload.append_packed(out);

  if (out.size() > kMaxDatagram)
    raise(Errc::oversize, "datagram of " + std::to_string(out.size()) + " bytes exceeds " +
                              std::to_string(kMaxDatagram));
  return out;
}

std::vector<std::uint8_t> encode_completion(SchemeKind scheme) {
  std::vector<std::uint8_t> out;
  out.reserve(9);
  out.push_back(kMagic0);
  out.push_back(kMagic1);
  out.push_back(kWireVersion);
  out.push_back(std::uint8_t(scheme));
  out.push_back(kFlagCompletion);
  put_u16(out, 0);  // generation index
  put_u16(out, 0);  // payload length
  return out;
}

WireError parse_wire(std::span<const std::uint8_t> d, WirePacket& out) {
  if (d.size() < 7) return WireError::truncated;
  if (d[0] != kMagic0 || d[1] != kMagic1) return WireError::bad_magic;
  if (d[2] != kWireVersion) return WireError::bad_version;
  if (d[3] > std::uint8_t(SchemeKind::rep)) return WireError::bad_version;
  if (d.size() > kMaxDatagram) return WireError::bad_length;

  out = WirePacket{};
  out.scheme = SchemeKind(d[3]);
  out.systematic = (d[4] & kFlagSystematic) != 0;
  out.completion = (d[4] & kFlagCompletion) != 0;
  out.generation_index = get_u16(d, 5);
  std::size_t off = 7;

  if (out.completion) {
    if (d.size() < off + 2) return WireError::truncated;
    if (get_u16(d, off) != 0 || d.size() != off + 2) return WireError::bad_length;
    return WireError::ok;
  }

  if (out.carries_vector()) {
    if (d.size() < off + 2) return WireError::truncated;
    std::size_t veclen = get_u16(d, off);
    off += 2;
    if (veclen > kMaxVectorBytes) return WireError::bad_length;
    if (d.size() < off + veclen) return WireError::truncated;
    out.vector_bytes.assign(d.begin() + off, d.begin() + off + veclen);
    off += veclen;
  } else {
    if (d.size() < off + 2) return WireError::truncated;
    out.index = get_u16(d, off);
    off += 2;
  }

  if (d.size() < off + 2) return WireError::truncated;
  std::size_t paylen = get_u16(d, off);
  off += 2;
  if (d.size() < off + paylen) return WireError::truncated;
  if (d.size() != off + paylen) return WireError::bad_length;
  out.payload.assign(d.begin() + off, d.end());
  return WireError::ok;
}

CodedPacket to_coded_packet(const WirePacket& wire, std::uint32_t g, const Field& f,
                            std::size_t payload_symbols) {
  CodedPacket pkt;
  pkt.generation_index = wire.generation_index;
  if (wire.carries_vector())
    pkt.descriptor = CodingDescriptor::random_vector(
        SymbolVector::from_packed(f, wire.vector_bytes, g));
  else if (wire.systematic)
    pkt.descriptor = CodingDescriptor::systematic(wire.index);
  else
    pkt.descriptor = CodingDescriptor::mds_symbol(wire.index);
  pkt.payload = SymbolVector::from_packed(f, wire.payload, payload_symbols);
  return pkt;
}

}  // namespace genstream
