#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "genstream/codec.hpp"

namespace genstream {

enum class SchemeKind : std::uint8_t {
  rl = 0,   // random linear combinations
  rls = 1,  // random linear with a systematic phase
  rs = 2,   // Reed-Solomon over GF(256)
  pc = 3,   // single parity symbol, K = g+1
  rep = 4,  // repetition, K = g
};

const char* to_string(SchemeKind s);
std::optional<SchemeKind> scheme_from_string(const std::string& s);

struct ChannelModel {
  double epsilon = 0.0;  // independent per-transmission loss probability
};

// Everything that fixes one experiment point: the scheme, the generation
// geometry, the field, and the channel.
struct SchemeParams {
  SchemeKind scheme = SchemeKind::rl;
  std::uint32_t g = 1;
  std::uint32_t n = 1;
  unsigned field_bits = 1;    // symbol width for rl/rls
  std::uint32_t rs_K = 255;   // Reed-Solomon codeword length
  ChannelModel channel;

  bool is_mds() const {
    return scheme == SchemeKind::rs || scheme == SchemeKind::pc || scheme == SchemeKind::rep;
  }

  // field the encoders operate in
  const Field& coding_field() const {
    switch (scheme) {
      case SchemeKind::rl:
      case SchemeKind::rls: return Field::with_bits(field_bits);
      case SchemeKind::rs: return Field::gf256();
      default: return Field::gf2();
    }
  }

  unsigned q() const { return coding_field().size(); }

  std::uint32_t mds_K() const {
    switch (scheme) {
      case SchemeKind::rs: return rs_K;
      case SchemeKind::pc: return g + 1;
      case SchemeKind::rep: return g;
      default: return 0;
    }
  }

  MdsCodeSpec mds_spec() const {
    switch (scheme) {
      case SchemeKind::rs: return MdsCodeSpec::reed_solomon(g, rs_K);
      case SchemeKind::pc: return MdsCodeSpec::parity_check(g);
      case SchemeKind::rep: return MdsCodeSpec::repetition(g);
      default: raise(Errc::bad_spec, "not an MDS scheme");
    }
  }

  void validate() const;
};

}  // namespace genstream
