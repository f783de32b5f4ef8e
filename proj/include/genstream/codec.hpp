#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "genstream/field.hpp"
#include "genstream/rng.hpp"

namespace genstream {

// How a file maps onto generations. Every generation holds exactly g blocks;
// the last one is filled up with pad_blocks all-zero rows when g does not
// divide N.
struct FileLayout {
  std::uint64_t file_bytes = 0;  // true payload size, needed to strip padding
  std::uint32_t N = 0;           // blocks covering the file
  std::uint32_t n = 0;           // generation count
  std::uint32_t g = 0;           // blocks per generation
  std::uint32_t block_bytes = 0;
  std::uint32_t pad_blocks = 0;  // zero rows appended to the last generation

  std::size_t symbols_per_block(const Field& f) const {
    return std::size_t(block_bytes) * 8 / f.bits();
  }
};

// One generation: g equal-length rows of field symbols.
struct Generation {
  std::uint32_t index = 0;
  std::uint32_t block_bytes = 0;
  std::vector<SymbolVector> rows;
};

struct CodingDescriptor {
  enum class Kind { systematic, random_vector, mds_symbol };

  Kind kind = Kind::systematic;
  std::uint32_t index = 0;  // block index (systematic) or codebook symbol index (mds)
  SymbolVector vector;      // coding coefficients, random_vector only

  static CodingDescriptor systematic(std::uint32_t block_index) {
    return {Kind::systematic, block_index, {}};
  }
  static CodingDescriptor mds_symbol(std::uint32_t symbol_index) {
    return {Kind::mds_symbol, symbol_index, {}};
  }
  static CodingDescriptor random_vector(SymbolVector v) {
    return {Kind::random_vector, 0, std::move(v)};
  }
};

struct CodedPacket {
  std::uint32_t generation_index = 0;
  CodingDescriptor descriptor;
  SymbolVector payload;
};

enum class MdsKind { reed_solomon, parity_check, repetition };

// MDS(K,g): any g distinct coded symbols recover the generation.
struct MdsCodeSpec {
  MdsKind kind = MdsKind::repetition;
  std::uint32_t K = 0;
  std::uint32_t g = 0;
  Field field = Field::gf2();

  static MdsCodeSpec reed_solomon(std::uint32_t g, std::uint32_t K = 255);
  static MdsCodeSpec parity_check(std::uint32_t g);
  static MdsCodeSpec repetition(std::uint32_t g);
};

// Splits data into N = ceil(len / block_bytes) blocks of block_bytes bytes
// (last one zero-padded) and groups them g per generation, appending
// all-zero rows to fill the last generation.
std::pair<FileLayout, std::vector<Generation>> segment_file(std::span<const std::uint8_t> data,
                                                            std::uint32_t block_bytes,
                                                            std::uint32_t g, const Field& f);

// One random linear combination: coefficients drawn independently and
// equiprobably over the whole field, the all-zero vector included.
CodedPacket rl_encode(const Generation& gen, Rng& rng, const Field& f);

// Systematic phase first: transmission m < g sends row m verbatim, then
// random combinations forever.
CodedPacket rls_next(const Generation& gen, std::uint64_t m, Rng& rng, const Field& f);

// The K-symbol codebook. Reed-Solomon evaluates each row of the K x g
// Vandermonde matrix over the points alpha^0..alpha^(K-1); parity check is
// the g rows plus their XOR; repetition is the rows themselves.
std::vector<CodedPacket> mds_build(const Generation& gen, const MdsCodeSpec& spec);

// Round-robin over the codebook: transmission t carries symbol t mod K.
const CodedPacket& mds_next(const std::vector<CodedPacket>& codebook, std::uint64_t t);

// Per-generation decoder. Elimination mode keeps received coding vectors in
// reduced row-echelon form and back-substitutes once rank reaches g; MDS
// mode collects distinct symbol indices and solves on the g-th one.
class GenerationDecoder {
public:
  static GenerationDecoder elimination(std::uint32_t generation_index, std::uint32_t g,
                                       const Field& f, std::size_t payload_symbols);
  static GenerationDecoder mds(std::uint32_t generation_index, const MdsCodeSpec& spec,
                               std::size_t payload_symbols);

  // Returns true when this packet completes the generation. Dependent or
  // duplicate packets only bump the superfluous counter.
  bool ingest(const CodedPacket& pkt);

  bool decoded() const { return decoded_; }
  std::uint32_t rank() const { return rank_; }
  std::uint32_t generation_index() const { return generation_index_; }
  std::uint64_t receptions() const { return receptions_; }
  std::uint64_t superfluous() const { return superfluous_; }

  // decoded rows in block order; valid once decoded()
  const std::vector<SymbolVector>& blocks() const;

private:
  GenerationDecoder() = default;

  bool ingest_elimination(const CodedPacket& pkt);
  bool ingest_mds(const CodedPacket& pkt);
  void back_substitute();
  void solve_mds();

  enum class Mode { elimination, mds };

  Mode mode_ = Mode::elimination;
  std::uint32_t generation_index_ = 0;
  std::uint32_t g_ = 0;
  Field field_ = Field::gf2();
  std::size_t payload_symbols_ = 0;
  std::optional<MdsCodeSpec> mds_spec_;

  // elimination state, indexed by pivot column
  std::vector<std::optional<std::pair<SymbolVector, SymbolVector>>> pivots_;
  // mds state
  std::vector<std::uint32_t> symbol_indices_;
  std::vector<SymbolVector> symbol_payloads_;

  std::vector<SymbolVector> blocks_;
  std::uint32_t rank_ = 0;
  bool decoded_ = false;
  std::uint64_t receptions_ = 0;
  std::uint64_t superfluous_ = 0;
};

// Concatenates decoded blocks in file order, dropping the padding rows and
// the trailing zero fill of the last block.
std::vector<std::uint8_t> reassemble(const FileLayout& layout,
                                     std::span<const GenerationDecoder> decoders);

}  // namespace genstream
