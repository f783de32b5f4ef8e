#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "genstream/scheme.hpp"

namespace genstream {

// Feeds the wrap-around schedule: transmission t (1-based) carries a coded
// packet from generation (t-1) mod n, produced by the configured scheme.
// Rateless: next() can be called forever.
class RoundRobinEncoder {
public:
  RoundRobinEncoder(std::span<const Generation> generations, const SchemeParams& params,
                    std::uint64_t coding_seed);

  // variant sharing pre-built MDS codebooks (they are immutable)
  RoundRobinEncoder(std::span<const Generation> generations, const SchemeParams& params,
                    std::uint64_t coding_seed, std::span<const std::vector<CodedPacket>> books);

  CodedPacket next();

  // advance schedule state without producing the packet (the receiver is
  // known to be done with that generation)
  void skip_next();

  std::uint64_t transmissions() const { return t_; }
  std::uint32_t next_generation() const { return std::uint32_t(t_ % gens_.size()); }

private:
  std::span<const Generation> gens_;
  SchemeParams params_;
  Rng coding_rng_;
  std::uint64_t t_ = 0;                          // transmissions so far
  std::vector<std::uint64_t> sent_per_gen_;      // per-generation counters
  std::vector<std::vector<CodedPacket>> owned_books_;
  std::span<const std::vector<CodedPacket>> books_;
};

// one codebook per generation, in order
std::vector<std::vector<CodedPacket>> build_codebooks(std::span<const Generation> generations,
                                                      const MdsCodeSpec& spec);

// All n per-generation decoders plus file-level bookkeeping.
class FileDecoder {
public:
  FileDecoder(const FileLayout& layout, const SchemeParams& params);

  // returns true when this packet completes its generation
  bool ingest(const CodedPacket& pkt);

  bool complete() const { return decoded_generations_ == layout_.n; }
  std::uint32_t decoded_generations() const { return decoded_generations_; }
  std::uint64_t receptions() const { return receptions_; }
  std::uint64_t superfluous() const;

  std::span<const GenerationDecoder> generations() const { return decoders_; }
  std::vector<std::uint8_t> file_bytes() const;  // throws not_fully_decoded

private:
  FileLayout layout_;
  std::vector<GenerationDecoder> decoders_;
  std::uint32_t decoded_generations_ = 0;
  std::uint64_t receptions_ = 0;
};

}  // namespace genstream
