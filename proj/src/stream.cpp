#include "genstream/stream.hpp"

namespace genstream {

const char* to_string(SchemeKind s) {
  switch (s) {
    case SchemeKind::rl: return "rl";
    case SchemeKind::rls: return "rls";
    case SchemeKind::rs: return "rs";
    case SchemeKind::pc: return "pc";
    case SchemeKind::rep: return "rep";
  }
  return "?";
}

std::optional<SchemeKind> scheme_from_string(const std::string& s) {
  if (s == "rl") return SchemeKind::rl;
  if (s == "rls") return SchemeKind::rls;
  if (s == "rs") return SchemeKind::rs;
  if (s == "pc") return SchemeKind::pc;
  if (s == "rep") return SchemeKind::rep;
  return std::nullopt;
}

void SchemeParams::validate() const {
  if (g < 1 || n < 1) raise(Errc::bad_spec, "need g >= 1 and n >= 1");
  if (channel.epsilon < 0.0 || channel.epsilon >= 1.0)
    raise(Errc::bad_spec, "loss rate must lie in [0,1)");
  if (scheme == SchemeKind::rl || scheme == SchemeKind::rls)
    Field::with_bits(field_bits);  // throws on unsupported widths
  if (is_mds()) mds_spec();        // throws on inconsistent (K, g)
}

std::vector<std::vector<CodedPacket>> build_codebooks(std::span<const Generation> generations,
                                                      const MdsCodeSpec& spec) {
  std::vector<std::vector<CodedPacket>> books;
  books.reserve(generations.size());
  for (const auto& gen : generations) books.push_back(mds_build(gen, spec));
  return books;
}

RoundRobinEncoder::RoundRobinEncoder(std::span<const Generation> generations,
                                     const SchemeParams& params, std::uint64_t coding_seed)
    : gens_(generations),
      params_(params),
      coding_rng_(coding_seed),
      sent_per_gen_(generations.size(), 0) {
  params_.validate();
  if (gens_.empty()) raise(Errc::bad_spec, "no generations to encode");
  if (params_.is_mds()) {
    owned_books_ = build_codebooks(gens_, params_.mds_spec());
    books_ = owned_books_;
  }
}

RoundRobinEncoder::RoundRobinEncoder(std::span<const Generation> generations,
                                     const SchemeParams& params, std::uint64_t coding_seed,
                                     std::span<const std::vector<CodedPacket>> books)
    : gens_(generations),
      params_(params),
      coding_rng_(coding_seed),
      sent_per_gen_(generations.size(), 0),
      books_(books) {
  params_.validate();
  if (gens_.empty()) raise(Errc::bad_spec, "no generations to encode");
  if (params_.is_mds() && books_.size() != gens_.size())
    raise(Errc::spec_mismatch, "codebook count does not match generation count");
}

CodedPacket RoundRobinEncoder::next() {
  std::uint32_t j = next_generation();
  std::uint64_t m = sent_per_gen_[j]++;
  ++t_;
  const Generation& gen = gens_[j];
  const Field& f = params_.coding_field();
  switch (params_.scheme) {
    case SchemeKind::rl: return rl_encode(gen, coding_rng_, f);
    case SchemeKind::rls: return rls_next(gen, m, coding_rng_, f);
    default: return mds_next(books_[j], m);
  }
}

void RoundRobinEncoder::skip_next() {
  ++sent_per_gen_[next_generation()];
  ++t_;
}

FileDecoder::FileDecoder(const FileLayout& layout, const SchemeParams& params) : layout_(layout) {
  const Field& f = params.coding_field();
  std::size_t syms = layout.symbols_per_block(f);
  decoders_.reserve(layout.n);
  for (std::uint32_t j = 0; j < layout.n; ++j) {
    if (params.is_mds())
      decoders_.push_back(GenerationDecoder::mds(j, params.mds_spec(), syms));
    else
      decoders_.push_back(GenerationDecoder::elimination(j, layout.g, f, syms));
  }
}

bool FileDecoder::ingest(const CodedPacket& pkt) {
  if (pkt.generation_index >= decoders_.size())
    raise(Errc::generation_mismatch, "generation index out of range");
  ++receptions_;
  bool done = decoders_[pkt.generation_index].ingest(pkt);
  if (done) ++decoded_generations_;
  return done;
}

std::uint64_t FileDecoder::superfluous() const {
  std::uint64_t s = 0;
  for (const auto& d : decoders_) s += d.superfluous();
  return s;
}

std::vector<std::uint8_t> FileDecoder::file_bytes() const {
  return reassemble(layout_, decoders_);
}

}  // namespace genstream
