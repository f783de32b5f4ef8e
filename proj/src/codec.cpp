#include "genstream/codec.hpp"

#include <algorithm>
#include <cassert>
#include <string>

namespace genstream {

MdsCodeSpec MdsCodeSpec::reed_solomon(std::uint32_t g, std::uint32_t K) {
  if (g == 0 || g > K || K > 255)
    raise(Errc::spec_mismatch, "reed_solomon needs 0 < g <= K <= 255");
  return {MdsKind::reed_solomon, K, g, Field::gf256()};
}

MdsCodeSpec MdsCodeSpec::parity_check(std::uint32_t g) {
  if (g == 0) raise(Errc::spec_mismatch, "parity_check needs g >= 1");
  return {MdsKind::parity_check, g + 1, g, Field::gf2()};
}

MdsCodeSpec MdsCodeSpec::repetition(std::uint32_t g) {
  if (g == 0) raise(Errc::spec_mismatch, "repetition needs g >= 1");
  return {MdsKind::repetition, g, g, Field::gf2()};
}

std::pair<FileLayout, std::vector<Generation>> segment_file(std::span<const std::uint8_t> data,
                                                            std::uint32_t block_bytes,
                                                            std::uint32_t g, const Field& f) {
  if (data.empty()) raise(Errc::bad_block_size, "cannot segment an empty file");
  if (block_bytes == 0 || g == 0) raise(Errc::bad_block_size, "block_bytes and g must be positive");
  if ((std::uint64_t(block_bytes) * 8) % f.bits() != 0)
    raise(Errc::bad_block_size, "block bit count not divisible by the symbol width");

  FileLayout layout;
  layout.file_bytes = data.size();
  layout.block_bytes = block_bytes;
  layout.g = g;
  layout.N = std::uint32_t((data.size() + block_bytes - 1) / block_bytes);
  layout.n = (layout.N + g - 1) / g;
  layout.pad_blocks = layout.n * g - layout.N;

  std::size_t syms = layout.symbols_per_block(f);
  std::vector<Generation> gens(layout.n);
  std::vector<std::uint8_t> buf(block_bytes);
  for (std::uint32_t j = 0; j < layout.n; ++j) {
    gens[j].index = j;
    gens[j].block_bytes = block_bytes;
    gens[j].rows.reserve(g);
    for (std::uint32_t r = 0; r < g; ++r) {
      std::uint64_t b = std::uint64_t(j) * g + r;
      if (b >= layout.N) {
        gens[j].rows.emplace_back(f, syms);  // zero padding row
        continue;
      }
      std::uint64_t off = b * block_bytes;
      std::size_t len = std::size_t(std::min<std::uint64_t>(block_bytes, data.size() - off));
      std::fill(buf.begin(), buf.end(), 0);
      std::copy_n(data.begin() + off, len, buf.begin());
      gens[j].rows.push_back(SymbolVector::from_packed(f, buf, syms));
    }
  }
  return {layout, std::move(gens)};
}

CodedPacket rl_encode(const Generation& gen, Rng& rng, const Field& f) {
  std::uint32_t g = std::uint32_t(gen.rows.size());
  SymbolVector c(f, g);
  c.fill_random(rng);

  SymbolVector payload(f, gen.rows.empty() ? 0 : gen.rows[0].size());
  for (std::uint32_t i = 0; i < g; ++i) {
    std::uint8_t ci = c.get(i);
    if (ci) payload.add_scaled(ci, gen.rows[i]);
  }
  return {gen.index, CodingDescriptor::random_vector(std::move(c)), std::move(payload)};
}

CodedPacket rls_next(const Generation& gen, std::uint64_t m, Rng& rng, const Field& f) {
  if (m < gen.rows.size()) {
    auto idx = std::uint32_t(m);
    return {gen.index, CodingDescriptor::systematic(idx), gen.rows[idx]};
  }
  return rl_encode(gen, rng, f);
}

std::vector<CodedPacket> mds_build(const Generation& gen, const MdsCodeSpec& spec) {
  if (spec.g != gen.rows.size())
    raise(Errc::spec_mismatch, "codebook dimension does not match the generation size");
  for (const auto& row : gen.rows)
    if (row.field() != spec.field)
      raise(Errc::spec_mismatch, "generation rows are not over the code's field");

  const Field& f = spec.field;
  std::vector<CodedPacket> book;
  book.reserve(spec.K);

  switch (spec.kind) {
    case MdsKind::repetition:
      for (std::uint32_t i = 0; i < spec.K; ++i)
        book.push_back({gen.index, CodingDescriptor::mds_symbol(i), gen.rows[i]});
      break;

    case MdsKind::parity_check: {
      for (std::uint32_t i = 0; i < spec.g; ++i)
        book.push_back({gen.index, CodingDescriptor::mds_symbol(i), gen.rows[i]});
      SymbolVector parity(f, gen.rows[0].size());
      for (const auto& row : gen.rows) parity.add_scaled(1, row);
      book.push_back({gen.index, CodingDescriptor::mds_symbol(spec.g), std::move(parity)});
      break;
    }

    case MdsKind::reed_solomon: {
      std::uint8_t alpha = f.generator();
      std::uint8_t x = 1;  // alpha^i, the i-th evaluation point
      for (std::uint32_t i = 0; i < spec.K; ++i) {
        SymbolVector payload(f, gen.rows[0].size());
        std::uint8_t coef = 1;  // x^s
        for (std::uint32_t s = 0; s < spec.g; ++s) {
          payload.add_scaled(coef, gen.rows[s]);
          coef = f.mul(coef, x);
        }
        book.push_back({gen.index, CodingDescriptor::mds_symbol(i), std::move(payload)});
        x = f.mul(x, alpha);
      }
      break;
    }
  }
  return book;
}

const CodedPacket& mds_next(const std::vector<CodedPacket>& codebook, std::uint64_t t) {
  return codebook[t % codebook.size()];
}

// ---------------------------------------------------------------------------

GenerationDecoder GenerationDecoder::elimination(std::uint32_t generation_index, std::uint32_t g,
                                                 const Field& f, std::size_t payload_symbols) {
  GenerationDecoder d;
  d.mode_ = Mode::elimination;
  d.generation_index_ = generation_index;
  d.g_ = g;
  d.field_ = f;
  d.payload_symbols_ = payload_symbols;
  d.pivots_.resize(g);
  return d;
}

GenerationDecoder GenerationDecoder::mds(std::uint32_t generation_index, const MdsCodeSpec& spec,
                                         std::size_t payload_symbols) {
  GenerationDecoder d;
  d.mode_ = Mode::mds;
  d.generation_index_ = generation_index;
  d.g_ = spec.g;
  d.field_ = spec.field;
  d.payload_symbols_ = payload_symbols;
  d.mds_spec_ = spec;
  d.symbol_indices_.reserve(spec.g);
  d.symbol_payloads_.reserve(spec.g);
  return d;
}

bool GenerationDecoder::ingest(const CodedPacket& pkt) {
  if (pkt.generation_index != generation_index_)
    raise(Errc::generation_mismatch,
          "packet for generation " + std::to_string(pkt.generation_index) +
              " fed to decoder " + std::to_string(generation_index_));
  ++receptions_;
  if (decoded_) {
    ++superfluous_;
    return false;
  }
  return mode_ == Mode::elimination ? ingest_elimination(pkt) : ingest_mds(pkt);
}

bool GenerationDecoder::ingest_elimination(const CodedPacket& pkt) {
  SymbolVector vec;
  if (pkt.descriptor.kind == CodingDescriptor::Kind::systematic) {
    vec = SymbolVector(field_, g_);
    vec.set(pkt.descriptor.index, 1);
  } else {
    assert(pkt.descriptor.kind == CodingDescriptor::Kind::random_vector);
    vec = pkt.descriptor.vector;
  }
  SymbolVector payload = pkt.payload;

  for (std::uint32_t col = 0; col < g_; ++col) {
    std::uint8_t a = vec.get(col);
    if (a == 0) continue;
    if (pivots_[col]) {
      vec.add_scaled(a, pivots_[col]->first);
      payload.add_scaled(a, pivots_[col]->second);
      continue;
    }
    if (a != 1) {
      std::uint8_t ia = field_.inv(a);
      vec.scale(ia);
      payload.scale(ia);
    }
    pivots_[col] = std::make_pair(std::move(vec), std::move(payload));
    ++rank_;
    if (rank_ == g_) {
      back_substitute();
      decoded_ = true;
      return true;
    }
    return false;
  }
  ++superfluous_;  // reduced to zero: linearly dependent
  return false;
}

void GenerationDecoder::back_substitute() {
  for (std::uint32_t col = g_; col-- > 1;) {
    const auto& [pvec, ppay] = *pivots_[col];
    for (std::uint32_t r = 0; r < col; ++r) {
      auto& [rvec, rpay] = *pivots_[r];
      std::uint8_t a = rvec.get(col);
      if (a == 0) continue;
      rvec.add_scaled(a, pvec);
      rpay.add_scaled(a, ppay);
    }
  }
  blocks_.reserve(g_);
  for (std::uint32_t col = 0; col < g_; ++col) blocks_.push_back(std::move(pivots_[col]->second));
  pivots_.clear();
}

bool GenerationDecoder::ingest_mds(const CodedPacket& pkt) {
  assert(pkt.descriptor.kind == CodingDescriptor::Kind::mds_symbol);
  std::uint32_t idx = pkt.descriptor.index;
  if (std::find(symbol_indices_.begin(), symbol_indices_.end(), idx) != symbol_indices_.end()) {
    ++superfluous_;  // repeat of a symbol already collected
    return false;
  }
  symbol_indices_.push_back(idx);
  symbol_payloads_.push_back(pkt.payload);
  rank_ = std::uint32_t(symbol_indices_.size());
  if (rank_ < g_) return false;
  solve_mds();
  decoded_ = true;
  return true;
}

void GenerationDecoder::solve_mds() {
  const MdsCodeSpec& spec = *mds_spec_;
  blocks_.assign(g_, SymbolVector(field_, payload_symbols_));

  switch (spec.kind) {
    case MdsKind::repetition:
      for (std::uint32_t r = 0; r < g_; ++r)
        blocks_[symbol_indices_[r]] = std::move(symbol_payloads_[r]);
      break;

    case MdsKind::parity_check: {
      // either all g data symbols arrived, or g-1 of them plus the parity
      std::int64_t missing = -1;
      std::vector<bool> have(g_, false);
      std::size_t parity_slot = g_;
      for (std::size_t r = 0; r < symbol_indices_.size(); ++r) {
        if (symbol_indices_[r] == spec.g)
          parity_slot = r;
        else {
          have[symbol_indices_[r]] = true;
          blocks_[symbol_indices_[r]] = std::move(symbol_payloads_[r]);
        }
      }
      for (std::uint32_t b = 0; b < g_; ++b)
        if (!have[b]) missing = b;
      if (missing >= 0) {
        SymbolVector rec = std::move(symbol_payloads_[parity_slot]);
        for (std::uint32_t b = 0; b < g_; ++b)
          if (std::int64_t(b) != missing) rec.add_scaled(1, blocks_[b]);
        blocks_[std::size_t(missing)] = std::move(rec);
      }
      break;
    }

    case MdsKind::reed_solomon: {
      // solve V * B = P, V[r][s] = x_r^s with x_r = alpha^index_r
      const Field& f = field_;
      std::vector<std::vector<std::uint8_t>> V(g_, std::vector<std::uint8_t>(g_));
      for (std::uint32_t r = 0; r < g_; ++r) {
        std::uint8_t x = f.pow(f.generator(), symbol_indices_[r]);
        std::uint8_t coef = 1;
        for (std::uint32_t s = 0; s < g_; ++s) {
          V[r][s] = coef;
          coef = f.mul(coef, x);
        }
      }
      std::vector<SymbolVector> P = std::move(symbol_payloads_);
      for (std::uint32_t col = 0; col < g_; ++col) {
        std::uint32_t piv = col;
        while (V[piv][col] == 0) ++piv;  // distinct points keep V nonsingular
        std::swap(V[piv], V[col]);
        std::swap(P[piv], P[col]);
        std::uint8_t ia = f.inv(V[col][col]);
        if (ia != 1) {
          for (std::uint32_t s = col; s < g_; ++s) V[col][s] = f.mul(ia, V[col][s]);
          P[col].scale(ia);
        }
        for (std::uint32_t r = 0; r < g_; ++r) {
          if (r == col) continue;
          std::uint8_t a = V[r][col];
          if (a == 0) continue;
          for (std::uint32_t s = col; s < g_; ++s) V[r][s] = f.add(V[r][s], f.mul(a, V[col][s]));
          P[r].add_scaled(a, P[col]);
        }
      }
      blocks_ = std::move(P);
      break;
    }
  }
  symbol_indices_.clear();
  symbol_payloads_.clear();
}

const std::vector<SymbolVector>& GenerationDecoder::blocks() const {
  assert(decoded_);
  return blocks_;
}

std::vector<std::uint8_t> reassemble(const FileLayout& layout,
                                     std::span<const GenerationDecoder> decoders) {
  std::string missing;
  for (std::uint32_t j = 0; j < layout.n; ++j) {
    if (j >= decoders.size() || !decoders[j].decoded()) {
      if (!missing.empty()) missing += ",";
      missing += std::to_string(j);
    }
  }
  if (!missing.empty())
    raise(Errc::not_fully_decoded, "generations not decoded: " + missing);

  std::vector<std::uint8_t> out;
  out.reserve(std::size_t(layout.N) * layout.block_bytes);
  for (std::uint32_t j = 0; j < layout.n; ++j) {
    const auto& blocks = decoders[j].blocks();
    for (std::uint32_t r = 0; r < layout.g; ++r) {
      if (std::uint64_t(j) * layout.g + r >= layout.N) break;  // padding rows
      blocks[r].append_packed(out);
    }
  }
  out.resize(layout.file_bytes);  // strip the zero fill of the last block
  return out;
}

}  // namespace genstream
