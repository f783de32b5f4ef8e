#include "genstream/field.hpp"

#include <cassert>
#include <mutex>

namespace genstream {

std::uint8_t gf_mul_long(std::uint8_t a, std::uint8_t b, unsigned bits, unsigned modulus) {
  unsigned acc = 0;
  unsigned aa = a;
  unsigned bb = b;
  while (bb) {
    if (bb & 1) acc ^= aa;
    bb >>= 1;
    aa <<= 1;
    if (aa & (1u << bits)) aa ^= modulus;
  }
  return static_cast<std::uint8_t>(acc);
}

namespace {

unsigned poly_degree(unsigned p) {
  unsigned d = 0;
  while (p >> (d + 1)) ++d;
  return d;
}

// remainder of a / b over GF(2)
unsigned poly_mod(unsigned a, unsigned b) {
  unsigned db = poly_degree(b);
  while (a && poly_degree(a) >= db) a ^= b << (poly_degree(a) - db);
  return a;
}

}  // namespace

bool gf_modulus_irreducible(unsigned bits, unsigned modulus) {
  if (poly_degree(modulus) != bits) return false;
  for (unsigned d = 1; d <= bits / 2; ++d) {
    for (unsigned f = (1u << d); f < (2u << d); ++f) {
      if (poly_mod(modulus, f) == 0) return false;
    }
  }
  return true;
}

Field::Field(unsigned bits, unsigned modulus) {
  if (bits != 1 && bits != 2 && bits != 4 && bits != 8)
    raise(Errc::bad_spec, "field extension degree must be 1, 2, 4 or 8");
  if (!gf_modulus_irreducible(bits, modulus))
    raise(Errc::bad_spec, "field modulus is not irreducible");

  auto t = std::make_shared<Tables>();
  t->bits = bits;
  t->q = 1u << bits;
  t->modulus = modulus;

  // smallest element generating the whole multiplicative group
  unsigned alpha = 0;
  for (unsigned cand = (t->q == 2) ? 1 : 2; cand < t->q; ++cand) {
    unsigned x = 1;
    unsigned order = 0;
    do {
      x = gf_mul_long(std::uint8_t(x), std::uint8_t(cand), bits, modulus);
      ++order;
    } while (x != 1);
    if (order == t->q - 1) {
      alpha = cand;
      break;
    }
  }
  assert(alpha != 0);
  t->alpha = std::uint8_t(alpha);

  unsigned x = 1;
  for (unsigned i = 0; i < t->q - 1; ++i) {
    t->exp[i] = std::uint8_t(x);
    t->log[x] = std::uint8_t(i);
    x = gf_mul_long(std::uint8_t(x), t->alpha, bits, modulus);
  }
  for (unsigned i = t->q - 1; i < 2 * (t->q - 1) + 1 && i < t->exp.size(); ++i)
    t->exp[i] = t->exp[i - (t->q - 1)];

  t_ = std::move(t);
}

const Field& Field::gf2() {
  static const Field f(1, 0b11);
  return f;
}

const Field& Field::gf4() {
  static const Field f(2, 0b111);
  return f;
}

const Field& Field::gf16() {
  static const Field f(4, 0b10011);
  return f;
}

const Field& Field::gf256() {
  static const Field f(8, 0x11d);
  return f;
}

const Field& Field::with_bits(unsigned bits) {
  switch (bits) {
    case 1: return gf2();
    case 2: return gf4();
    case 4: return gf16();
    case 8: return gf256();
    default: raise(Errc::bad_spec, "no field with " + std::to_string(bits) + " bits per symbol");
  }
}

std::uint8_t Field::inv(std::uint8_t a) const {
  if (a == 0) raise(Errc::zero_inverse, "zero has no multiplicative inverse");
  return t_->exp[(t_->q - 1) - t_->log[a]];
}

std::uint8_t Field::pow(std::uint8_t a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  std::uint64_t le = (std::uint64_t(t_->log[a]) * (e % (t_->q - 1))) % (t_->q - 1);
  return t_->exp[le];
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::size_t kWordBits = 64;
}

std::size_t SymbolVector::word_count() const {
  if (n_ == 0) return 0;
  if (field_.bits() == 1) return (n_ + kWordBits - 1) / kWordBits;
  return (n_ + 7) / 8;
}

SymbolVector::SymbolVector(const Field& f, std::size_t n) : field_(f), n_(n) {
  w_.assign(word_count(), 0);
}

std::uint8_t SymbolVector::get(std::size_t i) const {
  assert(i < n_);
  if (field_.bits() == 1) return (w_[i / kWordBits] >> (i % kWordBits)) & 1u;
  return std::uint8_t(w_[i / 8] >> (8 * (i % 8)));
}

void SymbolVector::set(std::size_t i, std::uint8_t v) {
  assert(i < n_);
  assert(v < field_.size());
  if (field_.bits() == 1) {
    std::uint64_t bit = std::uint64_t(1) << (i % kWordBits);
    if (v)
      w_[i / kWordBits] |= bit;
    else
      w_[i / kWordBits] &= ~bit;
  } else {
    std::size_t sh = 8 * (i % 8);
    std::uint64_t& w = w_[i / 8];
    w = (w & ~(std::uint64_t(0xff) << sh)) | (std::uint64_t(v) << sh);
  }
}

bool SymbolVector::is_zero() const {
  for (std::uint64_t w : w_)
    if (w) return false;
  return true;
}

void SymbolVector::clear() {
  std::fill(w_.begin(), w_.end(), 0);
}

void SymbolVector::add_scaled(std::uint8_t coeff, const SymbolVector& src) {
  if (n_ != src.n_ || field_ != src.field_)
    raise(Errc::length_mismatch, "vector length/field mismatch in add_scaled");
  if (coeff == 0) return;
  if (coeff == 1) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= src.w_[i];
    return;
  }
  // coeff > 1 implies bits > 1: one symbol per byte lane
  const Field& f = field_;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    std::uint64_t s = src.w_[i];
    if (!s) continue;
    std::uint64_t acc = 0;
    for (unsigned lane = 0; lane < 8; ++lane) {
      std::uint8_t b = std::uint8_t(s >> (8 * lane));
      if (b) acc |= std::uint64_t(f.mul(coeff, b)) << (8 * lane);
    }
    w_[i] ^= acc;
  }
}

void SymbolVector::scale(std::uint8_t coeff) {
  if (coeff == 1) return;
  if (coeff == 0) {
    clear();
    return;
  }
  const Field& f = field_;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    std::uint64_t s = w_[i];
    if (!s) continue;
    std::uint64_t acc = 0;
    for (unsigned lane = 0; lane < 8; ++lane) {
      std::uint8_t b = std::uint8_t(s >> (8 * lane));
      if (b) acc |= std::uint64_t(f.mul(coeff, b)) << (8 * lane);
    }
    w_[i] = acc;
  }
}

SymbolVector SymbolVector::from_symbols(const Field& f, std::span<const std::uint8_t> symbols) {
  SymbolVector v(f, symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) v.set(i, symbols[i]);
  return v;
}

SymbolVector SymbolVector::from_packed(const Field& f, std::span<const std::uint8_t> bytes,
                                       std::size_t n) {
  SymbolVector v(f, n);
  if ((n * f.bits() + 7) / 8 != bytes.size())
    raise(Errc::length_mismatch, "packed byte count does not match symbol count");
  unsigned l = f.bits();
  if (l == 1 || l == 8) {
    // packed byte j lands in byte lane j of the word array in both layouts
    for (std::size_t j = 0; j < bytes.size(); ++j)
      v.w_[j / 8] |= std::uint64_t(bytes[j]) << (8 * (j % 8));
    if (l == 1 && n % kWordBits != 0)  // mask packing pad bits
      v.w_.back() &= (std::uint64_t(1) << (n % kWordBits)) - 1;
    return v;
  }
  unsigned per_byte = 8 / l;
  std::uint8_t mask = std::uint8_t((1u << l) - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t b = bytes[i / per_byte];
    v.set(i, std::uint8_t((b >> (l * (i % per_byte))) & mask));
  }
  return v;
}

std::vector<std::uint8_t> SymbolVector::packed_bytes() const {
  std::vector<std::uint8_t> out;
  append_packed(out);
  return out;
}

void SymbolVector::append_packed(std::vector<std::uint8_t>& out) const {
  unsigned l = field_.bits();
  std::size_t nbytes = packed_size();
  std::size_t base = out.size();
  out.resize(base + nbytes, 0);
  if (l == 1 || l == 8) {
    for (std::size_t j = 0; j < nbytes; ++j)
      out[base + j] = std::uint8_t(w_[j / 8] >> (8 * (j % 8)));
    return;
  }
  unsigned per_byte = 8 / l;
  for (std::size_t i = 0; i < n_; ++i)
    out[base + i / per_byte] |= std::uint8_t(get(i) << (l * (i % per_byte)));
}

bool SymbolVector::operator==(const SymbolVector& o) const {
  return n_ == o.n_ && field_ == o.field_ && w_ == o.w_;
}

}  // namespace genstream
