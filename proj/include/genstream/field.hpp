#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "genstream/error.hpp"

namespace genstream {

// Carry-less polynomial product of a and b reduced by `modulus`, an
// irreducible polynomial of degree `bits` over GF(2). Reference path,
// independent of the lookup tables (which are generated from it).
std::uint8_t gf_mul_long(std::uint8_t a, std::uint8_t b, unsigned bits, unsigned modulus);

// Exhaustive trial division by every polynomial of degree 1..bits/2.
bool gf_modulus_irreducible(unsigned bits, unsigned modulus);

// GF(2^l) for l in {1,2,4,8}. Elements are integers in [0, 2^l). Addition is
// XOR; multiplication runs through log/antilog tables built once at
// construction. Tables are immutable and shareable across threads; Field is
// a cheap value handle.
class Field {
public:
  // modulus: the (l+1)-bit polynomial; verified irreducible.
  Field(unsigned bits, unsigned modulus);

  static const Field& gf2();
  static const Field& gf4();     // x^2+x+1
  static const Field& gf16();    // x^4+x+1
  static const Field& gf256();   // x^8+x^4+x^3+x^2+1 (0x11d)
  static const Field& with_bits(unsigned bits);

  unsigned bits() const { return t_->bits; }
  unsigned size() const { return t_->q; }
  unsigned modulus() const { return t_->modulus; }
  // smallest primitive element; exponentiation order for the log tables
  std::uint8_t generator() const { return t_->alpha; }

  std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return a ^ b; }

  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const {
    if (a == 0 || b == 0) return 0;
    return t_->exp[unsigned(t_->log[a]) + unsigned(t_->log[b])];
  }

  // throws Errc::zero_inverse on a == 0
  std::uint8_t inv(std::uint8_t a) const;

  std::uint8_t pow(std::uint8_t a, std::uint64_t e) const;

  bool operator==(const Field& o) const {
    return t_->bits == o.t_->bits && t_->modulus == o.t_->modulus;
  }
  bool operator!=(const Field& o) const { return !(*this == o); }

private:
  struct Tables {
    unsigned bits = 0;
    unsigned q = 0;
    unsigned modulus = 0;
    std::uint8_t alpha = 0;
    std::array<std::uint8_t, 256> log{};
    std::array<std::uint8_t, 512> exp{};  // doubled, saves the mod (q-1)
  };

  std::shared_ptr<const Tables> t_;
};

// Fixed-length vector of field symbols. GF(2) vectors are bit-packed 64
// symbols per word; larger fields hold one symbol per byte of the word
// array. In both layouts vector addition is a word-wide XOR.
class SymbolVector {
public:
  SymbolVector() : field_(Field::gf2()) {}
  SymbolVector(const Field& f, std::size_t n);

  // unpack from tight byte packing (low-order bits first within each byte)
  static SymbolVector from_packed(const Field& f, std::span<const std::uint8_t> bytes,
                                  std::size_t n);
  static SymbolVector from_symbols(const Field& f, std::span<const std::uint8_t> symbols);

  std::size_t size() const { return n_; }
  std::size_t packed_size() const { return (n_ * field_.bits() + 7) / 8; }
  const Field& field() const { return field_; }

  std::uint8_t get(std::size_t i) const;
  void set(std::size_t i, std::uint8_t v);

  bool is_zero() const;
  void clear();

  // overwrite with symbols drawn independently and equiprobably (zero included)
  template <class RandomSource>
  void fill_random(RandomSource& rng) {
    if (field_.bits() == 1) {
      for (std::size_t i = 0; i < w_.size(); ++i) w_[i] = rng.next_u64();
      if (n_ % 64 != 0 && !w_.empty()) w_.back() &= (std::uint64_t(1) << (n_ % 64)) - 1;
    } else {
      for (std::size_t i = 0; i < n_; ++i) set(i, rng.next_bits(field_.bits()));
    }
  }

  // *this += coeff * src; word-wide XOR when coeff == 1
  void add_scaled(std::uint8_t coeff, const SymbolVector& src);
  void scale(std::uint8_t coeff);

  std::vector<std::uint8_t> packed_bytes() const;
  void append_packed(std::vector<std::uint8_t>& out) const;

  bool operator==(const SymbolVector& o) const;
  bool operator!=(const SymbolVector& o) const { return !(*this == o); }

private:
  std::size_t word_count() const;

  Field field_;
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace genstream
