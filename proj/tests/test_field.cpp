#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "genstream/field.hpp"
#include "genstream/rng.hpp"

using namespace genstream;

TEST_CASE("field axioms hold exhaustively for l in {1,2,4}") {
  for (const Field* fp : {&Field::gf2(), &Field::gf4(), &Field::gf16()}) {
    const Field& f = *fp;
    unsigned q = f.size();
    for (unsigned a = 0; a < q; ++a) {
      CHECK(f.add(0, std::uint8_t(a)) == a);
      CHECK(f.add(std::uint8_t(a), std::uint8_t(a)) == 0);
      CHECK(f.mul(std::uint8_t(a), 1) == a);
      CHECK(f.mul(std::uint8_t(a), 0) == 0);
      if (a != 0) CHECK(f.mul(std::uint8_t(a), f.inv(std::uint8_t(a))) == 1);
      for (unsigned b = 0; b < q; ++b) {
        CHECK(f.add(std::uint8_t(a), std::uint8_t(b)) == f.add(std::uint8_t(b), std::uint8_t(a)));
        CHECK(f.mul(std::uint8_t(a), std::uint8_t(b)) == f.mul(std::uint8_t(b), std::uint8_t(a)));
        for (unsigned c = 0; c < q; ++c) {
          std::uint8_t aa = std::uint8_t(a), bb = std::uint8_t(b), cc = std::uint8_t(c);
          CHECK(f.mul(f.mul(aa, bb), cc) == f.mul(aa, f.mul(bb, cc)));
          CHECK(f.add(f.add(aa, bb), cc) == f.add(aa, f.add(bb, cc)));
          CHECK(f.mul(aa, f.add(bb, cc)) == f.add(f.mul(aa, bb), f.mul(aa, cc)));
        }
      }
    }
  }
}

TEST_CASE("GF(256) scalar examples with modulus 0x11d") {
  const Field& f = Field::gf256();
  CHECK(f.add(0x53, 0xCA) == 0x99);
  CHECK(f.mul(0x02, 0x80) == 0x1D);
  CHECK(f.generator() == 2);
  CHECK(f.pow(f.generator(), 255) == 1);
  for (unsigned a = 0; a < 256; ++a) {
    CHECK(f.mul(std::uint8_t(a), 1) == a);
    CHECK(f.mul(std::uint8_t(a), 0) == 0);
  }
}

TEST_CASE("GF(256) table multiply agrees with carry-less multiply on random pairs") {
  const Field& f = Field::gf256();
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    std::uint8_t a = rng.next_bits(8);
    std::uint8_t b = rng.next_bits(8);
    CHECK(f.mul(a, b) == gf_mul_long(a, b, 8, 0x11d));
  }
}

TEST_CASE("GF(256) inverse: exponentiation route agrees with table route") {
  const Field& f = Field::gf256();
  for (unsigned a = 1; a < 256; ++a) {
    // a^(q-2) by square-and-multiply over the carry-less path
    std::uint8_t acc = 1;
    std::uint8_t base = std::uint8_t(a);
    unsigned e = 254;
    while (e) {
      if (e & 1) acc = gf_mul_long(acc, base, 8, 0x11d);
      base = gf_mul_long(base, base, 8, 0x11d);
      e >>= 1;
    }
    CHECK(acc == f.inv(std::uint8_t(a)));
  }
  CHECK(f.inv(1) == 1);
  CHECK_THROWS_AS((void)f.inv(0), Error);
}

TEST_CASE("reducible moduli are rejected") {
  CHECK_THROWS_AS(Field(2, 0b101), Error);   // (x+1)^2
  CHECK_THROWS_AS(Field(8, 0x11c), Error);   // divisible by x
  CHECK_THROWS_AS(Field(4, 0b10101), Error); // (x^2+x+1)^2
  CHECK_NOTHROW(Field(8, 0x11b));            // another irreducible degree-8 choice
  CHECK_NOTHROW(Field(4, 0b11111));          // irreducible but x is not primitive
}

TEST_CASE("axpy basics") {
  const Field& f = Field::gf2();
  std::uint8_t dst_syms[] = {1, 0, 1, 1};
  std::uint8_t src_syms[] = {0, 1, 1, 0};
  SymbolVector dst = SymbolVector::from_symbols(f, dst_syms);
  SymbolVector src = SymbolVector::from_symbols(f, src_syms);

  SymbolVector copy = dst;
  copy.add_scaled(0, src);
  CHECK(copy == dst);

  copy.add_scaled(1, src);
  std::uint8_t want[] = {1, 1, 0, 1};
  CHECK(copy == SymbolVector::from_symbols(f, want));

  SymbolVector self = dst;
  self.add_scaled(1, dst);
  CHECK(self.is_zero());

  SymbolVector shorter(f, 3);
  CHECK_THROWS_AS(shorter.add_scaled(1, src), Error);
}

TEST_CASE("bit-packed GF(2) axpy agrees with symbol-at-a-time reference on lengths 1..512") {
  const Field& f = Field::gf2();
  Rng rng(99);
  for (std::size_t len = 1; len <= 512; ++len) {
    SymbolVector dst(f, len), src(f, len);
    dst.fill_random(rng);
    src.fill_random(rng);
    std::vector<std::uint8_t> ref(len);
    for (std::size_t i = 0; i < len; ++i) ref[i] = dst.get(i) ^ src.get(i);
    dst.add_scaled(1, src);
    bool ok = true;
    for (std::size_t i = 0; i < len; ++i) ok = ok && dst.get(i) == ref[i];
    CHECK(ok);
  }
}

TEST_CASE("scaled axpy matches scalar reference in larger fields") {
  Rng rng(3);
  for (const Field* fp : {&Field::gf4(), &Field::gf16(), &Field::gf256()}) {
    const Field& f = *fp;
    for (std::size_t len : {1, 5, 64, 200}) {
      SymbolVector dst(f, len), src(f, len);
      dst.fill_random(rng);
      src.fill_random(rng);
      std::uint8_t coeff = rng.next_bits(f.bits());
      std::vector<std::uint8_t> ref(len);
      for (std::size_t i = 0; i < len; ++i) ref[i] = f.add(dst.get(i), f.mul(coeff, src.get(i)));
      dst.add_scaled(coeff, src);
      bool ok = true;
      for (std::size_t i = 0; i < len; ++i) ok = ok && dst.get(i) == ref[i];
      CHECK(ok);
    }
  }
}

TEST_CASE("packed byte round-trip for every symbol width") {
  Rng rng(17);
  for (unsigned bits : {1u, 2u, 4u, 8u}) {
    const Field& f = Field::with_bits(bits);
    for (std::size_t len : {1, 3, 8, 17, 128}) {
      SymbolVector v(f, len);
      v.fill_random(rng);
      auto packed = v.packed_bytes();
      CHECK(packed.size() == (len * bits + 7) / 8);
      SymbolVector back = SymbolVector::from_packed(f, packed, len);
      CHECK(back == v);
    }
  }
}
