#include "ctm/codec.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>

#include "catch_amalgamated.hpp"

using namespace ctm;

namespace {

std::uint64_t space_u64(std::uint32_t n) { return machine_count(n).to_u64(); }

}  // namespace

TEST_CASE("encoding_length from exact bit lengths") {
  REQUIRE(encoding_length(1) == 8);    // 1+1+ceil(log2 36)  = 1+1+6
  REQUIRE(encoding_length(2) == 17);   // 2+1+ceil(log2 1e4) = 2+1+14
  REQUIRE(encoding_length(5) == 51);   // 5+1+45
}

TEST_CASE("encoding length grows strictly in n") {
  for (std::uint32_t n = 1; n < 10; ++n)
    REQUIRE(encoding_length(n) < encoding_length(n + 1));
}

TEST_CASE("worked encoding of <2,0,185>") {
  REQUIRE(encode_program(Program(2, 0, 185)) == "10000000010111001");
  REQUIRE(encode_program(Program(1, 0, 0)) == "00000000");
  REQUIRE(encode_program(Program(1, 1, 35)) == "01100011");
}

TEST_CASE("decode worked examples") {
  DecodeResult r = decode_program("10000000010111001");
  REQUIRE(std::holds_alternative<Program>(r));
  REQUIRE(std::get<Program>(r) == Program(2, 0, 185));

  r = decode_program("00000000");
  REQUIRE(std::get<Program>(r) == Program(1, 0, 0));

  // n=1, blank=1, t=63 >= 36: the trivially non-halting sentinel
  r = decode_program("01111111");
  REQUIRE(std::holds_alternative<TrivialNonHalting>(r));
  REQUIRE(std::get<TrivialNonHalting>(r).states == 1);
  REQUIRE(std::get<TrivialNonHalting>(r).blank == 1);
  REQUIRE(std::get<TrivialNonHalting>(r).index.to_u64() == 63);
}

TEST_CASE("incomplete streams report how much is missing") {
  // all ones: still in the unary header
  DecodeResult r = decode_program("1111");
  REQUIRE(std::holds_alternative<Incomplete>(r));
  REQUIRE_FALSE(std::get<Incomplete>(r).bits_needed.has_value());

  // header done, blank bit missing: need 1 + 14 bits for n=2
  r = decode_program("10");
  REQUIRE(std::get<Incomplete>(r).bits_needed == 15);

  // blank read, 3 of 14 index bits read
  r = decode_program("10" "0" "010");
  REQUIRE(std::get<Incomplete>(r).bits_needed == 11);

  REQUIRE(std::holds_alternative<Incomplete>(decode_program("")));
}

TEST_CASE("round trip: dense small n, random n <= 5") {
  for (std::uint32_t n = 1; n <= 2; ++n)
    for (std::uint8_t blank = 0; blank < 2; ++blank)
      for (std::uint64_t t = 0; t < space_u64(n); ++t) {
        Program p(n, blank, t);
        DecodeResult r = decode_program(encode_program(p));
        REQUIRE(std::get<Program>(r) == p);
      }

  std::mt19937_64 rng(5);
  int cases = 0;
  for (std::uint32_t n = 3; n <= 5; ++n)
    for (int i = 0; i < 40000; ++i) {
      Program p(n, static_cast<std::uint8_t>(rng() & 1), rng() % space_u64(n));
      DecodeResult r = decode_program(encode_program(p));
      REQUIRE(std::get<Program>(r) == p);
      ++cases;
    }
  REQUIRE(cases == 120000);
}

TEST_CASE("prefix-freeness") {
  // Same n: all encodings have equal length, so prefix implies equality;
  // check distinctness exhaustively for n <= 2.
  for (std::uint32_t n = 1; n <= 2; ++n) {
    std::set<std::string> seen;
    for (std::uint8_t blank = 0; blank < 2; ++blank)
      for (std::uint64_t t = 0; t < space_u64(n); ++t) {
        std::string bits = encode_program(Program(n, blank, t));
        REQUIRE(bits.size() == encoding_length(n));
        seen.insert(std::move(bits));
      }
    REQUIRE(seen.size() == 2 * space_u64(n));
  }
  // Different n: the unary headers disagree within the first min(n,n') bits.
  // Full cross product of (1,2) x (2,2) encodings.
  for (std::uint8_t b1 = 0; b1 < 2; ++b1)
    for (std::uint64_t t1 = 0; t1 < 36; ++t1) {
      std::string p1 = encode_program(Program(1, b1, t1));
      for (std::uint8_t b2 = 0; b2 < 2; ++b2)
        for (std::uint64_t t2 = 0; t2 < 10000; t2 += 7) {
          std::string p2 = encode_program(Program(2, b2, t2));
          REQUIRE(p2.compare(0, p1.size(), p1) != 0);  // p1 not a prefix of p2
        }
    }
}

TEST_CASE("stream decoding is the unique parse") {
  std::string bits = encode_program(Program(2, 0, 185)) +
                     encode_program(Program(1, 0, 0));
  StreamDecodeResult r = decode_stream(bits);
  REQUIRE(r.items.size() == 2);
  REQUIRE(std::get<Program>(r.items[0]) == Program(2, 0, 185));
  REQUIRE(std::get<Program>(r.items[1]) == Program(1, 0, 0));
  REQUIRE_FALSE(r.remainder.has_value());
  REQUIRE(r.bits_consumed == 25);

  // random concatenations round trip
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    std::vector<Program> ps;
    std::string all;
    for (int j = 0; j < 5; ++j) {
      std::uint32_t n = 1 + rng() % 4;
      ps.emplace_back(n, static_cast<std::uint8_t>(rng() & 1),
                      rng() % space_u64(n));
      all += encode_program(ps.back());
    }
    StreamDecodeResult sr = decode_stream(all);
    REQUIRE(sr.items.size() == ps.size());
    for (std::size_t j = 0; j < ps.size(); ++j)
      REQUIRE(std::get<Program>(sr.items[j]) == ps[j]);
    REQUIRE_FALSE(sr.remainder.has_value());
  }

  // all ones: nothing decoded, unbounded remainder
  StreamDecodeResult ones = decode_stream("11111111111111111");
  REQUIRE(ones.items.empty());
  REQUIRE(ones.remainder.has_value());
  REQUIRE_FALSE(ones.remainder->bits_needed.has_value());
  REQUIRE(ones.bits_consumed == 0);
}

TEST_CASE("bit sources validate and terminate") {
  REQUIRE_THROWS_AS(decode_program("10x"), std::invalid_argument);
}

TEST_CASE("coin flips: P(states = n) = 2^-n within 3 standard errors") {
  // The unary header alone fixes the state count, so overflow decodes count
  // as programs with that n too.
  const int kDecodes = 200000;
  RandomBitSource src(0xC01DCafe);
  std::map<std::uint32_t, std::uint64_t> by_states;
  std::uint64_t overflows = 0;
  for (int i = 0; i < kDecodes; ++i) {
    DecodeResult r = decode_program(src);
    REQUIRE_FALSE(std::holds_alternative<Incomplete>(r));
    std::uint32_t n = std::holds_alternative<Program>(r)
                          ? std::get<Program>(r).states
                          : (++overflows, std::get<TrivialNonHalting>(r).states);
    ++by_states[n];
  }
  for (std::uint32_t n = 1; n <= 4; ++n) {
    double p = std::ldexp(1.0, -static_cast<int>(n));
    double freq = static_cast<double>(by_states[n]) / kDecodes;
    double se = std::sqrt(p * (1 - p) / kDecodes);
    INFO("n=" << n << " freq=" << freq << " p=" << p);
    REQUIRE(std::abs(freq - p) <= 3 * se);
  }
  REQUIRE(overflows > 0);  // overflow streams do occur and map to the sentinel
}
