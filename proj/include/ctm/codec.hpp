#pragma once
// Programs and their prefix-free binary encoding.
//
// A program is a triplet <n, i, t>: state count, blank symbol, machine index.
// Its encoding is 1^(n-1) 0 (unary state count), one bit for the blank, then
// t in big-endian binary padded to ceil(log2((4n+2)^(2n))) bits. The unary
// header determines the total length, so no encoding is a prefix of another,
// and any infinite bit source (e.g. fair coin flips) parses into a unique
// program stream. Index values beyond the machine count decode to a
// distinguished non-halting sentinel rather than a machine.

#include <concepts>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctm/bigint.hpp"
#include "ctm/machine.hpp"

namespace ctm {

struct Program {
  std::uint32_t states = 1;
  std::uint8_t blank = 0;
  BigUint index;

  Program() = default;
  Program(std::uint32_t n, std::uint8_t i, BigUint t)
      : states(n), blank(i), index(std::move(t)) {}
  Program(std::uint32_t n, std::uint8_t i, std::uint64_t t)
      : states(n), blank(i), index(t) {}

  friend bool operator==(const Program&, const Program&) = default;
};

// Decoded index was >= (4n+2)^(2n); stands for a trivially non-halting
// machine and so contributes no output string.
struct TrivialNonHalting {
  std::uint32_t states = 1;
  std::uint8_t blank = 0;
  BigUint index;

  friend bool operator==(const TrivialNonHalting&, const TrivialNonHalting&) = default;
};

// The source ended mid-program. bits_needed is how many more bits would
// complete it, or nullopt while still inside the unbounded unary header.
struct Incomplete {
  std::optional<std::uint64_t> bits_needed;

  friend bool operator==(const Incomplete&, const Incomplete&) = default;
};

using DecodeResult = std::variant<Program, TrivialNonHalting, Incomplete>;

namespace detail {

struct SpaceInfo {
  std::uint64_t encoding_length;
  BigUint count;
};

// Cached per-n encoding data; the bounds evaluations hit this for n in the
// thousands, and each miss costs an exact big-integer power.
inline const SpaceInfo& space_info(std::uint32_t n) {
  static std::mutex mu;
  static std::vector<std::unique_ptr<SpaceInfo>> cache;
  if (n < 1) throw std::invalid_argument("space_info: n must be >= 1");
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() < n) cache.resize(n);
  if (!cache[n - 1]) {
    BigUint count = machine_count(n);
    std::uint64_t len = n + 1 + ceil_log2(count);
    cache[n - 1] = std::make_unique<SpaceInfo>(SpaceInfo{len, std::move(count)});
  }
  return *cache[n - 1];
}

}  // namespace detail

// n + 1 + ceil(log2((4n+2)^(2n))), from the exact bit length (no floating
// point anywhere: one bit off here would corrupt every probability).
inline std::uint64_t encoding_length(std::uint32_t n) {
  return detail::space_info(n).encoding_length;
}

inline std::string encode_program(const Program& p) {
  if (p.states < 1)
    throw std::invalid_argument("encode_program: states must be >= 1");
  const detail::SpaceInfo& info = detail::space_info(p.states);
  if (p.blank > 1 || p.index >= info.count)
    throw std::invalid_argument("encode_program: invalid program");
  const std::uint64_t tbits = info.encoding_length - p.states - 1;
  std::string bits;
  bits.reserve(info.encoding_length);
  bits.append(p.states - 1, '1');
  bits.push_back('0');
  bits.push_back(static_cast<char>('0' + p.blank));
  for (std::uint64_t j = tbits; j-- > 0;)
    bits.push_back(p.index.bit(j) ? '1' : '0');
  return bits;
}

// Pull-based bit sources for the decoder.

class StringBitSource {
 public:
  explicit StringBitSource(std::string_view bits) : bits_(bits) {}

  std::optional<int> next_bit() {
    if (pos_ >= bits_.size()) return std::nullopt;
    char c = bits_[pos_++];
    if (c != '0' && c != '1')
      throw std::invalid_argument("bit string: characters must be '0'/'1'");
    return c - '0';
  }

  std::size_t consumed() const { return pos_; }

 private:
  std::string_view bits_;
  std::size_t pos_ = 0;
};

// Infinite fair-coin source; deterministic for a given seed.
class RandomBitSource {
 public:
  explicit RandomBitSource(std::uint64_t seed) : rng_(seed) {}

  std::optional<int> next_bit() {
    if (left_ == 0) {
      word_ = rng_();
      left_ = 64;
    }
    int b = static_cast<int>(word_ & 1);
    word_ >>= 1;
    --left_;
    return b;
  }

 private:
  std::mt19937_64 rng_;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

// Reads exactly one program from the source. Consumes encoding_length(n)
// bits on success and on index overflow (the overflow still identifies a
// unique, if useless, program).
template <class Source>
  requires requires(Source& s) { { s.next_bit() } -> std::convertible_to<std::optional<int>>; }
DecodeResult decode_program(Source& src) {
  std::uint64_t ones = 0;
  for (;;) {
    std::optional<int> b = src.next_bit();
    if (!b) return Incomplete{std::nullopt};
    if (*b == 0) break;
    ++ones;
  }
  const std::uint32_t n = static_cast<std::uint32_t>(ones) + 1;
  const detail::SpaceInfo& info = detail::space_info(n);
  const std::uint64_t tbits = info.encoding_length - n - 1;

  std::optional<int> blank = src.next_bit();
  if (!blank) return Incomplete{1 + tbits};

  BigUint t;
  for (std::uint64_t j = 0; j < tbits; ++j) {
    std::optional<int> b = src.next_bit();
    if (!b) return Incomplete{tbits - j};
    t <<= 1;
    if (*b) t += BigUint(1);
  }
  if (t >= info.count)
    return TrivialNonHalting{n, static_cast<std::uint8_t>(*blank), std::move(t)};
  return Program{n, static_cast<std::uint8_t>(*blank), std::move(t)};
}

inline DecodeResult decode_program(std::string_view bits) {
  StringBitSource src(bits);
  return decode_program(src);
}

struct StreamDecodeResult {
  std::vector<std::variant<Program, TrivialNonHalting>> items;
  std::optional<Incomplete> remainder;  // set iff the input ends mid-program
  std::uint64_t bits_consumed = 0;      // bits used by complete programs
};

// Unique parse of a whole bit string into consecutive programs.
inline StreamDecodeResult decode_stream(std::string_view bits) {
  StreamDecodeResult out;
  StringBitSource src(bits);
  for (;;) {
    std::size_t mark = src.consumed();
    DecodeResult r = decode_program(src);
    if (std::holds_alternative<Incomplete>(r)) {
      if (src.consumed() > mark)  // partial program at the tail
        out.remainder = std::get<Incomplete>(r);
      out.bits_consumed = mark;
      return out;
    }
    if (std::holds_alternative<Program>(r))
      out.items.emplace_back(std::move(std::get<Program>(r)));
    else
      out.items.emplace_back(std::move(std::get<TrivialNonHalting>(r)));
  }
}

}  // namespace ctm
