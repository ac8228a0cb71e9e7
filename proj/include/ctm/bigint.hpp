#pragma once
// Arbitrary-precision unsigned integers on top of GMP's mpz_t.
//
// Machine-space cardinalities like (4n+2)^(2n) overflow 64 bits long before
// the series cutoffs used by the analytic bounds (n in the thousands), and
// every probability denominator is derived from an exact ceil(log2) of such
// a power, so the representation has to be exact. This wrapper keeps the
// library value-semantic and restricted to the non-negative range we need.

#include <gmp.h>

#include <cstdint>
#include <compare>
#include <stdexcept>
#include <string>
#include <utility>

namespace ctm {

class BigUint {
 public:
  BigUint() { mpz_init(z_); }

  BigUint(std::uint64_t v) {  // NOLINT: implicit by design, mirrors integers
    static_assert(sizeof(unsigned long) == 8, "requires 64-bit unsigned long");
    mpz_init_set_ui(z_, static_cast<unsigned long>(v));
  }

  BigUint(const BigUint& o) { mpz_init_set(z_, o.z_); }
  BigUint(BigUint&& o) noexcept {
    mpz_init(z_);
    mpz_swap(z_, o.z_);
  }
  BigUint& operator=(const BigUint& o) {
    if (this != &o) mpz_set(z_, o.z_);
    return *this;
  }
  BigUint& operator=(BigUint&& o) noexcept {
    mpz_swap(z_, o.z_);
    return *this;
  }
  ~BigUint() { mpz_clear(z_); }

  // base^exp, exact.
  static BigUint pow(std::uint64_t base, std::uint64_t exp) {
    BigUint r;
    mpz_ui_pow_ui(r.z_, static_cast<unsigned long>(base),
                  static_cast<unsigned long>(exp));
    return r;
  }

  // 2^exp, exact.
  static BigUint pow2(std::uint64_t exp) {
    BigUint r;
    mpz_setbit(r.z_, static_cast<mp_bitcnt_t>(exp));
    return r;
  }

  BigUint& operator+=(const BigUint& o) {
    mpz_add(z_, z_, o.z_);
    return *this;
  }
  BigUint& operator-=(const BigUint& o) {
    if (mpz_cmp(z_, o.z_) < 0)
      throw std::underflow_error("BigUint: subtraction below zero");
    mpz_sub(z_, z_, o.z_);
    return *this;
  }
  BigUint& operator*=(const BigUint& o) {
    mpz_mul(z_, z_, o.z_);
    return *this;
  }
  BigUint& operator*=(std::uint64_t v) {
    mpz_mul_ui(z_, z_, static_cast<unsigned long>(v));
    return *this;
  }
  BigUint& operator<<=(std::uint64_t bits) {
    mpz_mul_2exp(z_, z_, static_cast<mp_bitcnt_t>(bits));
    return *this;
  }
  BigUint& operator>>=(std::uint64_t bits) {
    mpz_tdiv_q_2exp(z_, z_, static_cast<mp_bitcnt_t>(bits));
    return *this;
  }

  friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }
  friend BigUint operator-(BigUint a, const BigUint& b) { return a -= b; }
  friend BigUint operator*(BigUint a, const BigUint& b) { return a *= b; }
  friend BigUint operator*(BigUint a, std::uint64_t b) { return a *= b; }
  friend BigUint operator<<(BigUint a, std::uint64_t bits) { return a <<= bits; }
  friend BigUint operator>>(BigUint a, std::uint64_t bits) { return a >>= bits; }

  friend bool operator==(const BigUint& a, const BigUint& b) {
    return mpz_cmp(a.z_, b.z_) == 0;
  }
  friend std::strong_ordering operator<=>(const BigUint& a, const BigUint& b) {
    int c = mpz_cmp(a.z_, b.z_);
    return c < 0   ? std::strong_ordering::less
           : c > 0 ? std::strong_ordering::greater
                   : std::strong_ordering::equal;
  }

  bool is_zero() const { return mpz_sgn(z_) == 0; }
  bool is_odd() const { return mpz_odd_p(z_) != 0; }
  bool is_power_of_two() const { return mpz_popcount(z_) == 1; }

  // Number of bits in the binary representation; 0 for the value 0.
  std::uint64_t bit_length() const {
    if (is_zero()) return 0;
    return mpz_sizeinbase(z_, 2);
  }

  bool bit(std::uint64_t i) const {
    return mpz_tstbit(z_, static_cast<mp_bitcnt_t>(i)) != 0;
  }

  std::uint64_t trailing_zero_bits() const {
    if (is_zero()) throw std::domain_error("BigUint: trailing zeros of zero");
    return mpz_scan1(z_, 0);
  }

  bool fits_u64() const { return mpz_fits_ulong_p(z_) != 0; }

  std::uint64_t to_u64() const {
    if (!fits_u64()) throw std::overflow_error("BigUint: value exceeds 64 bits");
    return static_cast<std::uint64_t>(mpz_get_ui(z_));
  }

  double to_double() const { return mpz_get_d(z_); }

  // Returns (d, e) with value == d * 2^e and d in [0.5, 1) (or 0).
  std::pair<double, long> to_double_2exp() const {
    long e = 0;
    double d = mpz_get_d_2exp(&e, z_);
    return {d, e};
  }

  std::string to_string() const {
    char* s = mpz_get_str(nullptr, 10, z_);
    std::string out(s);
    void (*free_fn)(void*, std::size_t) = nullptr;
    mp_get_memory_functions(nullptr, nullptr, &free_fn);
    free_fn(s, out.size() + 1);
    return out;
  }

 private:
  mpz_t z_;
};

// Exact ceil(log2(x)) for x >= 1, computed from the bit length only.
inline std::uint64_t ceil_log2(const BigUint& x) {
  if (x.is_zero()) throw std::domain_error("ceil_log2: argument must be >= 1");
  std::uint64_t bits = x.bit_length();
  return x.is_power_of_two() ? bits - 1 : bits;
}

}  // namespace ctm
