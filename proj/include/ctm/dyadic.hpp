#pragma once
// Exact dyadic rationals num / 2^exp. Every program probability has a
// power-of-two denominator, so sums of them stay dyadic and all measure
// comparisons can be made exactly; floating point enters only when a value
// is finally reported or fed to a logarithm.

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "ctm/bigint.hpp"

namespace ctm {

class Dyadic {
 public:
  Dyadic() = default;

  Dyadic(BigUint numerator, std::uint64_t exponent)
      : num_(std::move(numerator)), exp_(exponent) {
    canonicalize();
  }

  Dyadic(std::uint64_t numerator, std::uint64_t exponent)
      : Dyadic(BigUint(numerator), exponent) {}

  static Dyadic zero() { return Dyadic(); }
  static Dyadic one_over_pow2(std::uint64_t e) { return Dyadic(BigUint(1), e); }

  // Doubles are dyadic; the conversion is exact.
  static Dyadic from_double(double v) {
    if (v < 0 || !std::isfinite(v))
      throw std::domain_error("Dyadic::from_double: needs a finite value >= 0");
    if (v == 0) return Dyadic();
    int e = 0;
    double mant = std::frexp(v, &e);                   // v = mant * 2^e
    auto scaled = static_cast<std::uint64_t>(std::ldexp(mant, 53));
    // v = scaled * 2^(e-53)
    if (e >= 53) return Dyadic(BigUint(scaled) << static_cast<std::uint64_t>(e - 53), 0);
    return Dyadic(BigUint(scaled), static_cast<std::uint64_t>(53 - e));
  }

  const BigUint& numerator() const { return num_; }
  std::uint64_t exponent2() const { return exp_; }
  bool is_zero() const { return num_.is_zero(); }

  Dyadic& operator+=(const Dyadic& o) {
    align(o);
    num_ += o.aligned_num(exp_);
    canonicalize();
    return *this;
  }

  Dyadic& operator-=(const Dyadic& o) {
    if (*this < o) throw std::underflow_error("Dyadic: subtraction below zero");
    align(o);
    num_ -= o.aligned_num(exp_);
    canonicalize();
    return *this;
  }

  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp_ == b.exp_ && a.num_ == b.num_;  // canonical form
  }

  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    std::uint64_t e = a.exp_ > b.exp_ ? a.exp_ : b.exp_;
    return a.aligned_num(e) <=> b.aligned_num(e);
  }

  double to_double() const {
    if (num_.is_zero()) return 0.0;
    auto [d, e] = num_.to_double_2exp();  // num = d * 2^e
    return std::ldexp(d, static_cast<int>(e - static_cast<long>(exp_)));
  }

  // -log2(value); exact integer result whenever the numerator is 1.
  double neg_log2() const {
    if (num_.is_zero())
      throw std::domain_error("Dyadic::neg_log2: value must be positive");
    auto [d, e] = num_.to_double_2exp();
    return static_cast<double>(static_cast<long>(exp_) - e) - std::log2(d);
  }

  std::string to_string() const {
    return num_.to_string() + "/2^" + std::to_string(exp_);
  }

 private:
  void canonicalize() {
    if (num_.is_zero()) {
      exp_ = 0;
      return;
    }
    std::uint64_t tz = num_.trailing_zero_bits();
    std::uint64_t s = tz < exp_ ? tz : exp_;
    if (s > 0) {
      num_ >>= s;
      exp_ -= s;
    }
  }

  // Numerator rescaled to denominator 2^e (e >= exp_).
  BigUint aligned_num(std::uint64_t e) const {
    return e == exp_ ? num_ : num_ << (e - exp_);
  }

  void align(const Dyadic& o) {
    if (o.exp_ > exp_) {
      num_ <<= (o.exp_ - exp_);
      exp_ = o.exp_;
    }
  }

  BigUint num_;
  std::uint64_t exp_ = 0;
};

}  // namespace ctm
