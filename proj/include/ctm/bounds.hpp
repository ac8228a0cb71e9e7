#pragma once
// Closed-form counts and error bounds, computed without any simulation.
//
// The measure of the string "0" has a closed form: a machine outputs "0" on
// blank i exactly when its (1,i) entry writes 0 and halts, so (4n+2)^(2n-1)
// machines per blank do it and
//
//   m("0") = sum over n >= 1 of 2(4n+2)^(2n-1) / 2^encoding_length(n).
//
// The series head is evaluated term by term in log space: the denominator
// exponent encoding_length(n) comes from the exact integer ceil(log2) while
// the numerator's log2 is floating point. Beyond the cut the ceiling is
// dropped (2^ceil(log2 x) >= x), which closes the tail analytically and
// keeps every tail estimate an upper bound. The same scheme evaluates the
// refined convergence bound that discounts the "0"/"1" producers and the two
// syntactically detectable non-halting families from the generic 1/2^k tail.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "ctm/bigint.hpp"
#include "ctm/codec.hpp"
#include "ctm/dyadic.hpp"

namespace ctm {

struct BoundReport {
  std::uint32_t k = 1;
  std::uint64_t cut_point = 2000;
  double tail_bound = 0;          // 1/2^k
  double m0_exact_series = 0;     // m("0") summed to the cut
  double m0_at_k = 0;             // partial sum to k
  double m0_abs_error_at_k = 0;   // m0_exact_series - m0_at_k
  double refined_tail_bound = 0;  // finer bound on the error mass outside "0"/"1"
};

inline double tail_bound(std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("tail_bound: k must be >= 1");
  return std::ldexp(1.0, -static_cast<int>(k));
}

// Per-blank count of machines in (n,2) outputting "0": (4n+2)^(2n-1).
inline BigUint zero_producers(std::uint32_t n) {
  if (n < 1) throw std::invalid_argument("zero_producers: n must be >= 1");
  return BigUint::pow(4ull * n + 2, 2ull * n - 1);
}

struct TrivialNonHaltCounts {
  BigUint self_loop_both_blanks;           // 8(4n+2)^(2n-1)
  BigUint no_halt_transition_both_blanks;  // 8(n-1)(4n)^(2n-1)
};

// Computation counts of the two trivial non-halting families used by the
// refined bound. The second family is restricted to machines whose initial
// transition leaves state 1, keeping the two sets disjoint.
inline TrivialNonHaltCounts trivial_nonhalt_counts(std::uint32_t n) {
  if (n < 1) throw std::invalid_argument("trivial_nonhalt_counts: n must be >= 1");
  TrivialNonHaltCounts c;
  c.self_loop_both_blanks = BigUint(8) * BigUint::pow(4ull * n + 2, 2ull * n - 1);
  c.no_halt_transition_both_blanks =
      n == 1 ? BigUint(0)
             : BigUint(8) * BigUint(n - 1) * BigUint::pow(4ull * n, 2ull * n - 1);
  return c;
}

namespace detail {

// log2 of the n-th series term of m("0"): 1 + (2n-1) log2(4n+2) - L(n),
// with L(n) exact and the rest in extended precision.
inline long double m_zero_term_log2(std::uint32_t n) {
  const long double base = 4.0L * n + 2.0L;
  return 1.0L + (2.0L * n - 1.0L) * std::log2(base) -
         static_cast<long double>(encoding_length(n));
}

// log2 of the n-th term of the refined bound. The numerator is
// 2(4n+2)^(2n) - 12(4n+2)^(2n-1) - 8(n-1)(4n)^(2n-1); it is factored as
// 2(4n+2)^(2n) * (1 - x) so only small quantities are subtracted.
inline long double refined_term_log2(std::uint32_t n) {
  const long double b = 4.0L * n + 2.0L;
  const long double b0 = 4.0L * n;
  // (4n)^(2n-1) / (4n+2)^(2n)
  const long double ratio =
      std::exp2((2.0L * n - 1.0L) * std::log2(b0) - 2.0L * n * std::log2(b));
  const long double x = 6.0L / b + 4.0L * (n - 1.0L) * ratio;
  if (x >= 1.0L) return -std::numeric_limits<long double>::infinity();  // n = 1
  return 1.0L + 2.0L * n * std::log2(b) + std::log2(1.0L - x) -
         static_cast<long double>(encoding_length(n));
}

}  // namespace detail

// n-th series term of m("0") in log space (double result).
inline double m_zero_term(std::uint32_t n) {
  if (n < 1) throw std::invalid_argument("m_zero_term: n must be >= 1");
  return static_cast<double>(std::exp2(detail::m_zero_term_log2(n)));
}

// Same term evaluated exactly: 2(4n+2)^(2n-1) / 2^L(n).
inline Dyadic m_zero_term_exact(std::uint32_t n) {
  return Dyadic(BigUint(2) * zero_producers(n), encoding_length(n));
}

// n-th term of the refined bound, exact.
inline Dyadic refined_term_exact(std::uint32_t n) {
  if (n < 1) throw std::invalid_argument("refined_term_exact: n must be >= 1");
  TrivialNonHaltCounts tc = trivial_nonhalt_counts(n);
  BigUint numer = BigUint(2) * machine_count(n);
  numer -= BigUint(12) * zero_producers(n);
  numer -= tc.no_halt_transition_both_blanks;
  return Dyadic(std::move(numer), encoding_length(n));
}

// Partial sum of m("0") to k, ascending n (fixed order for reproducibility).
inline double m_zero_partial(std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("m_zero_partial: k must be >= 1");
  long double sum = 0.0L;
  for (std::uint32_t n = 1; n <= k; ++n)
    sum += std::exp2(detail::m_zero_term_log2(n));
  return static_cast<double>(sum);
}

// m("0") = head summed to the cut + the analytically closed tail
// sum_{n > cut} 1/(2^n (4n+2)). The tail is below 2^-cut and only matters
// formally, but it is what closes the series.
inline double m_zero(std::uint64_t cut = 2000) {
  if (cut < 10) throw std::invalid_argument("m_zero: cut must be >= 10");
  long double sum = 0.0L;
  for (std::uint64_t n = 1; n <= cut; ++n)
    sum += std::exp2(detail::m_zero_term_log2(static_cast<std::uint32_t>(n)));
  for (std::uint64_t n = cut + 1; n <= cut + 200; ++n) {
    long double term =
        std::exp2(-static_cast<long double>(n)) / (4.0L * n + 2.0L);
    if (term == 0.0L) break;
    sum += term;
  }
  return static_cast<double>(sum);
}

inline double m_zero_error_at(std::uint32_t k, std::uint64_t cut = 2000) {
  return m_zero(cut) - m_zero_partial(k);
}

// Upper bound on the total error mass of m_k outside the strings "0" and
// "1": generic programs minus the 0/1 producers minus the two trivial
// non-halting families, summed over n > k. Always below 1/2^k.
inline double refined_tail_bound(std::uint32_t k, std::uint64_t cut = 2000) {
  if (k < 1) throw std::invalid_argument("refined_tail_bound: k must be >= 1");
  long double sum = 0.0L;
  for (std::uint64_t n = k + 1; n <= cut; ++n)
    sum += std::exp2(detail::refined_term_log2(static_cast<std::uint32_t>(n)));
  // Tail overestimate: replace 2^L(n) by its lower bound 2^(n+1) (4n+2)^(2n).
  for (std::uint64_t n = std::max<std::uint64_t>(cut, k) + 1;; ++n) {
    const long double b = 4.0L * n + 2.0L;
    const long double ratio = std::exp2((2.0L * n - 1.0L) * std::log2(4.0L * n) -
                                        2.0L * n * std::log2(b));
    long double term = (2.0L - 12.0L / b - 8.0L * (n - 1.0L) * ratio) *
                       std::exp2(-static_cast<long double>(n) - 1.0L);
    if (term <= 0.0L || n > cut + 300) break;
    sum += term;
  }
  return static_cast<double>(sum);
}

inline BoundReport bound_report(std::uint32_t k, std::uint64_t cut = 2000) {
  BoundReport r;
  r.k = k;
  r.cut_point = cut;
  r.tail_bound = tail_bound(k);
  r.m0_exact_series = m_zero(cut);
  r.m0_at_k = m_zero_partial(k);
  r.m0_abs_error_at_k = r.m0_exact_series - r.m0_at_k;
  r.refined_tail_bound = refined_tail_bound(k, cut);
  return r;
}

}  // namespace ctm
