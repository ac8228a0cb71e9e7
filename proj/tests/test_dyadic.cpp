#include "ctm/dyadic.hpp"

#include <random>

#include "catch_amalgamated.hpp"

using namespace ctm;

TEST_CASE("canonical form: odd numerator or zero") {
  Dyadic d(BigUint(12), 8);  // 12/256 = 3/64
  REQUIRE(d.numerator().to_u64() == 3);
  REQUIRE(d.exponent2() == 6);
  REQUIRE(d.to_string() == "3/2^6");

  Dyadic z(BigUint(0), 17);
  REQUIRE(z.is_zero());
  REQUIRE(z.to_string() == "0/2^0");

  // even integer cannot reduce below exponent 0
  Dyadic six(BigUint(6), 0);
  REQUIRE(six.numerator().to_u64() == 6);
  REQUIRE(six.exponent2() == 0);
}

TEST_CASE("addition and subtraction are exact") {
  Dyadic a(1, 3);   // 1/8
  Dyadic b(1, 4);   // 1/16
  REQUIRE((a + b).to_string() == "3/2^4");
  REQUIRE((a - b).to_string() == "1/2^4");
  REQUIRE((a + b) - b == a);
  REQUIRE_THROWS_AS(b - a, std::underflow_error);

  // the worked measure values
  Dyadic m1(12, 8);
  REQUIRE(m1.to_double() == 0.046875);
  Dyadic m2 = m1 + Dyadic(2000, 17);
  REQUIRE(m2.to_string() == "509/2^13");
  REQUIRE(m2.to_double() == 0.0621337890625);
}

TEST_CASE("ordering is exact across exponents") {
  REQUIRE(Dyadic(1, 3) < Dyadic(3, 4));   // 2/16 < 3/16
  REQUIRE(Dyadic(1, 1) > Dyadic(511, 10));
  REQUIRE(Dyadic(4, 2) == Dyadic(1, 0));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t na = rng() % 4096, nb = rng() % 4096;
    std::uint64_t ea = rng() % 20, eb = rng() % 20;
    bool expect = static_cast<double>(na) * std::ldexp(1.0, -static_cast<int>(ea)) <
                  static_cast<double>(nb) * std::ldexp(1.0, -static_cast<int>(eb));
    REQUIRE((Dyadic(na, ea) < Dyadic(nb, eb)) == expect);
  }
}

TEST_CASE("sum order does not matter") {
  std::mt19937_64 rng(29);
  std::vector<Dyadic> vals;
  for (int i = 0; i < 64; ++i) vals.emplace_back(rng() % 100000, rng() % 60);
  Dyadic fwd, rev;
  for (const auto& v : vals) fwd += v;
  for (auto it = vals.rbegin(); it != vals.rend(); ++it) rev += *it;
  REQUIRE(fwd == rev);
}

TEST_CASE("from_double is exact on representable values") {
  REQUIRE(Dyadic::from_double(0.046875) == Dyadic(12, 8));
  REQUIRE(Dyadic::from_double(0.0) == Dyadic::zero());
  REQUIRE(Dyadic::from_double(1.0) == Dyadic(1, 0));
  REQUIRE(Dyadic::from_double(3.5).to_string() == "7/2^1");
  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    double v = std::ldexp(static_cast<double>(rng() % (1ull << 53)), -60);
    REQUIRE(Dyadic::from_double(v).to_double() == v);
  }
  REQUIRE_THROWS_AS(Dyadic::from_double(-1.0), std::domain_error);
}

TEST_CASE("neg_log2 is exact on unit numerators") {
  REQUIRE(Dyadic::one_over_pow2(0).neg_log2() == 0.0);
  REQUIRE(Dyadic::one_over_pow2(13).neg_log2() == 13.0);
  REQUIRE(Dyadic::one_over_pow2(51).neg_log2() == 51.0);
  REQUIRE(Dyadic(12, 8).neg_log2() == Catch::Approx(4.4150374992788).epsilon(1e-12));
  REQUIRE_THROWS_AS(Dyadic::zero().neg_log2(), std::domain_error);
}
