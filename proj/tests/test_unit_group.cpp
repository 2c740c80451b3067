#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "resavoid/unit_group.hpp"

using namespace resavoid;

TEST_CASE("basis for l = 12: one primitive root per prime power") {
  const UnitGroupBasis basis = build_basis(12);
  CHECK_FALSE(basis.two_adic);
  REQUIRE(basis.components.size() == 2);
  CHECK(basis.components[0].generator == 3);  // smallest primitive root mod 4
  CHECK(basis.components[0].order == 2);
  CHECK(basis.components[0].prime_power == 4);
  CHECK(basis.components[1].generator == 2);  // smallest primitive root mod 3
  CHECK(basis.components[1].order == 2);
  CHECK(basis.components[1].prime_power == 3);
  CHECK(basis.order_vector() == Vec{2, 2});
}

TEST_CASE("basis for l = 16: sign and 5-power components") {
  const UnitGroupBasis basis = build_basis(16);
  CHECK(basis.two_adic);
  REQUIRE(basis.components.size() == 2);
  CHECK(basis.components[0].generator == 15);  // -1 mod 16
  CHECK(basis.components[0].order == 2);
  CHECK(basis.components[1].generator == 5);
  CHECK(basis.components[1].order == 4);
  CHECK(basis.order_vector() == Vec{2, 4});
}

TEST_CASE("basis edge cases") {
  const UnitGroupBasis two = build_basis(2);
  REQUIRE(two.components.size() == 1);
  CHECK(two.components[0].order == 1);
  CHECK_THROWS_AS(build_basis(1), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(0), std::invalid_argument);
}

TEST_CASE("dlog vectors on known units") {
  const UnitGroupBasis mod9 = build_basis(9);
  CHECK(dlog_vector(5, mod9) == Vec{5});  // 2^5 = 32 = 5 mod 9
  CHECK(dlog_vector(1, mod9) == Vec{6});  // identity carries the full order
  CHECK(from_dlog_vector({1}, mod9) == 2);
  CHECK_THROWS_AS(dlog_vector(3, mod9), std::invalid_argument);
  CHECK_THROWS_AS(from_dlog_vector({0}, mod9), std::invalid_argument);
  CHECK_THROWS_AS(from_dlog_vector({7}, mod9), std::invalid_argument);
  CHECK_THROWS_AS(from_dlog_vector({1, 1}, mod9), std::invalid_argument);

  const UnitGroupBasis mod16 = build_basis(16);
  CHECK(dlog_vector(7, mod16) == Vec{1, 2});  // (-1) * 25 = 7 mod 16
  CHECK(from_dlog_vector({1, 2}, mod16) == 7);

  const UnitGroupBasis mod12 = build_basis(12);
  CHECK(from_dlog_vector({2, 2}, mod12) == 1);  // both generators at full order
}

TEST_CASE("dlog roundtrip for every modulus up to 500") {
  for (std::uint64_t l = 2; l <= 500; ++l) {
    const UnitGroupBasis basis = build_basis(l);
    std::uint64_t order_product = 1;
    for (const BasisComponent& c : basis.components) order_product *= c.order;
    REQUIRE(order_product == euler_phi(l));
    for (std::uint64_t n = 1; n <= l; ++n) {
      if (std::gcd(n, l) != 1) continue;
      const Vec x = dlog_vector(n, basis);
      REQUIRE(x.size() == basis.dim());
      for (std::size_t j = 0; j < x.size(); ++j) {
        REQUIRE(x[j] >= 1);
        REQUIRE(x[j] <= basis.components[j].order);
      }
      if (from_dlog_vector(x, basis) != n)
        FAIL("roundtrip failed for l=" << l << " n=" << n);
    }
  }
}

TEST_CASE("avoider vectors on known divisors") {
  const UnitGroupBasis mod12 = build_basis(12);
  CHECK(avoider_vector(3, mod12) == Vec{1, 2});
  CHECK(avoider_vector(4, mod12) == Vec{2, 1});
  CHECK(avoider_vector(12, mod12) == Vec{2, 2});
  CHECK_THROWS_AS(avoider_vector(5, mod12), std::invalid_argument);

  const UnitGroupBasis mod16 = build_basis(16);
  CHECK(avoider_vector(8, mod16) == Vec{2, 2});
  CHECK(avoider_vector(2, mod16) == Vec{1, 1});
  CHECK(avoider_vector(4, mod16) == Vec{2, 1});
  CHECK(avoider_vector(16, mod16) == Vec{2, 4});
}

TEST_CASE("avoider vectors multiply to phi(a) and divide the order vector") {
  for (std::uint64_t l : {12u, 16u, 40u, 72u, 120u, 240u, 2310u, 4096u}) {
    const UnitGroupBasis basis = build_basis(l);
    const Vec b = basis.order_vector();
    for (std::uint64_t a = 1; a <= l; ++a) {
      if (l % a != 0) continue;
      const Vec v = avoider_vector(a, basis);
      REQUIRE(v.size() == b.size());
      std::uint64_t prod = 1;
      for (std::size_t j = 0; j < v.size(); ++j) {
        prod *= v[j];
        REQUIRE(b[j] % v[j] == 0);
      }
      REQUIRE(prod == euler_phi(a));
    }
  }
}

TEST_CASE("membership transport on known lists") {
  {
    const TransportReport rep = membership_transport({3, 4}, build_basis(12));
    CHECK(rep.s_count == 1);  // S = {11} mod 12
    CHECK(rep.x_count == 1);
    CHECK(rep.agree);
  }
  {
    const TransportReport rep = membership_transport({5, 8}, build_basis(40));
    CHECK(rep.s_count == 9);
    CHECK(rep.x_count == 9);
    CHECK(rep.agree);
  }
  {
    const TransportReport rep = membership_transport({2}, build_basis(2));
    CHECK(rep.s_count == 0);  // the only unit is 1 = 1 mod 2
    CHECK(rep.x_count == 0);
    CHECK(rep.agree);
  }
  CHECK_THROWS_AS(membership_transport({3, 4}, build_basis(24)),
                  std::invalid_argument);
}

TEST_CASE("membership transport on random lists") {
  std::mt19937_64 rng(99);
  int two_adic_seen = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::uint64_t> a;
    const std::size_t k = 1 + rng() % 3;
    for (std::size_t i = 0; i < k; ++i) a.push_back(2 + rng() % 38);
    if (trial % 2 == 0) a.push_back(8 * (1 + rng() % 4));
    std::uint64_t l = 1;
    for (std::uint64_t v : a) l = std::lcm(l, v);
    if (l > 100'000) continue;
    const UnitGroupBasis basis = build_basis(l);
    if (basis.two_adic) ++two_adic_seen;
    const TransportReport rep = membership_transport(a, basis);
    REQUIRE(rep.agree);
  }
  CHECK(two_adic_seen > 5);
}
