#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>
#include <vector>

#include "resavoid/arith.hpp"
#include "resavoid/rational.hpp"

using namespace resavoid;

namespace {

// independent of the library: count coprime residues one by one
std::uint64_t phi_bruteforce(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t m = 1; m <= n; ++m)
    if (std::gcd(m, n) == 1) ++c;
  return c;
}

// independent of the library: totient table by the sieve recurrence
std::vector<std::uint64_t> phi_table(std::uint64_t n) {
  std::vector<std::uint64_t> phi(n + 1);
  std::iota(phi.begin(), phi.end(), std::uint64_t{0});
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (phi[p] != p) continue;  // p not prime
    for (std::uint64_t m = p; m <= n; m += p) phi[m] -= phi[m] / p;
  }
  return phi;
}

bool prime_by_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("factorize on known inputs") {
  CHECK(factorize(1).factors.empty());

  const Factorization f12 = factorize(12);
  REQUIRE(f12.factors.size() == 2);
  CHECK(f12.factors[0] == PrimePower{2, 2});
  CHECK(f12.factors[1] == PrimePower{3, 1});

  REQUIRE(prime_by_trial(97));
  const Factorization f97 = factorize(97);
  REQUIRE(f97.factors.size() == 1);
  CHECK(f97.factors[0] == PrimePower{97, 1});

  CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorize reconstructs every n up to 1e5 into prime powers") {
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    const Factorization f = factorize(n);
    CHECK(f.value() == n);
    std::uint64_t prev = 0;
    for (const PrimePower& pp : f.factors) {
      REQUIRE(pp.prime > prev);
      REQUIRE(pp.exponent >= 1);
      if (!prime_by_trial(pp.prime)) FAIL("non-prime factor for n=" << n);
      prev = pp.prime;
    }
  }
}

TEST_CASE("euler_phi on known inputs") {
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(12) == 4);
  CHECK(phi_bruteforce(12) == 4);
  CHECK(euler_phi(40) == 16);
  CHECK(phi_bruteforce(40) == 16);
  CHECK_THROWS_AS(euler_phi(0), std::invalid_argument);
}

TEST_CASE("euler_phi matches the coprime count") {
  for (std::uint64_t n = 1; n <= 3000; ++n) CHECK(euler_phi(n) == phi_bruteforce(n));
  const auto table = phi_table(100'000);
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    if (euler_phi(n) != table[n]) FAIL("phi mismatch at n=" << n);
  }
}

TEST_CASE("lcm_many") {
  CHECK(lcm_many({3, 4}) == 12);
  CHECK(lcm_many({4, 8}) == 8);
  CHECK(lcm_many({6, 10, 15}) == 30);
  CHECK(lcm_many({7}) == 7);
  CHECK_THROWS_AS(lcm_many(std::vector<std::uint64_t>{}), std::invalid_argument);
  CHECK_THROWS_AS(lcm_many({5, 0}), std::invalid_argument);
  // 3 * 2^63 does not fit: explicit failure, no wraparound
  CHECK_THROWS_AS(lcm_many({std::uint64_t{1} << 63, 3}), std::overflow_error);
}

TEST_CASE("find_primitive_root on known inputs") {
  CHECK(find_primitive_root(2, 1) == 1);
  CHECK(find_primitive_root(7, 1) == 3);  // 2 has order 3 mod 7
  CHECK(find_primitive_root(3, 2) == 2);  // order of 2 mod 9 is 6
  CHECK(find_primitive_root(2, 2) == 3);
  CHECK_THROWS_AS(find_primitive_root(2, 3), std::invalid_argument);
  CHECK_THROWS_AS(find_primitive_root(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(find_primitive_root(15, 1), std::invalid_argument);
}

TEST_CASE("primitive roots generate all units for every prime power <= 1e4") {
  std::vector<std::pair<std::uint64_t, unsigned>> cases = {{2, 1}, {2, 2}};
  for (std::uint64_t p = 3; p <= 10'000; p += 2) {
    if (!prime_by_trial(p)) continue;
    std::uint64_t m = p;
    for (unsigned e = 1; m <= 10'000; ++e, m *= p) cases.push_back({p, e});
  }
  for (const auto& [p, e] : cases) {
    const std::uint64_t g = find_primitive_root(p, e);
    std::uint64_t m = 1;
    for (unsigned i = 0; i < e; ++i) m *= p;
    const std::uint64_t phi = euler_phi(m);
    std::vector<bool> seen(m, false);
    std::uint64_t v = 1;
    for (std::uint64_t x = 1; x <= phi; ++x) {
      v = v * g % m;
      if (seen[v]) FAIL("powers of g repeat for p^e=" << m);
      seen[v] = true;
    }
    CHECK(v == 1 % m);  // g^phi is the identity
  }
}

TEST_CASE("exact rationals stay normalized and invert cleanly") {
  CHECK(rat_num(Rat(6, 8)) == 3);
  CHECK(rat_den(Rat(6, 8)) == 4);
  CHECK(Rat(6, 8) == Rat(3, 4));
  CHECK(Rat(1, 3) + Rat(1, 3) + Rat(1, 3) == 1);
  CHECK(rat_to_string(Rat(3, 8)) == "3/8");
  CHECK(rat_to_string(Rat(8, 4)) == "2");

  CHECK(make_rat(BigInt(3), BigInt(-6)) == make_rat(BigInt(-1), BigInt(2)));
  CHECK_THROWS_AS(make_rat(BigInt(1), BigInt(0)), std::domain_error);

  std::mt19937_64 rng(42);
  for (int i = 0; i < 200; ++i) {
    const std::int64_t a = static_cast<std::int64_t>(rng() % 2000) - 1000;
    const std::int64_t b = static_cast<std::int64_t>(rng() % 999) + 1;
    if (a == 0) continue;
    const Rat r = make_rat(BigInt(a), BigInt(b));
    CHECK(r * make_rat(BigInt(b), BigInt(a)) == 1);
    CHECK(rat_den(r) > 0);
    CHECK(make_rat(rat_num(r), rat_den(r)) == r);  // normalization is idempotent
  }
}

TEST_CASE("rat_ceil") {
  CHECK(rat_ceil(Rat(7, 2)) == 4);
  CHECK(rat_ceil(Rat(8, 2)) == 4);
  CHECK(rat_ceil(Rat(0, 5)) == 0);
  CHECK(rat_ceil(Rat(1, 100)) == 1);
}
