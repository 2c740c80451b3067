#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "resavoid/errors.hpp"

namespace resavoid {

struct PrimePower {
  std::uint64_t prime = 0;
  unsigned exponent = 0;

  std::uint64_t value() const {
    std::uint64_t v = 1;
    for (unsigned i = 0; i < exponent; ++i) v *= prime;
    return v;
  }

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Prime factorization with strictly increasing primes and exponents >= 1.
// The empty factorization represents 1.
struct Factorization {
  std::vector<PrimePower> factors;

  std::uint64_t value() const {
    std::uint64_t v = 1;
    for (const auto& f : factors) v *= f.value();
    return v;
  }

  unsigned exponent_of(std::uint64_t p) const {
    for (const auto& f : factors)
      if (f.prime == p) return f.exponent;
    return 0;
  }
};

/// Deterministic trial division up to sqrt(n). Rejects n = 0.
inline Factorization factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  Factorization out;
  auto strip = [&](std::uint64_t p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.factors.push_back({p, e});
  };
  strip(2);
  strip(3);
  // remaining candidates are coprime to 6
  for (std::uint64_t p = 5; p <= n / p; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) out.factors.push_back({n, 1});
  return out;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  const Factorization f = factorize(n);
  return f.factors.size() == 1 && f.factors[0].exponent == 1;
}

inline std::uint64_t euler_phi(const Factorization& f) {
  std::uint64_t phi = 1;
  for (const auto& pp : f.factors) {
    for (unsigned i = 0; i + 1 < pp.exponent; ++i) phi *= pp.prime;
    phi *= pp.prime - 1;
  }
  return phi;
}

/// phi(n) = #{m in [1,n] : gcd(m,n) = 1}, via the prime-power product.
inline std::uint64_t euler_phi(std::uint64_t n) {
  return euler_phi(factorize(n));
}

/// lcm(a, b) with an explicit overflow failure instead of wraparound.
inline std::uint64_t lcm_checked(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t g = std::gcd(a, b);
  const std::uint64_t q = a / g;
  if (b != 0 && q > std::numeric_limits<std::uint64_t>::max() / b)
    throw std::overflow_error("lcm: result exceeds 64 bits");
  return q * b;
}

inline std::uint64_t lcm_many(std::span<const std::uint64_t> values) {
  if (values.empty()) throw std::invalid_argument("lcm_many: empty input");
  std::uint64_t l = 1;
  for (std::uint64_t v : values) {
    if (v == 0) throw std::invalid_argument("lcm_many: values must be positive");
    l = lcm_checked(l, v);
  }
  return l;
}

inline std::uint64_t lcm_many(const std::vector<std::uint64_t>& values) {
  return lcm_many(std::span<const std::uint64_t>(values));
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp,
                             std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t r = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return r;
}

/// Smallest primitive root modulo p^e. Requires p prime, and p odd or
/// (p, e) in {(2,1), (2,2)}: modulo 2^e with e >= 3 no generator exists.
inline std::uint64_t find_primitive_root(std::uint64_t p, unsigned e) {
  if (!is_prime(p)) throw std::invalid_argument("find_primitive_root: p is not prime");
  if (e == 0) throw std::invalid_argument("find_primitive_root: e must be >= 1");
  if (p == 2 && e >= 3)
    throw std::invalid_argument("find_primitive_root: (Z/2^e)* is not cyclic for e >= 3");

  std::uint64_t m = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (m > std::numeric_limits<std::uint64_t>::max() / p)
      throw std::overflow_error("find_primitive_root: p^e exceeds 64 bits");
    m *= p;
  }
  const std::uint64_t phi = euler_phi(Factorization{{{p, e}}});
  const Factorization phi_fac = factorize(phi);

  for (std::uint64_t g = 1; g < m; ++g) {
    if (g % p == 0) continue;  // not a unit
    bool generates = true;
    for (const auto& q : phi_fac.factors) {
      if (pow_mod(g, phi / q.prime, m) == 1) {
        generates = false;
        break;
      }
    }
    if (generates) return g;  // g^1..g^phi are then pairwise distinct
  }
  throw std::logic_error("find_primitive_root: no generator found");
}

}  // namespace resavoid
