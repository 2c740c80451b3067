#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "resavoid/arith.hpp"
#include "resavoid/errors.hpp"
#include "resavoid/lattice.hpp"

namespace resavoid {

constexpr std::uint64_t kUnitEnumBudget = 10'000'000;

struct BasisComponent {
  std::uint64_t generator = 0;  // residue mod prime_power; -1 is stored as prime_power - 1
  std::uint64_t order = 0;
  std::uint64_t prime_power = 0;
};

// Cyclic decomposition of (Z/l)*. For 8 not dividing l there is one
// component per prime power p^e of l, generated by the smallest primitive
// root. For 8 | l the 2-part is not cyclic; it splits into a sign component
// of order 2 (generator -1) and a 5-power component of order 2^(e-2),
// listed in that order ahead of the odd prime powers.
//
// Exponents use the range [1, order]: the identity maps to the full order,
// never to 0.
class UnitGroupBasis {
 public:
  std::uint64_t modulus = 0;
  bool two_adic = false;
  std::vector<BasisComponent> components;
  Factorization modulus_factors;

  Vec order_vector() const {
    Vec b;
    b.reserve(components.size());
    for (const auto& comp : components) b.push_back(comp.order);
    return b;
  }

  std::size_t dim() const { return components.size(); }

  // One lookup table per prime-power part of the modulus; the two-adic part
  // yields a coordinate pair per residue.
  struct Part {
    std::uint64_t prime_power = 0;
    bool pair = false;
    std::vector<std::uint32_t> exp0;  // indexed by residue, 0 = not a unit
    std::vector<std::uint32_t> exp1;
  };
  std::vector<Part> parts;
};

namespace detail {

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw std::invalid_argument("inv_mod: not invertible");
  return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(m) : t);
}

// x = r1 mod m1, x = r2 mod m2 for coprime m1, m2; result mod m1*m2.
inline std::uint64_t crt_pair(std::uint64_t r1, std::uint64_t m1,
                              std::uint64_t r2, std::uint64_t m2) {
  const std::uint64_t d = (r2 + m2 - r1 % m2) % m2;
  const std::uint64_t k = mul_mod(d, inv_mod(m1 % m2, m2), m2);
  return r1 + m1 * k;
}

}  // namespace detail

/// Builds the cyclic decomposition of (Z/l)* with its discrete-log tables.
/// Deterministic: smallest primitive roots. Rejects l = 1.
inline UnitGroupBasis build_basis(std::uint64_t modulus) {
  if (modulus < 2)
    throw std::invalid_argument("build_basis: modulus must be >= 2");
  if (modulus > kUnitEnumBudget)
    throw budget_error("build_basis: modulus > 10^7, dlog tables would not fit");

  UnitGroupBasis basis;
  basis.modulus = modulus;
  basis.modulus_factors = factorize(modulus);
  basis.two_adic = modulus % 8 == 0;

  for (const PrimePower& pp : basis.modulus_factors.factors) {
    const std::uint64_t m = pp.value();
    UnitGroupBasis::Part part;
    part.prime_power = m;

    if (pp.prime == 2 && pp.exponent >= 3) {
      // (Z/2^e)* = <-1> x <5>, orders 2 and 2^(e-2)
      const std::uint64_t five_order = m / 4;
      basis.components.push_back({m - 1, 2, m});
      basis.components.push_back({5, five_order, m});
      part.pair = true;
      part.exp0.assign(m, 0);
      part.exp1.assign(m, 0);
      for (std::uint64_t x0 = 1; x0 <= 2; ++x0) {
        std::uint64_t v = 1;
        for (std::uint64_t x1 = 1; x1 <= five_order; ++x1) {
          v = mul_mod(v, 5, m);
          const std::uint64_t r = x0 == 1 ? m - v : v;
          part.exp0[r] = static_cast<std::uint32_t>(x0);
          part.exp1[r] = static_cast<std::uint32_t>(x1);
        }
      }
    } else {
      const std::uint64_t g = find_primitive_root(pp.prime, pp.exponent);
      const std::uint64_t order = euler_phi(Factorization{{pp}});
      basis.components.push_back({g, order, m});
      part.exp0.assign(m, 0);
      std::uint64_t v = 1;
      for (std::uint64_t x = 1; x <= order; ++x) {
        v = mul_mod(v, g, m);
        part.exp0[v % m] = static_cast<std::uint32_t>(x);
      }
    }
    basis.parts.push_back(std::move(part));
  }
  return basis;
}

/// Discrete-log vector x(n) with n = g_j^{x_j} mod p_j^{e_j} on every
/// component, each x_j in [1, b_j]. Rejects n with gcd(n, l) > 1.
inline Vec dlog_vector(std::uint64_t n, const UnitGroupBasis& basis) {
  const std::uint64_t r = n % basis.modulus;
  if (std::gcd(r, basis.modulus) != 1)
    throw std::invalid_argument("dlog_vector: n is not a unit modulo l");
  Vec x;
  x.reserve(basis.dim());
  for (const auto& part : basis.parts) {
    const std::uint64_t rp = r % part.prime_power;
    x.push_back(part.exp0[rp]);
    if (part.pair) x.push_back(part.exp1[rp]);
  }
  return x;
}

/// Inverse of dlog_vector: recombines the component powers by CRT.
inline std::uint64_t from_dlog_vector(const Vec& x, const UnitGroupBasis& basis) {
  if (x.size() != basis.dim())
    throw std::invalid_argument("from_dlog_vector: coordinate count mismatch");
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] < 1 || x[j] > basis.components[j].order)
      throw std::invalid_argument("from_dlog_vector: coordinate out of [1, b_j]");

  std::uint64_t res = 0, mod = 1;
  std::size_t j = 0;
  for (const auto& part : basis.parts) {
    std::uint64_t rp;
    if (part.pair) {
      rp = pow_mod(basis.components[j].generator, x[j], part.prime_power);
      rp = mul_mod(rp, pow_mod(5, x[j + 1], part.prime_power), part.prime_power);
      j += 2;
    } else {
      rp = pow_mod(basis.components[j].generator, x[j], part.prime_power);
      j += 1;
    }
    res = detail::crt_pair(res, mod, rp, part.prime_power);
    mod *= part.prime_power;
  }
  return res;
}

/// The avoidance vector attached to a divisor a of l: componentwise totients
/// of the prime-power parts of a, with the split 2-part when 8 | l. Its
/// component product is phi(a) and it divides the order vector b.
inline Vec avoider_vector(std::uint64_t a, const UnitGroupBasis& basis) {
  if (a == 0 || basis.modulus % a != 0)
    throw std::invalid_argument("avoider_vector: a must divide the modulus");
  const Factorization fa = factorize(a);

  auto phi_pp = [](std::uint64_t p, unsigned alpha) -> std::uint64_t {
    if (alpha == 0) return 1;
    return euler_phi(Factorization{{{p, alpha}}});
  };

  Vec v;
  v.reserve(basis.dim());
  for (const PrimePower& pp : basis.modulus_factors.factors) {
    const unsigned alpha = fa.exponent_of(pp.prime);
    if (pp.prime == 2 && pp.exponent >= 3) {
      const unsigned a1 = alpha >= 1 ? alpha - 1 : 0;
      const unsigned a2 = alpha >= 2 ? alpha - 2 : 0;
      v.push_back(std::uint64_t{1} << (a1 - a2));
      v.push_back(std::uint64_t{1} << a2);
    } else {
      v.push_back(phi_pp(pp.prime, alpha));
    }
  }
  return v;
}

struct TransportReport {
  std::uint64_t s_count = 0;
  BigInt x_count = 0;
  bool agree = false;
};

/// Walks every unit n mod l, checking that n lies in S = {n : n != 1 mod a_i
/// for all i} exactly when x(n) avoids every avoider_vector(a_i), and that
/// the restriction of n -> x(n) to S hits that many distinct vectors. The
/// avoider count #X is computed independently through the lattice module.
inline TransportReport membership_transport(const std::vector<std::uint64_t>& a_list,
                                            const UnitGroupBasis& basis) {
  if (a_list.empty())
    throw std::invalid_argument("membership_transport: empty moduli list");
  if (lcm_many(a_list) != basis.modulus)
    throw std::invalid_argument("membership_transport: basis modulus must be lcm(a)");

  const Vec b = basis.order_vector();
  std::vector<Vec> avoiders;
  avoiders.reserve(a_list.size());
  for (std::uint64_t a : a_list) avoiders.push_back(avoider_vector(a, basis));

  // mixed-radix flattening of [1,b] for the injectivity bitmap
  std::vector<std::uint64_t> stride(b.size());
  std::uint64_t total = 1;
  for (std::size_t j = 0; j < b.size(); ++j) {
    stride[j] = total;
    total *= b[j];
  }
  std::vector<bool> seen(total, false);

  TransportReport rep;
  bool pointwise_ok = true;
  std::uint64_t distinct = 0;
  for (std::uint64_t n = 1; n <= basis.modulus; ++n) {
    if (std::gcd(n, basis.modulus) != 1) continue;
    bool in_s = true;
    for (std::uint64_t a : a_list) {
      if (n % a == 1 % a) {
        in_s = false;
        break;
      }
    }
    const Vec x = dlog_vector(n, basis);
    const bool in_x = detail::avoids_all(x, avoiders);
    if (in_s != in_x) pointwise_ok = false;
    if (in_s) {
      ++rep.s_count;
      std::uint64_t idx = 0;
      for (std::size_t j = 0; j < x.size(); ++j) idx += (x[j] - 1) * stride[j];
      if (!seen[idx]) {
        seen[idx] = true;
        ++distinct;
      }
    }
  }

  rep.x_count = count_avoiders_ie(LatticeInstance(b, avoiders));
  rep.agree = pointwise_ok && distinct == rep.s_count && BigInt(rep.s_count) == rep.x_count;
  return rep;
}

}  // namespace resavoid
