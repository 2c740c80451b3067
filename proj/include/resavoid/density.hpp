#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "resavoid/arith.hpp"
#include "resavoid/errors.hpp"
#include "resavoid/rational.hpp"
#include "resavoid/unit_group.hpp"

#include "json.hpp"

namespace resavoid {

constexpr std::uint64_t kDensityEnumBudget = 10'000'000;

// Moduli a_1..a_k plus the divisibility-reduced antichain: a_j is dropped
// whenever some other a_i divides it, which leaves the avoidance predicate
// unchanged (n != 1 mod a_i already forces n != 1 mod a_j).
class ModuliList {
 public:
  explicit ModuliList(std::vector<std::uint64_t> values) : raw_(std::move(values)) {
    for (std::uint64_t a : raw_)
      if (a == 0) throw std::invalid_argument("moduli must be positive");
    std::vector<std::uint64_t> sorted(raw_);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::uint64_t a : sorted) {
      const bool dominated = std::any_of(reduced_.begin(), reduced_.end(),
                                         [a](std::uint64_t d) { return a % d == 0; });
      if (!dominated) reduced_.push_back(a);
    }
  }

  const std::vector<std::uint64_t>& raw() const { return raw_; }
  const std::vector<std::uint64_t>& reduced() const { return reduced_; }
  bool empty() const { return raw_.empty(); }

  /// lcm of the list as given (reduction would shrink it); 1 when empty.
  std::uint64_t modulus() const {
    return raw_.empty() ? 1 : lcm_many(raw_);
  }

 private:
  std::vector<std::uint64_t> raw_;
  std::vector<std::uint64_t> reduced_;
};

/// prod (1 - 1/phi(a_i)) over the list as given.
inline Rat relative_density_bound(const std::vector<std::uint64_t>& moduli) {
  Rat bound = 1;
  for (std::uint64_t a : moduli) {
    const std::uint64_t phi = euler_phi(a);
    bound *= Rat(phi - 1, phi);
  }
  return bound;
}

inline Rat relative_density_bound(const ModuliList& m) {
  return relative_density_bound(m.raw());
}

/// prod (1 - 1/a_i), the Heilbronn-Rohrbach lower bound.
inline Rat natural_density_bound(const std::vector<std::uint64_t>& moduli) {
  Rat bound = 1;
  for (std::uint64_t a : moduli) bound *= Rat(a - 1, a);
  return bound;
}

inline Rat natural_density_bound(const ModuliList& m) {
  return natural_density_bound(m.raw());
}

struct EnumDensity {
  std::uint64_t l = 1;
  std::uint64_t phi_l = 1;
  std::uint64_t s_count = 0;
  Rat exact;
};

/// Counts S = {n in [1,l] : gcd(n,l) = 1, n != 1 mod a_i for all i} by
/// residue enumeration; exact density is #S / phi(l).
inline EnumDensity exact_relative_density_enum(const ModuliList& m) {
  EnumDensity out;
  out.l = m.modulus();
  if (std::find(m.raw().begin(), m.raw().end(), std::uint64_t{1}) != m.raw().end()) {
    // n = 1 mod 1 always holds, so S is empty whatever else the list says
    out.phi_l = euler_phi(out.l);
    out.exact = 0;
    return out;
  }
  if (out.l > kDensityEnumBudget)
    throw budget_error("exact_relative_density_enum: lcm > 10^7, use the "
                       "inclusion-exclusion path");
  out.phi_l = euler_phi(out.l);
  for (std::uint64_t n = 1; n <= out.l; ++n) {
    if (std::gcd(n, out.l) != 1) continue;
    bool in_s = true;
    for (std::uint64_t a : m.raw()) {
      if (n % a == 1 % a) {
        in_s = false;
        break;
      }
    }
    if (in_s) ++out.s_count;
  }
  out.exact = Rat(out.s_count, out.phi_l);
  return out;
}

namespace detail {

// Subset sums over the reduced list with lcm's carried as exponent vectors
// on the primes of l, so no leaf ever re-factorizes. leaf(value) receives
// the signed multiplicity contribution numerator / denominator(l).
template <typename Leaf>
void subset_lcm_walk(const std::vector<std::uint64_t>& reduced,
                     const std::vector<std::uint64_t>& primes, Leaf&& leaf) {
  std::vector<std::vector<unsigned>> exps;
  exps.reserve(reduced.size());
  for (std::uint64_t a : reduced) {
    const Factorization fa = factorize(a);
    std::vector<unsigned> e(primes.size(), 0);
    for (std::size_t j = 0; j < primes.size(); ++j)
      e[j] = fa.exponent_of(primes[j]);
    exps.push_back(std::move(e));
  }
  std::vector<unsigned> acc(primes.size(), 0);
  auto rec = [&](auto&& self, std::size_t i, int sign) -> void {
    if (i == reduced.size()) {
      leaf(std::as_const(acc), sign);
      return;
    }
    self(self, i + 1, sign);
    std::vector<unsigned> saved = acc;
    for (std::size_t j = 0; j < acc.size(); ++j)
      acc[j] = std::max(acc[j], exps[i][j]);
    self(self, i + 1, -sign);
    acc = saved;
  };
  rec(rec, 0, +1);
}

inline std::uint64_t phi_from_exponents(const std::vector<std::uint64_t>& primes,
                                        const std::vector<unsigned>& exps) {
  std::uint64_t phi = 1;
  for (std::size_t j = 0; j < primes.size(); ++j) {
    for (unsigned i = 0; i + 1 < exps[j]; ++i) phi *= primes[j];
    if (exps[j] > 0) phi *= primes[j] - 1;
  }
  return phi;
}

inline std::uint64_t value_from_exponents(const std::vector<std::uint64_t>& primes,
                                          const std::vector<unsigned>& exps) {
  std::uint64_t v = 1;
  for (std::size_t j = 0; j < primes.size(); ++j)
    for (unsigned i = 0; i < exps[j]; ++i) v *= primes[j];
  return v;
}

}  // namespace detail

/// #S / phi(l) by inclusion-exclusion: sum over subsets T of the reduced
/// list of (-1)^|T| / phi(lcm T). Each term counts units = 1 mod lcm(T),
/// of which there are phi(l)/phi(lcm T) by surjectivity of the reduction
/// (Z/l)* -> (Z/lcm T)*.
inline Rat exact_relative_density_ie(const ModuliList& m) {
  const auto& reduced = m.reduced();
  if (reduced.size() > kSubsetBudget)
    throw budget_error("exact_relative_density_ie: more than 24 reduced moduli");
  const std::uint64_t l = m.modulus();
  const std::uint64_t phi_l = euler_phi(l);
  std::vector<std::uint64_t> primes;
  for (const PrimePower& pp : factorize(l).factors) primes.push_back(pp.prime);

  BigInt s = 0;
  detail::subset_lcm_walk(reduced, primes, [&](const std::vector<unsigned>& e, int sign) {
    const std::uint64_t phi_t = detail::phi_from_exponents(primes, e);
    const std::uint64_t units = phi_l / phi_t;
    s += sign > 0 ? BigInt(units) : -BigInt(units);
  });
  if (s < 0 || s > phi_l)
    throw invariant_violation("exact_relative_density_ie: count outside [0, phi(l)]");
  return Rat(s, BigInt(phi_l));
}

/// Exact natural density of {n : n != 0 mod a_i for all i} via subset
/// inclusion-exclusion, cross-checked against a direct count of one full
/// period [1, lcm] whenever that fits the enumeration budget.
inline Rat exact_natural_density(const ModuliList& m) {
  const auto& reduced = m.reduced();
  if (reduced.size() > kSubsetBudget)
    throw budget_error("exact_natural_density: more than 24 reduced moduli");
  const std::uint64_t l = m.modulus();
  std::vector<std::uint64_t> primes;
  for (const PrimePower& pp : factorize(l).factors) primes.push_back(pp.prime);

  BigInt in_period = 0;
  detail::subset_lcm_walk(reduced, primes, [&](const std::vector<unsigned>& e, int sign) {
    const std::uint64_t cells = l / detail::value_from_exponents(primes, e);
    in_period += sign > 0 ? BigInt(cells) : -BigInt(cells);
  });
  const Rat density = Rat(in_period, BigInt(l));

  if (l <= kDensityEnumBudget) {
    std::uint64_t direct = 0;
    for (std::uint64_t n = 1; n <= l; ++n) {
      bool avoids = true;
      for (std::uint64_t a : m.raw()) {
        if (n % a == 0) {
          avoids = false;
          break;
        }
      }
      if (avoids) ++direct;
    }
    if (BigInt(direct) != in_period)
      throw invariant_violation("exact_natural_density: period count disagrees "
                                "with inclusion-exclusion");
  }
  if (density < natural_density_bound(m))
    throw invariant_violation("exact_natural_density: density below the product bound");
  return density;
}

struct DensityReport {
  std::vector<std::uint64_t> moduli;  // as given
  std::uint64_t l = 1;
  std::uint64_t phi_l = 1;
  std::uint64_t s_count = 0;
  Rat exact;
  Rat bound;          // product bound over the raw list
  Rat bound_reduced;  // same product over the reduced antichain (>= bound)
  bool enum_ran = false;
  bool ie_ran = false;
  bool methods_agree = false;
  std::optional<bool> transport_agree;  // set when the dlog bijection check ran
};

/// Runs every exact path that fits its budget, the unit-group transport
/// check when the modulus allows it, and verifies the density inequality.
inline DensityReport full_verification(const ModuliList& m, bool with_transport = true) {
  DensityReport rep;
  rep.moduli = m.raw();
  rep.l = m.modulus();
  rep.phi_l = euler_phi(rep.l);
  rep.bound = relative_density_bound(m.raw());
  rep.bound_reduced = relative_density_bound(m.reduced());

  std::optional<Rat> from_enum;
  std::optional<Rat> from_ie;
  if (rep.l <= kDensityEnumBudget || std::find(m.raw().begin(), m.raw().end(),
                                               std::uint64_t{1}) != m.raw().end()) {
    const EnumDensity e = exact_relative_density_enum(m);
    from_enum = e.exact;
    rep.s_count = e.s_count;
    rep.enum_ran = true;
  }
  if (m.reduced().size() <= kSubsetBudget) {
    from_ie = exact_relative_density_ie(m);
    rep.ie_ran = true;
  }
  if (!from_enum && !from_ie)
    throw budget_error("full_verification: no exact path fits its budget");

  rep.exact = from_enum ? *from_enum : *from_ie;
  rep.methods_agree = !(from_enum && from_ie) || *from_enum == *from_ie;
  if (!rep.enum_ran) {
    // recover #S from the reduced fraction: den | phi(l)
    const BigInt s = rat_num(rep.exact) * (BigInt(rep.phi_l) / rat_den(rep.exact));
    rep.s_count = static_cast<std::uint64_t>(s);
  }

  if (with_transport && rep.l >= 2 && rep.l <= kUnitEnumBudget) {
    const UnitGroupBasis basis = build_basis(rep.l);
    const TransportReport tr = membership_transport(m.raw(), basis);
    rep.transport_agree = tr.agree;
    if (tr.s_count != rep.s_count) rep.transport_agree = false;
  }

  if (rep.exact < rep.bound || rep.exact > 1)
    throw invariant_violation("full_verification: exact density outside "
                              "[product bound, 1]");
  return rep;
}

inline nlohmann::json rat_json(const Rat& r) {
  return {{"num", rat_num(r).str()}, {"den", rat_den(r).str()}};
}

inline nlohmann::json density_report_json(const DensityReport& rep) {
  return {
      {"moduli", rep.moduli},
      {"l", rep.l},
      {"phi_l", rep.phi_l},
      {"s_count", rep.s_count},
      {"exact", rat_json(rep.exact)},
      {"bound", rat_json(rep.bound)},
      {"methods_agree", rep.methods_agree &&
                            rep.transport_agree.value_or(true)},
  };
}

}  // namespace resavoid
