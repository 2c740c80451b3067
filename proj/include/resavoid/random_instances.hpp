#pragma once

#include <cstdint>
#include <random>

#include "resavoid/arith.hpp"
#include "resavoid/lattice.hpp"

namespace resavoid {

// Modulo-reduced draw: biased by a hair, but identical on every platform,
// which std::uniform_int_distribution does not promise.
inline std::uint64_t rand_in(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

struct LatticeInstanceParams {
  unsigned max_dim = 3;
  unsigned max_avoiders = 4;
  std::uint64_t max_component = 6;
  std::uint64_t max_box_factor = 3;
};

/// Random instance with the box set to the componentwise lcm of the
/// avoiders times a small factor, so the divisibility hypothesis holds and
/// the brute-force budget is never exceeded at the default sizes.
inline LatticeInstance random_lattice_instance(std::mt19937_64& rng,
                                               const LatticeInstanceParams& p = {}) {
  const std::size_t d = rand_in(rng, 1, p.max_dim);
  const std::size_t k = rand_in(rng, 0, p.max_avoiders);
  std::vector<Vec> avoiders(k, Vec(d));
  for (Vec& a : avoiders)
    for (std::uint64_t& c : a) c = rand_in(rng, 1, p.max_component);
  Vec box(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::uint64_t l = 1;
    for (const Vec& a : avoiders) l = lcm_checked(l, a[j]);
    box[j] = l * rand_in(rng, 1, p.max_box_factor);
  }
  return LatticeInstance(std::move(box), std::move(avoiders));
}

/// True when best_translate_block is defined and within budget for inst.
inline bool translate_feasible(const LatticeInstance& inst) {
  BigInt norm = 1;
  for (std::size_t j = 0; j < inst.dim(); ++j) {
    BigInt c = 1;
    for (const Vec& a : inst.avoiders) c *= a[j];
    if (c % inst.box[j] != 0) return false;
    norm *= c;
  }
  return norm <= kLatticeEnumBudget;
}

}  // namespace resavoid
