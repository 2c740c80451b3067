#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "resavoid/arith.hpp"
#include "resavoid/errors.hpp"
#include "resavoid/rational.hpp"

namespace resavoid {

using Vec = std::vector<std::uint64_t>;

inline BigInt vec_norm(const Vec& v) {
  BigInt n = 1;
  for (std::uint64_t c : v) n *= c;
  return n;
}

// Box [1,b] in d dimensions together with avoidance vectors a_1..a_k.
// A point x avoids a_i when at least one coordinate j has x_j % a_ij != 0,
// so components equal to 1 can never help a point avoid their vector.
struct LatticeInstance {
  Vec box;
  std::vector<Vec> avoiders;

  LatticeInstance(Vec b, std::vector<Vec> a)
      : box(std::move(b)), avoiders(std::move(a)) {
    if (box.empty()) throw std::invalid_argument("lattice: dimension must be >= 1");
    for (std::uint64_t c : box)
      if (c == 0) throw std::invalid_argument("lattice: box components must be >= 1");
    for (const Vec& av : avoiders) {
      if (av.size() != box.size())
        throw std::invalid_argument("lattice: avoider dimension mismatch");
      for (std::size_t j = 0; j < av.size(); ++j) {
        if (av[j] == 0)
          throw std::invalid_argument("lattice: avoider components must be >= 1");
        if (box[j] % av[j] != 0)
          throw std::invalid_argument(
              "lattice: box must be divisible by every avoider componentwise");
      }
    }
  }

  std::size_t dim() const { return box.size(); }
};

constexpr std::uint64_t kLatticeEnumBudget = 10'000'000;
constexpr std::size_t kSubsetBudget = 24;

namespace detail {

inline bool avoids(const Vec& x, const Vec& a) {
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] % a[j] != 0) return true;
  return false;
}

inline bool avoids_all(const Vec& x, const std::vector<Vec>& avoiders) {
  for (const Vec& a : avoiders)
    if (!avoids(x, a)) return false;
  return true;
}

// Visits every x in [1,box] in odometer order.
template <typename F>
void for_each_point(const Vec& box, F&& f) {
  Vec x(box.size(), 1);
  for (;;) {
    f(std::as_const(x));
    std::size_t j = 0;
    while (j < box.size() && x[j] == box[j]) {
      x[j] = 1;
      ++j;
    }
    if (j == box.size()) return;
    ++x[j];
  }
}

inline std::vector<Vec> dedup(const std::vector<Vec>& avoiders) {
  std::vector<Vec> out(avoiders);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Exact #X by exhaustive enumeration; ||b|| capped at 10^7.
inline BigInt count_avoiders_bruteforce(const LatticeInstance& inst) {
  if (vec_norm(inst.box) > kLatticeEnumBudget)
    throw budget_error(
        "count_avoiders_bruteforce: ||b|| > 10^7, use the inclusion-exclusion path");
  std::uint64_t count = 0;
  detail::for_each_point(inst.box, [&](const Vec& x) {
    if (detail::avoids_all(x, inst.avoiders)) ++count;
  });
  return BigInt(count);
}

/// Exact #X by inclusion-exclusion over subsets of the (deduplicated)
/// avoider list: sum over T of (-1)^|T| prod_j b_j / lcm_{i in T}(a_ij).
inline BigInt count_avoiders_ie(const LatticeInstance& inst) {
  const std::vector<Vec> avoiders = detail::dedup(inst.avoiders);
  if (avoiders.size() > kSubsetBudget)
    throw budget_error("count_avoiders_ie: more than 24 distinct avoidance vectors");

  BigInt total = 0;
  // DFS over include/exclude with the running componentwise lcm; every
  // a_ij divides b_j, so each running lcm divides b_j and stays in 64 bits.
  Vec l(inst.dim(), 1);
  auto rec = [&](auto&& self, std::size_t i, int sign) -> void {
    if (i == avoiders.size()) {
      BigInt cells = 1;
      for (std::size_t j = 0; j < inst.dim(); ++j)
        cells *= inst.box[j] / l[j];
      total += sign > 0 ? cells : -cells;
      return;
    }
    self(self, i + 1, sign);
    Vec saved = l;
    for (std::size_t j = 0; j < inst.dim(); ++j)
      l[j] = lcm_checked(l[j], avoiders[i][j]);
    self(self, i + 1, -sign);
    l = saved;
  };
  rec(rec, 0, +1);
  return total;
}

/// prod_i (1 - 1/||a_i||), the multidimensional product bound of Chung.
inline Rat chung_bound(const LatticeInstance& inst) {
  Rat bound = 1;
  for (const Vec& a : inst.avoiders) {
    const BigInt norm = vec_norm(a);
    bound *= Rat(norm - 1, norm);
  }
  return bound;
}

struct LemmaReport {
  BigInt count;
  Rat bound_value;  // prod (1 - 1/||a_i||)
  bool holds = false;
};

/// Checks #X >= ||b|| * prod(1 - 1/||a_i||) as an exact rational comparison.
inline LemmaReport verify_lemma(const LatticeInstance& inst) {
  BigInt count;
  if (detail::dedup(inst.avoiders).size() <= kSubsetBudget) {
    count = count_avoiders_ie(inst);
  } else {
    count = count_avoiders_bruteforce(inst);
  }
  LemmaReport rep;
  rep.count = count;
  rep.bound_value = chung_bound(inst);
  rep.holds = Rat(count) >= Rat(vec_norm(inst.box)) * rep.bound_value;
  return rep;
}

struct TranslateBlock {
  Vec t;
  std::uint64_t block_count = 0;
};

/// Constructive step behind the lemma: partitions the avoiders Y inside
/// [1,c], c = a_1 * ... * a_k componentwise, into ||c/b|| translate blocks
/// ]b(t-1), bt] and returns the lexicographically smallest t whose block is
/// largest. The block injects into X by reduction mod b; the injection is
/// re-verified pointwise. Requires b | c componentwise and ||c|| <= 10^7.
inline TranslateBlock best_translate_block(const LatticeInstance& inst) {
  BigInt c_norm = 1;
  std::vector<BigInt> c_big(inst.dim(), 1);
  for (std::size_t j = 0; j < inst.dim(); ++j) {
    for (const Vec& a : inst.avoiders) c_big[j] *= a[j];
    c_norm *= c_big[j];
  }
  if (c_norm > kLatticeEnumBudget)
    throw budget_error("best_translate_block: ||c|| > 10^7");

  Vec c(inst.dim());
  for (std::size_t j = 0; j < inst.dim(); ++j) {
    c[j] = static_cast<std::uint64_t>(c_big[j]);
    if (c[j] % inst.box[j] != 0)
      throw std::invalid_argument(
          "best_translate_block: box must divide the avoider product componentwise");
  }

  Vec blocks_per_dim(inst.dim());
  std::uint64_t n_blocks = 1;
  for (std::size_t j = 0; j < inst.dim(); ++j) {
    blocks_per_dim[j] = c[j] / inst.box[j];
    n_blocks *= blocks_per_dim[j];
  }

  // Flatten t to a mixed-radix index; odometer order makes index order
  // the reverse-lexicographic order on t, so recover lexicographic
  // tie-breaking by comparing t vectors when counts tie.
  std::vector<std::uint32_t> counts(n_blocks, 0);
  detail::for_each_point(c, [&](const Vec& y) {
    if (!detail::avoids_all(y, inst.avoiders)) return;
    std::uint64_t idx = 0;
    for (std::size_t j = inst.dim(); j-- > 0;)
      idx = idx * blocks_per_dim[j] + (y[j] - 1) / inst.box[j];
    ++counts[idx];
  });

  auto index_to_t = [&](std::uint64_t idx) {
    Vec t(inst.dim());
    for (std::size_t j = 0; j < inst.dim(); ++j) {
      t[j] = idx % blocks_per_dim[j] + 1;
      idx /= blocks_per_dim[j];
    }
    return t;
  };

  std::uint64_t best_idx = 0;
  for (std::uint64_t i = 1; i < n_blocks; ++i) {
    if (counts[i] > counts[best_idx] ||
        (counts[i] == counts[best_idx] && index_to_t(i) < index_to_t(best_idx)))
      best_idx = i;
  }

  TranslateBlock out;
  out.t = index_to_t(best_idx);
  out.block_count = counts[best_idx];

  // Verify the injection Y_t -> X, y -> ((y-1) mod b) + 1.
  std::set<Vec> images;
  Vec lo(inst.dim()), block_box(inst.dim());
  for (std::size_t j = 0; j < inst.dim(); ++j) {
    lo[j] = inst.box[j] * (out.t[j] - 1);
    block_box[j] = inst.box[j];
  }
  detail::for_each_point(block_box, [&](const Vec& off) {
    Vec y(inst.dim());
    for (std::size_t j = 0; j < inst.dim(); ++j) y[j] = lo[j] + off[j];
    if (!detail::avoids_all(y, inst.avoiders)) return;
    Vec x(inst.dim());
    for (std::size_t j = 0; j < inst.dim(); ++j)
      x[j] = (y[j] - 1) % inst.box[j] + 1;
    if (!detail::avoids_all(x, inst.avoiders))
      throw invariant_violation("best_translate_block: image leaves X");
    images.insert(std::move(x));
  });
  if (images.size() != out.block_count)
    throw invariant_violation("best_translate_block: block -> X map is not injective");

  return out;
}

}  // namespace resavoid
