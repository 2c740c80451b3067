#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "resavoid/density.hpp"
#include "resavoid/errors.hpp"
#include "resavoid/rational.hpp"

#include "json.hpp"

namespace resavoid {

constexpr std::uint64_t kSieveLimitCap = 10'000'000'000ULL;

struct SieveConfig {
  std::uint64_t limit = 0;
  std::uint64_t segment_size = std::uint64_t{1} << 20;  // odd-number entries
  std::vector<std::uint64_t> checkpoints;               // empty = powers of 10
};

inline std::vector<std::uint64_t> default_checkpoints(std::uint64_t limit) {
  std::vector<std::uint64_t> cps;
  for (std::uint64_t x = 10; x <= limit; x *= 10) {
    cps.push_back(x);
    if (x > limit / 10) break;  // next *=10 would overflow past the cap
  }
  if (cps.empty() || cps.back() != limit) cps.push_back(limit);
  return cps;
}

inline void validate(const SieveConfig& cfg) {
  if (cfg.limit > kSieveLimitCap)
    throw std::invalid_argument("sieve: limit must be <= 10^10");
  if (cfg.segment_size < std::uint64_t{1} << 10)
    throw std::invalid_argument("sieve: segment_size must be >= 2^10");
  std::uint64_t prev = 0;
  for (std::uint64_t x : cfg.checkpoints) {
    if (x < prev) throw std::invalid_argument("sieve: checkpoints must be ascending");
    if (x > cfg.limit) throw std::invalid_argument("sieve: checkpoint beyond limit");
    prev = x;
  }
}

namespace detail {

inline std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline std::vector<std::uint64_t> odd_base_primes(std::uint64_t bound) {
  std::vector<std::uint64_t> primes;
  if (bound < 3) return primes;
  std::vector<bool> comp((bound - 1) / 2, false);  // index i <-> 2i+3
  for (std::uint64_t i = 0; i < comp.size(); ++i) {
    if (comp[i]) continue;
    const std::uint64_t p = 2 * i + 3;
    primes.push_back(p);
    for (std::uint64_t v = p * p; v <= bound; v += 2 * p)
      comp[(v - 3) / 2] = true;
  }
  return primes;
}

// Marks composites among odd values lo, lo+2, ..., lo+2(count-1).
inline std::vector<std::uint64_t> mark_segment(
    std::uint64_t lo, std::uint64_t count,
    const std::vector<std::uint64_t>& base_primes) {
  std::vector<std::uint64_t> words((count + 63) / 64, 0);
  const std::uint64_t hi = lo + 2 * (count - 1);
  for (std::uint64_t p : base_primes) {
    if (p * p > hi) break;
    std::uint64_t first = p * p;
    if (first < lo) {
      const std::uint64_t q = (lo + p - 1) / p;
      first = q * p;
      if (first % 2 == 0) first += p;
    }
    for (std::uint64_t v = first; v <= hi; v += 2 * p) {
      const std::uint64_t j = (v - lo) / 2;
      words[j >> 6] |= std::uint64_t{1} << (j & 63);
    }
  }
  return words;
}

}  // namespace detail

/// Streams the primes <= limit to the visitor in ascending order, each once.
/// Segments are marked concurrently but always delivered in order, so the
/// stream is identical for any thread count. Memory stays
/// O(segment_size + sqrt(limit)).
template <typename Visitor>
void sieve_primes(const SieveConfig& cfg, Visitor&& visit, unsigned threads = 0) {
  validate(cfg);
  if (cfg.limit < 2) return;
  visit(std::uint64_t{2});
  if (cfg.limit < 3) return;

  const std::vector<std::uint64_t> base =
      detail::odd_base_primes(detail::isqrt(cfg.limit));
  if (threads == 0)
    threads = std::min(8u, std::max(1u, std::thread::hardware_concurrency()));

  const std::uint64_t seg = cfg.segment_size;
  const std::uint64_t total_odds = (cfg.limit - 3) / 2 + 1;  // 3,5,...,<=limit
  const std::uint64_t n_segments = (total_odds + seg - 1) / seg;

  auto run_segment = [&](std::uint64_t k) {
    const std::uint64_t first_idx = k * seg;
    const std::uint64_t count = std::min(seg, total_odds - first_idx);
    return detail::mark_segment(3 + 2 * first_idx, count, base);
  };

  std::deque<std::future<std::vector<std::uint64_t>>> pending;
  std::uint64_t next_to_launch = 0;
  auto top_up = [&] {
    while (next_to_launch < n_segments && pending.size() < threads)
      pending.push_back(std::async(threads == 1 ? std::launch::deferred
                                                : std::launch::async,
                                   run_segment, next_to_launch++));
  };

  for (std::uint64_t k = 0; k < n_segments; ++k) {
    top_up();
    const std::vector<std::uint64_t> words = pending.front().get();
    pending.pop_front();
    const std::uint64_t first_idx = k * seg;
    const std::uint64_t count = std::min(seg, total_odds - first_idx);
    const std::uint64_t lo = 3 + 2 * first_idx;
    for (std::uint64_t w = 0; w < words.size(); ++w) {
      std::uint64_t bits = ~words[w];
      while (bits != 0) {
        const unsigned b = std::countr_zero(bits);
        bits &= bits - 1;
        const std::uint64_t j = (w << 6) | b;
        if (j >= count) break;
        visit(lo + 2 * j);
      }
    }
  }
}

struct ConvergenceRow {
  std::uint64_t x = 0;
  std::uint64_t pi_x = 0;
  std::uint64_t match_count = 0;
  double ratio_pi = 0.0;     // match_count / pi(x)
  double ratio_xlogx = 0.0;  // match_count / (x / ln x)
  std::optional<double> exact_target;
};

/// Counts primes p <= x with p != 1 mod a_i for every i, at each checkpoint.
/// The comparison is against 1 mod a_i, so a_i = 1 excludes every prime.
inline std::vector<ConvergenceRow> count_matching(const ModuliList& moduli,
                                                  const SieveConfig& cfg,
                                                  unsigned threads = 0) {
  SieveConfig c = cfg;
  if (c.checkpoints.empty()) c.checkpoints = default_checkpoints(c.limit);
  validate(c);

  std::vector<ConvergenceRow> rows;
  std::uint64_t pi = 0, match = 0;
  std::size_t idx = 0;
  auto flush_through = [&](std::uint64_t p) {
    while (idx < c.checkpoints.size() && p > c.checkpoints[idx]) {
      ConvergenceRow row;
      row.x = c.checkpoints[idx];
      row.pi_x = pi;
      row.match_count = match;
      row.ratio_pi = pi > 0 ? static_cast<double>(match) / static_cast<double>(pi) : 0.0;
      row.ratio_xlogx =
          row.x >= 2 ? static_cast<double>(match) * std::log(static_cast<double>(row.x)) /
                           static_cast<double>(row.x)
                     : 0.0;
      rows.push_back(row);
      ++idx;
    }
  };

  sieve_primes(
      c,
      [&](std::uint64_t p) {
        flush_through(p);
        ++pi;
        bool ok = true;
        for (std::uint64_t a : moduli.raw()) {
          if (p % a == 1 % a) {
            ok = false;
            break;
          }
        }
        if (ok) ++match;
      },
      threads);
  flush_through(c.limit + 1);
  return rows;
}

enum class ConvergenceStatus { pass, fail, unverified };

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::optional<Rat> exact;  // empty when no exact path was feasible
  double tolerance = 0.005;
  double deviation = 0.0;    // |ratio_pi - exact| at the last checkpoint
  ConvergenceStatus status = ConvergenceStatus::unverified;
};

/// Empirical check of the exact density through the prime stream: matching
/// primes are counted per checkpoint and the final ratio against pi(x) is
/// compared with #S/phi(l) at the given tolerance. Normalizing by pi(x)
/// rather than x/ln x checks the same limit with far less noise at these
/// ranges; both ratios are reported.
inline ConvergenceReport convergence_report(const ModuliList& moduli,
                                            const SieveConfig& cfg,
                                            double tolerance = 0.005,
                                            unsigned threads = 0) {
  ConvergenceReport rep;
  rep.tolerance = tolerance;
  try {
    if (moduli.reduced().size() <= kSubsetBudget)
      rep.exact = exact_relative_density_ie(moduli);
    else
      rep.exact = exact_relative_density_enum(moduli).exact;
  } catch (const budget_error&) {
    rep.exact.reset();
  } catch (const std::overflow_error&) {
    rep.exact.reset();  // lcm beyond 64 bits: no exact target either
  }

  rep.rows = count_matching(moduli, cfg, threads);
  if (rep.exact) {
    const double target = rat_to_double(*rep.exact);
    for (ConvergenceRow& row : rep.rows) row.exact_target = target;
    if (!rep.rows.empty()) {
      rep.deviation = std::abs(rep.rows.back().ratio_pi - target);
      rep.status = rep.deviation <= tolerance ? ConvergenceStatus::pass
                                              : ConvergenceStatus::fail;
    }
  }
  return rep;
}

inline std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream out;
  out << "x,pi_x,match_count,ratio_pi,ratio_xlogx,exact_target\n";
  for (const ConvergenceRow& r : rows) {
    out << r.x << ',' << r.pi_x << ',' << r.match_count << ','
        << decimal10(r.ratio_pi) << ',' << decimal10(r.ratio_xlogx) << ',';
    if (r.exact_target) out << decimal10(*r.exact_target);
    out << '\n';
  }
  return out.str();
}

inline nlohmann::json convergence_row_json(const ConvergenceRow& r) {
  nlohmann::json j{{"x", r.x},
                   {"pi_x", r.pi_x},
                   {"match_count", r.match_count},
                   {"ratio_pi", r.ratio_pi},
                   {"ratio_xlogx", r.ratio_xlogx}};
  j["exact_target"] = r.exact_target ? nlohmann::json(*r.exact_target)
                                     : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json convergence_report_json(const ConvergenceReport& rep) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ConvergenceRow& r : rep.rows) rows.push_back(convergence_row_json(r));
  nlohmann::json j{{"rows", rows}, {"tolerance", rep.tolerance}};
  if (rep.exact) {
    j["exact"] = rat_json(*rep.exact);
    j["deviation"] = rep.deviation;
    j["status"] = rep.status == ConvergenceStatus::pass ? "PASS" : "FAIL";
  } else {
    j["exact"] = nullptr;
    j["status"] = "UNVERIFIED";
  }
  return j;
}

}  // namespace resavoid
