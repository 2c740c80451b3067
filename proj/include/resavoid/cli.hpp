#pragma once

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "resavoid/density.hpp"
#include "resavoid/lattice.hpp"
#include "resavoid/random_instances.hpp"
#include "resavoid/sieve.hpp"
#include "resavoid/unit_group.hpp"

#include "CLI11.hpp"
#include "json.hpp"

namespace resavoid {

// Exit codes: 0 success, 1 a mathematical invariant failed (implementation
// bug, the inequalities are theorems), 2 invalid input or budget overrun.
enum ExitCode { kOk = 0, kInvariantFailed = 1, kBadInput = 2 };

namespace cli_detail {

enum class Format { table, json, csv };

inline Format resolve_format(const std::string& flag, Format fallback) {
  std::string name = flag;
  if (name.empty()) {
    if (const char* env = std::getenv("RESAVOID_FORMAT")) name = env;
  }
  if (name.empty()) return fallback;
  if (name == "table") return Format::table;
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  throw std::invalid_argument("unknown format '" + name + "'");
}

/// Accepts plain integers and scientific notation ("1e7").
inline std::uint64_t parse_scalar(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty number");
  if (s.find_first_of("eE.") != std::string::npos) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || v < 0 || v > 1.8e19 || v != std::floor(v))
      throw std::invalid_argument("'" + s + "' is not a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  }
  if (s[0] == '-')  // stoull would silently wrap negatives
    throw std::invalid_argument("'" + s + "' is negative");
  std::size_t pos = 0;
  const std::uint64_t v = std::stoull(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("'" + s + "' is not an integer");
  return v;
}

inline std::vector<std::uint64_t> parse_u64_list(const std::string& s, char delim = ',') {
  std::vector<std::uint64_t> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, delim)) out.push_back(parse_scalar(item));
  return out;
}

inline std::vector<Vec> parse_vector_list(const std::string& s) {
  std::vector<Vec> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string group;
  while (std::getline(ss, group, ';')) out.push_back(parse_u64_list(group));
  return out;
}

inline std::string vec_to_string(const Vec& v) {
  std::string s = "(";
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(v[j]);
  }
  return s + ")";
}

inline std::string moduli_to_string(const std::vector<std::uint64_t>& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s.empty() ? "(none)" : s;
}

inline void print_json(std::ostream& out, const nlohmann::json& j) {
  out << j.dump(2) << '\n';
}

inline std::string rat_line(const Rat& r) {
  std::string s = rat_to_string(r);
  if (rat_den(r) != 1) s += " (~" + decimal10(rat_to_double(r)) + ")";
  return s;
}

inline void print_convergence_table(std::ostream& out,
                                    const std::vector<ConvergenceRow>& rows) {
  out << std::setw(14) << "x" << std::setw(12) << "pi(x)" << std::setw(12)
      << "matching" << std::setw(15) << "ratio_pi" << std::setw(15)
      << "ratio_xlogx" << std::setw(15) << "target" << '\n';
  for (const ConvergenceRow& r : rows) {
    out << std::setw(14) << r.x << std::setw(12) << r.pi_x << std::setw(12)
        << r.match_count << std::setw(15) << decimal10(r.ratio_pi)
        << std::setw(15) << decimal10(r.ratio_xlogx) << std::setw(15)
        << (r.exact_target ? decimal10(*r.exact_target) : "-") << '\n';
  }
}

inline std::string status_name(ConvergenceStatus s) {
  switch (s) {
    case ConvergenceStatus::pass: return "PASS";
    case ConvergenceStatus::fail: return "FAIL";
    default: return "UNVERIFIED";
  }
}

}  // namespace cli_detail

/// Dispatches one CLI invocation; argv excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  using cli_detail::Format;

  CLI::App app{"Densities of integers and primes avoiding residue classes"};
  app.require_subcommand(1);

  std::string moduli_str, format_str, limit_str, checkpoints_str;
  std::string avoiders_str, box_str;
  std::uint64_t segment_size = std::uint64_t{1} << 20;
  std::uint64_t basis_modulus = 0;
  double tolerance = 0.005;
  std::uint64_t trials = 0, seed = 0;
  int dims = 0;

  auto add_common = [&](CLI::App* cmd, bool need_moduli) {
    if (need_moduli)
      cmd->add_option("-a,--moduli", moduli_str, "comma-separated moduli list")
          ->required();
    cmd->add_option("--format", format_str, "table, json or csv");
    return cmd;
  };

  auto* cmd_bound = add_common(
      app.add_subcommand("bound", "product lower bound prod(1 - 1/phi(a_i))"), true);
  auto* cmd_exact = add_common(
      app.add_subcommand("exact", "exact relative density #S / phi(lcm a)"), true);
  auto* cmd_verify = add_common(
      app.add_subcommand("verify", "cross-checked density report"), true);
  cmd_verify->add_option("--limit", limit_str, "also run the empirical prime count");
  cmd_verify->add_option("--tolerance", tolerance, "empirical tolerance");
  cmd_verify->add_option("--segment-size", segment_size, "sieve segment size (odd entries)");
  cmd_verify->add_option("--checkpoints", checkpoints_str, "comma-separated checkpoints");
  auto* cmd_natural = add_common(
      app.add_subcommand("natural", "natural density of integers avoiding 0 mod a_i"),
      true);
  auto* cmd_lemma =
      add_common(app.add_subcommand("lemma", "box avoidance counting check"), false);
  cmd_lemma->add_option("--box", box_str, "box vector, e.g. 6 or 6,6");
  cmd_lemma->add_option("--avoiders", avoiders_str,
                        "semicolon-separated vectors, e.g. 2,2;3,1");
  cmd_lemma->add_option("--dims", dims, "expected dimension (checked against --box)");
  cmd_lemma->add_option("--trials", trials, "run this many random instances instead");
  cmd_lemma->add_option("--seed", seed, "seed for --trials");
  auto* cmd_basis =
      add_common(app.add_subcommand("basis", "unit group decomposition of (Z/l)*"), false);
  cmd_basis->add_option("--modulus", basis_modulus, "modulus l >= 2")->required();
  auto* cmd_empirical = add_common(
      app.add_subcommand("empirical", "segmented-sieve convergence check"), true);
  cmd_empirical->add_option("--limit", limit_str, "sieve limit (scientific ok)")
      ->required();
  cmd_empirical->add_option("--tolerance", tolerance, "final deviation tolerance");
  cmd_empirical->add_option("--segment-size", segment_size,
                            "sieve segment size (odd entries)");
  cmd_empirical->add_option("--checkpoints", checkpoints_str,
                            "comma-separated checkpoints");

  std::vector<const char*> argv;
  argv.push_back("resavoid");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kBadInput;
  }

  try {
    if (app.got_subcommand(cmd_bound)) {
      const Format fmt = cli_detail::resolve_format(format_str, Format::table);
      const ModuliList m(cli_detail::parse_u64_list(moduli_str));
      const Rat b = relative_density_bound(m);
      if (fmt == Format::json)
        cli_detail::print_json(out, {{"moduli", m.raw()}, {"bound", rat_json(b)}});
      else
        out << rat_to_string(b) << '\n';
      return kOk;
    }

    if (app.got_subcommand(cmd_exact) || app.got_subcommand(cmd_verify)) {
      const bool flagship = app.got_subcommand(cmd_verify);
      const Format fmt = cli_detail::resolve_format(format_str, Format::table);
      const ModuliList m(cli_detail::parse_u64_list(moduli_str));
      const DensityReport rep = full_verification(m, /*with_transport=*/flagship);

      std::optional<ConvergenceReport> emp;
      if (flagship && !limit_str.empty()) {
        SieveConfig cfg;
        cfg.limit = cli_detail::parse_scalar(limit_str);
        cfg.segment_size = segment_size;
        cfg.checkpoints = cli_detail::parse_u64_list(checkpoints_str);
        emp = convergence_report(m, cfg, tolerance);
      }

      const bool ok = rep.methods_agree && rep.transport_agree.value_or(true) &&
                      (!emp || emp->status != ConvergenceStatus::fail);

      if (fmt == Format::json) {
        nlohmann::json j = density_report_json(rep);
        if (emp) j["empirical"] = convergence_report_json(*emp);
        cli_detail::print_json(out, j);
      } else {
        out << "moduli               : " << cli_detail::moduli_to_string(rep.moduli) << '\n'
            << "l = lcm(a)           : " << rep.l << '\n'
            << "phi(l)               : " << rep.phi_l << '\n'
            << "#S                   : " << rep.s_count << '\n'
            << "exact density        : " << cli_detail::rat_line(rep.exact) << '\n'
            << "bound (as given)     : " << cli_detail::rat_line(rep.bound) << '\n';
        if (flagship) {
          out << "bound (reduced list) : " << cli_detail::rat_line(rep.bound_reduced) << '\n'
              << "enum vs I-E          : "
              << (rep.enum_ran && rep.ie_ran
                      ? (rep.methods_agree ? "agree" : "DISAGREE")
                      : (rep.enum_ran ? "enumeration only" : "inclusion-exclusion only"))
              << '\n'
              << "dlog transport       : "
              << (rep.transport_agree ? (*rep.transport_agree ? "agree" : "DISAGREE")
                                      : "skipped (l out of budget)")
              << '\n';
        }
        out << "bound <= exact       : " << (rep.exact >= rep.bound ? "PASS" : "FAIL")
            << '\n';
        if (emp) {
          out << '\n'
              << "empirical check (primes p | l are counted by the literal "
                 "predicate; the O(1)\ndifference from #S/phi(l) is invisible at "
                 "these ranges)\n";
          cli_detail::print_convergence_table(out, emp->rows);
          out << "final deviation      : " << decimal10(emp->deviation)
              << " (tolerance " << decimal10(emp->tolerance) << ") -> "
              << cli_detail::status_name(emp->status) << '\n';
        }
      }
      return ok ? kOk : kInvariantFailed;
    }

    if (app.got_subcommand(cmd_natural)) {
      const Format fmt = cli_detail::resolve_format(format_str, Format::table);
      const ModuliList m(cli_detail::parse_u64_list(moduli_str));
      const Rat bound = natural_density_bound(m);
      const Rat exact = exact_natural_density(m);
      if (fmt == Format::json) {
        cli_detail::print_json(out, {{"moduli", m.raw()},
                                     {"exact", rat_json(exact)},
                                     {"bound", rat_json(bound)},
                                     {"holds", exact >= bound}});
      } else {
        out << "exact natural density : " << cli_detail::rat_line(exact) << '\n'
            << "product lower bound   : " << cli_detail::rat_line(bound) << '\n'
            << "bound <= exact        : " << (exact >= bound ? "PASS" : "FAIL") << '\n';
      }
      return exact >= bound ? kOk : kInvariantFailed;
    }

    if (app.got_subcommand(cmd_lemma)) {
      const Format fmt = cli_detail::resolve_format(format_str, Format::table);
      if (trials > 0) {
        std::mt19937_64 rng(seed);
        std::uint64_t translate_checked = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
          const LatticeInstance inst = random_lattice_instance(rng);
          const BigInt bf = count_avoiders_bruteforce(inst);
          const BigInt ie = count_avoiders_ie(inst);
          const LemmaReport rep = verify_lemma(inst);
          if (bf != ie || rep.count != bf || !rep.holds)
            throw invariant_violation("lemma trial " + std::to_string(t) + " failed");
          if (translate_feasible(inst)) {
            const TranslateBlock blk = best_translate_block(inst);
            if (Rat(BigInt(blk.block_count)) <
                Rat(vec_norm(inst.box)) * rep.bound_value)
              throw invariant_violation("translate block below the pigeonhole bound");
            ++translate_checked;
          }
        }
        if (fmt == Format::json) {
          cli_detail::print_json(out, {{"trials", trials},
                                       {"seed", seed},
                                       {"translate_checked", translate_checked},
                                       {"all_hold", true}});
        } else {
          out << trials << " random instances (seed " << seed
              << "): counts agree, lemma bound holds; translate block checked on "
              << translate_checked << '\n';
        }
        return kOk;
      }

      if (box_str.empty()) {
        err << "lemma: provide --box (with --avoiders) or --trials\n";
        return kBadInput;
      }
      const Vec box = cli_detail::parse_u64_list(box_str);
      const std::vector<Vec> avoiders = cli_detail::parse_vector_list(avoiders_str);
      if (dims > 0 && static_cast<std::size_t>(dims) != box.size())
        throw std::invalid_argument("--dims does not match the box vector");
      const LatticeInstance inst(box, avoiders);
      const LemmaReport rep = verify_lemma(inst);

      std::optional<TranslateBlock> blk;
      if (translate_feasible(inst)) blk = best_translate_block(inst);

      if (fmt == Format::json) {
        nlohmann::json j{{"box", inst.box},
                         {"count", rep.count.str()},
                         {"bound", rat_json(rep.bound_value)},
                         {"holds", rep.holds}};
        if (blk)
          j["translate"] = {{"t", blk->t}, {"block_count", blk->block_count}};
        else
          j["translate"] = nullptr;
        cli_detail::print_json(out, j);
      } else {
        out << "box            : " << cli_detail::vec_to_string(inst.box) << '\n'
            << "avoiders       : ";
        for (std::size_t i = 0; i < inst.avoiders.size(); ++i)
          out << (i ? " " : "") << cli_detail::vec_to_string(inst.avoiders[i]);
        if (inst.avoiders.empty()) out << "(none)";
        out << '\n'
            << "count #X       : " << rep.count.str() << '\n'
            << "product bound  : " << cli_detail::rat_line(rep.bound_value) << '\n'
            << "#X >= ||b||*bd : " << (rep.holds ? "PASS" : "FAIL") << '\n';
        if (blk)
          out << "best translate : t=" << cli_detail::vec_to_string(blk->t)
              << " block_count=" << blk->block_count << '\n';
        else
          out << "best translate : skipped (box does not divide the avoider "
                 "product, or budget)\n";
      }
      return rep.holds ? kOk : kInvariantFailed;
    }

    if (app.got_subcommand(cmd_basis)) {
      const UnitGroupBasis basis = build_basis(basis_modulus);
      nlohmann::json comps = nlohmann::json::array();
      for (const BasisComponent& c : basis.components)
        comps.push_back({{"generator", c.generator},
                         {"order", c.order},
                         {"prime_power", c.prime_power}});
      cli_detail::print_json(out, {{"modulus", basis.modulus},
                                   {"two_adic", basis.two_adic},
                                   {"components", comps}});
      return kOk;
    }

    if (app.got_subcommand(cmd_empirical)) {
      const Format fmt = cli_detail::resolve_format(format_str, Format::csv);
      const ModuliList m(cli_detail::parse_u64_list(moduli_str));
      SieveConfig cfg;
      cfg.limit = cli_detail::parse_scalar(limit_str);
      cfg.segment_size = segment_size;
      cfg.checkpoints = cli_detail::parse_u64_list(checkpoints_str);
      const ConvergenceReport rep = convergence_report(m, cfg, tolerance);

      const std::string summary =
          "final deviation=" +
          (rep.exact ? decimal10(rep.deviation) : std::string("n/a")) +
          " tolerance=" + decimal10(rep.tolerance) + " -> " +
          cli_detail::status_name(rep.status);
      if (fmt == Format::json) {
        cli_detail::print_json(out, convergence_report_json(rep));
      } else if (fmt == Format::csv) {
        out << convergence_csv(rep.rows);
        err << summary << '\n';
      } else {
        cli_detail::print_convergence_table(out, rep.rows);
        out << summary << '\n';
      }
      return rep.status == ConvergenceStatus::fail ? kInvariantFailed : kOk;
    }

    err << "no subcommand given\n";
    return kBadInput;
  } catch (const invariant_violation& e) {
    err << "invariant violated: " << e.what() << '\n';
    return kInvariantFailed;
  } catch (const budget_error& e) {
    err << e.what() << '\n';
    return kBadInput;
  } catch (const std::overflow_error& e) {
    err << e.what() << '\n';
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return kBadInput;
  } catch (const std::out_of_range& e) {
    err << e.what() << '\n';
    return kBadInput;
  }
}

}  // namespace resavoid
