#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace resavoid {

// All densities and bounds are exact rationals; floating point only appears
// when rendering. cpp_rational keeps lowest terms and a positive denominator.
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

/// num/den for any sign of den (the component constructor insists on den > 0).
inline Rat make_rat(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("make_rat: zero denominator");
  return den < 0 ? Rat(-num, -den) : Rat(num, den);
}

/// "n/d", or just "n" when the denominator is 1.
inline std::string rat_to_string(const Rat& r) {
  if (rat_den(r) == 1) return rat_num(r).str();
  return rat_num(r).str() + "/" + rat_den(r).str();
}

inline double rat_to_double(const Rat& r) {
  return static_cast<double>(r);
}

/// Decimal rendering with 10 significant digits, matching the CSV contract.
inline std::string decimal10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline BigInt rat_ceil(const Rat& r) {
  BigInt q = rat_num(r) / rat_den(r);
  if (rat_num(r) > 0 && q * rat_den(r) != rat_num(r)) ++q;
  return q;
}

}  // namespace resavoid
