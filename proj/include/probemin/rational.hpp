#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "probemin/errors.hpp"

namespace probemin {

// Exact arithmetic backbone. Probabilities, costs and expectations are kept
// as arbitrary-precision rationals so that optimality and dominance checks
// can assert equality instead of closeness.
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

inline BigInt num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline BigInt den(const Rat& q) { return boost::multiprecision::denominator(q); }

// Renders "a/b", or just "a" for integers.
inline std::string to_fraction_string(const Rat& q) {
  if (den(q) == 1) return num(q).str();
  return num(q).str() + "/" + den(q).str();
}

// Accepts "a", "-a", "a/b".
inline Rat parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(BigInt(text));
    const BigInt n(text.substr(0, slash));
    const BigInt d(text.substr(slash + 1));
    if (d == 0) throw ParseError("zero denominator in '" + text + "'");
    return Rat(n, d);
  } catch (const std::runtime_error&) {
    throw ParseError("bad rational literal '" + text + "'");
  }
}

// Exact value of an IEEE double (every finite double is a dyadic rational).
Rat rat_from_double(double x);

Rat rat_pow(const Rat& base, std::uint64_t exp);

}  // namespace probemin
