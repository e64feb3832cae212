#include "probemin/rational.hpp"

#include <cmath>

namespace probemin {

Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw ParseError("non-finite number in input");
  if (x == 0.0) return Rat(0);
  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  // 53 doublings make the mantissa integral.
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rat q(scaled);
  BigInt pow2 = BigInt(1) << std::abs(exp);
  if (exp >= 0) return q * Rat(pow2);
  return q / Rat(pow2);
}

Rat rat_pow(const Rat& base, std::uint64_t exp) {
  Rat acc(1);
  Rat b = base;
  while (exp > 0) {
    if (exp & 1) acc *= b;
    b *= b;
    exp >>= 1;
  }
  return acc;
}

}  // namespace probemin
