#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace tatesub {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Floor of an exact rational.
inline Int rat_floor(const Rat& r) {
    Int num = numerator(r);
    Int den = denominator(r);  // always > 0
    Int q = num / den;
    if (num < 0 && q * den != num) --q;
    return q;
}

/// Representative of r mod 1 in [0, 1).
inline Rat mod1(const Rat& r) {
    return r - Rat(rat_floor(r));
}

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

/// "n" for integers, "n/d" otherwise.
inline std::string rat_str(const Rat& r) {
    if (is_integer(r)) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Exact conversion to a machine integer; throws if r is not an integer
/// or does not fit.
inline long rat_to_long(const Rat& r) {
    if (!is_integer(r)) throw std::domain_error("rat_to_long: not an integer: " + rat_str(r));
    return static_cast<long>(numerator(r));
}

}  // namespace tatesub
