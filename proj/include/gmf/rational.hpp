#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace gmf {

// Exact arithmetic only. Every coefficient in the workbench is a rational
// number with arbitrary-precision integer parts; nothing is ever rounded.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += "/";
        s += denominator(r).str();
    }
    return s;
}

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

}  // namespace gmf
