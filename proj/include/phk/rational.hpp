#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace phk {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int numerator(const Rational& x) { return boost::multiprecision::numerator(x); }
inline Int denominator(const Rational& x) { return boost::multiprecision::denominator(x); }

inline Int gcd_int(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm_int(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

inline bool is_integer(const Rational& x) { return denominator(x) == 1; }

inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

/// Exponent of p in a nonzero integer.
inline Int int_val(Int n, const Int& p) {
    if (n == 0) throw std::domain_error("int_val: zero argument");
    Int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

/// Normalized p-adic valuation with val(p) = 1; std::nullopt encodes val(0) = +infinity.
inline std::optional<Rational> padic_val(const Rational& x, const Int& p) {
    if (p < 2) throw std::invalid_argument("padic_val: p must be a prime >= 2");
    if (x == 0) return std::nullopt;
    return Rational(int_val(numerator(x), p) - int_val(denominator(x), p));
}

inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    for (Int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Parses "a/b" or "a"; denominator must be positive after normalization.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        Int n(s.substr(0, slash)), d(s.substr(slash + 1));
        if (d == 0) throw std::invalid_argument("zero denominator");
        return Rational(n, d);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("parse_rational: malformed rational '" + s + "'");
    }
}

inline std::string rational_str(const Rational& x) {
    std::string s = numerator(x).str();
    if (denominator(x) != 1) s += "/" + denominator(x).str();
    return s;
}

} // namespace phk
