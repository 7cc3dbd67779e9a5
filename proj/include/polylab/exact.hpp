// Exact arbitrary-precision integers and rationals (GMP-backed).
#pragma once

#include <gmpxx.h>

#include <string>

#include "polylab/point.hpp"

namespace polylab {

using BigInt = mpz_class;
using Rational = mpq_class;

// mpz_class has no long long constructor; long is 64-bit on the supported targets
inline BigInt big_int(long long v)
{
    static_assert(sizeof(long) == sizeof(long long));
    return BigInt(static_cast<long>(v));
}

// Parses "a/b" or "a" with integer a, b. Decimal notation is rejected: callers
// that need exactness must receive exact inputs.
inline Rational parse_rational(const std::string& s)
{
    if (s.empty()) throw PreconditionError("empty rational");
    if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
        s.find('E') != std::string::npos)
        throw PreconditionError("rational input must be 'a/b' or an integer, got: " + s);
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            BigInt n(s);
            Rational q(n);
            q.canonicalize();
            return q;
        }
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw PreconditionError("zero denominator: " + s);
        Rational q(num, den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw PreconditionError("malformed rational: " + s);
    }
}

inline Rational rational_pow(const Rational& q, unsigned n)
{
    Rational r(1);
    Rational base = q;
    unsigned e = n;
    while (e > 0) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1u;
    }
    return r;
}

inline std::string rational_to_string(const Rational& q)
{
    return q.get_str();
}

} // namespace polylab
