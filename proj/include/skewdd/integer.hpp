#pragma once

#include <gmpxx.h>

#include <string>
#include <tuple>

namespace skewdd {

using Int = mpz_class;
using Rational = mpq_class;

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

/// Returns (g, u, v) with g = u*a + v*b and g = gcd(a, b) >= 0.
inline std::tuple<Int, Int, Int> ext_gcd(const Int& a, const Int& b) {
    Int g, u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return {g, u, v};
}

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

/// Remainder in [0, |b|).
inline Int mod_pos(const Int& a, const Int& b) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline bool divides(const Int& d, const Int& a) {
    if (d == 0) return a == 0;
    return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline Int exact_div(const Int& a, const Int& b) {
    Int q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int isqrt(const Int& a) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

inline bool is_square(const Int& a, Int& root) {
    if (a < 0) return false;
    root = isqrt(a);
    return root * root == a;
}

inline std::string to_string(const Int& a) { return a.get_str(); }

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace skewdd
