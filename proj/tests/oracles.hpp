#pragma once

// Independent reference computations for the test suite. Nothing here calls
// into the library's ideal, form or series code; only the plain value types
// are shared.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

#include "skewdd/number_ring.hpp"
#include "skewdd/series.hpp"

namespace oracle {

using skewdd::DomainSpec;
using skewdd::FieldElem;

// Class numbers

/// Kronecker symbol (D / n) for n > 0.
inline int kronecker(long D, long n) {
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        long r = ((D % 8) + 8) % 8;
        if (r % 2 == 0) return 0;
        if (r == 3 || r == 5) result = -result;
    }
    // Jacobi symbol for odd n
    long a = ((D % n) + n) % n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            long r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

/// Dirichlet's formula h = -(w / 2|D|) sum_{a < |D|} chi(a) a for D < 0.
inline long dirichlet_class_number(long D) {
    const long m = -D;
    const long w = D == -3 ? 6 : D == -4 ? 4 : 2;
    long s = 0;
    for (long a = 1; a < m; ++a) s += kronecker(D, a) * a;
    return -w * s / (2 * m);
}

/// Primitive reduced forms (a, b, c), b^2 - 4ac = D, by brute force.
inline std::set<std::tuple<long, long, long>> reduced_forms(long D) {
    std::set<std::tuple<long, long, long>> out;
    for (long a = 1; 3 * a * a <= -D; ++a)
        for (long b = -a + 1; b <= a; ++b) {
            long num = b * b - D;
            if (num % (4 * a)) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
            out.insert({a, b, c});
        }
    return out;
}

// Quadratic numbers in the basis {1, sqrt(d)}

struct Quad {
    mpq_class x, y;  // x + y sqrt(d)
    long d;

    friend Quad operator*(const Quad& p, const Quad& q) {
        Quad r{p.x * q.x + p.d * p.y * q.y, p.x * q.y + p.y * q.x, p.d};
        r.x.canonicalize();
        r.y.canonicalize();
        return r;
    }
    friend Quad operator+(const Quad& p, const Quad& q) {
        Quad r{p.x + q.x, p.y + q.y, p.d};
        r.x.canonicalize();
        r.y.canonicalize();
        return r;
    }
    friend bool operator==(const Quad& p, const Quad& q) { return p.x == q.x && p.y == q.y; }
    Quad conj() const { return Quad{x, -y, d}; }
    mpq_class norm() const { return x * x - d * y * y; }
};

inline Quad to_quad(const DomainSpec& dom, const FieldElem& e) {
    mpq_class a(e.a(), e.den()), b(e.b(), e.den());
    a.canonicalize();
    b.canonicalize();
    if (!dom.is_quadratic()) return Quad{a, 0, 1};
    if (dom.omega_trace() == 1) {
        Quad q{a + b / 2, b / 2, dom.d()};
        q.x.canonicalize();
        q.y.canonicalize();
        return q;
    }
    return Quad{a, b, dom.d()};
}

/// The two complex embeddings sqrt(d) -> +-i sqrt(|d|) (or +-sqrt(d)).
inline std::complex<double> embed(const Quad& q, int sign) {
    std::complex<double> r = q.d < 0 ? std::complex<double>(0, std::sqrt(double(-q.d))) : std::sqrt(double(q.d));
    return q.x.get_d() + double(sign) * q.y.get_d() * r;
}

// Ideal indices

/// [D : (g_1, ..., g_k)] as the gcd of the 2x2 minors of the Z-span of
/// {g_j, g_j w} in (1, w)-coordinates. Integral generators only.
inline mpz_class index_of_span(const DomainSpec& dom, const std::vector<FieldElem>& gens) {
    std::vector<std::pair<mpz_class, mpz_class>> v;
    const FieldElem w = dom.is_quadratic() ? FieldElem::omega(dom) : FieldElem(0);
    for (const auto& g : gens) {
        v.push_back({g.a(), g.b()});
        if (dom.is_quadratic()) {
            FieldElem gw = g * w;
            v.push_back({gw.a(), gw.b()});
        }
    }
    mpz_class h = 0;
    if (!dom.is_quadratic()) {
        for (const auto& p : v) h = gcd(h, p.first);
        return abs(h);
    }
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) h = gcd(h, v[i].first * v[j].second - v[i].second * v[j].first);
    return abs(h);
}

// Skew series by monomial expansion

/// Sparse exact series: order -> coefficient.
using Sparse = std::map<long, FieldElem>;

inline Sparse sparse(const skewdd::Series& f) {
    Sparse out;
    for (long k = f.val(); k < f.end_order(); ++k) {
        FieldElem c = f.coefficient(k);
        if (!c.is_zero()) out[k] = c;
    }
    return out;
}

/// (a x^i)(b x^j) = a sigma^i(b) x^(i+j), summed over all monomial pairs.
inline Sparse multiply(const Sparse& f, const Sparse& g) {
    Sparse out;
    for (const auto& [i, a] : f)
        for (const auto& [j, b] : g) {
            FieldElem term = a * skewdd::sigma_apply(b, i);
            auto it = out.find(i + j);
            if (it == out.end())
                out.emplace(i + j, term);
            else
                it->second = it->second + term;
        }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

/// Coefficients of the sparse series below `order`.
inline Sparse below(const Sparse& f, long order) {
    Sparse out;
    for (const auto& [k, c] : f)
        if (k < order) out.emplace(k, c);
    return out;
}

}  // namespace oracle
