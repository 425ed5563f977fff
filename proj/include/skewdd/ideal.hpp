#pragma once

// Integral and fractional ideals of D as rank-2 (rank-1 for Z) integer
// lattices in canonical Hermite normal form.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "skewdd/errors.hpp"
#include "skewdd/lattice.hpp"
#include "skewdd/number_ring.hpp"

namespace skewdd {

/// Limits for the searches that are not a priori finite.
struct SearchBounds {
    long candidates = 10000;  // 1.5-generator: random candidates tried
    long coefficient = 1000;  // 1.5-generator: |r_i| for b = r_1 g_1 + r_2 g_2
    long principal = 100000;  // real quadratic principal search: |y|-multiples scanned
    std::uint64_t seed = 0x5eed;
};

namespace detail {

/// Integer coordinates of an integral element, ordered (w-part, 1-part).
inline IntVector coords(const DomainSpec& dom, const FieldElem& e) {
    if (dom.is_quadratic()) return {e.b(), e.a()};
    return {e.a()};
}

}  // namespace detail

/// Integral ideal Z*a + Z*(b + c*w) with c >= 1, c | a, c | b, 0 <= b < a.
/// For D = Z only the generator a (= m >= 0) is meaningful; b = 0, c = 1.
class IdealLattice {
public:
    static IdealLattice zero(const DomainSpec& dom) { return IdealLattice(dom, 0, 0, 1, true); }
    static IdealLattice unit(const DomainSpec& dom) { return IdealLattice(dom, 1, 0, 1, false); }

    /// D-module generated by integral elements.
    static IdealLattice from_integral(const DomainSpec& dom, const std::vector<FieldElem>& gens) {
        std::vector<IntVector> cols;
        FieldElem w = dom.is_quadratic() ? FieldElem::omega(dom) : FieldElem(0);
        for (const auto& g : gens) {
            if (!g.is_integral()) throw DomainError("non-integral generator " + skewdd::to_string(g));
            if (g.is_zero()) continue;
            cols.push_back(detail::coords(dom, g));
            if (dom.is_quadratic()) cols.push_back(detail::coords(dom, g * w));
        }
        if (cols.empty()) return zero(dom);
        if (!dom.is_quadratic()) {
            IntegerLattice lat(1, cols);
            return IdealLattice(dom, (*lat.pivot(0))[0], 0, 1, false);
        }
        IntegerLattice lat(2, cols);
        const IntVector* py = lat.pivot(0);
        const IntVector* px = lat.pivot(1);
        if (!py || !px) throw std::logic_error("nonzero ideal lattice of rank < 2");
        Int a = (*px)[1];
        return IdealLattice(dom, a, mod_pos((*py)[1], a), (*py)[0], false);
    }

    /// Validates that (a, b, c) is the canonical form of an ideal.
    static IdealLattice from_hnf(const DomainSpec& dom, const Int& a, const Int& b, const Int& c) {
        if (!dom.is_quadratic()) {
            if (a < 0) throw DomainError("ideal generator must be nonnegative");
            return a == 0 ? zero(dom) : IdealLattice(dom, a, 0, 1, false);
        }
        if (a <= 0 || c <= 0 || b < 0 || b >= a)
            throw DomainError("HNF (" + skewdd::to_string(a) + "," + skewdd::to_string(b) + "," + skewdd::to_string(c) + ") is not canonical");
        IdealLattice lat = from_integral(dom, {FieldElem(a), FieldElem::make(dom, b, c)});
        if (lat.a_ != a || lat.b_ != b || lat.c_ != c)
            throw DomainError("HNF (" + skewdd::to_string(a) + "," + skewdd::to_string(b) + "," + skewdd::to_string(c) + ") is not an ideal");
        return lat;
    }

    const DomainSpec& domain() const { return *dom_; }
    bool is_zero() const { return zero_; }
    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    const Int& c() const { return c_; }

    /// Lattice index [D : I].
    Int index() const {
        if (zero_) throw ZeroIdealError("index of the zero ideal");
        return dom_->is_quadratic() ? Int(a_ * c_) : a_;
    }

    /// Largest rational integer dividing the lattice.
    Int content() const { return dom_->is_quadratic() ? c_ : a_; }

    bool is_unit() const { return !zero_ && a_ == 1 && c_ == 1; }

    std::pair<FieldElem, FieldElem> two_generators() const {
        if (zero_) throw ZeroIdealError("two_generators of the zero ideal");
        FieldElem g1 = FieldElem(a_).in(*dom_);
        if (!dom_->is_quadratic()) return {g1, g1};
        return {g1, FieldElem::make(*dom_, b_, c_)};
    }

    bool contains(const FieldElem& e) const {
        if (!e.is_integral()) return false;
        if (zero_) return e.is_zero();
        if (!dom_->is_quadratic()) return divides(a_, e.a());
        if (!divides(c_, e.b())) return false;
        Int k = exact_div(e.b(), c_);
        return divides(a_, e.a() - k * b_);
    }

    IdealLattice sigma(long i) const {
        if (zero_ || i % 2 == 0 || dom_->sigma() == Sigma::identity) return *this;
        auto [g1, g2] = two_generators();
        return from_integral(*dom_, {sigma_apply(g1, i), sigma_apply(g2, i)});
    }

    IdealLattice conj() const {
        if (zero_ || !dom_->is_quadratic()) return *this;
        auto [g1, g2] = two_generators();
        return from_integral(*dom_, {g1.conj(), g2.conj()});
    }

    /// Exact division by a rational integer dividing content().
    IdealLattice divided(const Int& g) const {
        if (zero_ || g == 1) return *this;
        if (!dom_->is_quadratic()) return IdealLattice(*dom_, exact_div(a_, g), 0, 1, false);
        return IdealLattice(*dom_, exact_div(a_, g), exact_div(b_, g), exact_div(c_, g), false);
    }

    std::string to_string() const {
        if (zero_) return "(0)";
        auto [g1, g2] = two_generators();
        // a D prints as (a)
        if (!dom_->is_quadratic() || (b_ == 0 && c_ == a_)) return "(" + skewdd::to_string(g1) + ")";
        return "(" + skewdd::to_string(g1) + ", " + skewdd::to_string(g2) + ")";
    }

    friend bool operator==(const IdealLattice& x, const IdealLattice& y) {
        if (x.dom_ != y.dom_ || x.zero_ != y.zero_) return false;
        return x.zero_ || (x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_);
    }

private:
    IdealLattice(const DomainSpec& dom, Int a, Int b, Int c, bool zero)
        : dom_(&dom), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), zero_(zero) {}

    const DomainSpec* dom_;
    Int a_, b_, c_;
    bool zero_;
};

/// Fractional ideal (1/den) * lat with gcd(den, content(lat)) = 1.
class FracIdeal {
public:
    explicit FracIdeal(IdealLattice lat, Int den = 1) : lat_(std::move(lat)), den_(std::move(den)) {
        if (den_ <= 0) throw DomainError("fractional ideal denominator must be positive");
        if (lat_.is_zero()) {
            den_ = 1;
            return;
        }
        Int g = gcd(den_, lat_.content());
        if (g > 1) {
            lat_ = lat_.divided(g);
            den_ = exact_div(den_, g);
        }
    }

    static FracIdeal unit(const DomainSpec& dom) { return FracIdeal(IdealLattice::unit(dom)); }

    /// D-module generated by arbitrary elements of K; empty or all-zero input gives the zero ideal.
    static FracIdeal from_generators(const DomainSpec& dom, const std::vector<FieldElem>& gens) {
        Int l = 1;
        for (const auto& g : gens) l = lcm(l, g.den());
        std::vector<FieldElem> scaled;
        scaled.reserve(gens.size());
        for (const auto& g : gens) scaled.push_back(g.in(dom) * FieldElem(l));
        return FracIdeal(IdealLattice::from_integral(dom, scaled), l);
    }

    const DomainSpec& domain() const { return lat_.domain(); }
    const IdealLattice& lattice() const { return lat_; }
    const Int& den() const { return den_; }
    bool is_zero() const { return lat_.is_zero(); }
    bool is_integral() const { return den_ == 1; }
    bool is_unit() const { return den_ == 1 && lat_.is_unit(); }

    /// Absolute norm: index(lat) / den^degree.
    Rational norm() const {
        Rational q(lat_.index(), domain().is_quadratic() ? Int(den_ * den_) : den_);
        q.canonicalize();
        return q;
    }

    std::pair<FieldElem, FieldElem> generators() const {
        auto [g1, g2] = lat_.two_generators();
        FieldElem inv_den = FieldElem(Rational(1, den_));
        return {g1 * inv_den, g2 * inv_den};
    }

    std::vector<FieldElem> generator_list() const {
        if (is_zero()) return {};
        auto [g1, g2] = generators();
        return {g1, g2};
    }

    bool contains(const FieldElem& e) const { return lat_.contains(e * FieldElem(den_)); }

    FracIdeal sigma(long i) const { return FracIdeal(lat_.sigma(i), den_); }

    /// alpha * u.
    FracIdeal scaled(const FieldElem& alpha) const {
        std::vector<FieldElem> gens;
        for (const auto& g : generator_list()) gens.push_back(alpha * g);
        return from_generators(domain(), gens);
    }

    std::string to_string() const {
        if (den_ == 1) return lat_.to_string();
        return "(1/" + skewdd::to_string(den_) + ")" + lat_.to_string();
    }

    friend bool operator==(const FracIdeal& x, const FracIdeal& y) { return x.lat_ == y.lat_ && x.den_ == y.den_; }

private:
    IdealLattice lat_;
    Int den_;
};

inline FracIdeal product(const FracIdeal& u, const FracIdeal& v) {
    if (&u.domain() != &v.domain()) throw DomainError("ideals from different domains");
    std::vector<FieldElem> gens;
    for (const auto& g : u.generator_list())
        for (const auto& h : v.generator_list()) gens.push_back(g * h);
    return FracIdeal::from_generators(u.domain(), gens);
}

inline FracIdeal sum(const FracIdeal& u, const FracIdeal& v) {
    if (&u.domain() != &v.domain()) throw DomainError("ideals from different domains");
    std::vector<FieldElem> gens = u.generator_list();
    for (const auto& h : v.generator_list()) gens.push_back(h);
    return FracIdeal::from_generators(u.domain(), gens);
}

inline FracIdeal inverse(const FracIdeal& u) {
    if (u.is_zero()) throw ZeroIdealError("inverse of the zero ideal");
    const DomainSpec& dom = u.domain();
    const IdealLattice& lat = u.lattice();
    FracIdeal inv = [&] {
        if (!dom.is_quadratic()) return FracIdeal::from_generators(dom, {FieldElem(Rational(u.den(), lat.a()))});
        // (L/den)^{-1} = den * conj(L) / [D : L]
        FieldElem scale = FieldElem(Rational(u.den(), lat.index()));
        std::vector<FieldElem> gens;
        for (const auto& g : FracIdeal(lat).generator_list()) gens.push_back(g.conj() * scale);
        return FracIdeal::from_generators(dom, gens);
    }();
    if (!product(u, inv).is_unit()) throw std::logic_error("ideal inverse failed to verify for " + u.to_string());
    return inv;
}

inline FracIdeal power(const FracIdeal& u, int k) {
    FracIdeal out = FracIdeal::unit(u.domain());
    FracIdeal base = k < 0 ? inverse(u) : u;
    for (int i = 0; i < (k < 0 ? -k : k); ++i) out = product(out, base);
    return out;
}

inline FracIdeal operator*(const FracIdeal& u, const FracIdeal& v) { return product(u, v); }

inline bool contains(const FracIdeal& u, const FieldElem& e) { return u.contains(e); }

inline std::pair<FieldElem, FieldElem> two_generators(const IdealLattice& u) { return u.two_generators(); }

namespace detail {

inline std::string list_to_string(const std::vector<FieldElem>& gens) {
    std::string s = "[";
    for (std::size_t i = 0; i < gens.size(); ++i) s += (i ? ", " : "") + to_string(gens[i]);
    return s + "]";
}

}  // namespace detail

/// Coefficients u_j in D with e = sum_j gens_j * u_j (canonical echelon solution).
inline std::vector<FieldElem> express_in_generators(const DomainSpec& dom, const FieldElem& e,
                                                    const std::vector<FieldElem>& gens) {
    Int l = e.den();
    for (const auto& g : gens) l = lcm(l, g.den());
    FieldElem lf(l);
    FieldElem w = dom.is_quadratic() ? FieldElem::omega(dom) : FieldElem(0);
    std::vector<IntVector> cols;
    for (const auto& g : gens) {
        FieldElem gl = g.in(dom) * lf;
        cols.push_back(detail::coords(dom, gl));
        if (dom.is_quadratic()) cols.push_back(detail::coords(dom, gl * w));
    }
    IntegerLattice lat(static_cast<std::size_t>(dom.degree()), cols);
    auto sol = lat.solve_short(detail::coords(dom, e.in(dom) * lf));
    if (!sol) throw MembershipError(to_string(e), "the ideal generated by " + detail::list_to_string(gens));
    std::vector<FieldElem> out;
    for (std::size_t j = 0; j < gens.size(); ++j) {
        if (dom.is_quadratic())
            out.push_back(FieldElem::make(dom, (*sol)[2 * j], (*sol)[2 * j + 1]));
        else
            out.push_back(FieldElem((*sol)[j]).in(dom));
    }
    return out;
}

using Coeff2x2 = std::array<std::array<FieldElem, 2>, 2>;

/// c with e = sum_{j,k} c[j][k] * g_j * h_k.
inline Coeff2x2 express_in_product(const DomainSpec& dom, const FieldElem& e, const std::pair<FieldElem, FieldElem>& g,
                                   const std::pair<FieldElem, FieldElem>& h) {
    std::vector<FieldElem> gens = {g.first * h.first, g.first * h.second, g.second * h.first, g.second * h.second};
    auto u = express_in_generators(dom, e, gens);
    return {{{u[0], u[1]}, {u[2], u[3]}}};
}

/// b in u with (a, b) = u. Small coefficient pairs are tried first, then a
/// seeded random search; every candidate is verified by HNF equality.
inline FieldElem one_and_half_generator(const IdealLattice& u, const FieldElem& a, const SearchBounds& bounds = {}) {
    const DomainSpec& dom = u.domain();
    if (a.is_zero()) throw DomainError("one_and_half_generator needs a nonzero element");
    if (!u.contains(a)) throw MembershipError(to_string(a), u.to_string());
    auto [g1, g2] = u.two_generators();
    auto works = [&](const FieldElem& b) { return IdealLattice::from_integral(dom, {a, b}) == u; };
    // r1 g1 + r2 g2 by increasing |r1| + |r2|
    for (long size = 1; size <= 4; ++size)
        for (long r1 = 0; r1 <= size; ++r1)
            for (long sgn : {1L, -1L}) {
                long r2 = sgn * (size - r1);
                if (sgn == -1 && r2 == 0) continue;
                FieldElem b = g1 * FieldElem(r1) + g2 * FieldElem(r2);
                if (!b.is_zero() && works(b)) return b;
            }
    std::mt19937_64 rng(bounds.seed);
    std::uniform_int_distribution<long> coef(-bounds.coefficient, bounds.coefficient);
    for (long i = 0; i < bounds.candidates; ++i) {
        FieldElem b = g1 * FieldElem(coef(rng)) + g2 * FieldElem(coef(rng));
        if (works(b)) return b;
    }
    throw BoundExceeded("no 1.5-generator partner found for " + to_string(a) + " in " + u.to_string(),
                        bounds.candidates);
}

/// alpha with alpha*D = u, if one exists. Complete for Z and imaginary
/// quadratic orders; for real quadratic orders the search over lattice
/// elements x + y*w scans |y| up to bounds.principal multiples and throws
/// BoundExceeded when undecided.
inline std::optional<FieldElem> principal_generator(const FracIdeal& u, const SearchBounds& bounds = {}) {
    if (u.is_zero()) throw ZeroIdealError("principal_generator of the zero ideal");
    const DomainSpec& dom = u.domain();
    const IdealLattice& lat = u.lattice();
    FieldElem inv_den(Rational(1, u.den()));
    if (!dom.is_quadratic()) return FieldElem(lat.a()).in(dom) * inv_den;
    if (u.is_unit()) return FieldElem(1).in(dom);

    const Int target = lat.index();
    const Int t = dom.omega_trace();
    const Int n = dom.omega_norm();
    long limit;
    if (dom.is_imaginary()) {
        // |disc| * y^2 <= 4 N for any element of norm N
        Int ymax = isqrt(Int(4 * target / (-dom.discriminant())));
        Int kmax = ymax / lat.c();
        limit = kmax.get_si();
    } else {
        limit = bounds.principal;
    }
    // Elements k1*a + k2*(b + c*w): solve x^2 + t*y*x + (n*y^2 - N') = 0 for x.
    auto try_k2 = [&](long k2) -> std::optional<FieldElem> {
        Int y = lat.c() * k2;
        for (int sgn : {1, -1}) {
            if (sgn == -1 && dom.is_imaginary()) break;
            Int nn = target * sgn;
            Int disc = t * t * y * y - 4 * (n * y * y - nn);
            Int r;
            if (!is_square(disc, r)) continue;
            for (Int root : {r, Int(-r)}) {
                Int num = -t * y + root;
                if (!divides(2, num)) continue;
                Int x = exact_div(num, 2);
                if (!divides(lat.a(), x - lat.b() * k2)) continue;
                return FieldElem::make(dom, x, y) * inv_den;
            }
        }
        return std::nullopt;
    };
    for (long k = 0; k <= limit; ++k) {
        if (auto e = try_k2(k)) return e;
        if (k != 0)
            if (auto e = try_k2(-k)) return e;
    }
    if (dom.is_imaginary()) return std::nullopt;
    throw BoundExceeded("principal generator of " + u.to_string() + " undecided", bounds.principal);
}

/// Bezout over ideals: given s*U + q*V = D, returns (y, z) with y in U, z in V and s*y + q*z = 1;
/// z = 0 whenever 1 lies in s*U.
inline std::pair<FieldElem, FieldElem> ideal_bezout(const FieldElem& s, const FracIdeal& U, const FieldElem& q,
                                                    const FracIdeal& V) {
    const DomainSpec& dom = U.domain();
    // prefer z = 0 when s U already contains 1
    if (!s.is_zero() && U.contains(s.inverse())) return {s.inverse(), FieldElem(0).in(dom)};
    auto ug = U.generator_list();
    auto vg = V.generator_list();
    std::vector<FieldElem> gens;
    for (const auto& g : ug) gens.push_back(s * g);
    for (const auto& g : vg) gens.push_back(q * g);
    auto c = express_in_generators(dom, FieldElem(1).in(dom), gens);
    FieldElem y = 0, z = 0;
    for (std::size_t j = 0; j < ug.size(); ++j) y += c[j] * ug[j];
    for (std::size_t j = 0; j < vg.size(); ++j) z += c[ug.size() + j] * vg[j];
    return {y, z};
}

}  // namespace skewdd
