#pragma once

// Executable witnesses for the structure of R = D((x;sigma)): simplicity,
// two-sided inverses, the stable-rank-2 row, and K0.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "skewdd/class_group.hpp"
#include "skewdd/completion.hpp"
#include "skewdd/ideal.hpp"
#include "skewdd/series.hpp"

namespace skewdd {

enum class Simplicity { non_simple, inconclusive };

struct SimplicityVerdict {
    Simplicity verdict = Simplicity::inconclusive;
    std::optional<IdealLattice> witness;
    std::vector<IdealLattice> tested;
};

/// Ideals (p, w - r) over the ramified primes p | disc, r a root of the
/// minimal polynomial of w mod p; (2) over Z.
inline std::vector<IdealLattice> default_candidates(const DomainSpec& dom) {
    if (!dom.is_quadratic()) return {IdealLattice::from_integral(dom, {FieldElem(2)})};
    std::vector<IdealLattice> out;
    long disc = dom.discriminant();
    long m = disc < 0 ? -disc : disc;
    const long t = dom.omega_trace(), nrm = dom.omega_norm();
    for (long p = 2; p <= m; ++p) {
        if (m % p) continue;
        bool prime = true;
        for (long d = 2; d * d <= p; ++d)
            if (p % d == 0) prime = false;
        if (!prime) continue;
        for (long r = 0; r < p; ++r)
            if (((r * r - t * r + nrm) % p + p) % p == 0) {
                out.push_back(IdealLattice::from_integral(dom, {FieldElem(p), FieldElem::make(dom, -r, 1)}));
                break;
            }
    }
    return out;
}

/// NonSimple once some candidate J has sigma(J) = J (then J R is a proper
/// two-sided ideal: x * J R = sigma(J) x R = J R). Over sigma = id every
/// proper ideal is a witness.
inline SimplicityVerdict simplicity_probe(const DomainSpec& dom, std::vector<IdealLattice> candidates = {}) {
    if (candidates.empty()) candidates = default_candidates(dom);
    SimplicityVerdict v;
    for (const auto& c : candidates) {
        if (c.is_zero() || c.is_unit()) throw DomainError("simplicity candidates must be nonzero proper ideals");
        v.tested.push_back(c);
        const IdealLattice sc = c.sigma(1);
        if (!(sc == c)) continue;
        auto [g1, g2] = c.two_generators();
        if (!c.contains(sigma_apply(g1, 1)) || !c.contains(sigma_apply(g2, 1)))
            throw std::logic_error("sigma(J) = J but sigma moves a generator out of J");
        v.verdict = Simplicity::non_simple;
        v.witness = c;
        return v;
    }
    return v;
}

/// J^-1 for a sigma-stable J, with J J^-1 = D checked.
inline FracIdeal asano_inverse(const IdealLattice& J) {
    if (J.is_zero()) throw ZeroIdealError("asano_inverse of the zero ideal");
    if (!(J.sigma(1) == J)) throw NotTwoSided(J.to_string() + " is not sigma-stable, so J R is not two-sided");
    FracIdeal inv = inverse(FracIdeal(J));
    if (!(FracIdeal(J) * inv).is_unit()) throw std::logic_error("J J^-1 != D");
    return inv;
}

struct StableRankSample {
    Series r;
    FieldElem lowest;
    FieldElem predicted;
};

struct StableRankReport {
    FieldElem a;
    FieldElem b;
    SeriesRow row;        // (a + x, a^2 + b x)
    Series combination;   // (a + x) a - (a^2 + b x)
    bool identity_holds = false;
    std::vector<StableRankSample> samples;
    bool all_non_units = false;
};

/// The row (a + x, a^2 + b x), b = 1 + sigma(a): unimodular since
/// (a + x) a - (a^2 + b x) = -x, yet no r makes (a + x) + (a^2 + b x) r a unit.
inline StableRankReport stable_rank_witness(const DomainSpec& dom, const FieldElem& a, long samples, std::uint64_t seed = 0x5eed,
                                            long coefficient = 20) {
    if (!a.is_integral()) throw DomainError("a must lie in D");
    if (a.is_zero()) throw DomainError("a must be nonzero");
    if (is_unit(dom, a)) throw DomainError(to_string(a) + " is a unit");
    StableRankReport rep;
    rep.a = a.in(dom);
    rep.b = FieldElem(1).in(dom) + sigma_apply(rep.a, 1);
    const Series xs = Series::x();
    const Series f = Series::constant(rep.a) + xs;
    const Series g = Series::constant(rep.a * rep.a) + Series::monomial(rep.b, 1);
    rep.row = series_row(f, g);
    rep.combination = f * rep.a - g;
    rep.identity_holds = rep.combination == -xs;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> val(-3, 3);
    std::uniform_int_distribution<long> len(1, 4);
    std::uniform_int_distribution<long> coef(-coefficient, coefficient);
    auto random_elem = [&](bool nonzero) {
        for (;;) {
            FieldElem e = dom.is_quadratic() ? FieldElem::make(dom, coef(rng), coef(rng)) : FieldElem(coef(rng)).in(dom);
            if (!nonzero || !e.is_zero()) return e;
        }
    };
    rep.all_non_units = true;
    for (long s = 0; s < samples; ++s) {
        const long k = val(rng);
        std::vector<FieldElem> c{random_elem(true)};
        for (long j = 1, m = len(rng); j < m; ++j) c.push_back(random_elem(false));
        Series r(k, c);
        Series h = f + g * r;
        // case split on the valuation of r
        const FieldElem rk = r.lowest();
        FieldElem predicted = k < 0 ? rep.a * rep.a * rk : k == 0 ? rep.a + rep.a * rep.a * rk : rep.a;
        FieldElem low = h.is_zero() ? FieldElem(0) : h.lowest();
        long hv = h.is_zero() ? kExact : h.val();
        if (hv != std::min(k, 0L) || low != predicted) throw std::logic_error("lowest coefficient differs from the case formula");
        if (low.is_zero() || is_unit(dom, low)) rep.all_non_units = false;
        rep.samples.push_back({r, low, predicted});
    }
    return rep;
}

struct GroupStructure {
    std::vector<long> invariants;  // cyclic factor orders, each dividing the next
};

/// Invariant factors of the finite abelian group given by a Cayley table.
inline GroupStructure group_structure(const ClassGroup& cg) {
    const std::size_t h = cg.class_number();
    const auto& tab = cg.table();
    auto order = [&](std::size_t g) {
        long k = 1;
        for (std::size_t x = g; x != cg.identity(); x = tab[x][g]) ++k;
        return k;
    };
    // count elements of each order, then peel off p-primary invariants
    std::vector<long> ords(h);
    for (std::size_t g = 0; g < h; ++g) ords[g] = order(g);
    std::vector<long> primes;
    long m = static_cast<long>(h);
    for (long p = 2; p <= m; ++p)
        if (m % p == 0) {
            primes.push_back(p);
            while (m % p == 0) m /= p;
        }
    // for each p: number of elements killed by p^j gives the partition
    std::vector<std::vector<long>> pparts;
    for (long p : primes) {
        // killed[j] = #{g : g^(p^j) = 1}, grown until it reaches the p-Sylow order
        std::vector<long> killed{1};
        for (long pj = p;; pj *= p) {
            long c = 0;
            for (long o : ords)
                if (pj % o == 0) ++c;
            if (c == killed.back()) break;
            killed.push_back(c);
        }
        // number of cyclic factors of order >= p^j is log_p(killed[j] / killed[j-1])
        std::vector<long> ge;
        for (std::size_t j = 1; j < killed.size(); ++j) {
            long ratio = killed[j] / killed[j - 1], e = 0;
            while (ratio > 1) {
                ratio /= p;
                ++e;
            }
            ge.push_back(e);
        }
        std::vector<long> parts;  // exponents, descending
        for (std::size_t j = 0; j < ge.size(); ++j) {
            long exactly = ge[j] - (j + 1 < ge.size() ? ge[j + 1] : 0);
            long pw = 1;
            for (std::size_t i = 0; i <= j; ++i) pw *= p;
            for (long c = 0; c < exactly; ++c) parts.push_back(pw);
        }
        std::sort(parts.rbegin(), parts.rend());
        pparts.push_back(parts);
    }
    std::size_t width = 0;
    for (const auto& pp : pparts) width = std::max(width, pp.size());
    std::vector<long> inv(width, 1);
    for (const auto& pp : pparts)
        for (std::size_t i = 0; i < pp.size(); ++i) inv[width - 1 - i] *= pp[i];
    return GroupStructure{inv};
}

inline std::string group_text(const GroupStructure& g) {
    if (g.invariants.empty()) return "0";
    std::string out;
    for (long n : g.invariants) out += (out.empty() ? "" : " ⊕ ") + std::string("ℤ/") + std::to_string(n);
    return out;
}

struct K0Report {
    const DomainSpec* dom = nullptr;
    std::size_t h = 0;
    bool sigma_trivial = false;
    GroupStructure group;
    std::optional<FracIdeal> witness;            // nonprincipal, h > 1
    bool witness_iso_absent = false;             // extended_ideal_iso(witness, D) is absent
    std::string conclusion;
};

inline K0Report k0_report(const DomainSpec& dom) {
    const ClassGroup& cg = class_group(dom);
    K0Report rep;
    rep.dom = &dom;
    rep.h = cg.class_number();
    rep.sigma_trivial = sigma_acts_trivially(dom);
    rep.group = group_structure(cg);
    if (rep.h > 1) {
        rep.witness = ideal_of(dom, cg.forms()[1]);
        rep.witness_iso_absent = !extended_ideal_iso(*rep.witness, FracIdeal::unit(dom)).has_value();
    }
    if (!rep.sigma_trivial) {
        rep.conclusion = "sigma acts non-trivially on G(D); K₀(R) ≅ K₀(D) is not established";
    } else if (rep.h == 1) {
        rep.conclusion = "K₀(R) ≅ ℤ";
    } else {
        std::string g = group_text(rep.group);
        rep.conclusion = "G(R) ≅ " + g + ", K₀(R) ≅ ℤ ⊕ " + g;
    }
    return rep;
}

}  // namespace skewdd
