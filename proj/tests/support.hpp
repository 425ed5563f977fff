#pragma once

// Domain instances and random generators shared by the test binaries.

#include <cctype>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "skewdd.hpp"

namespace skewdd {
// readable test parameters in test names
inline void PrintTo(const DomainSpec* dom, std::ostream* os) { *os << dom->name(); }
}  // namespace skewdd

namespace testing_support {

using namespace skewdd;

/// The five instances named by the acceptance criteria.
inline std::vector<const DomainSpec*> core_domains() {
    return {&DomainSpec::integers(), &DomainSpec::quadratic(-5, Sigma::identity),
            &DomainSpec::quadratic(-5, Sigma::conjugation), &DomainSpec::quadratic(-1, Sigma::conjugation),
            &DomainSpec::quadratic(2, Sigma::conjugation)};
}

/// Core instances plus orders with w = (1 + sqrt(d))/2 and a real one with w = sqrt(3).
inline std::vector<const DomainSpec*> wide_domains() {
    auto v = core_domains();
    v.push_back(&DomainSpec::quadratic(-3, Sigma::conjugation));
    v.push_back(&DomainSpec::quadratic(-15, Sigma::identity));
    v.push_back(&DomainSpec::quadratic(5, Sigma::conjugation));
    v.push_back(&DomainSpec::quadratic(3, Sigma::identity));
    return v;
}

/// Nonempty-safe name for parameterized test labels.
inline std::string label(const DomainSpec& dom) {
    std::string s = dom.name();
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    return s;
}

inline FieldElem random_elem(const DomainSpec& dom, std::mt19937_64& rng, long bound, bool nonzero = true) {
    std::uniform_int_distribution<long> c(-bound, bound);
    for (;;) {
        FieldElem e = dom.is_quadratic() ? FieldElem::make(dom, c(rng), c(rng)) : FieldElem(c(rng)).in(dom);
        if (!nonzero || !e.is_zero()) return e;
    }
}

/// Nonzero fractional ideal (e1, e2) / den.
inline FracIdeal random_frac_ideal(const DomainSpec& dom, std::mt19937_64& rng, long bound = 12) {
    std::uniform_int_distribution<long> den(1, 6);
    FracIdeal u = FracIdeal::from_generators(dom, {random_elem(dom, rng, bound), random_elem(dom, rng, bound, false)});
    return u.scaled(FieldElem(1).in(dom) / FieldElem(den(rng)).in(dom));
}

inline IdealLattice random_integral_ideal(const DomainSpec& dom, std::mt19937_64& rng, long bound = 8) {
    return IdealLattice::from_integral(dom, {random_elem(dom, rng, bound), random_elem(dom, rng, bound, false)});
}

/// Exact Laurent polynomial with `terms` coefficients from val on.
inline Series random_series(const DomainSpec& dom, std::mt19937_64& rng, long val, long terms, long bound = 5) {
    std::vector<FieldElem> c{random_elem(dom, rng, bound)};
    for (long i = 1; i < terms; ++i) c.push_back(random_elem(dom, rng, bound, false));
    return Series(val, c);
}

/// Polynomial unit of R with lowest coefficient 1.
inline Series random_unit_series(const DomainSpec& dom, std::mt19937_64& rng, long terms, long bound = 3) {
    std::vector<FieldElem> c{FieldElem(1).in(dom)};
    for (long i = 1; i < terms; ++i) c.push_back(random_elem(dom, rng, bound, false));
    return Series(0, c).as_ring();
}

/// g = (U g0_1 V_1, U g0_2 V_2): left unit U, right units V_j, g0 generating J.
struct ExtensionInput {
    IdealLattice J = IdealLattice::unit(DomainSpec::integers());
    SeriesRow g;
};

/// g = U (a1, a2), times independent right units V_j when right_units is set.
inline ExtensionInput random_extension_input(const DomainSpec& dom, std::mt19937_64& rng, long terms = 5,
                                             bool right_units = true) {
    ExtensionInput in;
    FieldElem a1 = random_elem(dom, rng, 6), a2 = random_elem(dom, rng, 6);
    in.J = IdealLattice::from_integral(dom, {a1, a2});
    Series U = random_unit_series(dom, rng, terms);
    Series g1 = U * Series::constant(a1), g2 = U * Series::constant(a2);
    if (right_units) {
        g1 = g1 * random_unit_series(dom, rng, terms);
        g2 = g2 * random_unit_series(dom, rng, terms);
    }
    in.g = series_row(g1.as_ring(), g2.as_ring());
    return in;
}

/// An ideal J per core instance for completion tests: non-principal or
/// sigma-moved where the instance allows.
inline IdealLattice completion_ideal(const DomainSpec& dom) {
    if (!dom.is_quadratic()) return IdealLattice::from_integral(dom, {FieldElem(2)});
    if (dom.d() == -5) return IdealLattice::from_integral(dom, {FieldElem(2), FieldElem::make(dom, 1, 1)});
    if (dom.d() == -1) return IdealLattice::from_integral(dom, {FieldElem::make(dom, 2, 1)});
    return IdealLattice::from_integral(dom, {FieldElem(7), FieldElem::make(dom, 3, 1)});
}

}  // namespace testing_support
