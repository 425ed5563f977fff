#pragma once

// Right ideals I of R = D((x;sigma)): the constant ideal, normalized
// generators, and the certificate (A, q) with q * g0 = g * A exhibiting
// I = q * (J R) for the constant ideal J.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skewdd/ideal.hpp"
#include "skewdd/lattice.hpp"
#include "skewdd/matrix.hpp"
#include "skewdd/series.hpp"

namespace skewdd {

/// extend() met an element s_n outside J * sigma^n(J): J is smaller than the
/// constant ideal. Carries the enlargement J + s_n * sigma^n(J)^-1 and elements
/// of I whose lowest coefficients generate that enlargement.
class ConstIdealUnderestimate : public Error {
public:
    ConstIdealUnderestimate(long order, FieldElem s, IdealLattice enlarged, std::vector<Series> witnesses)
        : Error("constant ideal underestimated at order " + std::to_string(order) + ": s = " + to_string(s) +
                ", enlarge to " + enlarged.to_string()),
          order_(order),
          s_(std::move(s)),
          enlarged_(std::move(enlarged)),
          witnesses_(std::move(witnesses)) {}

    long order() const { return order_; }
    const FieldElem& s() const { return s_; }
    const IdealLattice& enlarged() const { return enlarged_; }
    const std::vector<Series>& witnesses() const { return witnesses_; }

private:
    long order_;
    FieldElem s_;
    IdealLattice enlarged_;
    std::vector<Series> witnesses_;
};

struct AuditEntry {
    long n;
    FieldElem s;
    Mat2 c;
};

struct ExtensionCertificate {
    const DomainSpec* dom = nullptr;
    IdealLattice J = IdealLattice::unit(DomainSpec::integers());
    Row2 g0;
    SeriesRow g;
    SeriesMatrix A;
    Series q;
    long prec = 0;
    std::vector<AuditEntry> audit;
};

namespace detail {

/// g * x^-val(g), for a nonzero generator.
inline Series at_valuation_zero(const Series& f) {
    if (f.is_zero()) throw ZeroIdealError("zero generator");
    return f.shift(-f.val());
}

/// Z-lattice of coefficient vectors, orders [0, rows) of the window
/// combinations sum_j gens_j * (u * x^k), u in a Z-basis of D, k < width.
/// Rows are ordered by x-order, then (w, 1) coordinate.
struct Window {
    std::vector<IntVector> columns;
    struct Source {
        std::size_t gen;
        long k;
        FieldElem u;
    };
    std::vector<Source> sources;
};

inline Window build_window(const DomainSpec& dom, const std::vector<Series>& gens, long width, long rows) {
    Window w;
    std::vector<FieldElem> basis = {FieldElem(1).in(dom)};
    if (dom.is_quadratic()) basis.push_back(FieldElem::omega(dom));
    const std::size_t deg = static_cast<std::size_t>(dom.degree());
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (long k = 0; k < width; ++k)
            for (const auto& u : basis) {
                Series h = gens[j] * Series::monomial(u, k);
                IntVector col(deg * static_cast<std::size_t>(rows), 0);
                for (long m = 0; m < rows; ++m) {
                    FieldElem c = h.coefficient(m);
                    if (!c.is_integral()) throw DomainError("generator coefficients must lie in D");
                    IntVector cc = coords(dom, c);
                    for (std::size_t t = 0; t < deg; ++t) col[deg * static_cast<std::size_t>(m) + t] = cc[t];
                }
                w.columns.push_back(std::move(col));
                w.sources.push_back({j, k, u});
            }
    return w;
}

inline long min_relative_precision(const std::vector<Series>& gens) {
    long rel = kExact;
    for (const auto& g : gens) rel = std::min(rel, g.relative_precision());
    return rel;
}

}  // namespace detail

/// Lower bound for const(sum_j gens_j R): the ideal of lowest coefficients of
/// combinations inside growing windows, stopped once it is the unit ideal or
/// unchanged for `depth` consecutive windows.
inline IdealLattice constant_ideal_bounded(const DomainSpec& dom, const std::vector<Series>& gens, long depth) {
    if (depth < 1) throw DomainError("depth must be positive");
    std::vector<Series> g;
    for (const auto& f : gens)
        if (!f.is_zero()) g.push_back(detail::at_valuation_zero(f));
    if (g.empty()) throw ZeroIdealError("constant ideal of the zero ideal");
    long rel = detail::min_relative_precision(g);
    if (rel < depth) throw PrecisionError("generators are known to " + std::to_string(rel) + " orders, depth needs " + std::to_string(depth), depth - rel);

    const std::size_t deg = static_cast<std::size_t>(dom.degree());
    IdealLattice J = IdealLattice::zero(dom);
    long stable = 0;
    for (long N = 1; N <= rel; ++N) {
        detail::Window w = detail::build_window(dom, g, N, N);
        IntegerLattice lat(deg * static_cast<std::size_t>(N), w.columns);
        std::vector<FieldElem> lows;
        for (long e = 0; e < N; ++e)
            for (std::size_t t = 0; t < deg; ++t) {
                const IntVector* p = lat.pivot(deg * static_cast<std::size_t>(e) + t);
                if (!p) continue;
                std::size_t base = deg * static_cast<std::size_t>(e);
                if (dom.is_quadratic())
                    lows.push_back(FieldElem::make(dom, (*p)[base + 1], (*p)[base]));
                else
                    lows.push_back(FieldElem((*p)[base]).in(dom));
            }
        IdealLattice next = IdealLattice::from_integral(dom, lows);
        if (next.is_unit()) return next;
        stable = next == J ? stable + 1 : 0;
        J = next;
        if (stable >= depth) return J;
    }
    return J;
}

/// The ideal generated by the lowest coefficients of the generators.
inline IdealLattice lowest_coefficient_ideal(const DomainSpec& dom, const std::vector<Series>& gens) {
    std::vector<FieldElem> lows;
    for (const auto& f : gens)
        if (!f.is_zero()) lows.push_back(f.lowest());
    if (lows.empty()) throw ZeroIdealError("no nonzero generator");
    return IdealLattice::from_integral(dom, lows);
}

/// A normalized generator together with the right combination producing it:
/// f = (sum_j gens_j * h_j) * x^-shift.
struct Combination {
    Series f;
    std::vector<Series> h;
    long shift = 0;
};

/// For each target in two_generators(J), an explicit right R-combination of
/// the generators with valuation 0 and that lowest coefficient.
inline std::pair<SeriesRow, std::vector<Combination>> normalize_generators(const DomainSpec& dom, const IdealLattice& J,
                                                                           const std::vector<Series>& gens,
                                                                           long max_order = 64) {
    if (J.is_zero()) throw ZeroIdealError("normalize_generators with the zero ideal");
    std::vector<Series> g;
    std::vector<long> vals;
    for (const auto& f : gens)
        if (!f.is_zero()) {
            g.push_back(detail::at_valuation_zero(f));
            vals.push_back(f.val());
        }
    if (g.empty()) throw ZeroIdealError("no nonzero generator");
    long limit = std::min(max_order, detail::min_relative_precision(g));
    const std::size_t deg = static_cast<std::size_t>(dom.degree());
    auto [t1, t2] = J.two_generators();
    std::vector<Combination> combos;
    for (const FieldElem& target : {t1, t2}) {
        std::optional<Combination> found;
        for (long e = 0; e < limit && !found; ++e) {
            detail::Window w = detail::build_window(dom, g, e + 1, e + 1);
            IntegerLattice lat(deg * static_cast<std::size_t>(e + 1), w.columns);
            IntVector rhs(deg * static_cast<std::size_t>(e + 1), 0);
            IntVector tc = detail::coords(dom, target);
            for (std::size_t t = 0; t < deg; ++t) rhs[deg * static_cast<std::size_t>(e) + t] = tc[t];
            auto sol = lat.solve_short(rhs);
            if (!sol) continue;
            Combination c;
            c.shift = e;
            c.h.assign(g.size(), Series::zero());
            for (std::size_t s = 0; s < w.sources.size(); ++s) {
                if ((*sol)[s] == 0) continue;
                const auto& src = w.sources[s];
                c.h[src.gen] += Series::monomial(src.u * FieldElem((*sol)[s]), src.k);
            }
            Series f = Series::zero();
            for (std::size_t j = 0; j < g.size(); ++j)
                if (!c.h[j].is_zero()) f += g[j] * c.h[j];
            c.f = f.shift(-e);
            // h_j acts on the original generator: gens_j * x^-v_j * h_j = gens_j * (x^-v_j h_j)
            for (std::size_t j = 0; j < g.size(); ++j) c.h[j] = c.h[j].left_shift(-vals[j]);
            if (c.f.is_zero() || c.f.val() != 0 || c.f.lowest() != target)
                throw std::logic_error("normalize_generators produced a wrong lowest coefficient");
            found = std::move(c);
        }
        if (!found) throw MembershipError(to_string(target), "the lowest coefficients of the given generators within " + std::to_string(limit) + " orders");
        combos.push_back(std::move(*found));
    }
    return {series_row(combos[0].f.as_ring(), combos[1].f.as_ring()), combos};
}

/// Builds A (A_0 = Id, over D) and q (lowest coefficient 1) with
/// q * g0 = g * A through order prec, where g0 = lowest coefficients of g.
inline ExtensionCertificate extend(const DomainSpec& dom, const IdealLattice& J, const SeriesRow& g, long prec) {
    if (prec < 0) throw DomainError("negative precision");
    for (int j = 0; j < 2; ++j) {
        if (g(0, j).is_zero() || g(0, j).val() != 0) throw DomainError("generators must have valuation 0");
        if (!g(0, j).is_integral()) throw DomainError("generators must lie in R");
        if (g(0, j).known_to() <= prec)
            throw PrecisionError("generator " + std::to_string(j + 1) + " is known only to O(x^" +
                                     std::to_string(g(0, j).known_to()) + "), order " + std::to_string(prec) + " needed",
                                 prec + 1 - g(0, j).known_to());
    }
    ExtensionCertificate cert;
    cert.dom = &dom;
    cert.J = J;
    cert.g = g;
    cert.g0 = coeff(g, 0);
    cert.prec = prec;
    const FieldElem a1 = cert.g0(0, 0), a2 = cert.g0(0, 1);
    if (IdealLattice::from_integral(dom, {a1, a2}) != J)
        throw DomainError("lowest coefficients " + to_string(cert.g0) + " do not generate " + J.to_string());
    const FracIdeal Jf(J);

    std::vector<Row2> gi;
    for (long i = 0; i <= prec; ++i) gi.push_back(coeff(g, i));
    std::vector<Mat2> A = {identity2()};
    std::vector<FieldElem> q = {FieldElem(1)};
    for (long n = 1; n <= prec; ++n) {
        const Col2 gperp_n = sigma_apply(perp(cert.g0), n);
        Row2 acc = row2(0, 0);
        for (long i = 1; i <= n; ++i) acc = acc + gi[i] * sigma_apply(A[n - i], i);
        const FieldElem s = (acc * gperp_n)(0, 0);
        Coeff2x2 c;
        try {
            c = express_in_product(dom, s, {a1, a2}, {gperp_n(0, 0), gperp_n(1, 0)});
        } catch (const MembershipError&) {
            FracIdeal sigmaJinv = inverse(Jf.sigma(n));
            FracIdeal bigger = sum(Jf, sigmaJinv.scaled(s));
            if (!bigger.is_integral()) throw std::logic_error("enlarged constant ideal is not integral");
            // g * (A mod x^n) * (g0^perp * y) * x^-n has lowest coefficient s * sigma^n(y)
            std::vector<Mat2> head(A.begin(), A.end());
            SeriesMatrix Ahead = from_coefficients(0, head, kExact);
            std::vector<Series> witnesses;
            for (const auto& y : sigmaJinv.sigma(n).generator_list()) {
                Col2 u = scale(y, perp(cert.g0));
                Series wit = (g * Ahead * lift(u))(0, 0).shift(-n);
                witnesses.push_back(wit.as_ring());
            }
            throw ConstIdealUnderestimate(n, s, bigger.lattice(), std::move(witnesses));
        }
        Mat2 An = mat2(-c[0][0], -c[0][1], -c[1][0], -c[1][1]);
        A.push_back(An);
        Row2 r = acc + gi[0] * An;
        const FieldElem sa1 = sigma_apply(a1, n), sa2 = sigma_apply(a2, n);
        FieldElem qn = !sa1.is_zero() ? r(0, 0) / sa1 : r(0, 1) / sa2;
        if (r(0, 0) != qn * sa1 || r(0, 1) != qn * sa2)
            throw std::logic_error("extend: both components of sigma^n(g0) must give the same q_" + std::to_string(n));
        q.push_back(qn);
        Mat2 cm = mat2(c[0][0], c[0][1], c[1][0], c[1][1]);
        cert.audit.push_back({n, s, cm});
    }
    cert.A = from_coefficients(0, A, prec + 1);
    for (int r = 0; r < 2; ++r)
        for (int cidx = 0; cidx < 2; ++cidx) cert.A(r, cidx) = cert.A(r, cidx).as_ring();
    cert.q = Series(0, q, prec + 1);
    cert.g = truncate(g, prec + 1);
    return cert;
}

struct VerifyReport {
    bool pass = true;
    std::optional<long> first_bad_order;
    std::string message;

    void fail(std::optional<long> order, const std::string& why) {
        if (!pass) return;
        pass = false;
        first_bad_order = order;
        message = why;
    }
};

/// Independent re-check of q * g0 = g * A through order `through`
/// (defaults to the certificate's precision).
inline VerifyReport verify_extension_certificate(const ExtensionCertificate& cert, std::optional<long> through = {}) {
    VerifyReport rep;
    const long N = through ? *through : cert.prec;
    if (!cert.dom) {
        rep.fail({}, "no domain");
        return rep;
    }
    const DomainSpec& dom = *cert.dom;
    if (N > cert.prec) rep.fail({}, "requested order beyond the certified precision");
    try {
        if (IdealLattice::from_integral(dom, {cert.g0(0, 0), cert.g0(0, 1)}) != cert.J)
            rep.fail(0, "g0 does not generate J");
        for (int j = 0; j < 2; ++j) {
            const Series& f = cert.g(0, j);
            if (f.known_to() <= N) rep.fail({}, "g is not known through the certified order");
            if (f.coefficient(0) != cert.g0(0, j) || (f.is_zero() || f.val() != 0)) rep.fail(0, "lowest coefficients of g differ from g0");
            for (long k = 0; k <= N && k < f.known_to(); ++k)
                if (!f.coefficient(k).is_integral()) rep.fail(k, "g has a coefficient outside D");
        }
        if (cert.q.known_to() <= N || known_to(cert.A) <= N) rep.fail({}, "q or A not known through the certified order");
        if (cert.q.is_zero() || cert.q.val() != 0 || cert.q.lowest() != FieldElem(1)) rep.fail(0, "lowest(q) != 1");
        if (!(coeff(cert.A, 0) == identity2())) rep.fail(0, "A_0 != Id");
        for (long k = 0; k <= N; ++k) {
            Mat2 Ak = coeff(cert.A, k);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    if (!Ak(r, c).is_integral()) rep.fail(k, "A has a coefficient outside D");
        }
        // fresh recomputation, coefficient by coefficient
        for (long k = 0; k <= N && rep.pass; ++k) {
            Row2 lhs = scale(cert.q.coefficient(k), sigma_apply(cert.g0, k));
            Row2 rhs = row2(0, 0);
            for (long i = 0; i <= k; ++i) rhs = rhs + coeff(cert.g, i) * sigma_apply(coeff(cert.A, k - i), i);
            if (!(lhs == rhs)) rep.fail(k, "q*g0 != g*A at order " + std::to_string(k));
        }
        // the audit trail: s_n and the coefficients c with A_n = -c
        if (static_cast<long>(cert.audit.size()) != cert.prec) rep.fail({}, "audit length differs from the precision");
        for (std::size_t idx = 0; idx < cert.audit.size() && rep.pass; ++idx) {
            const AuditEntry& e = cert.audit[idx];
            const long n = static_cast<long>(idx) + 1;
            if (e.n != n) {
                rep.fail(n, "audit entries out of order");
                break;
            }
            Row2 acc = row2(0, 0);
            for (long i = 1; i <= n; ++i) acc = acc + coeff(cert.g, i) * sigma_apply(coeff(cert.A, n - i), i);
            FieldElem s = (acc * sigma_apply(perp(cert.g0), n))(0, 0);
            if (s != e.s) rep.fail(n, "audit s_n differs from the recomputed value");
            if (!(-e.c == coeff(cert.A, n))) rep.fail(n, "audit coefficients differ from -A_n");
        }
    } catch (const Error& e) {
        rep.fail({}, e.what());
    }
    return rep;
}

/// Result of the repair loop: certificate, number of enlargements, and the
/// sequence of constant ideals tried.
struct ExtensionRun {
    ExtensionCertificate cert;
    int repairs = 0;
    std::vector<IdealLattice> history;
};

/// extend() around ConstIdealUnderestimate: restart with the enlarged ideal,
/// adding the witnesses to the generator pool. Starts from `start` if given,
/// else from the ideal of lowest coefficients of the generators.
inline ExtensionRun extend_with_repairs(const DomainSpec& dom, const std::vector<Series>& gens, long prec,
                                        std::optional<IdealLattice> start = {}, int max_repairs = 64) {
    std::vector<Series> pool;
    for (const auto& f : gens)
        if (!f.is_zero()) pool.push_back(f.as_ring());
    if (pool.empty()) throw ZeroIdealError("no nonzero generator");
    ExtensionRun run;
    IdealLattice J = start ? *start : lowest_coefficient_ideal(dom, pool);
    for (;;) {
        run.history.push_back(J);
        auto [g, combos] = normalize_generators(dom, J, pool);
        try {
            run.cert = extend(dom, J, g, prec);
            return run;
        } catch (const ConstIdealUnderestimate& e) {
            if (++run.repairs > max_repairs) throw;
            if (!(e.enlarged().index() < J.index())) throw std::logic_error("repair did not enlarge the ideal");
            J = e.enlarged();
            for (const auto& w : e.witnesses())
                if (!w.is_zero()) pool.push_back(w);
        }
    }
}

}  // namespace skewdd
