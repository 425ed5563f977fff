#pragma once

// Completion of unimodular rows over the idealized ring
// [[R, I^-1], [I, I I^-1]] with I = J R: reduction a -> a~ one level down,
// the n = 0 base case, the lift back up, and the final inversion.

#include <algorithm>
#include <climits>
#include <type_traits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "skewdd/class_group.hpp"
#include "skewdd/extension.hpp"
#include "skewdd/ideal.hpp"
#include "skewdd/matrix.hpp"
#include "skewdd/series.hpp"

namespace skewdd {

/// Row a whose coefficient i lies in [sigma^i(A^-1), sigma^i(J^-1 A)].
struct ShapedRow {
    SeriesRow a;
    IdealLattice J = IdealLattice::unit(DomainSpec::integers());
    FracIdeal A = FracIdeal::unit(DomainSpec::integers());
};

/// Data fixed at one reduction step.
struct CompletionLevel {
    long n = 0;
    FracIdeal A = FracIdeal::unit(DomainSpec::integers());
    FracIdeal B = FracIdeal::unit(DomainSpec::integers());
    Row2 abar0;
    FieldElem lambda;
    FieldElem mu;
};

/// n-invertibility data: [a; b] * T vanishes below order n with lowest matrix H_n.
struct Invertibility {
    long n = 0;
    SeriesRow b;
    SeriesMatrix T;
    Mat2 Hn;
};

struct CompletionCertificate {
    const DomainSpec* dom = nullptr;
    IdealLattice J = IdealLattice::unit(DomainSpec::integers());
    SeriesRow row;
    SeriesCol witness;
    long shift = 0;  // valuation k of the row; the engine works with x^-k * row
    long n = 0;
    SeriesRow b;
    SeriesMatrix T;
    Mat2 Hn;
    SeriesMatrix final_matrix;
    SeriesMatrix final_inverse;
    long prec = 0;
    std::vector<CompletionLevel> levels;
};

namespace detail {

inline long last_order(const Series& s) { return s.is_zero() ? LONG_MIN / 4 : s.end_order() - 1; }

template <int R, int C>
long last_order(const Matrix<Series, R, C>& m) {
    long out = LONG_MIN / 4;
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) out = std::max(out, last_order(m.e[r][c]));
    return out;
}

template <int R, int C>
long first_order(const Matrix<Series, R, C>& m) {
    long v = valuation(m);
    return v >= kExact ? 0 : v;
}

template <int R, int C>
void require_shape(const DomainSpec& dom, const Matrix<Series, R, C>& m, const std::type_identity_t<Shape<R, C>>& shape,
                   const std::string& what) {
    if (auto bad = shape_violation(dom, m, shape, first_order(m), last_order(m)))
        throw MembershipError(what + " coefficient of x^" + std::to_string(*bad), "its shape lattice");
}

inline EntryShape fixed(const FracIdeal& f) { return EntryShape{f, std::nullopt}; }
inline EntryShape twisted(const FracIdeal& f, const FracIdeal& t) { return EntryShape{f, t}; }

/// c * r as a 2x2 matrix, c a constant column acting by left scalars.
inline SeriesMatrix outer(const Col2& c, const SeriesRow& r) {
    return series_mat(c(0, 0) * r(0, 0), c(0, 0) * r(0, 1), c(1, 0) * r(0, 0), c(1, 0) * r(0, 1));
}

/// Series times a constant row, coefficient i meeting sigma^i(row).
inline SeriesRow times_row(const Series& s, const Row2& r) { return series_row(s * r(0, 0), s * r(0, 1)); }

template <int R, int C>
Matrix<Series, R, C> left_scale(const FieldElem& e, const Matrix<Series, R, C>& m) {
    return scale(e, m);
}

template <int R, int C>
Matrix<Series, R, C> exact_prefix(const Matrix<Series, R, C>& m, long order) {
    return polynomial(truncate(m, order));
}

/// Generator of num * den^-1, which must be principal; 1 for the unit ideal.
/// Over real quadratic orders the two integral ideals are searched separately,
/// which keeps the norms small.
inline FieldElem required_generator(const FracIdeal& num, const FracIdeal& den, const std::string& name,
                                    const SearchBounds& bounds) {
    const FracIdeal u = num * inverse(den);
    if (u.is_unit()) return FieldElem(1).in(u.domain());
    try {
        if (u.domain().is_real_quadratic()) {
            auto gn = principal_generator(num, bounds);
            auto gd = principal_generator(den, bounds);
            if (gn && gd) {
                FieldElem g = *gn / *gd;
                if (FracIdeal::from_generators(u.domain(), {g}) == u) return g;
            }
        }
        if (auto g = principal_generator(u, bounds)) return *g;
    } catch (const BoundExceeded& e) {
        throw SigmaClassObstruction(name + " = " + u.to_string() + ": " + e.what());
    }
    throw SigmaClassObstruction(name + " = " + u.to_string() + " is not principal");
}

/// Coefficients of a 1x1 product at orders [from, through] against c * x^m.
inline std::optional<long> monomial_mismatch(const Series& p, long m, long from, long through) {
    for (long k = from; k <= through && k < p.known_to(); ++k) {
        FieldElem want = k == m ? FieldElem(1) : FieldElem(0);
        if (p.coefficient(k) != want) return k;
    }
    return std::nullopt;
}

}  // namespace detail

/// Shapes relative to (J, A).
struct CompletionShapes {
    Shape<1, 2> row;
    Shape<2, 1> witness;
    Shape<1, 2> b;
    Shape<2, 2> T;
};

inline CompletionShapes completion_shapes(const IdealLattice& J, const FracIdeal& A) {
    const FracIdeal Jf(J);
    const FracIdeal Jinv = inverse(Jf);
    const FracIdeal Ainv = inverse(A);
    const FracIdeal unit = FracIdeal::unit(J.domain());
    CompletionShapes s;
    s.row = {{{detail::twisted(unit, Ainv), detail::twisted(unit, Jinv * A)}}};
    s.witness = {{{detail::fixed(A)}, {detail::fixed(Jf * Ainv)}}};
    s.b = {{{detail::twisted(Jf, Ainv), detail::twisted(Jf, Jinv * A)}}};
    s.T = {{{detail::fixed(A), detail::twisted(A, Jinv)}, {detail::fixed(Jf * Ainv), detail::twisted(Jf * Ainv, Jinv)}}};
    return s;
}

/// Normalized row x^-k a (valuation 0) and k.
inline std::pair<SeriesRow, long> normalize_row(const SeriesRow& a) {
    long k = valuation(a);
    if (k >= kExact) throw ZeroIdealError("zero row");
    return {series_row(a(0, 0).left_shift(-k), a(0, 1).left_shift(-k)), k};
}

/// n = max(0, -val t) and t x^n, after checking a t == 1 and the shapes.
inline std::pair<long, SeriesCol> check_unimodular(const ShapedRow& row, const SeriesCol& t) {
    const DomainSpec& dom = row.J.domain();
    if (valuation(row.a) != 0) throw DomainError("check_unimodular expects a row of valuation 0");
    Series p = (row.a * t)(0, 0);
    const long top = p.is_exact() ? std::max(detail::last_order(p), 0L) : p.known_to() - 1;
    if (p.known_to() <= 0) throw PrecisionError("a * t is not known at order 0", 1 - p.known_to());
    if (auto bad = detail::monomial_mismatch(p, 0, std::min(p.val(), 0L), top))
        throw NotUnimodular("a * t differs from 1 at order " + std::to_string(*bad));
    CompletionShapes shapes = completion_shapes(row.J, row.A);
    detail::require_shape(dom, row.a, shapes.row, "row");
    long vt = valuation(t);
    long n = vt >= kExact ? 0 : std::max(0L, -vt);
    SeriesCol tn = shift(t, n);
    detail::require_shape(dom, tn, shapes.witness, "witness");
    return {n, tn};
}

struct Reduction {
    ShapedRow row;
    SeriesCol witness;
    CompletionLevel level;
};

/// One level down: a at level n w.r.t. A becomes a~ at level n-1 w.r.t. B.
/// Row and witness are polynomials correct through order n.
inline Reduction reduce_row(const ShapedRow& row, const SeriesCol& t, long n, const SearchBounds& bounds = {}) {
    if (n < 1) throw DomainError("reduce_row needs n >= 1");
    const DomainSpec& dom = row.J.domain();
    const FracIdeal Jf(row.J);
    const FracIdeal& A = row.A;
    const FracIdeal Ainv = inverse(A);
    const Row2 a0 = coeff(row.a, 0);
    const FieldElem s = a0(0, 0), q = a0(0, 1);

    FracIdeal B = sum(A.scaled(s), (Jf * Ainv).scaled(q));
    if (B.is_zero()) throw DomainError("lowest coefficient of the row vanishes");
    FracIdeal Binv = inverse(B);
    auto [y, z] = ideal_bezout(s, A * Binv, q, Jf * Ainv * Binv);
    const Row2 abar0 = row2(-z, y);
    if (s * abar0(0, 1) - q * abar0(0, 0) != FieldElem(1)) throw std::logic_error("det[a0; abar0] != 1");
    const FieldElem lambda = detail::required_generator(Jf * B.sigma(1), B * Jf.sigma(1), "lambda", bounds);
    const FieldElem lambda_inv = lambda.inverse();

    const Series& a1 = row.a(0, 0);
    const Series& a2 = row.a(0, 1);
    Series alpha = a1 * abar0(0, 1) - a2 * abar0(0, 0);
    Series alphabar = a1 * q - a2 * s;
    if (alphabar.coefficient(0) != FieldElem(0) || alpha.coefficient(0) != FieldElem(1))
        throw std::logic_error("reduce_row: lowest coefficients of the transformed row");
    const Series& t1 = t(0, 0);
    const Series& t2 = t(1, 0);
    Series tbar = s * t1 + q * t2;
    if (tbar.coefficient(0) != FieldElem(0)) throw std::logic_error("reduce_row: witness has nonzero a0*t0");
    Series tsc = -(abar0(0, 0) * t1 + abar0(0, 1) * t2);

    Reduction red;
    red.row.J = row.J;
    red.row.A = B;
    red.row.a = detail::exact_prefix(series_row(alpha, alphabar.shift(-1) * lambda_inv), n);
    red.witness = detail::exact_prefix(series_col(tbar.shift(-1), lambda * tsc.sigma(1)), n);
    red.level = CompletionLevel{n, A, B, abar0, lambda, FieldElem(1)};

    Series p = (red.row.a * red.witness)(0, 0);
    if (auto bad = detail::monomial_mismatch(p, n - 1, std::min(p.val(), 0L), n - 1))
        throw std::logic_error("reduce_row: a~ t~ differs from x^" + std::to_string(n - 1) + " at order " + std::to_string(*bad));
    CompletionShapes shapes = completion_shapes(row.J, B);
    detail::require_shape(dom, red.row.a, shapes.row, "reduced row");
    detail::require_shape(dom, red.witness, shapes.witness, "reduced witness");
    return red;
}

/// n = 0: T0 = [[a', b], [-s q, p]] with det 1 and b-row (-t0_2, t0_1).
inline Invertibility base_case_invert(const ShapedRow& row, const SeriesCol& t, const SearchBounds& bounds = {}) {
    const DomainSpec& dom = row.J.domain();
    const Row2 a0 = coeff(row.a, 0);
    const FieldElem t01 = t(0, 0).coefficient(0), t02 = t(1, 0).coefficient(0);
    if (a0(0, 0) * t01 + a0(0, 1) * t02 != FieldElem(1)) throw NotUnimodular("a0 * t0 != 1 in the base case");
    if (!row.A.is_integral()) throw DomainError("base case needs an integral ideal A");
    const FracIdeal Ainv = inverse(row.A);
    const FieldElem s = FracIdeal(row.J).generator_list().front();
    const FieldElem bA = row.A.generator_list().front();
    const FieldElem sb = s * bA;
    const FieldElem ap = one_and_half_generator(row.A.lattice(), sb, bounds);
    auto [p, q] = ideal_bezout(ap, Ainv, sb, Ainv);
    Mat2 T0 = mat2(ap, bA, -(s * q), p);
    if (det(T0) != FieldElem(1)) throw std::logic_error("det T0 != 1");
    Invertibility inv;
    inv.n = 0;
    inv.b = series_row(Series::constant(-t02), Series::constant(t01));
    inv.T = lift(T0);
    inv.Hn = coeff(series_mat(row.a(0, 0), row.a(0, 1), inv.b(0, 0), inv.b(0, 1)) * inv.T, 0);
    if (det(inv.Hn) != FieldElem(1)) throw std::logic_error("det H0 != 1");
    CompletionShapes shapes = completion_shapes(row.J, row.A);
    detail::require_shape(dom, inv.b, shapes.b, "b");
    detail::require_shape(dom, inv.T, shapes.T, "T");
    return inv;
}

/// Checks [a; b] T: zero below order n, H_n at order n, det(H_n) generating
/// J sigma^n(J^-1). Returns a description of the first failure.
inline std::optional<std::pair<long, std::string>> invertibility_defect(const SeriesRow& a, const SeriesRow& b,
                                                                        const SeriesMatrix& T, long n, const Mat2& Hn,
                                                                        const IdealLattice& J) {
    const DomainSpec& dom = J.domain();
    SeriesMatrix P = series_mat(a(0, 0), a(0, 1), b(0, 0), b(0, 1)) * T;
    long from = std::min(detail::first_order(P), n);
    for (long k = from; k <= n; ++k) {
        if (k >= known_to(P)) return std::make_pair(k, std::string("[a; b] T not known at this order"));
        Mat2 Pk = coeff(P, k);
        Mat2 want = k == n ? Hn : mat2(0, 0, 0, 0);
        if (!(Pk == want)) return std::make_pair(k, std::string(k == n ? "lowest matrix differs from H_n" : "[a; b] T does not vanish"));
    }
    FieldElem d = det(Hn);
    if (d.is_zero()) return std::make_pair(n, std::string("det H_n = 0"));
    FracIdeal want = FracIdeal(J) * inverse(FracIdeal(J)).sigma(n);
    if (!(FracIdeal::from_generators(dom, {d}) == want))
        return std::make_pair(n, "det H_n does not generate " + want.to_string());
    return std::nullopt;
}

/// From the child's data at (n - 1, B) to the parent's at (n, A).
inline Invertibility lift_invertibility(const Invertibility& child, const CompletionLevel& level, const ShapedRow& parent,
                                        long n) {
    const DomainSpec& dom = parent.J.domain();
    const Row2 a0 = coeff(parent.a, 0);
    const Row2& abar0 = level.abar0;
    const FieldElem& lambda = level.lambda;
    const Mat2 M = mat2(1, 0, 0, level.mu);

    Invertibility inv;
    inv.n = n;
    SeriesRow first = detail::times_row(child.b(0, 0), a0);
    SeriesRow second = detail::times_row((child.b(0, 1) * lambda).shift(1), abar0);
    inv.b = first - second;

    SeriesRow trow1 = series_row(child.T(0, 0), child.T(0, 1));
    SeriesRow trow2 = series_row(child.T(1, 0), child.T(1, 1));
    SeriesRow tbar = shift(trow1 * lift(M), 1);
    SeriesRow tlow = sigma_apply(scale(lambda.inverse(), trow2) * lift(M), -1);
    inv.T = detail::outer(perp(abar0), tbar) + detail::outer(perp(a0), tlow);
    inv.Hn = child.Hn * sigma_apply(M, n - 1);

    if (auto bad = invertibility_defect(parent.a, inv.b, inv.T, n, inv.Hn, parent.J))
        throw std::logic_error("lift at level " + std::to_string(n) + ", order " + std::to_string(bad->first) + ": " + bad->second);
    CompletionShapes shapes = completion_shapes(parent.J, parent.A);
    detail::require_shape(dom, inv.b, shapes.b, "b");
    detail::require_shape(dom, inv.T, shapes.T, "T");
    return inv;
}

namespace detail {

inline Invertibility invert_level(const ShapedRow& row, const SeriesCol& t, long n, const FieldElem& mu,
                                  std::vector<CompletionLevel>& levels, const SearchBounds& bounds) {
    if (n == 0) return base_case_invert(row, t, bounds);
    Reduction red = reduce_row(row, t, n, bounds);
    red.level.mu = mu;
    levels.push_back(red.level);
    Invertibility child = invert_level(red.row, red.witness, n - 1, mu, levels, bounds);
    return lift_invertibility(child, red.level, row, n);
}

/// Entries of m1 * m2 - Id at orders <= through; first bad order.
inline std::optional<long> identity_mismatch(const SeriesMatrix& P, long through) {
    long from = std::min(first_order(P), 0L);
    for (long k = from; k <= through; ++k) {
        if (k >= known_to(P)) return k;
        Mat2 want = k == 0 ? identity2() : mat2(0, 0, 0, 0);
        if (!(coeff(P, k) == want)) return k;
    }
    return std::nullopt;
}

}  // namespace detail

/// Full completion of a unimodular row a (a t = 1) over [[R, I^-1], [I, I I^-1]]:
/// returns [a; b] with its two-sided inverse certified through order prec.
inline CompletionCertificate complete_unimodular_row(const IdealLattice& J, const SeriesRow& a, const SeriesCol& t,
                                                     long prec, const SearchBounds& bounds = {}) {
    const DomainSpec& dom = J.domain();
    if (prec < 0) throw DomainError("negative precision");
    CompletionCertificate cert;
    cert.dom = &dom;
    cert.J = J;
    cert.row = a;
    cert.witness = t;
    cert.prec = prec;

    auto [an, k] = normalize_row(a);
    cert.shift = k;
    ShapedRow row{an, J, FracIdeal::unit(dom)};
    auto [n, tn] = check_unimodular(row, shift(t, k));
    cert.n = n;
    if (known_to(an) <= n)
        throw PrecisionError("row known only to O(x^" + std::to_string(known_to(an)) + ") after normalization, level " +
                                 std::to_string(n) + " needs order " + std::to_string(n),
                             n + 1 - known_to(an));

    const FracIdeal Jf(J);
    const FieldElem mu = detail::required_generator(Jf, Jf.sigma(1), "mu", bounds);
    ShapedRow top{detail::exact_prefix(an, n + 1), J, FracIdeal::unit(dom)};
    Invertibility inv = detail::invert_level(top, detail::exact_prefix(tn, n + 1), n, mu, cert.levels, bounds);
    cert.b = inv.b;
    // only T mod x^(n+1) is certified
    cert.T = truncate(inv.T, n + 1);
    cert.Hn = inv.Hn;
    if (auto bad = invertibility_defect(an, inv.b, inv.T, n, inv.Hn, J))
        throw std::logic_error("completion: order " + std::to_string(bad->first) + ": " + bad->second);

    // S = [a; b] T x^-n M has lowest matrix H_n M of determinant 1
    const Mat2 M = mat2(1, 0, 0, det(inv.Hn).inverse());
    SeriesMatrix F = series_mat(an(0, 0), an(0, 1), inv.b(0, 0), inv.b(0, 1));
    SeriesMatrix Tm = shift(inv.T, -n) * lift(M);
    SeriesMatrix S = F * Tm;
    long absk = k < 0 ? -k : k;
    SeriesMatrix Sinv = matrix_invert(S, prec + 1 + n + absk + 2);
    SeriesMatrix Tp = Tm * Sinv;
    for (int r = 0; r < 2; ++r) Tp(r, 0) = Tp(r, 0).shift(-k);

    cert.final_matrix = series_mat(a(0, 0), a(0, 1), inv.b(0, 0), inv.b(0, 1));
    long kt = std::min(known_to(cert.final_matrix * Tp), known_to(Tp * cert.final_matrix));
    if (kt <= prec)
        throw PrecisionError("final inverse certified only through order " + std::to_string(kt - 1) + ", " +
                                 std::to_string(prec) + " requested",
                             prec + 1 - kt);
    // F * F^-1 is known to val(F) + known_to(F^-1)
    cert.final_inverse = truncate(Tp, prec + 1 - std::min(0L, valuation(cert.final_matrix)));
    if (detail::identity_mismatch(cert.final_matrix * cert.final_inverse, prec) ||
        detail::identity_mismatch(cert.final_inverse * cert.final_matrix, prec))
        throw std::logic_error("final inverse fails to verify");
    return cert;
}

/// Certificate for a completion found by other means: b is given, T is the
/// inverse of [a; b] shifted by x^n.
inline CompletionCertificate certificate_from_completion(const IdealLattice& J, const SeriesRow& a, const SeriesCol& t,
                                                         const SeriesRow& b, long prec) {
    const DomainSpec& dom = J.domain();
    CompletionCertificate cert;
    cert.dom = &dom;
    cert.J = J;
    cert.row = a;
    cert.witness = t;
    cert.prec = prec;
    auto [an, k] = normalize_row(a);
    cert.shift = k;
    cert.b = b;
    cert.final_matrix = series_mat(a(0, 0), a(0, 1), b(0, 0), b(0, 1));
    SeriesMatrix inv = matrix_invert(cert.final_matrix, prec + 8);
    long kt = std::min(known_to(cert.final_matrix * inv), known_to(inv * cert.final_matrix));
    if (kt <= prec) throw PrecisionError("inverse not known through the requested order", prec + 1 - kt);
    cert.final_inverse = truncate(inv, prec + 1 - std::min(0L, valuation(cert.final_matrix)));
    // T for the normalized row: (x^-k [a]; b)^-1 = inv * diag(x^k, 1)
    SeriesMatrix Tn = cert.final_inverse;
    for (int r = 0; r < 2; ++r) Tn(r, 0) = Tn(r, 0).shift(k);
    long v = valuation(Tn);
    cert.n = v >= kExact ? 0 : std::max(0L, -v);
    cert.T = truncate(shift(Tn, cert.n), cert.n + 1);
    SeriesMatrix Fn = series_mat(an(0, 0), an(0, 1), b(0, 0), b(0, 1));
    cert.Hn = coeff(Fn * cert.T, cert.n);
    return cert;
}

/// Independent re-check of every claim in a completion certificate.
inline VerifyReport verify_completion(const CompletionCertificate& cert) {
    VerifyReport rep;
    if (!cert.dom) {
        rep.fail({}, "no domain");
        return rep;
    }
    const DomainSpec& dom = *cert.dom;
    try {
        const long N = cert.prec;
        // a t == 1
        Series p = (cert.row * cert.witness)(0, 0);
        long top = p.is_exact() ? std::max(detail::last_order(p), 0L) : p.known_to() - 1;
        if (p.known_to() <= 0) rep.fail(0, "a t unknown at order 0");
        if (auto bad = detail::monomial_mismatch(p, 0, std::min(p.val(), 0L), top)) rep.fail(*bad, "a t != 1");

        long k = valuation(cert.row);
        if (k >= kExact) {
            rep.fail({}, "zero row");
            return rep;
        }
        if (k != cert.shift) rep.fail({}, "recorded shift differs from the row valuation");
        SeriesRow an = series_row(cert.row(0, 0).left_shift(-k), cert.row(0, 1).left_shift(-k));
        SeriesCol tk = shift(cert.witness, k);
        long vt = valuation(tk);
        long n = vt >= kExact ? 0 : std::max(0L, -vt);
        if (n > cert.n) rep.fail({}, "n is smaller than the witness requires");

        CompletionShapes shapes = completion_shapes(cert.J, FracIdeal::unit(dom));
        auto shape_check = [&](auto& m, const auto& shape, long to, const std::string& what) {
            long from = detail::first_order(m);
            long through = std::min(to, detail::last_order(m));
            if (auto bad = shape_violation(dom, m, shape, from, through)) rep.fail(*bad, what + " leaves its shape");
        };
        shape_check(an, shapes.row, kExact, "row");
        SeriesCol tn = shift(tk, n);
        shape_check(tn, shapes.witness, kExact, "witness");
        shape_check(cert.b, shapes.b, kExact, "b");
        shape_check(cert.T, shapes.T, kExact, "T");
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                if (cert.T(r, c).known_to() > cert.n + 1) rep.fail(cert.n + 1, "T recorded beyond order n");
        if (auto bad = invertibility_defect(an, cert.b, cert.T, cert.n, cert.Hn, cert.J)) rep.fail(bad->first, bad->second);

        SeriesMatrix F = series_mat(cert.row(0, 0), cert.row(0, 1), cert.b(0, 0), cert.b(0, 1));
        if (!(F == cert.final_matrix)) rep.fail({}, "final matrix differs from [a; b]");
        shape_check(cert.final_matrix, shapes.T, N, "final matrix");
        shape_check(cert.final_inverse, shapes.T, N, "final inverse");
        if (auto bad = detail::identity_mismatch(F * cert.final_inverse, N)) rep.fail(*bad, "final * final^-1 != Id");
        if (auto bad = detail::identity_mismatch(cert.final_inverse * F, N)) rep.fail(*bad, "final^-1 * final != Id");

        // reduction levels, when recorded: A chain from D, lambda and mu generators
        if (!cert.levels.empty()) {
            if (static_cast<long>(cert.levels.size()) != cert.n) rep.fail({}, "number of levels differs from n");
            const FracIdeal Jf(cert.J);
            FracIdeal A = FracIdeal::unit(dom);
            for (const auto& l : cert.levels) {
                if (!(l.A == A)) rep.fail(l.n, "level ideal A does not continue the chain");
                FracIdeal lam = Jf * l.B.sigma(1) * inverse(l.B * Jf.sigma(1));
                if (!(FracIdeal::from_generators(dom, {l.lambda}) == lam)) rep.fail(l.n, "lambda does not generate its ideal");
                FracIdeal mu = Jf * inverse(Jf.sigma(1));
                if (!(FracIdeal::from_generators(dom, {l.mu}) == mu)) rep.fail(l.n, "mu does not generate its ideal");
                A = l.B;
            }
        }
    } catch (const Error& e) {
        rep.fail({}, e.what());
    }
    return rep;
}

/// q0 and k with q0 * sigma^k(J) = L, searching the sigma-orbit of J.
inline std::optional<std::pair<FieldElem, long>> extended_ideal_iso(const FracIdeal& J, const FracIdeal& L) {
    require_class_group(J.domain());
    const long orbit = J.domain().sigma() == Sigma::identity ? 1 : 2;
    for (long k = 0; k < orbit; ++k)
        if (auto q = ideal_classes_isomorphic(J.sigma(k), L)) return std::make_pair(*q, k);
    return std::nullopt;
}

/// A random unimodular row: the first row of a product of elementary matrices
/// [[1, r], [0, 1]] (coefficient i of r in sigma^i(J^-1)) and [[1, 0], [r', 1]]
/// (coefficients in J), with t the first column of the inverse product.
struct RandomRow {
    SeriesRow a;
    SeriesCol t;
};

inline RandomRow random_elementary_row(const IdealLattice& J, std::mt19937_64& rng, int max_factors = 6,
                                       long min_order = -1, long max_order = 2, long coefficient = 3) {
    const DomainSpec& dom = J.domain();
    const FracIdeal Jf(J);
    const FracIdeal Jinv = inverse(Jf);
    std::uniform_int_distribution<int> factors(1, max_factors);
    std::uniform_int_distribution<long> coef(-coefficient, coefficient);
    std::uniform_int_distribution<long> order(min_order, max_order);
    std::uniform_int_distribution<int> terms(1, 3);
    auto random_poly = [&](bool upper) {
        Series r = Series::zero();
        int m = terms(rng);
        for (int j = 0; j < m; ++j) {
            long i = order(rng);
            FracIdeal lat = upper ? Jinv.sigma(i) : Jf;
            FieldElem c(0);
            for (const auto& g : lat.generator_list()) c += g * FieldElem(coef(rng));
            r += Series::monomial(c, i);
        }
        return r;
    };
    SeriesMatrix E = series_identity();
    SeriesMatrix Einv = series_identity();
    const Series one = Series::constant(FieldElem(1).in(dom));
    const Series zero = Series::zero();
    int count = factors(rng);
    bool upper = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
    for (int f = 0; f < count; ++f, upper = !upper) {
        Series r = random_poly(upper);
        SeriesMatrix X = upper ? series_mat(one, r, zero, one) : series_mat(one, zero, r, one);
        SeriesMatrix Xi = upper ? series_mat(one, -r, zero, one) : series_mat(one, zero, -r, one);
        E = E * X;
        Einv = Xi * Einv;
    }
    return RandomRow{series_row(E(0, 0), E(0, 1)), series_col(Einv(0, 0), Einv(1, 0))};
}

}  // namespace skewdd
