#pragma once

// Small fixed-shape matrices (1x2, 2x1, 2x2) over K or over truncated series,
// block-recursive inversion, and per-entry ideal shapes.

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "skewdd/ideal.hpp"
#include "skewdd/series.hpp"

namespace skewdd {

template <class T, int R, int C>
struct Matrix {
    std::array<std::array<T, C>, R> e{};

    static constexpr int rows = R;
    static constexpr int cols = C;

    T& operator()(int i, int j) { return e[i][j]; }
    const T& operator()(int i, int j) const { return e[i][j]; }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        Matrix out;
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < C; ++j) out.e[i][j] = a.e[i][j] + b.e[i][j];
        return out;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        Matrix out;
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < C; ++j) out.e[i][j] = a.e[i][j] - b.e[i][j];
        return out;
    }
    Matrix operator-() const {
        Matrix out;
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < C; ++j) out.e[i][j] = -e[i][j];
        return out;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) { return a.e == b.e; }
};

template <class T, int R, int K, int C>
Matrix<T, R, C> operator*(const Matrix<T, R, K>& a, const Matrix<T, K, C>& b) {
    Matrix<T, R, C> out;
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j) {
            T acc = a.e[i][0] * b.e[0][j];
            for (int k = 1; k < K; ++k) acc = acc + a.e[i][k] * b.e[k][j];
            out.e[i][j] = acc;
        }
    return out;
}

using Mat2 = Matrix<FieldElem, 2, 2>;
using Row2 = Matrix<FieldElem, 1, 2>;
using Col2 = Matrix<FieldElem, 2, 1>;
using SeriesMatrix = Matrix<Series, 2, 2>;
using SeriesRow = Matrix<Series, 1, 2>;
using SeriesCol = Matrix<Series, 2, 1>;

inline Mat2 identity2() { return Mat2{{{{FieldElem(1), FieldElem(0)}, {FieldElem(0), FieldElem(1)}}}}; }
inline Row2 row2(const FieldElem& a, const FieldElem& b) { return Row2{{{{a, b}}}}; }
inline Col2 col2(const FieldElem& a, const FieldElem& b) { return Col2{{{{a}, {b}}}}; }
inline Mat2 mat2(const FieldElem& a, const FieldElem& b, const FieldElem& c, const FieldElem& d) {
    return Mat2{{{{a, b}, {c, d}}}};
}
inline SeriesRow series_row(const Series& a, const Series& b) { return SeriesRow{{{{a, b}}}}; }
inline SeriesCol series_col(const Series& a, const Series& b) { return SeriesCol{{{{a}, {b}}}}; }
inline SeriesMatrix series_mat(const Series& a, const Series& b, const Series& c, const Series& d) {
    return SeriesMatrix{{{{a, b}, {c, d}}}};
}

template <class T, int R, int C>
Matrix<T, R, C> sigma_apply(const Matrix<T, R, C>& m, long i) {
    Matrix<T, R, C> out;
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) out.e[r][c] = sigma_apply(m.e[r][c], i);
    return out;
}

/// Left scalar multiple.
template <class T, int R, int C>
Matrix<T, R, C> scale(const FieldElem& s, const Matrix<T, R, C>& m) {
    Matrix<T, R, C> out;
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) out.e[r][c] = s * m.e[r][c];
    return out;
}

inline FieldElem det(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

inline Mat2 inverse(const Mat2& m) {
    FieldElem d = det(m);
    if (d.is_zero()) throw SingularError("singular constant matrix");
    FieldElem di = d.inverse();
    return mat2(m(1, 1) * di, -m(0, 1) * di, -m(1, 0) * di, m(0, 0) * di);
}

/// (a1, a2)^perp = (a2, -a1)^T, so row * row^perp = 0 for commuting entries.
inline Col2 perp(const Row2& r) { return col2(r(0, 1), -r(0, 0)); }

inline std::string to_string(const Row2& r) { return "[" + to_string(r(0, 0)) + ", " + to_string(r(0, 1)) + "]"; }
inline std::string to_string(const Mat2& m) {
    return "[[" + to_string(m(0, 0)) + ", " + to_string(m(0, 1)) + "], [" + to_string(m(1, 0)) + ", " +
           to_string(m(1, 1)) + "]]";
}

// Series matrices

template <int R, int C>
Matrix<Series, R, C> lift(const Matrix<FieldElem, R, C>& m, long k = 0) {
    Matrix<Series, R, C> out;
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) out.e[r][c] = Series::monomial(m.e[r][c], k);
    return out;
}

/// Coefficient matrix of x^k.
template <int R, int C>
Matrix<FieldElem, R, C> coeff(const Matrix<Series, R, C>& m, long k) {
    Matrix<FieldElem, R, C> out;
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) out.e[r][c] = m.e[r][c].coefficient(k);
    return out;
}

template <int R, int C>
long known_to(const Matrix<Series, R, C>& m) {
    long kt = kExact;
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) kt = std::min(kt, m.e[r][c].known_to());
    return kt;
}

/// Smallest valuation among the entries (kExact-ish when all zero).
template <int R, int C>
long valuation(const Matrix<Series, R, C>& m) {
    long v = kExact;
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c)
            if (!m.e[r][c].is_zero()) v = std::min(v, m.e[r][c].val());
    return v;
}

template <int R, int C>
bool is_zero(const Matrix<Series, R, C>& m) {
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c)
            if (!m.e[r][c].is_zero()) return false;
    return true;
}

/// Right multiplication by x^k.
template <int R, int C>
Matrix<Series, R, C> shift(const Matrix<Series, R, C>& m, long k) {
    Matrix<Series, R, C> out;
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) out.e[r][c] = m.e[r][c].shift(k);
    return out;
}

template <int R, int C>
Matrix<Series, R, C> truncate(const Matrix<Series, R, C>& m, long order) {
    Matrix<Series, R, C> out;
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) out.e[r][c] = m.e[r][c].truncate(order);
    return out;
}

template <int R, int C>
Matrix<Series, R, C> polynomial(const Matrix<Series, R, C>& m) {
    Matrix<Series, R, C> out;
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) out.e[r][c] = m.e[r][c].polynomial();
    return out;
}

/// Builds sum_k coeffs[k] x^{val + k} + O(x^known_to).
template <int R, int C>
Matrix<Series, R, C> from_coefficients(long val, const std::vector<Matrix<FieldElem, R, C>>& coeffs, long known_to) {
    Matrix<Series, R, C> out;
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) {
            std::vector<FieldElem> v;
            v.reserve(coeffs.size());
            for (const auto& m : coeffs) v.push_back(m.e[r][c]);
            out.e[r][c] = Series(val, std::move(v), known_to);
        }
    return out;
}

inline SeriesMatrix series_identity() { return lift(identity2()); }

template <int R, int C>
Matrix<Series, R, C> matrix_mul(const Matrix<Series, R, 2>& a, const Matrix<Series, 2, C>& b) {
    return a * b;
}

namespace detail {

/// Lowest-order block recursion: A_v invertible.
inline SeriesMatrix invert_block(const SeriesMatrix& A, long v, long through) {
    long rel = std::numeric_limits<long>::max();
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            const Series& s = A(r, c);
            rel = std::min(rel, s.is_exact() ? kExact : s.known_to() - v);
        }
    long count = std::min(rel, through);
    if (count <= 0) throw PrecisionError("matrix_invert: no known orders", 1 - count);
    const Mat2 inv0 = inverse(coeff(A, v));
    std::vector<Mat2> B;
    B.reserve(static_cast<std::size_t>(count));
    Mat2 zero2 = mat2(0, 0, 0, 0);
    for (long k = 0; k < count; ++k) {
        Mat2 acc = k == 0 ? identity2() : zero2;
        for (long i = v + 1; i <= v + k; ++i) {
            Mat2 Ai = coeff(A, i);
            if (Ai == zero2) continue;
            acc = acc - Ai * sigma_apply(B[static_cast<std::size_t>(k - i + v)], i);
        }
        B.push_back(sigma_apply(inv0 * acc, -v));
    }
    return from_coefficients(-v, B, -v + count);
}

inline Series invert_series(const Series& f, long rel) {
    return invert_unit(f, rel);
}

/// Elimination over the division ring K((x;sigma)) with working relative precision w.
inline SeriesMatrix invert_schur(const SeriesMatrix& A, long w) {
    int p = !A(0, 0).is_zero() && (A(1, 0).is_zero() || A(0, 0).val() <= A(1, 0).val()) ? 0 : 1;
    if (A(p, 0).is_zero()) throw SingularError("first column of the matrix vanishes to known precision");
    const Series& a = A(p, 0);
    const Series& b = A(p, 1);
    const Series& c = A(1 - p, 0);
    const Series& d = A(1 - p, 1);
    Series ai = invert_series(a, w);
    Series s = d - c * ai * b;
    if (s.is_zero()) throw SingularError("Schur complement vanishes to known precision");
    Series si = invert_series(s, w);
    Series aib = ai * b;
    Series cai = c * ai;
    // inverse of the row-permuted matrix, then undo the permutation on columns
    Series m00 = ai + aib * si * cai;
    Series m01 = -(aib * si);
    Series m10 = -(si * cai);
    Series m11 = si;
    if (p == 0) return series_mat(m00, m01, m10, m11);
    return series_mat(m01, m00, m11, m10);
}

}  // namespace detail

/// Two-sided inverse of a 2x2 series matrix with A * B == Id through orders
/// < `through` where A's precision allows. Uses the block recursion when the
/// lowest coefficient matrix is invertible, and elimination otherwise. In ring
/// mode the inverse must have integral coefficients.
inline SeriesMatrix matrix_invert(const SeriesMatrix& A, long through = 12, bool ring_mode = false) {
    long v = valuation(A);
    if (v >= kExact) throw SingularError("zero matrix");
    SeriesMatrix B;
    Mat2 A0 = coeff(A, v);
    if (!det(A0).is_zero()) {
        B = detail::invert_block(A, v, through);
    } else {
        bool exact = known_to(A) >= kExact;
        long w = std::max<long>(through - v, 4) + 4;
        for (int attempt = 0;; ++attempt) {
            B = detail::invert_schur(A, w);
            long kt = known_to(A * B);
            if (kt >= through || !exact || attempt > 8) break;
            w += (through - kt) + 4;
        }
    }
    if (ring_mode)
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                if (!B(r, c).is_integral()) throw SingularError("inverse is not defined over D");
    return B;
}

/// Shape of a matrix entry: coefficient i must lie in fixed * sigma^i(twisted).
struct EntryShape {
    std::optional<FracIdeal> fixed;
    std::optional<FracIdeal> twisted;

    FracIdeal at(const DomainSpec& dom, long i) const {
        FracIdeal out = fixed ? *fixed : FracIdeal::unit(dom);
        if (twisted) out = product(out, twisted->sigma(i));
        return out;
    }
};

template <int R, int C>
using Shape = std::array<std::array<EntryShape, C>, R>;

/// First order in [from, through] where some coefficient leaves its shape.
template <int R, int C>
std::optional<long> shape_violation(const DomainSpec& dom, const Matrix<Series, R, C>& m,
                                    const std::type_identity_t<Shape<R, C>>& shape,
                                    long from, long through) {
    for (long k = from; k <= through; ++k) {
        for (int r = 0; r < R; ++r)
            for (int c = 0; c < C; ++c) {
                const Series& s = m.e[r][c];
                if (k >= s.known_to()) continue;
                FieldElem e = s.coefficient(k);
                if (e.is_zero()) continue;
                if (!shape[r][c].at(dom, k).contains(e)) return k;
            }
    }
    return std::nullopt;
}

}  // namespace skewdd
