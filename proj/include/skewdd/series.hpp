#pragma once

// Truncated elements of D((x;sigma)) and K((x;sigma)) with big-O precision.
// Multiplication is twisted: x * a = sigma(a) * x.

#include <algorithm>
#include <climits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skewdd/errors.hpp"
#include "skewdd/number_ring.hpp"

namespace skewdd {

/// Precision of a series known exactly (a Laurent polynomial).
inline constexpr long kExact = LONG_MAX / 4;

/// Saturating addition of orders.
inline long add_order(long a, long b) {
    if (a >= kExact || b >= kExact) return kExact;
    long s = a + b;
    return s >= kExact ? kExact : s;
}

/// f = sum_{j} coeffs[j] x^{val + j} + O(x^{known_to}).
///
/// Nonzero series have coeffs[0] != 0 and no trailing zeros; coefficients in
/// [val + coeffs.size(), known_to) are zero. The zero series has val == known_to.
class TruncatedSeries {
public:
    TruncatedSeries() = default;

    TruncatedSeries(long val, std::vector<FieldElem> coeffs, long known_to = kExact, bool ring = false)
        : val_(val), coeffs_(std::move(coeffs)), known_to_(known_to), ring_(ring) {
        normalize();
    }

    static TruncatedSeries zero(long known_to = kExact) { return TruncatedSeries(known_to, {}, known_to); }
    static TruncatedSeries constant(const FieldElem& c, long known_to = kExact) {
        return TruncatedSeries(0, {c}, known_to);
    }
    static TruncatedSeries monomial(const FieldElem& c, long k) { return TruncatedSeries(k, {c}); }
    static TruncatedSeries x() { return monomial(FieldElem(1), 1); }

    long val() const { return val_; }
    long valuation() const { return val_; }
    long known_to() const { return known_to_; }
    bool is_exact() const { return known_to_ >= kExact; }
    /// Zero through the known precision.
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<FieldElem>& coeffs() const { return coeffs_; }
    /// Orders [val, val + size) hold the stored coefficients.
    long end_order() const { return val_ + static_cast<long>(coeffs_.size()); }

    /// known_to - val, the number of orders known from the lowest one on.
    long relative_precision() const { return is_exact() ? kExact : known_to_ - val_; }

    bool ring_flag() const { return ring_; }
    bool is_integral() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const FieldElem& e) { return e.is_integral(); });
    }
    /// Asserts membership in D((x;sigma)).
    TruncatedSeries as_ring() const {
        if (!is_integral()) throw DomainError("series " + str() + " has non-integral coefficients");
        TruncatedSeries out = *this;
        out.ring_ = true;
        return out;
    }
    TruncatedSeries as_field() const {
        TruncatedSeries out = *this;
        out.ring_ = false;
        return out;
    }

    FieldElem coefficient(long k) const {
        if (k >= known_to_) throw PrecisionError("coefficient of x^" + std::to_string(k) + " is unknown", k - known_to_ + 1);
        if (k < val_ || k >= end_order()) return FieldElem(0);
        return coeffs_[static_cast<std::size_t>(k - val_)];
    }
    FieldElem operator[](long k) const { return coefficient(k); }

    FieldElem lowest() const {
        if (is_zero()) throw PrecisionError("lowest coefficient of a series known to be zero only to O(x^" + std::to_string(known_to_) + ")");
        return coeffs_.front();
    }

    /// f * x^m.
    TruncatedSeries shift(long m) const {
        return TruncatedSeries(val_ + m, coeffs_, is_exact() ? kExact : known_to_ + m, ring_);
    }

    /// x^m * f.
    TruncatedSeries left_shift(long m) const { return sigma(m).shift(m); }

    /// Coefficientwise sigma^i, i.e. x^i f x^-i.
    TruncatedSeries sigma(long i) const {
        if (i % 2 == 0) return *this;
        std::vector<FieldElem> c;
        c.reserve(coeffs_.size());
        for (const auto& e : coeffs_) c.push_back(sigma_apply(e, i));
        return TruncatedSeries(val_, std::move(c), known_to_, ring_);
    }

    TruncatedSeries truncate(long order) const {
        if (order >= known_to_) return *this;
        std::vector<FieldElem> c;
        for (long k = val_; k < std::min(order, end_order()); ++k) c.push_back(coefficient(k));
        return TruncatedSeries(std::min(val_, order), std::move(c), order, ring_);
    }

    /// Drop the O-term: the known part as a Laurent polynomial.
    TruncatedSeries polynomial() const { return TruncatedSeries(val_, coeffs_, kExact, ring_); }

    /// b_i with f = sum x^i b_i, b_i = sigma^{-i}(a_i).
    std::vector<FieldElem> left_normal_form() const {
        std::vector<FieldElem> out;
        out.reserve(coeffs_.size());
        for (long k = val_; k < end_order(); ++k) out.push_back(sigma_apply(coefficient(k), -k));
        return out;
    }

    static TruncatedSeries from_left_normal_form(long val, const std::vector<FieldElem>& b, long known_to = kExact) {
        std::vector<FieldElem> c;
        c.reserve(b.size());
        for (std::size_t j = 0; j < b.size(); ++j) c.push_back(sigma_apply(b[j], val + static_cast<long>(j)));
        return TruncatedSeries(val, std::move(c), known_to);
    }

    TruncatedSeries operator-() const {
        std::vector<FieldElem> c;
        c.reserve(coeffs_.size());
        for (const auto& e : coeffs_) c.push_back(-e);
        return TruncatedSeries(val_, std::move(c), known_to_, ring_);
    }

    friend TruncatedSeries operator+(const TruncatedSeries& f, const TruncatedSeries& g) {
        long kt = std::min(f.known_to_, g.known_to_);
        if (f.is_zero() && g.is_zero()) return zero(kt);
        long lo = std::min(f.is_zero() ? g.val_ : f.val_, g.is_zero() ? f.val_ : g.val_);
        long hi = std::min(std::max(f.is_zero() ? lo : f.end_order(), g.is_zero() ? lo : g.end_order()), kt);
        std::vector<FieldElem> c;
        for (long k = lo; k < hi; ++k) c.push_back(f.raw(k) + g.raw(k));
        return TruncatedSeries(std::min(lo, kt), std::move(c), kt, f.ring_ && g.ring_);
    }
    friend TruncatedSeries operator-(const TruncatedSeries& f, const TruncatedSeries& g) { return f + (-g); }

    /// Coefficient of x^k in fg is sum_i f_i sigma^i(g_{k-i}).
    friend TruncatedSeries operator*(const TruncatedSeries& f, const TruncatedSeries& g) {
        long kt = std::min(add_order(f.val_, g.known_to_), add_order(g.val_, f.known_to_));
        if (f.is_zero() || g.is_zero()) return zero(kt);
        long lo = f.val_ + g.val_;
        long hi = std::min(f.end_order() + g.end_order() - 1, kt);
        if (hi <= lo) return zero(kt);
        std::vector<FieldElem> c(static_cast<std::size_t>(hi - lo), FieldElem(0));
        for (long i = f.val_; i < f.end_order(); ++i) {
            const FieldElem& fi = f.coeffs_[static_cast<std::size_t>(i - f.val_)];
            if (fi.is_zero()) continue;
            for (long j = g.val_; j < g.end_order() && i + j < hi; ++j) {
                const FieldElem& gj = g.coeffs_[static_cast<std::size_t>(j - g.val_)];
                if (gj.is_zero()) continue;
                c[static_cast<std::size_t>(i + j - lo)] += fi * sigma_apply(gj, i);
            }
        }
        return TruncatedSeries(lo, std::move(c), kt, f.ring_ && g.ring_);
    }

    /// e * f (left scalar).
    friend TruncatedSeries operator*(const FieldElem& e, const TruncatedSeries& f) { return constant(e) * f; }
    /// f * e (right scalar; coefficient k picks up sigma^k(e)).
    friend TruncatedSeries operator*(const TruncatedSeries& f, const FieldElem& e) { return f * constant(e); }

    TruncatedSeries& operator+=(const TruncatedSeries& g) { return *this = *this + g; }
    TruncatedSeries& operator-=(const TruncatedSeries& g) { return *this = *this - g; }
    TruncatedSeries& operator*=(const TruncatedSeries& g) { return *this = *this * g; }

    /// Same known coefficients and same precision.
    friend bool operator==(const TruncatedSeries& f, const TruncatedSeries& g) {
        return f.known_to_ == g.known_to_ && f.val_ == g.val_ && f.coeffs_ == g.coeffs_;
    }

    /// Agreement on all orders known in both.
    friend bool congruent(const TruncatedSeries& f, const TruncatedSeries& g) { return (f - g).is_zero(); }

    std::string str() const;

private:
    FieldElem raw(long k) const {
        if (k < val_ || k >= end_order()) return FieldElem(0);
        return coeffs_[static_cast<std::size_t>(k - val_)];
    }

    void normalize() {
        if (!is_exact() && static_cast<long>(coeffs_.size()) > known_to_ - val_) {
            coeffs_.resize(static_cast<std::size_t>(std::max(0L, known_to_ - val_)));
        }
        std::size_t lead = 0;
        while (lead < coeffs_.size() && coeffs_[lead].is_zero()) ++lead;
        if (lead == coeffs_.size()) {
            coeffs_.clear();
            val_ = known_to_;
        } else {
            if (lead) coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
            val_ += static_cast<long>(lead);
            while (coeffs_.back().is_zero()) coeffs_.pop_back();
        }
        if (ring_ && !is_integral()) throw DomainError("ring series with non-integral coefficients");
    }

    long val_ = kExact;
    std::vector<FieldElem> coeffs_;
    long known_to_ = kExact;
    bool ring_ = false;
};

using Series = TruncatedSeries;

inline Series sigma_apply(const Series& f, long i) { return f.sigma(i); }

inline FieldElem lowest(const Series& f) { return f.lowest(); }
inline long valuation(const Series& f) { return f.val(); }
inline Series shift(const Series& f, long m) { return f.shift(m); }
inline std::vector<FieldElem> left_normal_form(const Series& f) { return f.left_normal_form(); }

/// Two-sided inverse of a series with nonzero lowest coefficient, computed
/// through `rel_prec` orders past its valuation (capped by f's own precision).
/// In ring mode the lowest coefficient must be a unit of D.
inline Series invert_unit(const Series& f, long rel_prec = 12, bool ring_mode = false, const DomainSpec* dom = nullptr) {
    if (f.is_zero()) throw DivisionByZero();
    const long v = f.val();
    const FieldElem f0 = f.lowest();
    if (ring_mode) {
        const DomainSpec* d = dom ? dom : f0.domain();
        if (!f0.is_integral() || (d ? !is_unit(*d, f0) : (f0 != 1 && f0 != -1)))
            throw SingularError("lowest coefficient " + to_string(f0) + " is not a unit of D");
    }
    const long rel = std::min(f.relative_precision(), rel_prec);
    if (rel >= kExact) throw PrecisionError("invert_unit needs a finite target precision");
    const FieldElem inv0 = f0.inverse();
    std::vector<FieldElem> g;
    g.reserve(static_cast<std::size_t>(rel));
    for (long j = -v; j < -v + rel; ++j) {
        long k = j + v;
        FieldElem acc = k == 0 ? FieldElem(1) : FieldElem(0);
        for (long i = v + 1; i <= v + k && i < f.end_order(); ++i) {
            const FieldElem& fi = f.coeffs()[static_cast<std::size_t>(i - v)];
            if (fi.is_zero()) continue;
            acc -= fi * sigma_apply(g[static_cast<std::size_t>(k - i + v)], i);
        }
        g.push_back(sigma_apply(inv0 * acc, -v));
    }
    Series out(-v, std::move(g), -v + rel);
    return ring_mode ? out.as_ring() : out;
}

inline std::string to_string(const Series& f) { return f.str(); }

inline std::string TruncatedSeries::str() const {
    std::string out;
    for (long k = val_; k < end_order(); ++k) {
        const FieldElem& c = coeffs_[static_cast<std::size_t>(k - val_)];
        if (c.is_zero()) continue;
        std::string s = to_string(c);
        bool simple = c.is_rational();
        bool neg = simple && s[0] == '-';
        if (neg) s = s.substr(1);
        if (!simple) s = "(" + s + ")";
        std::string term = k == 0 ? s : s + "*x^" + std::to_string(k);
        if (out.empty())
            out = (neg ? "-" : "") + term;
        else
            out += (neg ? "-" : "+") + term;
    }
    if (out.empty()) out = "0";
    if (!is_exact()) out += " + O(x^" + std::to_string(known_to_) + ")";
    return out;
}

/// Parses `2+1*x^1+(1+1*w)*x^3 + O(x^8)`; negative exponents as x^-1.
inline Series parse_series(const DomainSpec& dom, std::string_view text) {
    std::string s = detail::strip_spaces(text);
    if (s.empty()) throw ParseError("empty series");
    std::vector<std::string> terms;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char ch = s[i];
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (depth < 0) throw ParseError("unbalanced parentheses in '" + s + "'");
        bool split = depth == 0 && (ch == '+' || ch == '-') && i > start && s[i - 1] != '^' && s[i - 1] != '*';
        if (split) {
            terms.push_back(s.substr(start, i - start));
            start = i;
        }
    }
    if (depth != 0) throw ParseError("unbalanced parentheses in '" + s + "'");
    terms.push_back(s.substr(start));

    long known_to = kExact;
    std::vector<std::pair<long, FieldElem>> parts;
    for (std::string term : terms) {
        int sign = 1;
        if (term[0] == '+' || term[0] == '-') {
            sign = term[0] == '-' ? -1 : 1;
            term = term.substr(1);
        }
        if (term.empty()) throw ParseError("dangling sign in '" + s + "'");
        if (term.rfind("O(", 0) == 0) {
            if (term.back() != ')' || (term.compare(2, 2, "x^") != 0 && term != "O(x)"))
                throw ParseError("bad O-term '" + term + "'");
            std::string e = term == "O(x)" ? "1" : term.substr(4, term.size() - 5);
            try {
                std::size_t used = 0;
                known_to = std::stol(e, &used);
                if (used != e.size()) throw ParseError("bad O-term '" + term + "'");
            } catch (const std::logic_error&) {
                throw ParseError("bad O-term '" + term + "'");
            }
            continue;
        }
        // coefficient part and x-power part, split at an x outside parentheses
        std::size_t xpos = std::string::npos;
        depth = 0;
        for (std::size_t i = 0; i < term.size(); ++i) {
            if (term[i] == '(') ++depth;
            if (term[i] == ')') --depth;
            if (depth == 0 && term[i] == 'x') {
                xpos = i;
                break;
            }
        }
        FieldElem c = 1;
        long k = 0;
        if (xpos == std::string::npos) {
            c = parse_elem(dom, term);
        } else {
            std::string cs = term.substr(0, xpos);
            if (!cs.empty()) {
                if (cs.back() != '*') throw ParseError("expected '*' before x in '" + term + "'");
                cs.pop_back();
                c = parse_elem(dom, cs);
            }
            std::string ks = term.substr(xpos + 1);
            if (ks.empty()) {
                k = 1;
            } else {
                if (ks[0] != '^') throw ParseError("bad power in '" + term + "'");
                ks = ks.substr(1);
                if (ks.size() > 2 && ks.front() == '(' && ks.back() == ')') ks = ks.substr(1, ks.size() - 2);
                try {
                    std::size_t used = 0;
                    k = std::stol(ks, &used);
                    if (used != ks.size()) throw ParseError("bad exponent in '" + term + "'");
                } catch (const std::logic_error&) {
                    throw ParseError("bad exponent in '" + term + "'");
                }
            }
        }
        parts.emplace_back(k, c.in(dom) * FieldElem(sign));
    }
    if (parts.empty()) return Series::zero(known_to);
    long lo = parts.front().first, hi = lo;
    for (const auto& [k, c] : parts) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    }
    std::vector<FieldElem> coeffs(static_cast<std::size_t>(hi - lo + 1), FieldElem(0));
    for (const auto& [k, c] : parts) coeffs[static_cast<std::size_t>(k - lo)] += c;
    if (hi >= known_to) throw ParseError("term x^" + std::to_string(hi) + " lies beyond O(x^" + std::to_string(known_to) + ")");
    return Series(lo, std::move(coeffs), known_to);
}

}  // namespace skewdd
