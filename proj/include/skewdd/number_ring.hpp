#pragma once

// Exact arithmetic in D = Z or a quadratic order O_d, its fraction field K,
// and the automorphism sigma (identity or conjugation).

#include <cctype>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "skewdd/errors.hpp"
#include "skewdd/integer.hpp"

namespace skewdd {

enum class DomainKind { integers, quadratic };
enum class Sigma { identity, conjugation };

/// An effective Dedekind domain together with its automorphism.
///
/// Instances are interned: `integers()` and `quadratic()` return references
/// with static lifetime, so elements can hold a plain pointer to their domain.
/// For quadratic orders w = sqrt(d) when d = 2, 3 (mod 4) and w = (1 + sqrt(d))/2
/// when d = 1 (mod 4); in both cases w^2 = t*w - n with t = omega_trace(),
/// n = omega_norm().
class DomainSpec {
public:
    static const DomainSpec& integers() {
        static const DomainSpec z(DomainKind::integers, 0, Sigma::identity);
        return z;
    }

    static const DomainSpec& quadratic(long d, Sigma sigma) {
        if (d == 0 || d == 1) throw DomainError("d must not be 0 or 1");
        if (!squarefree(d)) throw DomainError("d = " + std::to_string(d) + " is not squarefree");
        static std::mutex mutex;
        static std::map<std::pair<long, int>, std::unique_ptr<DomainSpec>> table;
        std::lock_guard lock(mutex);
        auto& slot = table[{d, static_cast<int>(sigma)}];
        if (!slot) slot.reset(new DomainSpec(DomainKind::quadratic, d, sigma));
        return *slot;
    }

    DomainKind kind() const { return kind_; }
    bool is_quadratic() const { return kind_ == DomainKind::quadratic; }
    bool is_imaginary() const { return is_quadratic() && d_ < 0; }
    bool is_real_quadratic() const { return is_quadratic() && d_ > 0; }
    int degree() const { return is_quadratic() ? 2 : 1; }
    long d() const { return d_; }
    Sigma sigma() const { return sigma_; }
    long omega_trace() const { return t_; }
    long omega_norm() const { return n_; }

    /// Field discriminant: d when d = 1 (mod 4), else 4d; 1 for Z.
    long discriminant() const {
        if (!is_quadratic()) return 1;
        return t_ == 1 ? d_ : 4 * d_;
    }

    std::string name() const {
        if (!is_quadratic()) return "int";
        return "quad:" + std::to_string(d_) + (sigma_ == Sigma::identity ? ":id" : ":conj");
    }

private:
    DomainSpec(DomainKind kind, long d, Sigma sigma) : kind_(kind), d_(d), sigma_(sigma) {
        if (kind == DomainKind::quadratic) {
            long r = ((d % 4) + 4) % 4;
            if (r == 1) {
                t_ = 1;
                n_ = (1 - d) / 4;
            } else {
                t_ = 0;
                n_ = -d;
            }
        }
    }

    static bool squarefree(long d) {
        long m = std::labs(d);
        for (long p = 2; p * p <= m; ++p)
            if (m % (p * p) == 0) return false;
        return true;
    }

    DomainKind kind_;
    long d_;
    Sigma sigma_;
    long t_ = 0;
    long n_ = 0;
};

/// Element (a + b*w) / den of the fraction field K, stored in lowest terms.
///
/// A null domain pointer marks a rational number (b == 0) that is valid in
/// every domain; mixing it with a domain-bound value adopts that domain.
class FieldElem {
public:
    FieldElem() = default;
    FieldElem(long v) : a_(v) {}  // NOLINT: integer literals embed implicitly
    FieldElem(const Int& v) : a_(v) {}  // NOLINT
    explicit FieldElem(const Rational& q) : a_(q.get_num()), den_(q.get_den()) {}

    static FieldElem make(const DomainSpec& dom, Int a, Int b, Int den = 1) {
        if (b != 0 && !dom.is_quadratic()) throw DomainError("Z has no element w");
        FieldElem e;
        e.dom_ = &dom;
        e.a_ = std::move(a);
        e.b_ = std::move(b);
        e.den_ = std::move(den);
        e.normalize();
        return e;
    }

    static FieldElem from_components(const DomainSpec& dom, const Rational& a, const Rational& b) {
        Int den = lcm(a.get_den(), b.get_den());
        return make(dom, a.get_num() * exact_div(den, a.get_den()),
                    b.get_num() * exact_div(den, b.get_den()), den);
    }

    static FieldElem omega(const DomainSpec& dom) { return make(dom, 0, 1); }

    const DomainSpec* domain() const { return dom_; }
    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    const Int& den() const { return den_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_integral() const { return den_ == 1; }
    bool is_rational() const { return b_ == 0; }
    Rational rational_part() const { return canonical(Rational(a_, den_)); }
    Rational omega_part() const { return canonical(Rational(b_, den_)); }

    /// The same value, bound to `dom`.
    FieldElem in(const DomainSpec& dom) const {
        if (dom_ && dom_ != &dom && b_ != 0) throw DomainError("element belongs to another domain");
        return make(dom, a_, b_, den_);
    }

    FieldElem conj() const {
        if (b_ == 0) return *this;
        long t = dom_->omega_trace();
        return make(*dom_, a_ + t * b_, -b_, den_);
    }

    /// N_{K/Q}; the square of the value for rationals viewed in a quadratic field.
    Rational field_norm() const {
        Int num = a_ * a_;
        if (b_ != 0) num += dom_->omega_trace() * a_ * b_ + dom_->omega_norm() * b_ * b_;
        return canonical(Rational(num, den_ * den_));
    }

    FieldElem inverse() const {
        if (is_zero()) throw DivisionByZero();
        if (b_ == 0) return with(a_sign() * den_, 0, abs_a());
        Rational nrm = field_norm();
        FieldElem c = conj();
        // c / nrm
        return with(c.a_ * nrm.get_den(), c.b_ * nrm.get_den(), c.den_ * nrm.get_num());
    }

    FieldElem operator-() const { return with(-a_, -b_, den_); }

    friend FieldElem operator+(const FieldElem& x, const FieldElem& y) {
        const DomainSpec* dom = merge(x, y);
        Int den = x.den_ * y.den_;
        return build(dom, x.a_ * y.den_ + y.a_ * x.den_, x.b_ * y.den_ + y.b_ * x.den_, den);
    }
    friend FieldElem operator-(const FieldElem& x, const FieldElem& y) { return x + (-y); }

    friend FieldElem operator*(const FieldElem& x, const FieldElem& y) {
        const DomainSpec* dom = merge(x, y);
        Int a = x.a_ * y.a_;
        Int b = x.a_ * y.b_ + x.b_ * y.a_;
        if (x.b_ != 0 && y.b_ != 0) {
            Int bb = x.b_ * y.b_;
            a -= dom->omega_norm() * bb;
            b += dom->omega_trace() * bb;
        }
        return build(dom, std::move(a), std::move(b), x.den_ * y.den_);
    }

    friend FieldElem operator/(const FieldElem& x, const FieldElem& y) { return x * y.inverse(); }

    FieldElem& operator+=(const FieldElem& y) { return *this = *this + y; }
    FieldElem& operator-=(const FieldElem& y) { return *this = *this - y; }
    FieldElem& operator*=(const FieldElem& y) { return *this = *this * y; }

    friend bool operator==(const FieldElem& x, const FieldElem& y) {
        if (x.a_ != y.a_ || x.b_ != y.b_ || x.den_ != y.den_) return false;
        if (x.b_ != 0 && x.dom_ != y.dom_) return false;
        return true;
    }

    /// gcd of the numerator coordinates.
    Int content() const { return gcd(a_, b_); }

private:
    static Rational canonical(Rational q) {
        q.canonicalize();
        return q;
    }

    Int a_sign() const { return a_ < 0 ? Int(-1) : Int(1); }
    Int abs_a() const { return a_ < 0 ? Int(-a_) : a_; }

    FieldElem with(Int a, Int b, Int den) const { return build(dom_, std::move(a), std::move(b), std::move(den)); }

    static FieldElem build(const DomainSpec* dom, Int a, Int b, Int den) {
        FieldElem e;
        e.dom_ = dom;
        e.a_ = std::move(a);
        e.b_ = std::move(b);
        e.den_ = std::move(den);
        e.normalize();
        return e;
    }

    static const DomainSpec* merge(const FieldElem& x, const FieldElem& y) {
        if (!x.dom_) return y.dom_;
        if (!y.dom_ || x.dom_ == y.dom_) return x.dom_;
        throw DomainError("mixing elements of " + x.dom_->name() + " and " + y.dom_->name());
    }

    void normalize() {
        if (den_ == 0) throw DivisionByZero();
        if (den_ < 0) {
            den_ = -den_;
            a_ = -a_;
            b_ = -b_;
        }
        Int g = gcd(gcd(a_, b_), den_);
        if (g > 1) {
            a_ = exact_div(a_, g);
            b_ = exact_div(b_, g);
            den_ = exact_div(den_, g);
        }
    }

    const DomainSpec* dom_ = nullptr;
    Int a_ = 0;
    Int b_ = 0;
    Int den_ = 1;
};

inline bool operator!=(const FieldElem& x, const FieldElem& y) { return !(x == y); }

/// sigma^i(e). Both supported automorphisms are involutions.
inline FieldElem sigma_apply(const FieldElem& e, long i) {
    if (i % 2 == 0 || e.is_rational()) return e;
    if (e.domain()->sigma() == Sigma::identity) return e;
    return e.conj();
}

/// Norm of e over Q; for D = Z the norm of e is e itself.
inline Rational norm(const DomainSpec& dom, const FieldElem& e) {
    if (!dom.is_quadratic()) return e.rational_part();
    return e.field_norm();
}

inline bool is_unit(const DomainSpec& dom, const FieldElem& e) {
    if (!e.is_integral()) throw DomainError("is_unit expects an element of D");
    Rational n = norm(dom, e);
    return n == 1 || n == -1;
}

inline FieldElem divide_exact(const FieldElem& a, const FieldElem& b) {
    if (b.is_zero()) throw DivisionByZero();
    return a / b;
}

inline std::string to_string(const FieldElem& e) {
    Rational a = e.rational_part();
    Rational b = e.omega_part();
    if (b == 0) return a.get_str();
    std::string out;
    if (a != 0) out = a.get_str();
    if (b < 0) {
        out += "-";
        b = -b;
    } else if (!out.empty()) {
        out += "+";
    }
    return out + b.get_str() + "*w";
}

inline std::ostream& operator<<(std::ostream& os, const FieldElem& e) { return os << to_string(e); }

namespace detail {

inline std::string strip_spaces(std::string_view s) {
    std::string out;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) out += ch;
    return out;
}

inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw ParseError("empty number");
    for (std::size_t i = 0; i < s.size(); ++i) {
        char ch = s[i];
        bool ok = std::isdigit(static_cast<unsigned char>(ch)) || ch == '/' || (i == 0 && (ch == '-' || ch == '+'));
        if (!ok) throw ParseError("bad number '" + s + "'");
    }
    Rational q;
    if (q.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0 || q.get_den() == 0)
        throw ParseError("bad number '" + s + "'");
    q.canonicalize();
    return q;
}

/// Is `s` wrapped in one pair of matching outer parentheses?
inline bool outer_parens(const std::string& s) {
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') return false;
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (depth == 0 && i + 1 < s.size()) return false;
    }
    return true;
}

}  // namespace detail

/// Parses `a`, `a+b*w`, `a-b*w`, `b*w`, `w`, with rational parts `p/q`.
inline FieldElem parse_elem(const DomainSpec& dom, std::string_view text) {
    std::string s = detail::strip_spaces(text);
    while (detail::outer_parens(s)) s = s.substr(1, s.size() - 2);
    if (s.empty()) throw ParseError("empty element");
    Rational a = 0, b = 0;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t end = pos + 1;
        while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
        std::string term = s.substr(pos, end - pos);
        pos = end;
        int sign = 1;
        if (term[0] == '+' || term[0] == '-') {
            sign = term[0] == '-' ? -1 : 1;
            term = term.substr(1);
        }
        if (term.empty()) throw ParseError("dangling sign in '" + s + "'");
        if (term == "w") {
            b += sign;
        } else if (term.size() > 2 && term.compare(term.size() - 2, 2, "*w") == 0) {
            b += sign * detail::parse_rational(term.substr(0, term.size() - 2));
        } else {
            a += sign * detail::parse_rational(term);
        }
    }
    if (b != 0 && !dom.is_quadratic()) throw ParseError("'" + s + "' uses w but the domain is Z");
    return FieldElem::from_components(dom, a, b);
}

}  // namespace skewdd
