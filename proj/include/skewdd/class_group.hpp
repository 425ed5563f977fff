#pragma once

// Class groups of imaginary quadratic orders via reduced binary quadratic
// forms, and the ideal-class queries built on them.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "skewdd/ideal.hpp"

namespace skewdd {

/// Binary quadratic form A x^2 + B xy + C y^2.
struct Form {
    Int A, B, C;

    Int discriminant() const { return B * B - 4 * A * C; }

    friend bool operator==(const Form& x, const Form& y) { return x.A == y.A && x.B == y.B && x.C == y.C; }
    friend bool operator<(const Form& x, const Form& y) {
        return std::tie(x.A, x.B, x.C) < std::tie(y.A, y.B, y.C);
    }
};

inline std::string to_string(const Form& f) {
    return "(" + to_string(f.A) + "," + to_string(f.B) + "," + to_string(f.C) + ")";
}

inline bool is_reduced(const Form& f) {
    if (f.A <= 0) return false;
    Int absb = f.B < 0 ? Int(-f.B) : f.B;
    if (absb > f.A || f.A > f.C) return false;
    if ((absb == f.A || f.A == f.C) && f.B < 0) return false;
    return true;
}

/// Reduction of a positive definite form.
inline Form reduce(Form f) {
    auto normalize = [](Form& g) {
        // b into (-a, a]
        Int k = floor_div(g.A - g.B, 2 * g.A);
        Int c = g.A * k * k + g.B * k + g.C;
        g.B = g.B + 2 * g.A * k;
        g.C = c;
    };
    normalize(f);
    while (f.A > f.C || (f.A == f.C && f.B < 0)) {
        f = Form{f.C, -f.B, f.A};
        normalize(f);
    }
    return f;
}

/// Composition of primitive forms of equal discriminant, reduced.
inline Form compose(Form f1, Form f2) {
    if (f1.A > f2.A) std::swap(f1, f2);
    const Int& a1 = f1.A;
    const Int& a2 = f2.A;
    Int s = (f1.B + f2.B) / 2;
    Int n = f2.B - s;
    Int y1, d;
    if (divides(a1, a2)) {
        y1 = 0;
        d = a1;
    } else {
        auto [g, u, v] = ext_gcd(a2, a1);
        d = g;
        y1 = u;
    }
    Int x2, y2, d1;
    if (divides(d, s)) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        auto [g, u, v] = ext_gcd(s, d);
        d1 = g;
        x2 = u;
        y2 = -v;
    }
    Int v1 = exact_div(a1, d1);
    Int v2 = exact_div(a2, d1);
    Int r = mod_pos(y1 * y2 * n - x2 * f2.C, v1);
    Int b3 = f2.B + 2 * v2 * r;
    Int a3 = v1 * v2;
    Int c3 = exact_div(f2.C * d1 + r * (f2.B + v2 * r), v1);
    return reduce(Form{a3, b3, c3});
}

inline std::vector<Form> reduced_forms(long disc) {
    std::vector<Form> out;
    if (disc >= 0) throw Unsupported("reduced form enumeration needs a negative discriminant");
    Int D = disc;
    Int amax = isqrt(Int(-D / 3));
    for (Int A = 1; A <= amax; ++A)
        for (Int B = -A + 1; B <= A; ++B) {
            Int num = B * B - D;
            if (!divides(4 * A, num)) continue;
            Form f{A, B, exact_div(num, 4 * A)};
            if (gcd(gcd(f.A, f.B), f.C) != 1) continue;
            if (is_reduced(f)) out.push_back(f);
        }
    std::sort(out.begin(), out.end());
    return out;
}

class ClassGroup {
public:
    ClassGroup(long disc, std::vector<Form> forms) : disc_(disc), forms_(std::move(forms)) {
        std::size_t h = forms_.size();
        table_.assign(h, std::vector<std::size_t>(h, 0));
        if (disc_ == 1) return;
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < h; ++j) table_[i][j] = index_of(compose(forms_[i], forms_[j]));
    }

    long discriminant() const { return disc_; }
    std::size_t class_number() const { return forms_.size(); }
    const std::vector<Form>& forms() const { return forms_; }
    const std::vector<std::vector<std::size_t>>& table() const { return table_; }
    std::size_t identity() const { return 0; }

    std::size_t index_of(const Form& f) const {
        Form r = reduce(f);
        auto it = std::lower_bound(forms_.begin(), forms_.end(), r);
        if (it == forms_.end() || !(*it == r)) throw std::logic_error("form " + to_string(r) + " not in class group");
        return static_cast<std::size_t>(it - forms_.begin());
    }

private:
    long disc_;
    std::vector<Form> forms_;
    std::vector<std::vector<std::size_t>> table_;
};

inline void require_class_group(const DomainSpec& dom) {
    if (dom.is_real_quadratic())
        throw Unsupported("class groups of real quadratic orders are not supported (" + dom.name() + ")");
}

/// Memoized per domain.
inline const ClassGroup& class_group(const DomainSpec& dom) {
    require_class_group(dom);
    static std::shared_mutex mutex;
    static std::map<const DomainSpec*, std::unique_ptr<ClassGroup>> cache;
    {
        std::shared_lock lock(mutex);
        auto it = cache.find(&dom);
        if (it != cache.end()) return *it->second;
    }
    std::unique_ptr<ClassGroup> cg;
    if (!dom.is_quadratic())
        cg = std::make_unique<ClassGroup>(1, std::vector<Form>{Form{1, 1, 0}});
    else
        cg = std::make_unique<ClassGroup>(dom.discriminant(), reduced_forms(dom.discriminant()));
    std::unique_lock lock(mutex);
    auto& slot = cache[&dom];
    if (!slot) slot = std::move(cg);
    return *slot;
}

/// Form attached to a nonzero ideal: the primitive part (a, b + w) maps to
/// (a, -(2b + t), C).
inline Form form_of(const FracIdeal& u) {
    if (u.is_zero()) throw ZeroIdealError("form of the zero ideal");
    const DomainSpec& dom = u.domain();
    require_class_group(dom);
    if (!dom.is_quadratic()) return Form{1, 1, 0};
    const IdealLattice& lat = u.lattice();
    Int a = exact_div(lat.a(), lat.c());
    Int b = exact_div(lat.b(), lat.c());
    Int B = -(2 * b + dom.omega_trace());
    Int C = exact_div(B * B - dom.discriminant(), 4 * a);
    return reduce(Form{a, B, C});
}

/// Ideal (A, (-B + sqrt(disc))/2) of a form.
inline FracIdeal ideal_of(const DomainSpec& dom, const Form& f) {
    require_class_group(dom);
    if (!dom.is_quadratic()) return FracIdeal::unit(dom);
    Int b = dom.omega_trace() == 1 ? exact_div(-f.B - 1, 2) : exact_div(-f.B, 2);
    return FracIdeal::from_generators(dom, {FieldElem(f.A), FieldElem::make(dom, b, 1)});
}

inline std::size_t class_of(const FracIdeal& u) {
    const ClassGroup& cg = class_group(u.domain());
    if (!u.domain().is_quadratic()) return 0;
    return cg.index_of(form_of(u));
}

/// sigma(a) ~ a for one ideal a per class.
inline bool sigma_acts_trivially(const DomainSpec& dom) {
    const ClassGroup& cg = class_group(dom);
    if (!dom.is_quadratic() || dom.sigma() == Sigma::identity) return true;
    for (std::size_t i = 0; i < cg.class_number(); ++i) {
        FracIdeal rep = ideal_of(dom, cg.forms()[i]);
        if (class_of(rep.sigma(1)) != i) return false;
    }
    return true;
}

/// q0 with q0 * u = v, if u and v lie in the same class.
inline std::optional<FieldElem> ideal_classes_isomorphic(const FracIdeal& u, const FracIdeal& v) {
    require_class_group(u.domain());
    auto q = principal_generator(product(v, inverse(u)));
    if (q && !(u.scaled(*q) == v)) throw std::logic_error("class isomorphism failed to verify");
    return q;
}

}  // namespace skewdd
