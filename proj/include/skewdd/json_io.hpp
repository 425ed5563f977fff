#pragma once

// Canonical JSON for domains, ideals, series and certificates. Keys are
// sorted (nlohmann's default map), there are no floats, and integers that do
// not fit in int64 are written as decimal strings.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skewdd/completion.hpp"
#include "skewdd/extension.hpp"

namespace skewdd {

using json = nlohmann::json;

inline constexpr const char* kExtensionSchema = "extension-cert/v1";
inline constexpr const char* kCompletionSchema = "completion-cert/v1";

// Scalars

inline json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return json(static_cast<std::int64_t>(v.get_si()));
    return json(v.get_str());
}

inline Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(std::to_string(j.get<std::int64_t>()));
    if (j.is_string()) {
        Int v;
        if (v.set_str(j.get<std::string>(), 10) != 0) throw ParseError("not an integer: " + j.get<std::string>());
        return v;
    }
    throw ParseError("expected an integer, got " + j.dump());
}

inline long long_from_json(const json& j, const char* what) {
    if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
    return j.get<long>();
}

inline json elem_to_json(const FieldElem& e) { return json(to_string(e)); }

inline FieldElem elem_from_json(const DomainSpec& dom, const json& j) {
    if (j.is_number_integer() || (j.is_string() && !j.get<std::string>().empty() &&
                                  j.get<std::string>().find_first_not_of("-0123456789") == std::string::npos))
        return FieldElem(int_from_json(j)).in(dom);
    if (j.is_string()) return parse_elem(dom, j.get<std::string>());
    throw ParseError("expected an element, got " + j.dump());
}

// Domains

inline json domain_to_json(const DomainSpec& dom) {
    if (!dom.is_quadratic()) return json{{"kind", "int"}};
    return json{{"kind", "quadratic"}, {"d", dom.d()}, {"sigma", dom.sigma() == Sigma::identity ? "id" : "conj"}};
}

/// `int`, `quad:<d>:id|conj`, or the JSON form.
inline const DomainSpec& parse_domain(const std::string& text) {
    std::string s = detail::strip_spaces(text);
    if (s == "int" || s == "Z") return DomainSpec::integers();
    if (!s.empty() && s.front() == '{') {
        json j;
        try {
            j = json::parse(s);
        } catch (const json::exception& e) {
            throw ParseError(std::string("domain JSON: ") + e.what());
        }
        const std::string kind = j.value("kind", "");
        if (kind == "int") return DomainSpec::integers();
        if (kind != "quadratic") throw ParseError("unknown domain kind '" + kind + "'");
        const std::string sig = j.value("sigma", "id");
        if (sig != "id" && sig != "conj") throw ParseError("sigma must be id or conj");
        return DomainSpec::quadratic(long_from_json(j.at("d"), "d"), sig == "id" ? Sigma::identity : Sigma::conjugation);
    }
    if (s.rfind("quad:", 0) == 0) {
        auto colon = s.find(':', 5);
        if (colon == std::string::npos) throw ParseError("domain must look like quad:<d>:id|conj");
        std::string dtext = s.substr(5, colon - 5), sig = s.substr(colon + 1);
        long d;
        try {
            std::size_t used = 0;
            d = std::stol(dtext, &used);
            if (used != dtext.size()) throw ParseError("bad d");
        } catch (const std::exception&) {
            throw ParseError("bad discriminant parameter '" + dtext + "'");
        }
        if (sig != "id" && sig != "conj") throw ParseError("sigma must be id or conj");
        return DomainSpec::quadratic(d, sig == "id" ? Sigma::identity : Sigma::conjugation);
    }
    throw ParseError("unknown domain '" + text + "'");
}

inline const DomainSpec& domain_from_json(const json& j) {
    if (j.is_string()) return parse_domain(j.get<std::string>());
    return parse_domain(j.dump());
}

// Ideals

inline json ideal_to_json(const FracIdeal& u) {
    const IdealLattice& lat = u.lattice();
    json hnf = lat.domain().is_quadratic() ? json::array({int_to_json(lat.a()), int_to_json(lat.b()), int_to_json(lat.c())})
                                           : json::array({int_to_json(lat.a())});
    return json{{"hnf", hnf}, {"den", int_to_json(u.den())}};
}

inline json ideal_to_json(const IdealLattice& u) { return ideal_to_json(FracIdeal(u)); }

/// {"hnf": [...], "den": q}, {"gens": [...]}, a JSON list of generators, or
/// text such as "(2, 1+w)".
inline FracIdeal ideal_from_json(const DomainSpec& dom, const json& j) {
    if (j.is_object() && j.contains("hnf")) {
        const json& h = j.at("hnf");
        Int den = j.contains("den") ? int_from_json(j.at("den")) : Int(1);
        if (den <= 0) throw ParseError("ideal denominator must be positive");
        IdealLattice lat = IdealLattice::unit(dom);
        if (!h.is_array()) throw ParseError("hnf must be a list");
        if (!dom.is_quadratic()) {
            if (h.size() != 1) throw ParseError("an ideal of Z has hnf [m]");
            lat = IdealLattice::from_hnf(dom, int_from_json(h[0]), 0, 1);
        } else {
            if (h.size() != 3) throw ParseError("a quadratic ideal has hnf [a, b, c]");
            lat = IdealLattice::from_hnf(dom, int_from_json(h[0]), int_from_json(h[1]), int_from_json(h[2]));
        }
        FracIdeal out(lat, den);
        return out;
    }
    const json* list = &j;
    if (j.is_object() && j.contains("gens")) list = &j.at("gens");
    if (list->is_array()) {
        std::vector<FieldElem> gens;
        for (const auto& g : *list) gens.push_back(elem_from_json(dom, g));
        if (gens.empty()) throw ParseError("an ideal needs at least one generator");
        return FracIdeal::from_generators(dom, gens);
    }
    if (j.is_string() || j.is_number_integer()) {
        std::string s = j.is_string() ? detail::strip_spaces(j.get<std::string>()) : j.dump();
        if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
        std::vector<FieldElem> gens;
        int depth = 0;
        std::string cur;
        for (char ch : s) {
            if (ch == '(') ++depth;
            if (ch == ')') --depth;
            if (ch == ',' && depth == 0) {
                gens.push_back(parse_elem(dom, cur));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!cur.empty()) gens.push_back(parse_elem(dom, cur));
        if (gens.empty()) throw ParseError("an ideal needs at least one generator");
        return FracIdeal::from_generators(dom, gens);
    }
    throw ParseError("cannot read an ideal from " + j.dump());
}

inline IdealLattice integral_ideal_from_json(const DomainSpec& dom, const json& j) {
    FracIdeal u = ideal_from_json(dom, j);
    if (!u.is_integral()) throw ParseError("ideal " + u.to_string() + " must be integral");
    return u.lattice();
}

/// Command-line ideal: JSON if it parses as such, else generator text.
inline FracIdeal parse_ideal(const DomainSpec& dom, const std::string& text) {
    std::string s = detail::strip_spaces(text);
    if (!s.empty() && (s.front() == '{' || s.front() == '[')) {
        try {
            return ideal_from_json(dom, json::parse(s));
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("ideal JSON: ") + e.what());
        }
    }
    return ideal_from_json(dom, json(s));
}

// Series

inline json series_to_json(const Series& f) {
    json coeffs = json::array();
    for (const auto& c : f.coeffs()) coeffs.push_back(elem_to_json(c));
    json prec = f.is_exact() ? json(nullptr) : json(f.known_to());
    long val = f.is_zero() ? (f.is_exact() ? 0 : f.known_to()) : f.val();
    return json{{"val", val}, {"coeffs", coeffs}, {"prec", prec}};
}

/// Object form, or series text like "2+1*x^1 + O(x^8)".
inline Series series_from_json(const DomainSpec& dom, const json& j) {
    if (j.is_string()) return parse_series(dom, j.get<std::string>());
    if (j.is_number_integer()) return Series::constant(elem_from_json(dom, j));
    if (!j.is_object()) throw ParseError("cannot read a series from " + j.dump());
    long val = j.contains("val") ? long_from_json(j.at("val"), "val") : 0;
    std::vector<FieldElem> c;
    if (j.contains("coeffs")) {
        if (!j.at("coeffs").is_array()) throw ParseError("coeffs must be a list");
        for (const auto& e : j.at("coeffs")) c.push_back(elem_from_json(dom, e));
    }
    long kt = kExact;
    if (j.contains("prec") && !j.at("prec").is_null()) kt = long_from_json(j.at("prec"), "prec");
    if (kt < kExact && static_cast<long>(c.size()) > kt - val) throw ParseError("series has coefficients beyond its precision");
    return Series(val, c, kt);
}

template <int R, int C>
json matrix_to_json(const Matrix<Series, R, C>& m) {
    json out = json::array();
    for (int r = 0; r < R; ++r) {
        json row = json::array();
        for (int c = 0; c < C; ++c) row.push_back(series_to_json(m.e[r][c]));
        out.push_back(row);
    }
    return out;
}

template <int R, int C>
json matrix_to_json(const Matrix<FieldElem, R, C>& m) {
    json out = json::array();
    for (int r = 0; r < R; ++r) {
        json row = json::array();
        for (int c = 0; c < C; ++c) row.push_back(elem_to_json(m.e[r][c]));
        out.push_back(row);
    }
    return out;
}

/// Rows and columns are written as flat lists of two.
inline json pair_to_json(const Series& x, const Series& y) { return json::array({series_to_json(x), series_to_json(y)}); }
inline json pair_to_json(const FieldElem& x, const FieldElem& y) { return json::array({elem_to_json(x), elem_to_json(y)}); }

inline std::pair<Series, Series> series_pair_from_json(const DomainSpec& dom, const json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("expected a list of two series");
    return {series_from_json(dom, j[0]), series_from_json(dom, j[1])};
}

inline std::pair<FieldElem, FieldElem> elem_pair_from_json(const DomainSpec& dom, const json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("expected a list of two elements");
    return {elem_from_json(dom, j[0]), elem_from_json(dom, j[1])};
}

inline SeriesMatrix series_matrix_from_json(const DomainSpec& dom, const json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("expected a 2x2 matrix");
    auto [a, b] = series_pair_from_json(dom, j[0]);
    auto [c, d] = series_pair_from_json(dom, j[1]);
    return series_mat(a, b, c, d);
}

inline Mat2 mat2_from_json(const DomainSpec& dom, const json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("expected a 2x2 matrix");
    auto [a, b] = elem_pair_from_json(dom, j[0]);
    auto [c, d] = elem_pair_from_json(dom, j[1]);
    return mat2(a, b, c, d);
}

// Certificates

inline json to_json(const ExtensionCertificate& cert) {
    json audit = json::array();
    for (const auto& e : cert.audit)
        audit.push_back(json{{"n", e.n}, {"s", elem_to_json(e.s)}, {"c", matrix_to_json(e.c)}});
    return json{{"schema", kExtensionSchema},
                {"domain", domain_to_json(*cert.dom)},
                {"ideal", ideal_to_json(cert.J)},
                {"g0", pair_to_json(cert.g0(0, 0), cert.g0(0, 1))},
                {"g", pair_to_json(cert.g(0, 0), cert.g(0, 1))},
                {"A", matrix_to_json(cert.A)},
                {"q", series_to_json(cert.q)},
                {"prec", cert.prec},
                {"audit", audit}};
}

inline ExtensionCertificate extension_from_json(const json& j) {
    if (j.value("schema", "") != kExtensionSchema) throw ParseError("not an extension-cert/v1 document");
    ExtensionCertificate cert;
    cert.dom = &domain_from_json(j.at("domain"));
    const DomainSpec& dom = *cert.dom;
    cert.J = integral_ideal_from_json(dom, j.at("ideal"));
    auto [a1, a2] = elem_pair_from_json(dom, j.at("g0"));
    cert.g0 = row2(a1, a2);
    auto [g1, g2] = series_pair_from_json(dom, j.at("g"));
    cert.g = series_row(g1, g2);
    cert.A = series_matrix_from_json(dom, j.at("A"));
    cert.q = series_from_json(dom, j.at("q"));
    cert.prec = long_from_json(j.at("prec"), "prec");
    for (const auto& e : j.at("audit"))
        cert.audit.push_back({long_from_json(e.at("n"), "n"), elem_from_json(dom, e.at("s")), mat2_from_json(dom, e.at("c"))});
    return cert;
}

inline json to_json(const CompletionCertificate& cert) {
    json levels = json::array();
    for (const auto& l : cert.levels)
        levels.push_back(json{{"n", l.n},
                              {"A", ideal_to_json(l.A)},
                              {"B", ideal_to_json(l.B)},
                              {"abar0", pair_to_json(l.abar0(0, 0), l.abar0(0, 1))},
                              {"lambda", elem_to_json(l.lambda)},
                              {"mu", elem_to_json(l.mu)}});
    return json{{"schema", kCompletionSchema},
                {"domain", domain_to_json(*cert.dom)},
                {"ideal", ideal_to_json(cert.J)},
                {"row", pair_to_json(cert.row(0, 0), cert.row(0, 1))},
                {"witness", pair_to_json(cert.witness(0, 0), cert.witness(1, 0))},
                {"shift", cert.shift},
                {"n", cert.n},
                {"b", pair_to_json(cert.b(0, 0), cert.b(0, 1))},
                {"T", matrix_to_json(cert.T)},
                {"H_n", matrix_to_json(cert.Hn)},
                {"final", matrix_to_json(cert.final_matrix)},
                {"final_inverse", matrix_to_json(cert.final_inverse)},
                {"prec", cert.prec},
                {"levels", levels}};
}

inline CompletionCertificate completion_from_json(const json& j) {
    if (j.value("schema", "") != kCompletionSchema) throw ParseError("not a completion-cert/v1 document");
    CompletionCertificate cert;
    cert.dom = &domain_from_json(j.at("domain"));
    const DomainSpec& dom = *cert.dom;
    cert.J = integral_ideal_from_json(dom, j.at("ideal"));
    auto [r1, r2] = series_pair_from_json(dom, j.at("row"));
    cert.row = series_row(r1, r2);
    auto [t1, t2] = series_pair_from_json(dom, j.at("witness"));
    cert.witness = series_col(t1, t2);
    cert.shift = long_from_json(j.at("shift"), "shift");
    cert.n = long_from_json(j.at("n"), "n");
    auto [b1, b2] = series_pair_from_json(dom, j.at("b"));
    cert.b = series_row(b1, b2);
    cert.T = series_matrix_from_json(dom, j.at("T"));
    cert.Hn = mat2_from_json(dom, j.at("H_n"));
    cert.final_matrix = series_matrix_from_json(dom, j.at("final"));
    cert.final_inverse = series_matrix_from_json(dom, j.at("final_inverse"));
    cert.prec = long_from_json(j.at("prec"), "prec");
    for (const auto& l : j.at("levels")) {
        CompletionLevel lv;
        lv.n = long_from_json(l.at("n"), "n");
        lv.A = ideal_from_json(dom, l.at("A"));
        lv.B = ideal_from_json(dom, l.at("B"));
        auto [x, y] = elem_pair_from_json(dom, l.at("abar0"));
        lv.abar0 = row2(x, y);
        lv.lambda = elem_from_json(dom, l.at("lambda"));
        lv.mu = elem_from_json(dom, l.at("mu"));
        cert.levels.push_back(lv);
    }
    return cert;
}

/// Canonical text: two-space indent, sorted keys, trailing newline.
inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace skewdd
