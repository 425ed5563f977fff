// skewdd: batch front end for the skew Laurent series engines.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skewdd/json_io.hpp"
#include "skewdd/structure.hpp"

using namespace skewdd;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 2, kVerifyFailed = 3, kObstruction = 4, kPrecision = 5 };

struct Global {
    std::string domain = "int";
    long prec = 12;
    std::uint64_t seed = 0x5eed;
    long bound = 100000;
    std::string out;

    SearchBounds bounds() const {
        SearchBounds b;
        b.principal = bound;
        b.candidates = bound;
        b.seed = seed;
        return b;
    }
};

void write_output(const json& j, const std::string& out) {
    std::string text = canonical_dump(j);
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ParseError("cannot write " + out);
    f << text;
}

/// Inline JSON, or the path of a file holding it.
json json_argument(const std::string& arg, const std::string& what) {
    std::string s = detail::strip_spaces(arg);
    if (!s.empty() && (s.front() == '[' || s.front() == '{' || s.front() == '"')) {
        try {
            return json::parse(arg);
        } catch (const json::parse_error& e) {
            throw ParseError(what + ": " + e.what());
        }
    }
    if (std::filesystem::exists(arg)) return read_json_file(arg);
    throw ParseError(what + ": neither JSON nor an existing file: " + arg);
}

std::vector<Series> series_list(const DomainSpec& dom, const json& j) {
    if (!j.is_array()) throw ParseError("expected a JSON list of series");
    std::vector<Series> out;
    for (const auto& e : j) out.push_back(series_from_json(dom, e).as_ring());
    return out;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

// classgroup

int run_classgroup(const Global& g) {
    const DomainSpec& dom = parse_domain(g.domain);
    const ClassGroup& cg = class_group(dom);
    bool triv = sigma_acts_trivially(dom);
    std::string forms;
    for (const auto& f : cg.forms()) forms += (forms.empty() ? "" : ",") + to_string(f);
    std::cout << "h=" << cg.class_number() << ", forms=[" << forms << "], sigma_trivial=" << bool_text(triv) << "\n";
    if (!g.out.empty()) {
        json fl = json::array();
        for (const auto& f : cg.forms()) fl.push_back(json::array({int_to_json(f.A), int_to_json(f.B), int_to_json(f.C)}));
        json inv = json::array();
        for (long n : group_structure(cg).invariants) inv.push_back(n);
        write_output(json{{"domain", domain_to_json(dom)},
                          {"discriminant", cg.discriminant()},
                          {"h", cg.class_number()},
                          {"forms", fl},
                          {"invariants", inv},
                          {"sigma_trivial", triv}},
                     g.out);
    }
    return kOk;
}

// extend

struct ExtendArgs {
    std::string gens;
    std::string ideal;
    long const_depth = 0;
    int max_repairs = 64;
};

int run_extend(const Global& g, const ExtendArgs& a) {
    const DomainSpec& dom = parse_domain(g.domain);
    if (a.gens.empty()) throw ParseError("--gens is required");
    std::vector<Series> gens = series_list(dom, json_argument(a.gens, "--gens"));
    bool any = false;
    for (const auto& f : gens) any = any || !f.is_zero();
    if (!any) throw ParseError("no nonzero generators given");
    std::optional<IdealLattice> start;
    if (!a.ideal.empty()) start = parse_ideal(dom, a.ideal).lattice();
    if (a.const_depth > 0) start = constant_ideal_bounded(dom, gens, a.const_depth);
    ExtensionRun run = extend_with_repairs(dom, gens, g.prec, start, a.max_repairs);
    VerifyReport rep = verify_extension_certificate(run.cert);
    if (!rep.pass) {
        std::cerr << "certificate failed its own check: " << rep.message << "\n";
        return kVerifyFailed;
    }
    std::ostream& info = g.out.empty() ? std::cerr : std::cout;
    info << "J=" << run.cert.J.to_string() << ", repairs=" << run.repairs << ", prec=" << g.prec << "\n";
    write_output(to_json(run.cert), g.out);
    return kOk;
}

// complete-row

struct CompleteArgs {
    std::string ideal = "1";
    std::string row;
    std::string witness;
    std::string hand_b;
};

int run_complete_row(const Global& g, const CompleteArgs& a) {
    const DomainSpec& dom = parse_domain(g.domain);
    if (a.row.empty() || a.witness.empty()) throw ParseError("--row and --witness are required");
    IdealLattice J = parse_ideal(dom, a.ideal).lattice();
    auto [r1, r2] = series_pair_from_json(dom, json_argument(a.row, "--row"));
    auto [t1, t2] = series_pair_from_json(dom, json_argument(a.witness, "--witness"));
    SeriesRow row = series_row(r1, r2);
    SeriesCol t = series_col(t1, t2);
    CompletionCertificate cert;
    if (!a.hand_b.empty()) {
        auto [b1, b2] = series_pair_from_json(dom, json_argument(a.hand_b, "--b"));
        cert = certificate_from_completion(J, row, t, series_row(b1, b2), g.prec);
    } else {
        cert = complete_unimodular_row(J, row, t, g.prec, g.bounds());
    }
    VerifyReport rep = verify_completion(cert);
    if (!rep.pass) {
        std::cerr << "certificate failed verification: " << rep.message << "\n";
        return kVerifyFailed;
    }
    std::ostream& info = g.out.empty() ? std::cerr : std::cout;
    info << "n=" << cert.n << ", levels=" << cert.levels.size() << ", b=[" << to_string(cert.b(0, 0)) << ", "
         << to_string(cert.b(0, 1)) << "], prec=" << cert.prec << "\n";
    write_output(to_json(cert), g.out);
    return kOk;
}

// verify

int run_verify(const std::string& path) {
    json j = read_json_file(path);
    const std::string schema = j.value("schema", "");
    VerifyReport rep;
    try {
        if (schema == kExtensionSchema)
            rep = verify_extension_certificate(extension_from_json(j));
        else if (schema == kCompletionSchema)
            rep = verify_completion(completion_from_json(j));
        else
            throw ParseError("unknown schema '" + schema + "'");
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed certificate: ") + e.what());
    }
    if (rep.pass) {
        std::cout << "PASS " << schema << "\n";
        return kOk;
    }
    std::cout << "FAIL " << schema;
    if (rep.first_bad_order) std::cout << " at order " << *rep.first_bad_order;
    std::cout << ": " << rep.message << "\n";
    return kVerifyFailed;
}

// report

FieldElem default_stable_rank_element(const DomainSpec& dom) {
    if (dom.is_quadratic()) {
        FieldElem e = FieldElem::make(dom, 1, 1);
        if (!is_unit(dom, e)) return e;
    }
    return FieldElem(2).in(dom);
}

int run_report(const Global& g, long samples, bool json_stdout) {
    const DomainSpec& dom = parse_domain(g.domain);
    json rep{{"domain", domain_to_json(dom)}};
    std::ostringstream text;
    text << "domain " << dom.name() << "\n";

    SimplicityVerdict sv = simplicity_probe(dom);
    json tested = json::array();
    for (const auto& c : sv.tested) tested.push_back(ideal_to_json(c));
    json simp{{"verdict", sv.verdict == Simplicity::non_simple ? "non-simple" : "inconclusive"}, {"tested", tested}};
    if (sv.witness) {
        simp["witness"] = ideal_to_json(*sv.witness);
        text << "simplicity: not simple, sigma(J) = J for J = " << sv.witness->to_string() << "\n";
    } else {
        text << "simplicity: inconclusive over " << sv.tested.size() << " candidate(s)\n";
    }
    rep["simplicity"] = simp;

    FieldElem a = default_stable_rank_element(dom);
    StableRankReport sr = stable_rank_witness(dom, a, samples, g.seed);
    rep["stable_rank"] = json{{"a", elem_to_json(sr.a)},
                              {"b", elem_to_json(sr.b)},
                              {"identity_holds", sr.identity_holds},
                              {"samples", samples},
                              {"all_non_units", sr.all_non_units},
                              {"seed", g.seed}};
    text << "stable rank witness: a = " << to_string(sr.a) << ", b = " << to_string(sr.b)
         << ", (a+x)a - (a^2+bx) = -x: " << bool_text(sr.identity_holds) << ", " << samples
         << " sampled r all give non-unit lowest coefficients: " << bool_text(sr.all_non_units) << "\n";

    if (dom.is_real_quadratic()) {
        rep["k0"] = json{{"supported", false}};
        text << "K0: class groups of real quadratic orders are not supported\n";
    } else {
        K0Report k0 = k0_report(dom);
        json inv = json::array();
        for (long n : k0.group.invariants) inv.push_back(n);
        json k0j{{"supported", true},
                 {"h", k0.h},
                 {"sigma_trivial", k0.sigma_trivial},
                 {"invariants", inv},
                 {"conclusion", k0.conclusion}};
        if (k0.witness) {
            k0j["witness"] = ideal_to_json(*k0.witness);
            k0j["witness_iso_to_D"] = k0.witness_iso_absent ? json("absent") : json("present");
            text << "witness: " << k0.witness->to_string() << " R is not isomorphic to R (extended_ideal_iso = "
                 << (k0.witness_iso_absent ? "absent" : "present") << ")\n";
        }
        rep["k0"] = k0j;
        text << "h = " << k0.h << ", sigma_trivial = " << bool_text(k0.sigma_trivial) << "\n" << k0.conclusion << "\n";
    }
    if (json_stdout && g.out.empty()) {
        write_output(rep, "");
    } else {
        std::cout << text.str();
        if (!g.out.empty()) write_output(rep, g.out);
    }
    return kOk;
}

// demos

class Transcript {
public:
    void say(const std::string& s) { std::cout << s << "\n"; }
    void check(bool ok, const std::string& s) {
        std::cout << (ok ? "  [ok] " : "  [FAIL] ") << s << "\n";
        failures_ += ok ? 0 : 1;
    }
    int exit_code() const { return failures_ ? kVerifyFailed : kOk; }

private:
    int failures_ = 0;
};

void completion_step(Transcript& tr, const IdealLattice& J, const SeriesRow& a, const SeriesCol& t, long prec,
                     const SearchBounds& bounds) {
    CompletionCertificate cert = complete_unimodular_row(J, a, t, prec, bounds);
    tr.say("  row a = [" + to_string(a(0, 0)) + ", " + to_string(a(0, 1)) + "]");
    tr.say("  n = " + std::to_string(cert.n) + ", b = [" + to_string(cert.b(0, 0)) + ", " + to_string(cert.b(0, 1)) + "]");
    VerifyReport rep = verify_completion(cert);
    tr.check(rep.pass, "completion verified through order " + std::to_string(prec) + (rep.pass ? "" : ": " + rep.message));
}

int demo_hilbert(const Global& g) {
    Transcript tr;
    const DomainSpec& dom = DomainSpec::quadratic(-1, Sigma::conjugation);
    tr.say("Hilbert's construction: over the field K = Q(i) with sigma = complex conjugation,");
    tr.say("K((x;sigma)) is a noncommutative division ring.");
    const FieldElem i = FieldElem::omega(dom);
    Series xi = Series::x() * Series::constant(i);
    Series ix = Series::constant(i) * Series::x();
    tr.say("  x*i = " + to_string(xi) + ", i*x = " + to_string(ix));
    tr.check(xi == -ix && !(xi == ix), "x i = -i x, so the ring is not commutative");
    std::mt19937_64 rng(g.seed);
    std::uniform_int_distribution<long> c(-5, 5);
    for (int k = 0; k < 3; ++k) {
        std::vector<FieldElem> co;
        for (int j = 0; j < 5; ++j) co.push_back(FieldElem::make(dom, c(rng), c(rng)));
        if (co[0].is_zero()) co[0] = FieldElem::make(dom, 2, 1);
        Series f(static_cast<long>(c(rng)) % 3, co);
        Series fi = invert_unit(f, g.prec);
        Series l = f * fi, r = fi * f;
        bool ok = l.coefficient(0) == FieldElem(1) && r.coefficient(0) == FieldElem(1);
        for (long m = 1; m < l.known_to(); ++m) ok = ok && l.coefficient(m).is_zero();
        for (long m = 1; m < r.known_to(); ++m) ok = ok && r.coefficient(m).is_zero();
        tr.say("  f = " + to_string(f));
        tr.say("  f^-1 = " + to_string(fi));
        tr.check(ok, "f f^-1 = 1 = f^-1 f through O(x^" + std::to_string(std::min(l.known_to(), r.known_to())) + ")");
    }
    tr.say("Over the ring Z[i] instead of the field, 2+i is not a unit, so 2+i+x has no inverse in R:");
    bool refused = false;
    try {
        invert_unit(Series(0, {FieldElem::make(dom, 2, 1), FieldElem(1)}), g.prec, true, &dom);
    } catch (const SingularError&) {
        refused = true;
    }
    tr.check(refused, "ring-mode inversion of 2+i+x is refused");
    return tr.exit_code();
}

int demo_zsqrt5(const Global& g) {
    Transcript tr;
    const DomainSpec& dom = DomainSpec::quadratic(-5, Sigma::conjugation);
    tr.say("D = Z[sqrt(-5)], sigma = conjugation, R = D((x;sigma))");
    const ClassGroup& cg = class_group(dom);
    tr.check(cg.class_number() == 2, "h(D) = 2 with forms (1,0,5), (2,2,3)");
    const FracIdeal p2 = FracIdeal::from_generators(dom, {FieldElem(2), parse_elem(dom, "1+w")});
    const FracIdeal p3 = FracIdeal::from_generators(dom, {FieldElem(3), parse_elem(dom, "1+w")});
    tr.check(p2.sigma(1) == p2, "sigma(p2) = p2 for p2 = " + p2.to_string());
    tr.check(!principal_generator(p2).has_value(), "p2 is not principal");
    tr.check(product(p2, p2) == FracIdeal::from_generators(dom, {FieldElem(2)}), "p2^2 = (2)");
    tr.check(sigma_acts_trivially(dom), "sigma acts trivially on G(D)");

    tr.say("Extension of the right ideal (2+x, 1+w) R:");
    std::vector<Series> gens{parse_series(dom, "2+x").as_ring(), parse_series(dom, "1+w").as_ring()};
    ExtensionRun run = extend_with_repairs(dom, gens, 8);
    tr.say("  constant ideal J = " + run.cert.J.to_string() + " after " + std::to_string(run.repairs) + " repair(s)");
    tr.check(run.repairs == 1 && run.cert.J.is_unit(), "one enlargement reaches J = (1)");
    tr.check(verify_extension_certificate(run.cert).pass, "extension certificate verified through order 8");

    tr.say("Completion of a random unimodular row over I = p2 R:");
    std::mt19937_64 rng(g.seed);
    RandomRow rr = random_elementary_row(p2.lattice(), rng);
    completion_step(tr, p2.lattice(), rr.a, rr.t, 8, g.bounds());

    tr.say("K0:");
    auto iso = extended_ideal_iso(p2, FracIdeal::unit(dom));
    tr.check(!iso.has_value(), "extended_ideal_iso(p2, D) is absent: p2 R is not isomorphic to R");
    auto iso23 = extended_ideal_iso(p2, p3);
    tr.check(iso23.has_value() && p2.sigma(iso23->second).scaled(iso23->first) == p3,
             "extended_ideal_iso(p2, p3) = " + (iso23 ? to_string(iso23->first) : std::string("absent")));
    K0Report k0 = k0_report(dom);
    tr.say("  " + k0.conclusion);
    tr.check(k0.conclusion == "G(R) ≅ ℤ/2, K₀(R) ≅ ℤ ⊕ ℤ/2", "K0 conclusion");
    return tr.exit_code();
}

int demo_gauss(const Global& g) {
    Transcript tr;
    const DomainSpec& dom = DomainSpec::quadratic(-1, Sigma::conjugation);
    tr.say("D = Z[i], sigma = conjugation");
    const IdealLattice q = IdealLattice::from_integral(dom, {parse_elem(dom, "1+w")});
    const IdealLattice p5 = IdealLattice::from_integral(dom, {parse_elem(dom, "2+w")});
    SimplicityVerdict v = simplicity_probe(dom, {q});
    tr.check(v.verdict == Simplicity::non_simple, "(1+i) is sigma-stable, so R is not simple");
    v = simplicity_probe(dom, {p5});
    tr.check(v.verdict == Simplicity::inconclusive, "(2+i) is moved by sigma: inconclusive on that candidate");
    FracIdeal inv = asano_inverse(q);
    tr.check((FracIdeal(q) * inv).is_unit(), "two-sided inverse of (1+i) R is " + inv.to_string() + " R");
    bool refused = false;
    try {
        asano_inverse(p5);
    } catch (const NotTwoSided&) {
        refused = true;
    }
    tr.check(refused, "(2+i) R is not two-sided");
    const FracIdeal P5(p5);
    auto mu = principal_generator(P5 * inverse(P5.sigma(1)));
    tr.check(mu.has_value(), "mu generating (2+i) sigma((2+i))^-1: " + (mu ? to_string(*mu) : std::string("none")));
    tr.say("Completion of a random unimodular row over I = (2+i) R:");
    std::mt19937_64 rng(g.seed);
    RandomRow rr = random_elementary_row(p5, rng);
    completion_step(tr, p5, rr.a, rr.t, 8, g.bounds());
    K0Report k0 = k0_report(dom);
    tr.say("  " + k0.conclusion);
    tr.check(k0.conclusion == "K₀(R) ≅ ℤ", "K0 conclusion");
    return tr.exit_code();
}

int demo_stable_rank(const Global& g) {
    Transcript tr;
    const DomainSpec& Z = DomainSpec::integers();
    tr.say("The row (a + x, a^2 + b x) with b = 1 + sigma(a), over D = Z, a = 2, b = 3:");
    StableRankReport sr = stable_rank_witness(Z, FieldElem(2), 500, g.seed);
    tr.say("  (a+x)a - (a^2+bx) = " + to_string(sr.combination));
    tr.check(sr.identity_holds, "(2+x)2 - (4+3x) = -x, so the row is unimodular");
    tr.check(sr.all_non_units, "500 sampled r: lowest((2+x) + (4+3x) r) in {4 r_k, 2 + 4 r_0, 2} is never a unit");
    const DomainSpec& Q = DomainSpec::quadratic(-5, Sigma::conjugation);
    StableRankReport sq = stable_rank_witness(Q, parse_elem(Q, "1+w"), 500, g.seed);
    tr.check(sq.identity_holds && sq.all_non_units, "same over Z[sqrt(-5)] with a = 1+w, b = " + to_string(sq.b));

    tr.say("Completing (2+x, 4+3x) with witness t = (-2x^-1, x^-1):");
    SeriesRow a = series_row(parse_series(Z, "2+x"), parse_series(Z, "4+3*x"));
    SeriesCol t = series_col(parse_series(Z, "-2*x^-1"), parse_series(Z, "x^-1"));
    const IdealLattice D = IdealLattice::unit(Z);
    completion_step(tr, D, a, t, 8, g.bounds());
    CompletionCertificate hand = certificate_from_completion(D, a, t, series_row(parse_series(Z, "1"), parse_series(Z, "2")), 8);
    tr.check(verify_completion(hand).pass, "the hand completion [[2+x, 4+3x], [1, 2]] verifies too");
    return tr.exit_code();
}

int run_demo(const Global& g, const std::string& name) {
    if (name == "hilbert") return demo_hilbert(g);
    if (name == "zsqrt-5") return demo_zsqrt5(g);
    if (name == "gauss-conj") return demo_gauss(g);
    if (name == "stable-rank") return demo_stable_rank(g);
    throw ParseError("unknown demo '" + name + "' (hilbert, zsqrt-5, gauss-conj, stable-rank)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skewdd: ideals, extensions and row completions over D((x;sigma))"};
    app.require_subcommand(1);
    Global g;
    auto add_global = [&](CLI::App* sub) {
        sub->add_option("--domain", g.domain, "int | quad:<d>:id|conj | JSON");
        sub->add_option("--prec", g.prec, "precision (orders)")->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", g.seed, "seed for sampling and searches");
        sub->add_option("--bound", g.bound, "search bound")->check(CLI::PositiveNumber);
        sub->add_option("--out", g.out, "output file (default stdout)");
    };

    auto* cg = app.add_subcommand("classgroup", "class group and sigma action");
    add_global(cg);

    ExtendArgs ea;
    auto* ext = app.add_subcommand("extend", "constant ideal and extension certificate of a right ideal");
    add_global(ext);
    ext->add_option("--gens", ea.gens, "JSON list of generator series, or a file")->required();
    ext->add_option("--ideal", ea.ideal, "starting constant ideal guess");
    ext->add_option("--const-depth", ea.const_depth, "start from the window bound of this depth");
    ext->add_option("--max-repairs", ea.max_repairs, "cap on enlargements");

    CompleteArgs ca;
    auto* cr = app.add_subcommand("complete-row", "complete a unimodular row to an invertible matrix");
    add_global(cr);
    cr->add_option("--ideal", ca.ideal, "J with I = J R (default 1)");
    cr->add_option("--row", ca.row, "JSON [a1, a2] or file")->required();
    cr->add_option("--witness", ca.witness, "JSON [t1, t2] with a t = 1, or file")->required();
    cr->add_option("--b", ca.hand_b, "certify this second row instead of computing one");

    std::string cert_path;
    auto* ver = app.add_subcommand("verify", "re-check a certificate");
    ver->add_option("certificate", cert_path, "certificate file")->required();

    long samples = 500;
    bool json_stdout = false;
    auto* rep = app.add_subcommand("report", "structure report");
    add_global(rep);
    rep->add_option("--samples", samples, "stable-rank samples")->check(CLI::NonNegativeNumber);
    rep->add_flag("--json", json_stdout, "print the JSON report instead of text");

    std::string demo_name;
    auto* demo = app.add_subcommand("demo", "narrated examples: hilbert, zsqrt-5, gauss-conj, stable-rank");
    add_global(demo);
    demo->add_option("name", demo_name, "demo name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*cg) return run_classgroup(g);
        if (*ext) return run_extend(g, ea);
        if (*cr) return run_complete_row(g, ca);
        if (*ver) return run_verify(cert_path);
        if (*rep) return run_report(g, samples, json_stdout);
        if (*demo) return run_demo(g, demo_name);
    } catch (const SigmaClassObstruction& e) {
        std::cerr << "obstruction: " << e.what() << "\n";
        return kObstruction;
    } catch (const BoundExceeded& e) {
        std::cerr << "search bound exhausted: " << e.what() << "\n";
        return kObstruction;
    } catch (const PrecisionError& e) {
        std::cerr << "precision deficit " << e.deficit() << ": " << e.what() << "\n";
        return kPrecision;
    } catch (const NotUnimodular& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kVerifyFailed;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::logic_error& e) {
        std::cerr << "internal check failed: " << e.what() << "\n";
        return kVerifyFailed;
    }
    return kUsage;
}
