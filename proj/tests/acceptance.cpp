// Acceptance run: one PASS/FAIL line per criterion with its wall time and limit.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "skewdd/json_io.hpp"
#include "support.hpp"

using namespace skewdd;
using testing_support::core_domains;
using testing_support::random_elem;

namespace {

/// Collects the first failure of a criterion.
struct Check {
    bool ok = true;
    std::string detail;
    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

int failures = 0;

void criterion(const std::string& name, double limit_s, const std::function<void(Check&)>& body) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.ok && secs >= limit_s) c.expect(false, "time limit exceeded");
    if (!c.ok) ++failures;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.3f s, limit %g s", secs, limit_s);
    std::cout << (c.ok ? "PASS " : "FAIL ") << name << " (" << timing << ")";
    if (!c.ok) std::cout << ": " << c.detail;
    std::cout << std::endl;
}

std::string elem_text(const FieldElem& e) { return to_string(e); }

// Class numbers

void class_number_case(Check& c, long d, std::size_t h) {
    auto t0 = std::chrono::steady_clock::now();
    const DomainSpec& dom = DomainSpec::quadratic(d, Sigma::identity);
    const long D = dom.discriminant();
    const ClassGroup& cg = class_group(dom);
    std::set<std::tuple<long, long, long>> mine;
    for (const Form& f : cg.forms()) mine.insert({f.A.get_si(), f.B.get_si(), f.C.get_si()});
    c.expect(cg.class_number() == h, "h for disc " + std::to_string(D));
    c.expect(mine == oracle::reduced_forms(D), "forms differ from the enumeration oracle for disc " + std::to_string(D));
    c.expect(static_cast<long>(h) == oracle::dirichlet_class_number(D), "Dirichlet oracle for disc " + std::to_string(D));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(secs < 1.0, "disc " + std::to_string(D) + " took over 1 s");
}

// Ideal algebra

void ideal_suite(Check& c) {
    std::mt19937_64 rng(0xA11CE);
    for (const DomainSpec* dom : core_domains()) {
        const FracIdeal one = FracIdeal::unit(*dom);
        for (int i = 0; i < 1000 && c.ok; ++i) {
            FracIdeal u = testing_support::random_frac_ideal(*dom, rng);
            FracIdeal v = testing_support::random_frac_ideal(*dom, rng);
            c.expect(u * inverse(u) == one, dom->name() + ": u u^-1 != D for " + u.to_string());
            c.expect((u * v).norm() == u.norm() * v.norm(), dom->name() + ": norm not multiplicative");
            const IdealLattice& lu = u.lattice();
            const IdealLattice& lv = v.lattice();
            auto [a1, a2] = lu.two_generators();
            auto [b1, b2] = lv.two_generators();
            IdealLattice prod = (FracIdeal(lu) * FracIdeal(lv)).lattice();
            c.expect(prod.index() == lu.index() * lv.index(), dom->name() + ": index not multiplicative");
            c.expect(prod.index() == oracle::index_of_span(*dom, {a1 * b1, a1 * b2, a2 * b1, a2 * b2}),
                     dom->name() + ": product index differs from the minor oracle");
            FieldElem e = a1 * b1 * random_elem(*dom, rng, 5, false) + a2 * b2 * random_elem(*dom, rng, 5, false);
            auto cp = express_in_product(*dom, e, {a1, a2}, {b1, b2});
            c.expect(cp[0][0] * a1 * b1 + cp[0][1] * a1 * b2 + cp[1][0] * a2 * b1 + cp[1][1] * a2 * b2 == e,
                     dom->name() + ": express_in_product round trip");
            auto cg = express_in_generators(*dom, e, {a1, a2});
            c.expect(cg[0] * a1 + cg[1] * a2 == e, dom->name() + ": express_in_generators round trip");
        }
    }
}

// Skew series

void series_suite(Check& c) {
    std::mt19937_64 rng(0x5E41E5);
    std::uniform_int_distribution<long> vals(-4, 4), lens(1, 6), kt(0, 8);
    for (const DomainSpec* dom : core_domains()) {
        for (int n = 0; n < 1000 && c.ok; ++n) {
            const std::string where = dom->name() + " triple " + std::to_string(n);
            FieldElem d = random_elem(*dom, rng, 9);
            long i = vals(rng);
            c.expect(Series::monomial(FieldElem(1), i) * Series::constant(d) == Series::monomial(sigma_apply(d, i), i),
                     where + ": twist law");
            Series f = testing_support::random_series(*dom, rng, vals(rng), lens(rng));
            Series g = testing_support::random_series(*dom, rng, vals(rng), lens(rng));
            Series h = testing_support::random_series(*dom, rng, vals(rng), lens(rng));
            c.expect((f * g) * h == f * (g * h), where + ": associativity");
            c.expect(f * (g + h) == f * g + f * h && (f + g) * h == f * h + g * h, where + ": distributivity");
            c.expect(oracle::sparse(f * g) == oracle::multiply(oracle::sparse(f), oracle::sparse(g)), where + ": monomial oracle");
            Series u = invert_unit(f, 10);
            Series one = Series::constant(FieldElem(1));
            c.expect((f * u).truncate(10) == one.truncate(10) && (u * f).truncate(10) == one.truncate(10),
                     where + ": invert_unit round trip");
            long Kf = f.val() + kt(rng), Kg = g.val() + kt(rng);
            Series p = f.truncate(Kf) * g.truncate(Kg);
            long want = std::min(f.val() + Kg, g.val() + Kf);
            c.expect(p.known_to() == want && oracle::sparse(p) == oracle::below(oracle::sparse(f * g), want),
                     where + ": precision law");
        }
    }
}

// Extension

void extension_suite(Check& c) {
    std::mt19937_64 rng(0xE7E4D);
    for (const DomainSpec* dom : core_domains()) {
        // 100 inputs g = U g0, then 100 with right unit factors as well
        for (bool right : {false, true})
            for (int i = 0; i < 100 && c.ok; ++i) {
                auto in = testing_support::random_extension_input(*dom, rng, 5, right);
                c.expect(constant_ideal_bounded(*dom, {in.g(0, 0), in.g(0, 1)}, 6) == in.J,
                         dom->name() + " case " + std::to_string(i) + ": constant ideal");
                auto cert = extend(*dom, in.J, in.g, 12);
                for (long k = 0; k <= 12; ++k) {
                    auto rep = verify_extension_certificate(cert, k);
                    c.expect(rep.pass, dom->name() + " case " + std::to_string(i) + " order " + std::to_string(k) + ": " + rep.message);
                }
            }
    }
    const DomainSpec& Q5 = DomainSpec::quadratic(-5, Sigma::identity);
    const std::vector<Series> gens{parse_series(Q5, "2+x"), parse_series(Q5, "1+w")};
    auto run = extend_with_repairs(Q5, gens, 12);
    c.expect(run.repairs == 1, "repair case: " + std::to_string(run.repairs) + " repairs");
    c.expect(run.cert.J.is_unit(), "repair case: J = " + run.cert.J.to_string());
    c.expect(verify_extension_certificate(run.cert).pass, "repair case certificate");
    const IdealLattice p2 = IdealLattice::from_integral(Q5, {FieldElem(2), parse_elem(Q5, "1+w")});
    try {
        extend(Q5, p2, series_row(gens[0], gens[1]), 12);
        c.expect(false, "repair case: no ConstIdealUnderestimate from p2");
    } catch (const ConstIdealUnderestimate& e) {
        c.expect(e.enlarged().is_unit() && e.order() == 1, "repair case: enlargement " + e.enlarged().to_string());
    }
}

// Completion

void completion_suite(Check& c) {
    const DomainSpec& Z = DomainSpec::integers();
    const SeriesRow a = series_row(parse_series(Z, "2+x"), parse_series(Z, "4+3*x"));
    const SeriesCol t = series_col(parse_series(Z, "-2*x^-1"), parse_series(Z, "x^-1"));
    auto cert = complete_unimodular_row(IdealLattice::unit(Z), a, t, 8);
    auto rep = verify_completion(cert);
    c.expect(rep.pass, "(2+x, 4+3x): " + rep.message);
    auto hand = certificate_from_completion(IdealLattice::unit(Z), a, t, series_row(parse_series(Z, "1"), parse_series(Z, "2")), 8);
    rep = verify_completion(hand);
    c.expect(rep.pass, "hand completion: " + rep.message);

    std::mt19937_64 rng(0xC0313);
    for (const DomainSpec* dom : core_domains()) {
        const IdealLattice J = testing_support::completion_ideal(*dom);
        for (int i = 0; i < 100 && c.ok; ++i) {
            auto rr = random_elementary_row(J, rng);
            try {
                auto cc = complete_unimodular_row(J, rr.a, rr.t, 8);
                auto r = verify_completion(cc);
                c.expect(r.pass, dom->name() + " row " + std::to_string(i) + ": " + r.message);
            } catch (const SigmaClassObstruction& e) {
                c.expect(false, dom->name() + " row " + std::to_string(i) + ": SigmaClassObstruction " + e.what());
            }
        }
    }
}

// Stable rank

void stable_rank_case(Check& c, const DomainSpec& dom, const FieldElem& a) {
    auto rep = stable_rank_witness(dom, a, 500, 0xB0B);
    const std::string where = dom.name() + ", a = " + elem_text(a);
    c.expect(rep.identity_holds, where + ": (a+x)a - (a^2+bx) != -x");
    c.expect(rep.b == FieldElem(1) + sigma_apply(a, 1), where + ": b != 1 + sigma(a)");
    c.expect(rep.samples.size() == 500, where + ": sample count");
    for (const auto& s : rep.samples) {
        // independent recomputation of the case formula
        const long k = s.r.val();
        const FieldElem rk = s.r.lowest();
        FieldElem want = k < 0 ? a * a * rk : k == 0 ? a + a * a * rk : a;
        Series h = rep.row(0, 0) + rep.row(0, 1) * s.r;
        c.expect(!h.is_zero() && h.lowest() == want && h.val() == std::min(k, 0L), where + ": case formula");
        c.expect(!want.is_zero() && !is_unit(dom, want), where + ": unit or zero lowest coefficient " + elem_text(want));
    }
}

// Determinism

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    int status = std::system((std::string(SKEWDD_CLI) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void determinism(Check& c) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("skewdd_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const DomainSpec& Q5c = DomainSpec::quadratic(-5, Sigma::conjugation);
    std::mt19937_64 rng(42);
    auto rr = random_elementary_row(testing_support::completion_ideal(Q5c), rng);
    std::ofstream(dir / "row.json") << pair_to_json(rr.a(0, 0), rr.a(0, 1)).dump();
    std::ofstream(dir / "t.json") << pair_to_json(rr.t(0, 0), rr.t(1, 0)).dump();
    const std::vector<std::string> commands = {
        "extend --domain quad:-5:id --gens '[\"2+1*x^1\",\"1+1*w\"]' --prec 12 --seed 42",
        "complete-row --domain int --row '[\"2+x\",\"4+3*x\"]' --witness '[\"-2*x^-1\",\"x^-1\"]' --prec 8 --seed 42",
        "complete-row --domain quad:-5:conj --ideal '(2, 1+w)' --row " + (dir / "row.json").string() + " --witness " +
            (dir / "t.json").string() + " --prec 8 --seed 42",
        "report --domain quad:-5:conj --samples 100 --json --seed 42",
    };
    for (std::size_t i = 0; i < commands.size(); ++i) {
        std::uint64_t h[2];
        for (int r = 0; r < 2; ++r) {
            fs::path out = dir / ("run" + std::to_string(i) + "_" + std::to_string(r) + ".json");
            int code = run_cli(commands[i] + " --out " + out.string());
            c.expect(code == 0, "exit " + std::to_string(code) + " from: " + commands[i]);
            std::string text = slurp(out);
            c.expect(!text.empty(), "empty output from: " + commands[i]);
            h[r] = fnv1a(text);
        }
        c.expect(h[0] == h[1], "hashes differ for: " + commands[i]);
    }
    fs::remove_all(dir);
}

}  // namespace

int main() {
    criterion("class numbers: disc -20 h=2 {(1,0,5),(2,2,3)}; discs -4, -8, -3 h=1", 1.0, [](Check& c) {
        class_number_case(c, -5, 2);
        class_number_case(c, -1, 1);
        class_number_case(c, -2, 1);
        class_number_case(c, -3, 1);
        std::set<std::tuple<long, long, long>> want{{1, 0, 5}, {2, 2, 3}};
        c.expect(oracle::reduced_forms(-20) == want, "oracle forms for disc -20");
    });
    criterion("ideal algebra: 1000 random fractional ideals per instance", 30.0, ideal_suite);
    criterion("skew series: twist law, ring axioms, invert_unit, precision law on 1000 triples per instance", 30.0, series_suite);
    criterion("extension: 5 instances x 100 inputs at prec 12, designed repair case", 120.0, extension_suite);
    criterion("completion: (2+x, 4+3x) at prec 8, hand completion, 100 random rows per instance", 180.0, completion_suite);
    criterion("stable rank: a in {2, 3, 5} over Z, a = 1+w over Z[sqrt(-5)], 500 samples each", 10.0, [](Check& c) {
        const DomainSpec& Z = DomainSpec::integers();
        for (long a : {2L, 3L, 5L}) stable_rank_case(c, Z, FieldElem(a).in(Z));
        for (Sigma s : {Sigma::identity, Sigma::conjugation}) {
            const DomainSpec& Q5 = DomainSpec::quadratic(-5, s);
            stable_rank_case(c, Q5, parse_elem(Q5, "1+w"));
        }
    });
    criterion("K0 report: Z[sqrt(-5)] id/conj G(R) = Z/2; Z and Z[i] conj K0(R) = Z", 10.0, [](Check& c) {
        for (Sigma s : {Sigma::identity, Sigma::conjugation}) {
            const DomainSpec& Q5 = DomainSpec::quadratic(-5, s);
            auto rep = k0_report(Q5);
            c.expect(rep.conclusion == "G(R) ≅ ℤ/2, K₀(R) ≅ ℤ ⊕ ℤ/2", Q5.name() + ": " + rep.conclusion);
            const FracIdeal p2 = FracIdeal::from_generators(Q5, {FieldElem(2), parse_elem(Q5, "1+w")});
            c.expect(!extended_ideal_iso(p2, FracIdeal::unit(Q5)).has_value(), Q5.name() + ": p2 R isomorphic to R");
            c.expect(rep.witness_iso_absent, Q5.name() + ": report witness");
        }
        c.expect(k0_report(DomainSpec::integers()).conclusion == "K₀(R) ≅ ℤ", "Z");
        c.expect(k0_report(DomainSpec::quadratic(-1, Sigma::conjugation)).conclusion == "K₀(R) ≅ ℤ", "Z[i] conj");
    });
    criterion("determinism: repeated CLI runs with a fixed seed hash identically", 120.0, determinism);
    return failures == 0 ? 0 : 1;
}
