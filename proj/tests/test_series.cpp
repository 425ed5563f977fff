#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "support.hpp"

using namespace skewdd;
using testing_support::random_elem;
using testing_support::random_series;

namespace {

const DomainSpec& Z = DomainSpec::integers();
const DomainSpec& R2 = DomainSpec::quadratic(2, Sigma::conjugation);
const DomainSpec& Gi = DomainSpec::quadratic(-1, Sigma::conjugation);

Series S(const DomainSpec& d, const char* s) { return parse_series(d, s); }

TEST(SeriesMul, Examples) {
    EXPECT_EQ(Series::x() * Series::constant(FieldElem::omega(R2)), S(R2, "-w*x"));
    EXPECT_EQ(S(Z, "2+x") * S(Z, "2*x^-1"), S(Z, "4*x^-1+2"));
    EXPECT_EQ(S(Gi, "w*x") * S(Gi, "w*x"), S(Gi, "x^2"));
}

TEST(InvertUnit, Examples) {
    EXPECT_EQ(invert_unit(S(Z, "1-x"), 5), S(Z, "1+x+x^2+x^3+x^4+O(x^5)"));
    EXPECT_EQ(invert_unit(S(Gi, "1-w*x"), 4), S(Gi, "1+w*x+x^2+w*x^3+O(x^4)"));
    EXPECT_EQ(invert_unit(S(Z, "2+x"), 3), S(Z, "1/2-1/4*x+1/8*x^2+O(x^3)"));
    EXPECT_THROW(invert_unit(S(Z, "2+x"), 3, true), SingularError);
    EXPECT_THROW(invert_unit(Series::zero(), 3), DivisionByZero);
}

TEST(Accessors, Examples) {
    EXPECT_EQ(S(Z, "3*x^-2+x").lowest(), FieldElem(3));
    EXPECT_EQ(S(Z, "3*x^-2+x").val(), -2);
    auto b = S(Gi, "w*x").left_normal_form();
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0], -FieldElem::omega(Gi));
    EXPECT_EQ(Series::x() * Series::constant(b[0]), S(Gi, "w*x"));
    EXPECT_EQ(S(Z, "1+x").shift(2), S(Z, "x^2+x^3"));
    EXPECT_THROW(Series::zero(4).lowest(), PrecisionError);
    EXPECT_THROW(S(Z, "1+x+O(x^3)").coefficient(3), PrecisionError);
}

TEST(Parse, RoundTrip) {
    for (const char* s : {"2+x", "-2*x^-1", "1/2-1/4*x+O(x^3)", "O(x^2)", "w*x^-3-7*x^5"}) {
        Series f = S(Gi, s);
        EXPECT_EQ(S(Gi, to_string(f).c_str()), f) << s;
    }
    EXPECT_THROW(S(Z, "2+*x"), ParseError);
}

TEST(LeftNormalForm, RoundTrip) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        Series f = random_series(R2, rng, -3 + static_cast<long>(rng() % 6), 5);
        auto b = f.left_normal_form();
        EXPECT_EQ(Series::from_left_normal_form(f.val(), b), f);
        // f = sum x^i b_i
        Series g = Series::zero();
        for (std::size_t j = 0; j < b.size(); ++j) g += Series::monomial(FieldElem(1), f.val() + static_cast<long>(j)) * Series::constant(b[j]);
        EXPECT_EQ(g, f);
    }
}

class SeriesLaws : public ::testing::TestWithParam<const DomainSpec*> {};

// Twist law, ring axioms, the monomial-expansion oracle and the precision law.
TEST_P(SeriesLaws, RandomTriples) {
    const DomainSpec& dom = *GetParam();
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long> vals(-4, 4), lens(1, 6), kt(0, 8);
    for (int n = 0; n < 1000; ++n) {
        FieldElem d = random_elem(dom, rng, 9);
        long i = vals(rng);
        EXPECT_EQ(Series::monomial(FieldElem(1), i) * Series::constant(d), Series::monomial(sigma_apply(d, i), i));

        Series f = random_series(dom, rng, vals(rng), lens(rng));
        Series g = random_series(dom, rng, vals(rng), lens(rng));
        Series h = random_series(dom, rng, vals(rng), lens(rng));
        EXPECT_EQ((f * g) * h, f * (g * h));
        EXPECT_EQ(f * (g + h), f * g + f * h);
        EXPECT_EQ((f + g) * h, f * h + g * h);
        EXPECT_EQ(oracle::sparse(f * g), oracle::multiply(oracle::sparse(f), oracle::sparse(g)));

        // truncated operands: the product is known to min(v_f + K_g, v_g + K_f)
        long Kf = f.val() + kt(rng), Kg = g.val() + kt(rng);
        Series ft = f.truncate(Kf), gt = g.truncate(Kg);
        Series p = ft * gt;
        long expect_kt = std::min(f.val() + Kg, g.val() + Kf);
        EXPECT_EQ(p.known_to(), expect_kt);
        EXPECT_EQ(oracle::sparse(p), oracle::below(oracle::sparse(f * g), expect_kt));
        EXPECT_EQ((ft + gt).known_to(), std::min(Kf, Kg));

        // invert_unit round trip on both sides
        Series u = invert_unit(f, 10);
        Series one = Series::constant(FieldElem(1));
        EXPECT_TRUE(congruent(f * u, one));
        EXPECT_TRUE(congruent(u * f, one));
        EXPECT_EQ((f * u).known_to(), 10);
        EXPECT_EQ((f * u).truncate(10), one.truncate(10));

        // sigma acts as conjugation by x
        Series x1 = Series::x(), xm = Series::monomial(FieldElem(1), -1);
        EXPECT_EQ(x1 * f * xm, f.sigma(1));
        EXPECT_EQ(f.left_shift(2), Series::monomial(FieldElem(1), 2) * f);
    }
}

INSTANTIATE_TEST_SUITE_P(Domains, SeriesLaws, ::testing::ValuesIn(testing_support::core_domains()),
                         [](const auto& info) { return testing_support::label(*info.param); });

}  // namespace
