#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace skewdd;

namespace {

const DomainSpec& Z = DomainSpec::integers();
const DomainSpec& Q5 = DomainSpec::quadratic(-5, Sigma::identity);
const DomainSpec& Q5c = DomainSpec::quadratic(-5, Sigma::conjugation);
const DomainSpec& R2 = DomainSpec::quadratic(2, Sigma::conjugation);

Series S(const DomainSpec& d, const char* s) { return parse_series(d, s); }
FieldElem el(const DomainSpec& d, const char* s) { return parse_elem(d, s); }
IdealLattice ideal(const DomainSpec& d, std::vector<FieldElem> g) { return IdealLattice::from_integral(d, g); }
SeriesRow row(const DomainSpec& d, const char* a, const char* b) { return series_row(S(d, a), S(d, b)); }
SeriesCol col(const DomainSpec& d, const char* a, const char* b) { return series_col(S(d, a), S(d, b)); }

const SeriesRow hilbert_row = row(Z, "2+x", "4+3*x");
const SeriesCol hilbert_witness = col(Z, "-2*x^-1", "x^-1");

TEST(CheckUnimodular, Examples) {
    const IdealLattice one = IdealLattice::unit(Z);
    auto [n, tn] = check_unimodular(ShapedRow{hilbert_row, one, FracIdeal::unit(Z)}, hilbert_witness);
    EXPECT_EQ(n, 1);
    EXPECT_EQ(tn, col(Z, "-2", "1"));
    EXPECT_EQ(check_unimodular(ShapedRow{row(Z, "1", "0"), one, FracIdeal::unit(Z)}, col(Z, "1", "0")).first, 0);
    EXPECT_EQ(check_unimodular(ShapedRow{row(Z, "1+x", "x"), one, FracIdeal::unit(Z)}, col(Z, "1-x", "x")).first, 0);
    EXPECT_THROW(check_unimodular(ShapedRow{hilbert_row, one, FracIdeal::unit(Z)}, col(Z, "-2*x^-1", "2*x^-1")), NotUnimodular);
    // 1/2 lies outside the first entry's lattice D
    const IdealLattice two = ideal(Z, {FieldElem(2)});
    EXPECT_THROW(check_unimodular(ShapedRow{row(Z, "1/2", "0"), two, FracIdeal::unit(Z)}, col(Z, "2", "0")), MembershipError);
}

TEST(ReduceRow, HilbertRow) {
    const IdealLattice one = IdealLattice::unit(Z);
    ShapedRow top{hilbert_row, one, FracIdeal::unit(Z)};
    auto red = reduce_row(top, col(Z, "-2", "1"), 1);
    EXPECT_EQ(red.level.B, FracIdeal::from_generators(Z, {FieldElem(2)}));
    EXPECT_TRUE(is_unit(Z, red.level.lambda));
    const Row2& ab = red.level.abar0;
    EXPECT_EQ(FieldElem(2) * ab(0, 1) - FieldElem(4) * ab(0, 0), FieldElem(1));
    // a~ t~ == x^0 at the bottom level
    EXPECT_EQ((red.row.a * red.witness)(0, 0).coefficient(0), FieldElem(1));
}

TEST(ReduceRow, IdentityLikeRows) {
    for (const DomainSpec* dom : {&Z, &Q5c}) {
        IdealLattice J = dom == &Z ? IdealLattice::unit(Z) : ideal(Q5c, {FieldElem(2), el(Q5c, "1+w")});
        auto red = reduce_row(ShapedRow{row(*dom, "1", "0"), J, FracIdeal::unit(*dom)}, col(*dom, "x", "0"), 1);
        EXPECT_EQ(red.level.B, FracIdeal::unit(*dom));
        EXPECT_EQ(red.level.abar0(0, 1), FieldElem(1));
        // sigma(p2) = p2, so lambda generates D
        EXPECT_TRUE(is_unit(*dom, red.level.lambda));
        EXPECT_EQ((red.row.a * red.witness)(0, 0).coefficient(0), FieldElem(1));
    }
}

TEST(BaseCase, ExampleOverZ) {
    auto inv = base_case_invert(ShapedRow{row(Z, "2", "3"), IdealLattice::unit(Z), FracIdeal::unit(Z)}, col(Z, "-1", "1"));
    Mat2 T0 = coeff(inv.T, 0);
    EXPECT_EQ(T0(0, 0), FieldElem(1));
    EXPECT_EQ(det(T0), FieldElem(1));
    EXPECT_EQ(T0, mat2(1, 1, 0, 1));
    EXPECT_EQ(det(inv.Hn), FieldElem(1));
    EXPECT_EQ(inv.b, row(Z, "-1", "-1"));
}

TEST(BaseCase, IdentityRow) {
    auto inv = base_case_invert(ShapedRow{row(Z, "1", "0"), IdealLattice::unit(Z), FracIdeal::unit(Z)}, col(Z, "1", "0"));
    EXPECT_TRUE(is_unit(Z, det(inv.Hn)));
}

TEST(BaseCase, PrimeIdealOverZsqrtMinus5) {
    const IdealLattice p2 = ideal(Q5, {FieldElem(2), el(Q5, "1+w")});
    const FracIdeal A(p2);
    // a0 in [p2^-1, D], t0 in [p2, D]
    auto inv = base_case_invert(ShapedRow{row(Q5, "1", "1"), p2, A}, col(Q5, "2", "-1"));
    Mat2 T0 = coeff(inv.T, 0);
    EXPECT_EQ(T0(0, 0), el(Q5, "1+w"));
    EXPECT_EQ(T0(0, 1), FieldElem(2));
    EXPECT_EQ(det(T0), FieldElem(1));
    EXPECT_EQ(det(inv.Hn), FieldElem(1));
    EXPECT_FALSE(invertibility_defect(row(Q5, "1", "1"), inv.b, inv.T, 0, inv.Hn, p2).has_value());
}

TEST(Lift, HilbertChainOneLevel) {
    const IdealLattice one = IdealLattice::unit(Z);
    ShapedRow top{hilbert_row, one, FracIdeal::unit(Z)};
    auto red = reduce_row(top, col(Z, "-2", "1"), 1);
    auto base = base_case_invert(red.row, red.witness);
    auto lifted = lift_invertibility(base, red.level, top, 1);
    EXPECT_EQ(lifted.n, 1);
    EXPECT_TRUE(is_unit(Z, det(lifted.Hn)));
    EXPECT_FALSE(invertibility_defect(hilbert_row, lifted.b, lifted.T, 1, lifted.Hn, one).has_value());
}

TEST(Mu, Examples) {
    const FracIdeal one = FracIdeal::unit(Z);
    EXPECT_EQ(detail::required_generator(one, one.sigma(1), "mu", {}), FieldElem(1));
    const FracIdeal p7 = FracIdeal::from_generators(R2, {FieldElem(7), el(R2, "3+w")});
    FieldElem mu = detail::required_generator(p7, p7.sigma(1), "mu", {});
    EXPECT_EQ(FracIdeal::from_generators(R2, {mu}), FracIdeal::from_generators(R2, {el(R2, "11/7+6/7*w")}));
}

TEST(Complete, HilbertRow) {
    const IdealLattice one = IdealLattice::unit(Z);
    auto cert = complete_unimodular_row(one, hilbert_row, hilbert_witness, 8);
    auto rep = verify_completion(cert);
    EXPECT_TRUE(rep.pass) << rep.message;
    EXPECT_EQ(cert.n, 1);
    EXPECT_EQ(cert.levels.size(), 1u);
    EXPECT_TRUE(is_unit(Z, det(cert.Hn)));

    auto hand = certificate_from_completion(one, hilbert_row, hilbert_witness, row(Z, "1", "2"), 8);
    rep = verify_completion(hand);
    EXPECT_TRUE(rep.pass) << rep.message;
}

TEST(Complete, IdentityRow) {
    auto cert = complete_unimodular_row(IdealLattice::unit(Z), row(Z, "1", "0"), col(Z, "1", "0"), 6);
    EXPECT_TRUE(verify_completion(cert).pass);
    EXPECT_EQ(cert.n, 0);
    EXPECT_TRUE(is_unit(Z, det(coeff(cert.final_matrix, 0))));
}

TEST(Complete, ShiftedRow) {
    // x^2 (2+x, 4+3x) with witness x^-2 t
    SeriesRow a = series_row(hilbert_row(0, 0).left_shift(2), hilbert_row(0, 1).left_shift(2));
    SeriesCol t = shift(hilbert_witness, -2);
    ASSERT_EQ((a * t)(0, 0), S(Z, "1"));
    auto cert = complete_unimodular_row(IdealLattice::unit(Z), a, t, 8);
    EXPECT_EQ(cert.shift, 2);
    EXPECT_TRUE(verify_completion(cert).pass);
}

TEST(Complete, TruncatedInput) {
    SeriesRow a = row(Z, "2+x+O(x^3)", "4+3*x+O(x^3)");
    EXPECT_THROW(complete_unimodular_row(IdealLattice::unit(Z), a, hilbert_witness, 12), PrecisionError);
    SeriesRow b = row(Z, "2+x+O(x^30)", "4+3*x+O(x^30)");
    auto cert = complete_unimodular_row(IdealLattice::unit(Z), b, hilbert_witness, 8);
    EXPECT_TRUE(verify_completion(cert).pass);
}

TEST(Verify, TamperedT) {
    auto cert = complete_unimodular_row(IdealLattice::unit(Z), hilbert_row, hilbert_witness, 8);
    CompletionCertificate bad = cert;
    ASSERT_EQ(cert.n, 1);
    EXPECT_EQ(known_to(cert.T), 2);
    bad.T(1, 1) += Series::monomial(FieldElem(1), 1);
    auto rep = verify_completion(bad);
    EXPECT_FALSE(rep.pass);
    ASSERT_TRUE(rep.first_bad_order.has_value());
    EXPECT_EQ(*rep.first_bad_order, 1);

    CompletionCertificate bad0 = cert;
    bad0.T(0, 1) += Series::monomial(FieldElem(1), 0);
    EXPECT_EQ(verify_completion(bad0).first_bad_order.value_or(-1), 0);

    // T data past order n is not certified and is rejected
    CompletionCertificate longT = cert;
    longT.T(0, 0) = Series(longT.T(0, 0).val(), longT.T(0, 0).coeffs(), 5);
    rep = verify_completion(longT);
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(rep.first_bad_order.value_or(-1), 2);

    CompletionCertificate badinv = cert;
    badinv.final_inverse(0, 0) += Series::monomial(FieldElem(1), 5);
    rep = verify_completion(badinv);
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(rep.first_bad_order.value_or(-1), 5);

    CompletionCertificate badb = cert;
    badb.b(0, 0) += Series::monomial(FieldElem(1), 0);
    EXPECT_FALSE(verify_completion(badb).pass);
}

TEST(Complete, SigmaClassObstruction) {
    const DomainSpec& Q14 = DomainSpec::quadratic(-14, Sigma::conjugation);
    const IdealLattice J = ideal(Q14, {FieldElem(3), el(Q14, "1+w")});
    std::mt19937_64 rng(5);
    auto rr = random_elementary_row(J, rng);
    EXPECT_THROW(complete_unimodular_row(J, rr.a, rr.t, 6), SigmaClassObstruction);
}

TEST(ExtendedIdealIso, Examples) {
    const FracIdeal p2 = FracIdeal::from_generators(Q5, {FieldElem(2), el(Q5, "1+w")});
    const FracIdeal p3 = FracIdeal::from_generators(Q5, {FieldElem(3), el(Q5, "1+w")});
    EXPECT_FALSE(extended_ideal_iso(p2, FracIdeal::unit(Q5)).has_value());
    auto r = extended_ideal_iso(p2, p3);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->second, 0);
    EXPECT_EQ(p2.scaled(r->first), p3);
    auto z = extended_ideal_iso(FracIdeal::from_generators(Z, {FieldElem(2)}), FracIdeal::from_generators(Z, {FieldElem(3)}));
    ASSERT_TRUE(z.has_value());
    EXPECT_EQ(z->first, FieldElem(3) / FieldElem(2));
    EXPECT_EQ(z->second, 0);
}

// Random elementary-product rows per instance.
class RandomCompletion : public ::testing::TestWithParam<const DomainSpec*> {};

TEST_P(RandomCompletion, CompletesAndVerifies) {
    const DomainSpec& dom = *GetParam();
    std::mt19937_64 rng(2718);
    for (const IdealLattice& J : {IdealLattice::unit(dom), testing_support::completion_ideal(dom)})
        for (int i = 0; i < 25; ++i) {
            auto rr = random_elementary_row(J, rng);
            auto cert = complete_unimodular_row(J, rr.a, rr.t, 8);
            auto rep = verify_completion(cert);
            ASSERT_TRUE(rep.pass) << dom.name() << " J=" << J.to_string() << " case " << i << ": " << rep.message;
        }
}

INSTANTIATE_TEST_SUITE_P(Domains, RandomCompletion, ::testing::ValuesIn(testing_support::core_domains()),
                         [](const auto& info) { return testing_support::label(*info.param); });

}  // namespace
