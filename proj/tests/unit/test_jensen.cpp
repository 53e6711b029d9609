#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "lpkit/jensen/jensen.hpp"
#include "support/oracles.hpp"

using namespace lpkit;
using namespace lpkit::jensen;
using lpkit::seq::parse_sequence;

namespace {

BigRational R(long n, long d = 1) { return make_rational(n, d); }

QPoly qs(const std::vector<std::string>& c) { return qpoly_from_strings(c); }

QPoly linear_plus(const BigRational& r) { return QPoly({r, BigRational(1)}); } // x + r

} // namespace

TEST(JensenPoly, ConstantOneGivesBinomial)
{
    auto g = jensen_poly(SequenceSpec::one(), 5);
    ASSERT_EQ(g.domain, CoefficientDomain::exact_rational);
    QPoly expect({BigRational(1)});
    for (int i = 0; i < 5; ++i)
        expect = expect * linear_plus(1);
    EXPECT_EQ(g.exact, expect);
}

TEST(JensenPoly, LogSequenceCubicCoefficients)
{
    auto g = jensen_poly(SequenceSpec::log_shift2(), 3, 256);
    ASSERT_EQ(g.domain, CoefficientDomain::floating);
    Real l2 = log(Real(2, 320)), l3 = log(Real(3, 320)), l4 = log(Real(4, 320)), l5 = log(Real(5, 320));
    EXPECT_TRUE(g.approx[0].contains(l2));
    EXPECT_TRUE(g.approx[1].contains(l3 * 3));
    EXPECT_TRUE(g.approx[2].contains(l4 * 3));
    EXPECT_TRUE(g.approx[3].contains(l5));
}

TEST(JensenPoly, ShiftedReciprocalQuartic)
{
    auto g = jensen_poly(parse_sequence("explicit(1/((k+1/2)k!))"), 4);
    ASSERT_EQ(g.domain, CoefficientDomain::exact_rational);
    EXPECT_EQ(g.exact, qs({"2", "8/3", "6/5", "4/21", "1/108"}));
    auto rc = roots::count_roots(g.exact);
    EXPECT_EQ(rc.real_count, 2u);
    EXPECT_EQ(rc.nonreal_pairs, 1u);
}

TEST(MsTest, LogSequenceFailsAtThree)
{
    auto rep = ms_test(parse_sequence("log2"), 5);
    ASSERT_TRUE(rep.first_failure.has_value());
    EXPECT_EQ(*rep.first_failure, 3);
    ASSERT_EQ(rep.per_degree.size(), 3u);
    EXPECT_EQ(rep.per_degree[0].verdict, Verdict::all_real);
    EXPECT_EQ(rep.per_degree[1].verdict, Verdict::all_real);
    const auto& g3 = rep.per_degree[2];
    EXPECT_EQ(g3.verdict, Verdict::nonreal_found);
    EXPECT_TRUE(g3.root_count.certified);
    EXPECT_EQ(g3.root_count.real_count, 1u);
    EXPECT_EQ(g3.root_count.nonreal_pairs, 1u);
    EXPECT_TRUE(rep.sign_pattern_ok);
}

TEST(MsTest, ExhaustiveModeKeepsGoing)
{
    MsTestOptions opt;
    opt.exhaustive = true;
    auto rep = ms_test(parse_sequence("log2"), 5, opt);
    EXPECT_EQ(*rep.first_failure, 3);
    EXPECT_EQ(rep.per_degree.size(), 5u);
}

TEST(MsTest, DeterministicAcrossThreadCounts)
{
    MsTestOptions one, many;
    one.threads = 1;
    many.threads = 8;
    many.exhaustive = one.exhaustive = true;
    auto a = ms_test(parse_sequence("exp_sqrt(1)|divfact"), 12, one);
    auto b = ms_test(parse_sequence("exp_sqrt(1)|divfact"), 12, many);
    ASSERT_EQ(a.per_degree.size(), b.per_degree.size());
    for (std::size_t i = 0; i < a.per_degree.size(); ++i) {
        EXPECT_EQ(a.per_degree[i].degree, b.per_degree[i].degree);
        EXPECT_EQ(a.per_degree[i].root_count, b.per_degree[i].root_count);
    }
}

TEST(MsTest, SmallPowerWithDivfactFailsAtSixWithOnePair)
{
    auto rep = ms_test(parse_sequence("power(a=0,s=1/20)|divfact"), 6);
    ASSERT_TRUE(rep.first_failure);
    EXPECT_EQ(*rep.first_failure, 6);
    const auto& g6 = rep.per_degree.back();
    EXPECT_EQ(g6.root_count.nonreal_pairs, 1u);
    EXPECT_EQ(g6.root_count.real_count, 4u);
    EXPECT_TRUE(g6.root_count.certified);
}

TEST(MsTest, SmallPowerWithoutDivfactFailsAtThree)
{
    auto rep = ms_test(parse_sequence("power(a=0,s=1/20)"), 6);
    ASSERT_TRUE(rep.first_failure);
    EXPECT_EQ(*rep.first_failure, 3);
    EXPECT_EQ(rep.per_degree.back().root_count.nonreal_pairs, 1u);
}

TEST(MsTest, QuadraticPolynomialPassesThirty)
{
    auto rep = ms_test(parse_sequence("poly(1,1,1)"), 30);
    EXPECT_FALSE(rep.first_failure);
    EXPECT_EQ(rep.per_degree.size(), 30u);
    EXPECT_TRUE(rep.passed());
}

TEST(MsTest, SignPattern)
{
    EXPECT_TRUE(sign_pattern_ok(SequenceSpec::geometric(-2).terms(10, 64)));
    EXPECT_TRUE(sign_pattern_ok(SequenceSpec::one().shift_zeros(2).terms(10, 64)));
    EXPECT_FALSE(sign_pattern_ok(parse_sequence("poly(-3,1)").terms(10, 64)));
    EXPECT_FALSE(ms_test(parse_sequence("poly(-3,1)"), 5).sign_pattern_ok);
}

TEST(MsTest, InvalidDegree)
{
    EXPECT_THROW(ms_test(SequenceSpec::one(), 0), DomainError);
}

TEST(PolyTilde, Examples)
{
    EXPECT_EQ(poly_tilde(QPoly({R(0), R(0), R(1)})), QPoly({R(0), R(1), R(1)}));
    EXPECT_EQ(poly_tilde(QPoly({R(1), R(1), R(1)})), QPoly({R(1), R(2), R(1)}));
    EXPECT_EQ(poly_tilde(QPoly({R(2), R(0), R(1)})), QPoly({R(2), R(1), R(1)}));
}

TEST(PolyTilde, MatchesSeriesAndDifferenceOracles)
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> deg(0, 6), num(-9, 9), den(1, 5);
    for (int t = 0; t < 200; ++t) {
        std::vector<BigRational> c;
        for (int i = deg(rng); i >= 0; --i)
            c.push_back(R(num(rng), den(rng)));
        QPoly p(std::move(c));
        QPoly pt = poly_tilde(p);
        ASSERT_EQ(pt, oracle::tilde_by_differences(p));
        for (unsigned long n = 0; n <= 20; ++n) {
            BigRational series = p.evaluate(BigRational(static_cast<long>(n))) / BigRational(factorial(n));
            ASSERT_EQ(series, oracle::times_exp_coeff(pt, n));
        }
    }
}

TEST(PolyTilde, IsLinear)
{
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    for (int t = 0; t < 100; ++t) {
        std::vector<BigRational> a, b;
        for (int i = 0; i <= 6; ++i) {
            a.push_back(R(num(rng), den(rng)));
            b.push_back(R(num(rng), den(rng)));
        }
        QPoly p(a), q(b);
        BigRational al = R(num(rng), den(rng)), be = R(num(rng), den(rng));
        ASSERT_EQ(poly_tilde(al * p + be * q), al * poly_tilde(p) + be * poly_tilde(q));
    }
}

TEST(QuadByFact, Examples)
{
    EXPECT_FALSE(quad_by_fact_check(1, 1, 1, 20).first_failure);
    EXPECT_FALSE(quad_by_fact_check(0, 2, 1, 30).first_failure);
    auto z = quad_by_fact_check(0, 0, 0, 5);
    EXPECT_FALSE(z.first_failure);
    EXPECT_TRUE(z.per_degree[0].identically_zero);
    EXPECT_THROW(quad_by_fact_check(-1, 0, 0, 3), DomainError);
}

TEST(Combinations, ConvexQuarticHasNonRealPair)
{
    auto s = parse_sequence("poly(1,1,1)|convex_combo(1/10,fact_inv)");
    auto g = jensen_poly(s, 4);
    EXPECT_EQ(g.exact, qs({"1", "24/5", "69/10", "29/5", "171/80"}));
    EXPECT_EQ(roots::count_roots(g.exact).nonreal_pairs, 1u);
}

TEST(Combinations, GeometricQuarticHasNonRealPair)
{
    auto s = parse_sequence("poly(1,1,1)|geom_combo(1/2,one)");
    auto rep = classify_degree(s, 4);
    ASSERT_EQ(rep.domain, CoefficientDomain::floating);
    EXPECT_TRUE(rep.root_count.certified);
    EXPECT_EQ(rep.root_count.nonreal_pairs, 1u);
    Real r13 = sqrt(Real(13, 300)) * 4;
    EXPECT_TRUE(rep.coefficients[3].approx.contains(r13));
}

TEST(Properties, RationalRootedPolynomialsPass)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> deg(1, 4), num(0, 12), den(1, 4);
    for (int t = 0; t < 12; ++t) {
        QPoly p({BigRational(1)});
        for (int i = deg(rng); i > 0; --i)
            p = p * linear_plus(R(num(rng), den(rng)));
        std::vector<BigRational> c(p.coeffs().begin(), p.coeffs().end());
        auto rep = ms_test(SequenceSpec::poly(c), 25);
        ASSERT_FALSE(rep.first_failure) << to_display(p);
    }
}

TEST(Properties, CoefficientsAreBinomialTimesTerms)
{
    const char* specs[] = {"poly(1,-2,3)", "fact_inv|partial_sum", "geometric(3/7)|average", "one|shift_zeros(3)",
        "poly(2,0,1)|divfact", "explicit(1/((k+1/2)k!))", "power(a=1/3,s=2)", "fact_inv|convex_combo(1/4,poly(1,1))",
        "poly(0,1)|pochhammer_divide(2)", "geometric(-1)|hadamard(fact_inv)", "poly(1,1,1)|average|divfact",
        "explicit(2^k/(k+1))", "poly(5)|shift_zeros(1)|partial_sum", "fact_inv|hadamard(fact_inv)",
        "poly(1,2,1)|geom_combo(1,one)", "one|average", "poly(3,0,0,1)", "geometric(1/2)|partial_sum|divfact",
        "power(a=2,s=-1)", "explicit(H(k+1))"};
    for (const char* t : specs) {
        auto s = parse_sequence(t);
        ASSERT_TRUE(s.is_exact()) << t;
        for (int n = 0; n <= 30; n += 3) {
            auto g = jensen_poly(s, n);
            ASSERT_EQ(g.domain, CoefficientDomain::exact_rational);
            for (int k = 0; k <= n; ++k)
                ASSERT_EQ(g.exact.coeff(k), BigRational(binomial(n, k)) * *s.term(k, 64).exact) << t;
        }
    }
}

TEST(Properties, AveragePassingImpliesOriginalPassing)
{
    std::mt19937_64 rng(14);
    std::uniform_int_distribution<int> num(0, 9), den(1, 4), deg(1, 4);
    int averages_passed = 0;
    for (int t = 0; t < 30; ++t) {
        std::vector<BigRational> c;
        for (int i = deg(rng); i >= 0; --i)
            c.push_back(R(num(rng), den(rng)));
        if (c.back() == 0)
            c.back() = 1;
        auto p = SequenceSpec::poly(c);
        if (ms_test(p.average(), 20).first_failure)
            continue;
        ++averages_passed;
        ASSERT_FALSE(ms_test(p, 20).first_failure) << p.to_string();
    }
    EXPECT_GT(averages_passed, 0);
}

TEST(Properties, CubedQuadraticAndItsAveragePass)
{
    // (1+k+k^2)^3 expanded.
    auto s = SequenceSpec::poly({R(1), R(3), R(6), R(7), R(6), R(3), R(1)});
    EXPECT_EQ(*s.term(2, 64).exact, 343);
    EXPECT_FALSE(ms_test(s, 20).first_failure);
    EXPECT_FALSE(ms_test(s.average(), 20).first_failure);
}
