#include <gtest/gtest.h>

#include <random>

#include "lpkit/exactcore/certify.hpp"
#include "lpkit/exactcore/sturm.hpp"
#include "support/oracles.hpp"

using namespace lpkit;
using namespace lpkit::roots;

namespace {

QPoly q(std::initializer_list<long> c)
{
    std::vector<BigRational> v;
    for (long x : c)
        v.emplace_back(x);
    return QPoly(std::move(v));
}

QPoly qs(const std::vector<std::string>& c) { return qpoly_from_strings(c); }

QPoly linear(long root) { return q({-root, 1}); } // x - root

HPFloat hlog(long n, Bits bits) { return log(HPFloat::exact(n, bits)); }

} // namespace

TEST(SturmCount, NoRealRootsForXSquaredPlusOne)
{
    EXPECT_EQ(sturm_real_count(q({1, 0, 1})), 0u);
}

TEST(SturmCount, ClosedIntervalCountsConstructedRoots)
{
    QPoly p = linear(-1) * linear(-2) * linear(-3);
    EXPECT_EQ(sturm_real_count(p, Interval::closed(-4, 0)), 3u);
    EXPECT_EQ(sturm_real_count(p, Interval::closed(-3, -1)), 3u);
    EXPECT_EQ(sturm_real_count(p, Interval::closed(-3, -3)), 1u);
    EXPECT_EQ(sturm_real_count(p, Interval::closed(make_rational(-5, 2), make_rational(-3, 2))), 1u);
    EXPECT_EQ(sturm_real_count(p, Interval{BigRational(-2), std::nullopt}), 2u);
}

TEST(SturmCount, QuarticWithOneNonRealPair)
{
    QPoly g4 = qs({"2", "8/3", "6/5", "4/21", "1/108"});
    EXPECT_EQ(sturm_real_count(g4), 2u);
    auto rc = count_roots(g4);
    EXPECT_EQ(rc.real_count, 2u);
    EXPECT_EQ(rc.nonreal_pairs, 1u);
    EXPECT_TRUE(rc.certified);
    EXPECT_EQ(rc.precision_bits, 0);
}

TEST(SturmCount, ZeroPolynomialIsIndeterminate)
{
    EXPECT_THROW(sturm_real_count(QPoly()), DomainError);
    try {
        count_roots(QPoly());
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("indeterminate root count"), std::string::npos);
    }
}

TEST(SturmCount, InvertedIntervalRejected)
{
    EXPECT_THROW(sturm_real_count(q({0, 1}), Interval::closed(1, 0)), DomainError);
}

TEST(SquareFree, YunRecoversMultiplicities)
{
    QPoly p = linear(1) * linear(1) * linear(1) * linear(-2) * linear(-2) * q({1, 0, 1});
    auto f = square_free_decomposition(p);
    ASSERT_EQ(f.size(), 3u);
    EXPECT_EQ(f[0].second, 1);
    EXPECT_EQ(f[0].first, q({1, 0, 1}));
    EXPECT_EQ(f[1].second, 2);
    EXPECT_EQ(f[1].first, linear(-2));
    EXPECT_EQ(f[2].second, 3);
    EXPECT_EQ(f[2].first, linear(1));
    auto rc = count_roots(p);
    EXPECT_EQ(rc.real_count, 5u);
    EXPECT_EQ(rc.nonreal_pairs, 1u);
}

TEST(SturmCount, MatchesCompanionOracleOnRandomPolynomials)
{
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> deg(1, 12), coef(-9, 9), pick(0, 9);
    int trials = 0;
    for (; trials < 1000; ++trials) {
        QPoly p;
        if (pick(rng) == 0) {
            // Force a repeated factor now and then.
            QPoly f = q({coef(rng), coef(rng) == 0 ? 1 : 1});
            QPoly g = q({coef(rng), coef(rng), 1});
            p = f * f * g;
        } else {
            std::vector<BigRational> c;
            int d = deg(rng);
            for (int i = 0; i < d; ++i)
                c.emplace_back(coef(rng));
            int lead = coef(rng);
            c.emplace_back(lead == 0 ? 1 : lead);
            p = QPoly(std::move(c));
        }
        std::size_t exact = sturm_real_count(p);
        ASSERT_EQ(exact, oracle::companion_distinct_real(p)) << to_display(p);
        ASSERT_LE(oracle::grid_sign_changes(p, cauchy_bound(primitive_part(p)), 4000), exact) << to_display(p);
        auto rc = count_roots(p);
        ASSERT_EQ(rc.real_count + 2 * rc.nonreal_pairs, static_cast<std::size_t>(p.degree()));
    }
    EXPECT_EQ(trials, 1000);
}

TEST(Isolate, SqrtTwoRefinesToTolerance)
{
    QPoly p = q({-2, 0, 1});
    auto iv = real_roots_isolate(p);
    ASSERT_EQ(iv.size(), 2u);
    BigRational eps = make_rational(1, 100000000);
    auto lo = refine_root(p, iv[0], eps);
    auto hi = refine_root(p, iv[1], eps);
    EXPECT_LE(lo.width(), eps);
    EXPECT_NEAR(lo.midpoint().get_d(), -1.4142135623730951, 1e-8);
    EXPECT_NEAR(hi.midpoint().get_d(), 1.4142135623730951, 1e-8);
    EXPECT_LT(lo.hi, hi.lo);
}

TEST(Isolate, CubicFromAveragedSequenceHasOneRealRoot)
{
    QPoly t2 = qs({"1", "3", "5/2", "2/3"});
    auto iv = real_roots_isolate(t2);
    EXPECT_EQ(iv.size(), 1u);
    auto rc = count_roots(t2);
    EXPECT_EQ(rc.real_count, 1u);
    EXPECT_EQ(rc.nonreal_pairs, 1u);
}

TEST(Isolate, RepeatedRootReportedOnce)
{
    QPoly p = q({1, 4, 6, 4, 1});
    auto iv = real_roots_isolate(p);
    ASSERT_EQ(iv.size(), 1u);
    EXPECT_EQ(iv[0].multiplicity, 4);
    EXPECT_LE(iv[0].lo, -1);
    EXPECT_GE(iv[0].hi, -1);
}

TEST(Isolate, IntervalsDisjointAndSorted)
{
    QPoly p = linear(0) * linear(1) * linear(2) * linear(-1) * linear(3) * linear(1);
    auto iv = real_roots_isolate(p);
    ASSERT_EQ(iv.size(), 5u);
    for (std::size_t i = 0; i + 1 < iv.size(); ++i)
        EXPECT_LT(iv[i].hi, iv[i + 1].lo);
    EXPECT_EQ(iv[2].multiplicity, 2); // root 1
    EXPECT_THROW(real_roots_isolate(QPoly()), DomainError);
}

TEST(Interlace, ConstructedAlternation)
{
    QPoly p = linear(-2) * linear(-4);
    QPoly r = linear(-1) * linear(-3);
    EXPECT_TRUE(strict_interlace_check(p, r));
    EXPECT_EQ(count_roots(r + p).nonreal_pairs, 0u);
    EXPECT_EQ(sturm_real_count(r + p), 2u);
}

TEST(Interlace, SharedRootIsNotStrict)
{
    EXPECT_FALSE(strict_interlace_check(linear(-1) * linear(-2), linear(-1) * linear(-5)));
    EXPECT_FALSE(strict_interlace_check(linear(-1) * linear(-2), linear(-3) * linear(-5)));
}

TEST(Interlace, NonRealInputRejected)
{
    EXPECT_THROW(strict_interlace_check(q({1, 0, 1}), q({0, 1})), DomainError);
}

TEST(Interlace, PositiveCombinationsStayRealRooted)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> root(-30, 30), w(1, 50);
    int checked = 0;
    while (checked < 100) {
        std::vector<long> rs;
        for (int i = 0; i < 7; ++i)
            rs.push_back(root(rng));
        std::sort(rs.begin(), rs.end());
        if (std::adjacent_find(rs.begin(), rs.end()) != rs.end())
            continue;
        QPoly p = linear(rs[0]) * linear(rs[2]) * linear(rs[4]) * linear(rs[6]);
        QPoly r = linear(rs[1]) * linear(rs[3]) * linear(rs[5]);
        ASSERT_TRUE(strict_interlace_check(p, r));
        BigRational a = make_rational(w(rng), w(rng)), b = make_rational(w(rng), w(rng));
        QPoly s = a * r + b * p;
        ASSERT_EQ(count_roots(s).nonreal_pairs, 0u);
        ++checked;
    }
}

TEST(Certify, LogSequenceCubic)
{
    const Bits bits = 256;
    auto make = [](Bits b) {
        HPFloat three = HPFloat::exact(3, b);
        return FPoly({hlog(2, b), three * hlog(3, b), three * hlog(4, b), hlog(5, b)});
    };
    auto det = certified_root_details(make(bits + guard_bits), bits);
    EXPECT_TRUE(det.count.certified);
    EXPECT_EQ(det.count.real_count, 1u);
    EXPECT_EQ(det.count.nonreal_pairs, 1u);
    bool saw_real = false;
    for (const auto& d : det.disks) {
        if (d.real) {
            saw_real = true;
            EXPECT_NEAR(d.center.real(), -0.3305440040686639, 1e-12);
        } else {
            EXPECT_NEAR(d.center.real(), -1.1267576721858472, 1e-12);
            EXPECT_NEAR(std::abs(d.center.imag()), 0.18261912952780404, 1e-12);
        }
        EXPECT_LT(d.radius, 1e-50);
    }
    EXPECT_TRUE(saw_real);
}

TEST(Certify, ExpSqrtCubic)
{
    const Bits b = 288;
    auto e = [b](long k) { return exp(-sqrt(HPFloat::exact(k, b))); };
    FPoly p({HPFloat::exact(1, b), HPFloat::exact(3, b) * e(1), HPFloat::exact(make_rational(3, 2), b) * e(2),
        HPFloat::exact(make_rational(1, 6), b) * e(3)});
    auto rc = certified_root_classify(p, 256);
    EXPECT_TRUE(rc.certified);
    EXPECT_EQ(rc.real_count, 1u);
    EXPECT_EQ(rc.nonreal_pairs, 1u);
}

TEST(Certify, LinearAlwaysReal)
{
    auto rc = certified_root_classify(FPoly({HPFloat::exact(7, 64), hlog(3, 64)}), 128);
    EXPECT_TRUE(rc.certified);
    EXPECT_EQ(rc.real_count, 1u);
    EXPECT_EQ(rc.nonreal_pairs, 0u);
}

TEST(Certify, ExactZerosAtOriginCountAsReal)
{
    FPoly p({HPFloat(256), HPFloat(256), HPFloat::exact(1, 256), HPFloat::exact(0, 256), HPFloat::exact(1, 256)});
    auto rc = certified_root_classify(p, 256);
    EXPECT_EQ(rc.real_count, 2u);
    EXPECT_EQ(rc.nonreal_pairs, 1u);
    EXPECT_TRUE(rc.certified);
}

TEST(Certify, AgreesWithExactPathAndIsStableUnderDoubling)
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> deg(2, 14), coef(-20, 20);
    for (int t = 0; t < 200; ++t) {
        std::vector<BigRational> c;
        int d = deg(rng);
        for (int i = 0; i <= d; ++i)
            c.emplace_back(coef(rng));
        if (c.back() == 0)
            c.back() = 1;
        if (c.front() == 0)
            c.front() = -1;
        QPoly p(std::move(c));
        if (square_free_part(p).degree() != p.degree())
            continue;
        auto exact = count_roots(p);
        auto rc = certified_root_classify(to_float(p, 256), 256);
        ASSERT_TRUE(rc.certified) << to_display(p);
        EXPECT_EQ(rc.real_count, exact.real_count) << to_display(p);
        EXPECT_EQ(rc.nonreal_pairs, exact.nonreal_pairs);
        auto twice = certified_root_classify(to_float(p, 512), 512);
        EXPECT_TRUE(twice.certified);
        EXPECT_EQ(twice.real_count, rc.real_count);
        EXPECT_EQ(twice.nonreal_pairs, rc.nonreal_pairs);
    }
}

TEST(Certify, DoubleRootIsUncertifiable)
{
    FPoly p = to_float(q({1, 2, 1}), 256);
    p = FPoly({p[0] + HPFloat(Real(256), Real::from_double(1e-70, 64)), p[1], p[2]});
    EXPECT_THROW(certified_root_classify(p, 256), Uncertifiable);
}

TEST(Certify, LadderEscalatesUntilCertified)
{
    // Roots 1 and 1 + 2^-300: inseparable at 256 bits.
    BigRational eps = pow(BigRational(2), -300);
    QPoly p = linear(1) * QPoly({-(1 + eps), BigRational(1)});
    std::vector<Bits> tried;
    auto rc = certified_root_classify(
        [&](Bits b) {
            tried.push_back(b);
            return to_float(p, b);
        },
        256, 4096);
    EXPECT_TRUE(rc.certified);
    EXPECT_EQ(rc.real_count, 2u);
    EXPECT_GT(rc.precision_bits, 256);
    EXPECT_GE(tried.size(), 2u);
}
