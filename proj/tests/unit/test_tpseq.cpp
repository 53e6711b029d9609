#include <gtest/gtest.h>

#include <random>

#include "lpkit/seqlab/sequence.hpp"
#include "lpkit/tpseq/tpseq.hpp"

using namespace lpkit;
using namespace lpkit::tp;

namespace {

BigRational R(long n, long d = 1) { return make_rational(n, d); }

/// Bareiss fraction-free elimination on the integer matrix obtained by
/// clearing each row's denominators; the scale is divided back out.
BigRational bareiss_det(const std::vector<std::vector<BigRational>>& q)
{
    const std::size_t n = q.size();
    std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
    BigRational scale = 1;
    for (std::size_t i = 0; i < n; ++i) {
        BigInt l = 1;
        for (const auto& x : q[i])
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = q[i][j].get_num() * (l / q[i][j].get_den());
        scale *= BigRational(l);
    }
    int sign = 1;
    BigInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0)
                ++p;
            if (p == n)
                return 0;
            std::swap(a[p], a[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return BigRational(sign * a[n - 1][n - 1]) / scale;
}

std::vector<BigRational> inv_factorials(std::size_t n)
{
    std::vector<BigRational> a;
    for (std::size_t k = 0; k < n; ++k)
        a.push_back(make_rational(BigInt(1), factorial(k)));
    return a;
}

} // namespace

TEST(Toeplitz, Entries)
{
    auto w = ToeplitzWindow::exact({R(1), R(2), R(3)});
    EXPECT_EQ(*w.entry(0, 0).exact, 1);
    EXPECT_EQ(*w.entry(2, 0).exact, 3);
    EXPECT_EQ(*w.entry(1, 2).exact, 0);
    EXPECT_EQ(w.size(), 3u);
}

TEST(Determinant, MatchesBareissOracle)
{
    std::mt19937_64 rng(500);
    std::uniform_int_distribution<int> size(1, 6), num(-9, 9), den(1, 7), zero(0, 5);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = size(rng);
        std::vector<std::vector<BigRational>> a(n, std::vector<BigRational>(n));
        for (auto& row : a)
            for (auto& x : row)
                x = zero(rng) == 0 ? BigRational(0) : make_rational(num(rng), den(rng));
        EXPECT_EQ(determinant(a), bareiss_det(a)) << trial;
    }
}

TEST(Determinant, BallPathContainsExact)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + trial % 5;
        std::vector<std::vector<BigRational>> q(n, std::vector<BigRational>(n));
        std::vector<std::vector<HPFloat>> h(n, std::vector<HPFloat>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                q[i][j] = make_rational(num(rng), den(rng));
                h[i][j] = HPFloat::exact(q[i][j], 128);
            }
        EXPECT_TRUE(determinant(h).contains(Real(determinant(q), 256))) << trial;
    }
}

TEST(ReciprocalPowers, PrintedMatrix)
{
    auto a = printed_minor_matrix();
    EXPECT_EQ(a[0][0], R(1, 4));
    EXPECT_EQ(a[0][1], 1);
    EXPECT_EQ(a[0][2], 0);
    EXPECT_EQ(a[1][0], R(1, 27));
    EXPECT_EQ(a[2][0], R(1, 256));
    EXPECT_EQ(a[3][0], R(1, 3125));
    EXPECT_EQ(a[3][3], R(1, 4));
    EXPECT_EQ(determinant(a), R(-38873, 1166400000));
    EXPECT_EQ(bareiss_det(a), R(-38873, 1166400000));
}

TEST(ReciprocalPowers, SearchFindsNegativeMinor)
{
    auto rep = minors_nonneg(reciprocal_power_window(8), 4);
    EXPECT_FALSE(rep.ok);
    ASSERT_TRUE(rep.witness.has_value());
    EXPECT_LT(rep.witness->determinant.sign(), 0);
    // the printed minor is among the negatives
    std::vector<std::vector<BigRational>> m(4, std::vector<BigRational>(4));
    auto w = reciprocal_power_window(8);
    for (long i = 0; i < 4; ++i)
        for (long j = 0; j < 4; ++j)
            m[i][j] = *w.entry(i + 1, j).exact;
    EXPECT_LT(determinant(m), 0);
    // witness agrees with a recomputation
    const auto& wit = *rep.witness;
    std::vector<std::vector<BigRational>> x(wit.rows.size(), std::vector<BigRational>(wit.cols.size()));
    for (std::size_t i = 0; i < wit.rows.size(); ++i)
        for (std::size_t j = 0; j < wit.cols.size(); ++j)
            x[i][j] = *w.entry(wit.rows[i], wit.cols[j]).exact;
    EXPECT_EQ(bareiss_det(x), *wit.determinant.exact);
}

TEST(ReciprocalPowers, WitnessIsLexicographicallyFirst)
{
    auto w = reciprocal_power_window(7);
    auto rep = minors_nonneg(w, 4, default_minor_budget, 4);
    ASSERT_TRUE(rep.witness.has_value());
    // brute force in (order, rows, cols) order, single thread
    std::optional<MinorWitness> first;
    for (int m = 1; m <= 4 && !first; ++m)
        for (const auto& rows : tp::detail::subsets(7, m)) {
            for (const auto& cols : tp::detail::subsets(7, m)) {
                std::vector<std::vector<BigRational>> x(m, std::vector<BigRational>(m));
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        x[i][j] = *w.entry(rows[i], cols[j]).exact;
                if (bareiss_det(x) < 0) {
                    first = MinorWitness{rows, cols, {}};
                    break;
                }
            }
            if (first)
                break;
        }
    ASSERT_TRUE(first.has_value());
    EXPECT_EQ(rep.witness->rows, first->rows);
    EXPECT_EQ(rep.witness->cols, first->cols);
    auto single = minors_nonneg(w, 4, default_minor_budget, 1);
    EXPECT_EQ(single.witness->rows, rep.witness->rows);
    EXPECT_EQ(single.witness->cols, rep.witness->cols);
    EXPECT_EQ(single.negative_count, rep.negative_count);
}

TEST(Minors, ExponentialIsTotallyPositive)
{
    auto rep = minors_nonneg(ToeplitzWindow::exact(inv_factorials(8)), 4);
    EXPECT_TRUE(rep.ok);
    EXPECT_FALSE(rep.witness.has_value());
    EXPECT_EQ(rep.negative_count, 0u);
}

TEST(Minors, IdentityLike)
{
    std::vector<BigRational> a(6, BigRational(0));
    a[0] = 1;
    EXPECT_TRUE(minors_nonneg(ToeplitzWindow::exact(a), 6).ok);
}

TEST(MinorsProperty, CountIsSumOfSquaredBinomials)
{
    for (std::size_t n = 1; n <= 8; ++n)
        for (int m = 1; m <= static_cast<int>(std::min<std::size_t>(n, 4)); ++m) {
            auto rep = minors_nonneg(ToeplitzWindow::exact(inv_factorials(n)), m);
            unsigned long long expect = 0;
            for (int j = 1; j <= m; ++j) {
                unsigned long long b = binomial(n, static_cast<unsigned long>(j)).get_ui();
                expect += b * b;
                EXPECT_EQ(rep.per_order[j - 1], b * b);
            }
            EXPECT_EQ(rep.minors_checked, expect) << n << " " << m;
            EXPECT_EQ(minor_count(n, m), BigInt(static_cast<unsigned long>(expect)));
        }
    EXPECT_EQ(minor_count(8, 4), 8884);
}

TEST(Minors, BudgetAndDomain)
{
    auto w = ToeplitzWindow::exact(inv_factorials(12));
    try {
        minors_nonneg(w, 6);
        FAIL();
    } catch (const BudgetExceeded& e) {
        EXPECT_NE(std::string(e.what()).find("smaller N or max_order"), std::string::npos);
    }
    EXPECT_THROW(minors_nonneg(w, 0), DomainError);
    EXPECT_THROW(minors_nonneg(w, 13), DomainError);
}

TEST(Minors, FloatEntriesCertifiedSigns)
{
    // e^{-sqrt k}-style non-rational entries: alpha_k = sqrt(2)^k / k!
    std::vector<seq::TermValue> alpha;
    HPFloat r = sqrt(HPFloat::exact(2, 256));
    HPFloat p = HPFloat::exact(1, 256);
    for (unsigned long k = 0; k < 7; ++k) {
        alpha.push_back(seq::TermValue::real(p / HPFloat::exact(BigRational(factorial(k)), 256)));
        p = p * r;
    }
    auto rep = minors_nonneg(ToeplitzWindow(alpha), 3);
    EXPECT_TRUE(rep.ok);
    // zero minors of the banded structure are exact zeros, not uncertain
    EXPECT_EQ(rep.uncertain_count, 0u);
}

TEST(TpEvidence, ReciprocalPowerSequence)
{
    std::vector<BigRational> g;
    for (long k = 0; k < 20; ++k)
        g.push_back(make_rational(BigInt(1), BigInt(pow(BigRational(k + 1), k + 1))));
    auto spec = SequenceSpec::explicit_list(g);
    // the printed object: alpha_k = gamma_k
    auto ev = tp_evidence(spec, 8, 4, 6, false);
    EXPECT_FALSE(ev.minors.ok);
    ASSERT_TRUE(ev.minors.witness.has_value());
    EXPECT_EQ(ev.minors.witness->rows, (std::vector<long>{1, 2, 3, 4}));
    EXPECT_EQ(ev.minors.witness->cols, (std::vector<long>{0, 1, 2, 3}));
    EXPECT_EQ(*ev.minors.witness->determinant.exact, R(-38873, 1166400000));
    EXPECT_TRUE(ev.noteworthy);
    // alpha_k = gamma_k / k!: nothing negative in this window
    auto divided = tp_evidence(spec, 8, 4, 6, true);
    EXPECT_TRUE(divided.minors.ok);
}

TEST(TpEvidence, PositiveCases)
{
    // gamma interpolated by (1+x)^2: gamma_k = (k+1)^2
    auto ev = tp_evidence(SequenceSpec::poly({R(1), R(2), R(1)}), 8, 4, 8);
    EXPECT_TRUE(ev.minors.ok);
    EXPECT_FALSE(ev.ms.first_failure.has_value());
    EXPECT_FALSE(ev.noteworthy);
    auto one = tp_evidence(SequenceSpec::one(), 8, 4, 8);
    EXPECT_TRUE(one.minors.ok);
    EXPECT_THROW(tp_evidence(SequenceSpec::explicit_list({R(0), R(1)}), 2, 1), DomainError);
}

TEST(TpEvidence, BothCertificatesCoexist)
{
    // gamma = {1, 1, 3}: g_2 = 1 + 2x + 3x^2 has a non-real pair, and with
    // alpha = {1, 1, 3/2} the minor on rows {1,2}, cols {0,1} is 1 - 3/2
    auto spec = SequenceSpec::explicit_list({R(1), R(1), R(3), R(0), R(0), R(0)});
    auto ev = tp_evidence(spec, 3, 2, 2);
    EXPECT_FALSE(ev.minors.ok);
    ASSERT_TRUE(ev.ms.first_failure.has_value());
    EXPECT_EQ(*ev.ms.first_failure, 2);
    EXPECT_FALSE(ev.noteworthy);
}
