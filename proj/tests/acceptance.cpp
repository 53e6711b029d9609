// Acceptance criteria AC1..AC9: one PASS/FAIL line each, with the pinned
// tolerance and runtime limit. Exit status is 0 iff every line passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "lpkit/exactcore/sturm.hpp"
#include "lpkit/families/families.hpp"
#include "lpkit/jensen/jensen.hpp"
#include "lpkit/quadlab/quadlab.hpp"
#include "lpkit/specfun/specfun.hpp"
#include "lpkit/tpseq/tpseq.hpp"
#include "support/oracles.hpp"

using namespace lpkit;
using lpkit::seq::parse_sequence;
using lpkit::seq::SequenceSpec;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

BigRational R(long n, long d = 1) { return make_rational(n, d); }

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Outcome ac1()
{
    Outcome o;
    const BigRational det = tp::determinant(tp::printed_minor_matrix());
    o.require(det == R(-38873, 1166400000), "det = " + to_fraction_string(det));
    o.detail = o.ok ? "det = -38873/1166400000 exactly" : o.detail;
    return o;
}

Outcome ac2()
{
    Outcome o;
    auto rep = jensen::ms_test(parse_sequence("log2"), 5);
    o.require(rep.first_failure == 3, "first_failure != 3");
    if (!o.ok)
        return o;
    double real = NAN, re = NAN, im = NAN;
    for (const auto& d : rep.per_degree.back().disks) {
        if (d.real)
            real = d.center.real();
        else if (d.center.imag() > 0) {
            re = d.center.real();
            im = d.center.imag();
        }
    }
    const double err = std::max({std::abs(real + 0.330544), std::abs(re + 1.1267576), std::abs(im - 0.182619129)});
    o.require(err < 1e-5, "root deviation " + fmt("%.3g", err));
    if (o.ok)
        o.detail = "first_failure = 3, max root deviation " + fmt("%.2g", err) + " (tol 1e-5)";
    return o;
}

Outcome ac3()
{
    Outcome o;
    jensen::MsTestOptions opt;
    opt.precision = 512;
    auto rep = jensen::ms_test(parse_sequence("harmonic_gamma|divfact"), 100, opt);
    o.require(!rep.first_failure, "failure at degree " + (rep.first_failure ? std::to_string(*rep.first_failure) : std::string()));
    o.require(rep.uncertified_degrees().empty(), std::to_string(rep.uncertified_degrees().size()) + " uncertified degrees");
    o.require(rep.per_degree.size() == 100, "swept " + std::to_string(rep.per_degree.size()) + " degrees");
    if (o.ok)
        o.detail = "degrees 1..100 certified all-real at 512 bits";
    return o;
}

Outcome ac4()
{
    Outcome o;
    for (const char* spec : {"power(a=0,s=1/2)|divfact", "exp_sqrt(1)|divfact"}) {
        auto rep = jensen::ms_test(parse_sequence(spec), 30);
        o.require(rep.passed(), std::string(spec) + " did not pass through 30");
    }
    // k^(1/20)/k! written out directly rather than through the divfact transform
    auto small = jensen::ms_test(parse_sequence("explicit(k^(1/20)/k!)"), 6);
    const auto& g6 = small.per_degree.back();
    o.require(small.first_failure == 6 && g6.root_count.certified && g6.root_count.nonreal_pairs == 1,
        "k^(1/20)/k!: first failure " + (small.first_failure ? std::to_string(*small.first_failure) : std::string("none")));
    auto plain = jensen::ms_test(parse_sequence("power(a=0,s=1/20)"), 6);
    if (o.ok)
        o.detail = "sqrt(k)/k! and e^sqrt(k)/k! clean through 30; k^(1/20)/k! fails at 6 with one pair"
                   " (k^(1/20) alone fails at " +
            (plain.first_failure ? std::to_string(*plain.first_failure) : std::string("none")) + ")";
    return o;
}

/// gamma_k / k! for k <= 30 against the x^k coefficient of q(x) e^x.
void match_exp_series(Outcome& o, const char* spec, const QPoly& q)
{
    auto terms = parse_sequence(spec).terms(31, 64);
    for (unsigned long k = 0; k <= 30; ++k) {
        if (!terms[k].exact || *terms[k].exact / BigRational(factorial(k)) != oracle::times_exp_coeff(q, k)) {
            o.require(false, std::string(spec) + " differs at k = " + std::to_string(k));
            return;
        }
    }
}

Outcome ac5()
{
    Outcome o;
    o.require(jensen::poly_tilde(QPoly{R(1), R(1), R(1)}) == QPoly({R(1), R(2), R(1)}), "tilde(1+k+k^2)");
    o.require(jensen::poly_tilde(QPoly{R(2), R(0), R(1)}) == QPoly({R(2), R(1), R(1)}), "tilde(k^2+2)");
    match_exp_series(o, "poly(1,1,1)", QPoly{R(1), R(2), R(1)});
    match_exp_series(o, "poly(2,0,1)", QPoly{R(2), R(1), R(1)});
    match_exp_series(o, "poly(1,1,1)|average", QPoly{R(1), R(1), R(1, 3)});
    match_exp_series(o, "poly(16,8,1)|partial_sum", QPoly{R(16), R(25), R(11, 2), R(1, 3)});
    match_exp_series(o, "poly(24,50,35,10,1)|shift_zeros(2)", QPoly{R(0), R(0), R(12), R(8), R(1)});
    if (o.ok)
        o.detail = "five generating-function fixtures match exactly for k <= 30";
    return o;
}

Outcome ac6()
{
    Outcome o;
    auto convex = jensen::classify_degree(parse_sequence("poly(1,1,1)|convex_combo(1/10,fact_inv)"), 4);
    const std::vector<BigRational> printed{R(1), R(24, 5), R(69, 10), R(29, 5), R(171, 80)};
    bool same = convex.coefficients.size() == printed.size();
    for (std::size_t i = 0; same && i < printed.size(); ++i)
        same = convex.coefficients[i].exact && *convex.coefficients[i].exact == printed[i];
    o.require(same, "convex quartic coefficients differ from print");
    o.require(convex.domain == CoefficientDomain::exact_rational && convex.root_count.nonreal_pairs == 1, "convex quartic split");
    jensen::MsTestOptions opt;
    opt.precision = 256;
    auto geo = jensen::classify_degree(parse_sequence("poly(1,1,1)|geom_combo(1/2,one)"), 4, opt);
    o.require(geo.root_count.certified && geo.root_count.nonreal_pairs == 1, "sqrt quartic split");
    o.require(std::abs(geo.coefficients[1].approx.value.to_double() - 4 * std::sqrt(3.0)) < 1e-14, "sqrt quartic x coefficient");
    if (o.ok)
        o.detail = "exact quartic and 256-bit sqrt quartic each certify one non-real pair";
    return o;
}

Outcome ac7()
{
    Outcome o;
    double worst_b = 0, worst_nsg = 0, worst_lag = 0;
    quad::QuadOptions qo;
    qo.bits = 256;
    for (const char* xs : {"1/2", "1", "2", "5"}) {
        const BigRational x = parse_rational(xs);
        const HPFloat ref = specfun::bessel_B_series(R(1, 2), HPFloat::exact(x, 256), 80).value;
        const Real rx(x, 256);
        for (const auto& q : {quad::bessel_sqrt_integral_u(rx, 1e-12, qo), quad::bessel_sqrt_integral_v(rx, 1e-12, qo)}) {
            Real d(256);
            mpfr_sub(d.get(), q.value.value.get(), ref.value.get(), MPFR_RNDN);
            worst_b = std::max(worst_b, std::abs(d.to_double()));
        }
    }
    Real pi(256);
    mpfr_const_pi(pi.get(), MPFR_RNDN);
    for (long n = 1; n <= 10; ++n) {
        // 2 sqrt(n pi)
        Real target(256);
        mpfr_mul_si(target.get(), pi.get(), n, MPFR_RNDN);
        mpfr_sqrt(target.get(), target.get(), MPFR_RNDN);
        mpfr_mul_ui(target.get(), target.get(), 2, MPFR_RNDN);
        auto q = quad::identity_check_nsg(n, R(1, 2), 1e-13, qo);
        Real d(256);
        mpfr_sub(d.get(), q.value.value.get(), target.get(), MPFR_RNDN);
        worst_nsg = std::max(worst_nsg, std::abs(d.to_double()));
    }
    Real euler(256);
    mpfr_const_euler(euler.get(), MPFR_RNDN);
    for (long k : {1L, 5L, 100L}) {
        // H_k - ln k - euler_gamma
        BigRational h = 0;
        for (long j = 1; j <= k; ++j)
            h += R(1, j);
        Real target(h, 256), lk(256);
        mpfr_set_si(lk.get(), k, MPFR_RNDN);
        mpfr_log(lk.get(), lk.get(), MPFR_RNDN);
        mpfr_sub(target.get(), target.get(), lk.get(), MPFR_RNDN);
        mpfr_sub(target.get(), target.get(), euler.get(), MPFR_RNDN);
        auto q = quad::lagarias_check(k, 1e-12, 256);
        Real d(256);
        mpfr_sub(d.get(), q.value.value.get(), target.get(), MPFR_RNDN);
        worst_lag = std::max(worst_lag, std::abs(d.to_double()));
    }
    o.require(worst_b < 1e-8, "B(1/2,x) deviation " + fmt("%.3g", worst_b));
    o.require(worst_nsg < 1e-10, "identity deviation " + fmt("%.3g", worst_nsg));
    o.require(worst_lag < 1e-10, "Lagarias deviation " + fmt("%.3g", worst_lag));
    if (o.ok)
        o.detail = "B(1/2,x) max dev " + fmt("%.2g", worst_b) + " (tol 1e-8), 2 sqrt(n pi) max dev " + fmt("%.2g", worst_nsg) +
            " (tol 1e-10), Lagarias max dev " + fmt("%.2g", worst_lag) + " (tol 1e-10)";
    return o;
}

Outcome ac8()
{
    using families::LPFunction;
    Outcome o;
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<long> num(1, 19), den(20, 20);
    std::uniform_int_distribution<long> rnum(0, 40), rden(1, 10);
    for (int trial = 0; trial < 25; ++trial) {
        const BigRational r = R(rnum(rng), rden(rng)), t = R(num(rng), den(rng)), s = R(num(rng), den(rng));
        const auto f = LPFunction::exp_r(r);
        const BigRational base = 2 + (s + t) * (r - 1);
        BigRational power = 1;
        for (long k = 0; k <= 20; ++k, power *= base)
            if (families::c_family_exact(f, f, t, s, k) != power) {
                o.require(false, "exp closed form at r=" + to_fraction_string(r) + " k=" + std::to_string(k));
                break;
            }
    }
    for (const char* spec : {"poly(1,1,1)", "poly(2,0,1)", "poly(16,121/6,9/2,1/3)", "poly(3,5,2)", "geometric(3/2)", "geometric(1/2)",
             "geometric(2)", "one"}) {
        auto seq = parse_sequence(spec);
        auto rep = families::ck_represent(seq, 25);
        auto terms = seq.terms(26, 64);
        std::vector<families::CkWitness> ws{rep.witness};
        if (rep.alternative)
            ws.push_back(*rep.alternative);
        for (const auto& w : ws)
            for (long k = 0; k <= 25; ++k)
                if (families::c_family_exact(w.phi, w.Phi, w.t, w.s, k) != *terms[k].exact) {
                    o.require(false, std::string("witness for ") + spec + " at k=" + std::to_string(k));
                    break;
                }
    }
    const std::vector<LPFunction> fs{LPFunction::sq_fact(), LPFunction::even_fact(), LPFunction::exp_r(R(1, 2)), LPFunction::one(),
        LPFunction::poly_times_exp(QPoly{R(1), R(3), R(2)}, R(1, 3))};
    for (const auto& f : fs)
        for (const auto& t : {R(1, 3), R(-2, 5), R(7, 4), R(1)})
            for (long k = 0; k <= 12; ++k) {
                if (!families::bk_reversal_check(f, k, t))
                    o.require(false, "reversal " + f.to_string() + " k=" + std::to_string(k));
                if (*families::bk_via_jensen(f, k, t).exact != families::b_family_exact(f, t, k))
                    o.require(false, "via-jensen " + f.to_string() + " k=" + std::to_string(k));
            }
    if (o.ok)
        o.detail = "25 exp triples to k=20, 8 witnesses to k=25, reversal and Jensen form to k=12, all exact";
    return o;
}

Outcome ac9()
{
    Outcome o;
    // Sturm count against the companion-matrix oracle
    {
        std::mt19937_64 rng(9001);
        std::uniform_int_distribution<int> deg(1, 12), coef(-9, 9), pick(0, 9);
        int mismatches = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            QPoly p;
            if (pick(rng) == 0) {
                QPoly f{BigRational(coef(rng)), BigRational(1)};
                QPoly g{BigRational(coef(rng)), BigRational(coef(rng)), BigRational(1)};
                p = f * f * g;
            } else {
                std::vector<BigRational> c;
                const int d = deg(rng);
                for (int i = 0; i < d; ++i)
                    c.emplace_back(coef(rng));
                const int lead = coef(rng);
                c.emplace_back(lead == 0 ? 1 : lead);
                p = QPoly(std::move(c));
            }
            if (roots::sturm_real_count(p) != oracle::companion_distinct_real(p))
                ++mismatches;
        }
        o.require(mismatches == 0, std::to_string(mismatches) + " Sturm/oracle mismatches");
    }
    // doubling the node budget moves each integral by less than its estimate
    {
        using quad::QuadOptions;
        auto at = [](int lv) {
            QuadOptions q;
            q.max_level = lv;
            q.min_level = 0;
            return q;
        };
        const Real two(R(2), 128), one(R(1), 128);
        std::vector<std::function<quad::QuadResult(int)>> runs = {
            [&](int lv) { return quad::bessel_sqrt_integral_u(two, 0, at(lv)); },
            [&](int lv) { return quad::bessel_sqrt_integral_v(two, 0, at(lv)); },
            [&](int lv) { return quad::identity_check_nsg(4, R(1, 2), 0, at(lv)); },
            [&](int lv) { return quad::phi_I1_integral(one, 0, at(lv)); },
            [&](int lv) { return quad::phi_prime_I0_integral(one, 0, at(lv)); },
            [&](int lv) { return quad::cauchy_saalschutz_gamma(R(1, 4), 0, at(lv)); },
        };
        int dishonest = 0;
        for (auto& run : runs)
            for (int lv = 3; lv <= 6; ++lv) {
                auto a = run(lv), b = run(lv + 1);
                if (std::abs(b.value.value.to_double() - a.value.value.to_double()) > a.abs_err_est.value.to_double())
                    ++dishonest;
            }
        o.require(dishonest == 0, std::to_string(dishonest) + " quadrature estimates too small");
    }
    // ten more terms move each series by less than its tail bound
    {
        auto hp = [](const char* q) { return HPFloat::exact(parse_rational(q), 256); };
        std::vector<std::function<specfun::SeriesEval(long)>> series = {
            [&](long n) { return specfun::hyp0F1_series(hp("1"), hp("7"), n); },
            [&](long n) { return specfun::hyp1F1_series(hp("1/3"), hp("5/2"), hp("-4"), n); },
            [&](long n) { return specfun::bessel_I_series(hp("1/2"), hp("3"), n); },
            [&](long n) { return specfun::bessel_B_series(R(1, 2), hp("5"), n); },
            [&](long n) { return specfun::hardy_E(R(1, 2), 0, hp("-9"), n); },
            [&](long n) { return specfun::hardy_E(R(-1), 1, hp("6"), n); },
            [&](long n) { return specfun::cosh_sqrt_series(hp("10"), n); },
        };
        int dishonest = 0;
        for (auto& f : series) {
            auto base = f(0);
            auto more = f(base.terms_used + 10);
            Real diff(64);
            mpfr_sub(diff.get(), more.value.value.get(), base.value.value.get(), MPFR_RNDN);
            if (!base.tail_finite() || std::abs(diff.to_double()) > base.tail_bound.value.to_double() * (1 + 1e-9) + 1e-70)
                ++dishonest;
        }
        o.require(dishonest == 0, std::to_string(dishonest) + " tail bounds too small");
    }
    // a passing average implies a passing original, on random quartics
    {
        std::mt19937_64 rng(14);
        std::uniform_int_distribution<int> num(0, 9), den(1, 4);
        int checked = 0, violations = 0;
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<BigRational> c;
            for (int i = 0; i <= 4; ++i)
                c.push_back(R(num(rng), den(rng)));
            if (c.back() == 0)
                c.back() = 1;
            auto p = SequenceSpec::poly(c);
            if (jensen::ms_test(p.average(), 20).first_failure)
                continue;
            ++checked;
            if (jensen::ms_test(p, 20).first_failure)
                ++violations;
        }
        o.require(violations == 0, std::to_string(violations) + " average/original violations");
        o.require(checked > 0, "no quartic had a passing average");
        if (o.ok)
            o.detail = "1000 Sturm trials, 24 quadrature and 7 series honesty checks, " + std::to_string(checked) +
                " quartics with passing averages";
    }
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        const char* id;
        const char* title;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"AC1", "printed Toeplitz 4x4 determinant (exact)", 1, ac1},
        {"AC2", "log sequence fails at degree 3 (roots tol 1e-5)", 5, ac2},
        {"AC3", "(H_{k+2} - gamma)/k! clean through degree 100 at 512 bits", 300, ac3},
        {"AC4", "sqrt(k)/k!, e^sqrt(k)/k! clean through 30; k^(1/20)/k! fails at 6", 120, ac4},
        {"AC5", "generating-function fixtures to degree 30 (exact)", 10, ac5},
        {"AC6", "convex and geometric combination quartics", 5, ac6},
        {"AC7", "quadrature identities", 120, ac7},
        {"AC8", "B_k and C_k family identities (exact)", 60, ac8},
        {"AC9", "property suites", 600, ac9},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.limit_s;
        const bool pass = o.ok && in_time;
        failures += !pass;
        std::printf("%s %s  %s  [%.2f s, limit %.0f s%s]  %s\n", c.id, pass ? "PASS" : "FAIL", c.title, secs, c.limit_s,
            in_time ? "" : ", over limit", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
