#pragma once

#include <algorithm>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lpkit/exactcore/certify.hpp"
#include "lpkit/exactcore/sturm.hpp"
#include "lpkit/poly.hpp"
#include "lpkit/seqlab/sequence.hpp"
#include "lpkit/specfun/combinatorics.hpp"

namespace lpkit::jensen {

using roots::RootCount;
using seq::SequenceSpec;
using seq::TermValue;

enum class Verdict { all_real, nonreal_found, uncertified };

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::all_real: return "all-real";
    case Verdict::nonreal_found: return "nonreal-found";
    case Verdict::uncertified: return "uncertified";
    }
    return "?";
}

/// g_n(x) = sum_k C(n,k) gamma_k x^k, held exactly when every coefficient is
/// rational and as a ball polynomial otherwise.
struct JensenPolynomial {
    CoefficientDomain domain = CoefficientDomain::exact_rational;
    std::vector<TermValue> coefficients; // C(n,k) gamma_k, k = 0..n
    QPoly exact;
    FPoly approx;
};

struct JensenReport {
    int degree = 0;
    std::vector<TermValue> coefficients;
    RootCount root_count;
    Verdict verdict = Verdict::uncertified;
    CoefficientDomain domain = CoefficientDomain::exact_rational;
    bool identically_zero = false;
    std::vector<roots::RootDisk> disks; // float path only
    std::string note;
};

struct MsTestReport {
    std::string spec;
    int max_degree = 0;
    std::optional<int> first_failure;
    std::vector<JensenReport> per_degree;
    bool sign_pattern_ok = true;
    bool exhaustive = false;

    /// Degrees whose classification could not be certified.
    std::vector<int> uncertified_degrees() const
    {
        std::vector<int> out;
        for (const auto& r : per_degree)
            if (r.verdict == Verdict::uncertified)
                out.push_back(r.degree);
        return out;
    }

    bool passed() const { return !first_failure && uncertified_degrees().empty(); }
};

struct MsTestOptions {
    Bits precision = roots::default_precision_bits;
    Bits max_precision = roots::max_precision_bits;
    bool exhaustive = false;
    unsigned threads = 0; // 0: hardware concurrency
};

/// Jensen coefficients from precomputed terms gamma_0..gamma_{n}.
inline std::vector<TermValue> jensen_coefficients(const std::vector<TermValue>& gamma, int n)
{
    if (n < 0)
        throw DomainError("Jensen polynomial degree must be >= 0");
    if (gamma.size() < static_cast<std::size_t>(n) + 1)
        throw DomainError("not enough terms for the requested degree");
    auto row = binomial_row(static_cast<unsigned long>(n));
    std::vector<TermValue> c;
    c.reserve(n + 1);
    for (int k = 0; k <= n; ++k)
        c.push_back(TermValue::rational(BigRational(row[k]), gamma[k].bits()) * gamma[k]);
    return c;
}

inline JensenPolynomial jensen_poly(const SequenceSpec& spec, int n, Bits bits = roots::default_precision_bits)
{
    if (n < 0)
        throw DomainError("Jensen polynomial degree must be >= 0");
    JensenPolynomial g;
    g.coefficients = jensen_coefficients(spec.terms(static_cast<std::size_t>(n) + 1, bits), n);
    bool all_exact = std::all_of(g.coefficients.begin(), g.coefficients.end(), [](const TermValue& t) { return t.is_exact(); });
    std::vector<HPFloat> f;
    for (const auto& c : g.coefficients)
        f.push_back(c.approx);
    g.approx = FPoly(std::move(f));
    if (all_exact) {
        std::vector<BigRational> q;
        for (const auto& c : g.coefficients)
            q.push_back(*c.exact);
        g.exact = QPoly(std::move(q));
        g.domain = CoefficientDomain::exact_rational;
    } else {
        g.domain = CoefficientDomain::floating;
    }
    return g;
}

/// Classifies the zeros of g_n: Sturm on the exact path, certified disks with
/// precision escalation on the float path.
inline JensenReport classify_degree(const SequenceSpec& spec, int n, const MsTestOptions& opt = {})
{
    JensenReport r;
    r.degree = n;
    JensenPolynomial g = jensen_poly(spec, n, opt.precision + roots::guard_bits);
    r.coefficients = g.coefficients;
    r.domain = g.domain;
    if (g.domain == CoefficientDomain::exact_rational) {
        if (g.exact.is_zero()) {
            r.identically_zero = true;
            r.root_count.certified = true;
            r.verdict = Verdict::all_real;
            r.note = "identically zero";
            return r;
        }
        r.root_count = roots::count_roots(g.exact);
        r.verdict = r.root_count.nonreal_pairs > 0 ? Verdict::nonreal_found : Verdict::all_real;
        return r;
    }
    if (g.approx.degree() < 1) {
        r.root_count = {0, 0, true, static_cast<long>(opt.precision)};
        r.verdict = Verdict::all_real;
        return r;
    }
    try {
        auto make = [&](Bits b) {
            if (b == opt.precision + roots::guard_bits)
                return g.approx;
            return jensen_poly(spec, n, b).approx;
        };
        auto det = roots::certified_root_details(make, opt.precision, opt.max_precision);
        r.root_count = det.count;
        r.disks = det.disks;
        r.verdict = det.count.nonreal_pairs > 0 ? Verdict::nonreal_found : Verdict::all_real;
    } catch (const Uncertifiable& e) {
        r.verdict = Verdict::uncertified;
        r.root_count.certified = false;
        r.root_count.precision_bits = static_cast<long>(opt.max_precision);
        r.note = e.what();
    }
    return r;
}

/// Laguerre-Polya I sign condition: the nonzero terms are all of one sign or
/// strictly alternate with the index. Terms of undecided sign are skipped.
inline bool sign_pattern_ok(const std::vector<TermValue>& gamma)
{
    int same = 0, alt = 0;
    bool same_ok = true, alt_ok = true;
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        int s = gamma[k].sign();
        if (s == 0)
            continue;
        int a = (k % 2 == 0) ? s : -s;
        if (same == 0)
            same = s;
        else if (s != same)
            same_ok = false;
        if (alt == 0)
            alt = a;
        else if (a != alt)
            alt_ok = false;
    }
    return same_ok || alt_ok;
}

/// Runs g_1..g_max_degree through root classification. The verdict is
/// evidence ("no failure through degree N"), never a membership proof.
/// Degrees are processed in parallel batches and merged in degree order, so
/// the report does not depend on scheduling.
inline MsTestReport ms_test(const SequenceSpec& spec, int max_degree, const MsTestOptions& opt = {})
{
    if (max_degree < 1)
        throw DomainError("ms_test needs max_degree >= 1");
    MsTestReport rep;
    rep.spec = spec.to_string();
    rep.max_degree = max_degree;
    rep.exhaustive = opt.exhaustive;
    rep.sign_pattern_ok = sign_pattern_ok(spec.terms(static_cast<std::size_t>(max_degree) + 1, opt.precision));

    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    for (int start = 1; start <= max_degree; start += static_cast<int>(threads)) {
        int stop = std::min(max_degree, start + static_cast<int>(threads) - 1);
        std::vector<std::future<JensenReport>> batch;
        for (int n = start; n <= stop; ++n)
            batch.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred,
                [&spec, n, &opt] { return classify_degree(spec, n, opt); }));
        for (auto& f : batch) {
            JensenReport r = f.get();
            if (rep.first_failure && !opt.exhaustive)
                continue;
            if (r.verdict == Verdict::nonreal_found && !rep.first_failure)
                rep.first_failure = r.degree;
            rep.per_degree.push_back(std::move(r));
        }
        if (rep.first_failure && !opt.exhaustive)
            break;
    }
    return rep;
}

/// p~ with sum_k p(k) x^k / k! = p~(x) e^x, via Stirling numbers of the
/// second kind.
inline QPoly poly_tilde(const QPoly& p)
{
    if (p.is_zero())
        return p;
    const auto d = static_cast<unsigned long>(p.degree());
    auto s2 = specfun::stirling2_table(d);
    std::vector<BigRational> c(d + 1);
    c[0] = p[0];
    for (unsigned long j = 1; j <= d; ++j)
        for (unsigned long k = j; k <= d; ++k)
            c[j] += p[k] * BigRational(s2[k][j]);
    return QPoly(std::move(c));
}

/// ms_test of {(c k^2 + a k + b) / k!}.
inline MsTestReport quad_by_fact_check(const BigRational& a, const BigRational& b, const BigRational& c, int max_degree,
    const MsTestOptions& opt = {})
{
    if (a < 0 || b < 0 || c < 0)
        throw DomainError("quad_by_fact_check needs a, b, c >= 0");
    return ms_test(SequenceSpec::poly({b, a, c}).divfact(), max_degree, opt);
}

} // namespace lpkit::jensen
