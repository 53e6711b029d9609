#pragma once

#include <algorithm>
#include <atomic>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lpkit/error.hpp"
#include "lpkit/jensen/jensen.hpp"
#include "lpkit/rational.hpp"
#include "lpkit/seqlab/sequence.hpp"

namespace lpkit::tp {

using seq::SequenceSpec;
using seq::TermValue;

/// Leading N x N block of the Toeplitz matrix A[i][j] = alpha_{i-j}, zero above
/// the diagonal.
class ToeplitzWindow {
public:
    explicit ToeplitzWindow(std::vector<TermValue> alpha) : alpha_(std::move(alpha))
    {
        if (alpha_.empty())
            throw DomainError("Toeplitz window needs at least one term");
    }

    static ToeplitzWindow exact(const std::vector<BigRational>& alpha, Bits bits = 256)
    {
        std::vector<TermValue> a;
        for (const auto& q : alpha)
            a.push_back(TermValue::rational(q, bits));
        return ToeplitzWindow(std::move(a));
    }

    std::size_t size() const { return alpha_.size(); }
    const std::vector<TermValue>& alpha() const { return alpha_; }

    bool is_exact() const
    {
        return std::all_of(alpha_.begin(), alpha_.end(), [](const TermValue& t) { return t.is_exact(); });
    }

    TermValue entry(long i, long j) const
    {
        if (i < j)
            return TermValue::rational(0, alpha_[0].bits());
        return alpha_[static_cast<std::size_t>(i - j)];
    }

private:
    std::vector<TermValue> alpha_;
};

/// Exact determinant by Gaussian elimination over Q.
inline BigRational determinant(std::vector<std::vector<BigRational>> a)
{
    const std::size_t n = a.size();
    BigRational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0)
                continue;
            BigRational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k)
                a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

/// Ball determinant by cofactor expansion along the first row; intended for
/// the small orders used here.
inline HPFloat determinant(const std::vector<std::vector<HPFloat>>& a)
{
    const std::size_t n = a.size();
    if (n == 1)
        return a[0][0];
    HPFloat sum = HPFloat::exact(0, a[0][0].precision_bits());
    for (std::size_t c = 0; c < n; ++c) {
        if (a[0][c].is_exact_zero())
            continue;
        std::vector<std::vector<HPFloat>> m;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<HPFloat> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c)
                    row.push_back(a[r][k]);
            m.push_back(std::move(row));
        }
        HPFloat term = a[0][c] * determinant(m);
        sum = (c % 2 == 0) ? sum + term : sum - term;
    }
    return sum;
}

struct MinorWitness {
    std::vector<long> rows, cols;
    TermValue determinant;
};

struct MinorsReport {
    bool ok = true;
    std::optional<MinorWitness> witness; // lexicographically first negative minor
    std::size_t window = 0;
    int max_order = 0;
    unsigned long long minors_checked = 0;
    unsigned long long negative_count = 0;
    unsigned long long uncertain_count = 0; // float entries whose sign could not be certified
    std::vector<unsigned long long> per_order; // per_order[m-1] = minors of order m
};

/// sum_{m=1}^{max_order} C(N, m)^2.
inline BigInt minor_count(std::size_t n, int max_order)
{
    BigInt total = 0;
    for (int m = 1; m <= max_order; ++m) {
        BigInt b = binomial(n, static_cast<unsigned long>(m));
        total += b * b;
    }
    return total;
}

inline constexpr unsigned long long default_minor_budget = 150000;

namespace detail {

/// All m-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<long>> subsets(long n, int m)
{
    std::vector<std::vector<long>> out;
    std::vector<long> s(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        s[i] = i;
    if (m > n)
        return out;
    while (true) {
        out.push_back(s);
        int i = m - 1;
        while (i >= 0 && s[i] == n - m + i)
            --i;
        if (i < 0)
            break;
        ++s[i];
        for (int j = i + 1; j < m; ++j)
            s[j] = s[j - 1] + 1;
    }
    return out;
}

struct ChunkResult {
    unsigned long long checked = 0, negative = 0, uncertain = 0;
    std::optional<std::size_t> first_negative; // index into the row-subset list
    std::optional<MinorWitness> witness;
};

} // namespace detail

/// Checks every minor of order 1..max_order. Entries that are all exact use
/// rational determinants; otherwise balls, and a minor whose ball straddles
/// zero is counted as uncertain rather than negative.
inline MinorsReport minors_nonneg(const ToeplitzWindow& w, int max_order, unsigned long long budget = default_minor_budget,
    unsigned threads = 0)
{
    const long n = static_cast<long>(w.size());
    if (max_order < 1 || max_order > n)
        throw DomainError("max_order must lie in [1, N]");
    BigInt need = minor_count(static_cast<std::size_t>(n), max_order);
    if (need > BigInt(std::to_string(budget)))
        throw BudgetExceeded("minor budget exceeded: " + need.get_str() + " minors for N = " + std::to_string(n) +
            ", max_order = " + std::to_string(max_order) + " (budget " + std::to_string(budget) +
            "); use a smaller N or max_order");
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());

    const bool exact = w.is_exact();
    MinorsReport rep;
    rep.window = static_cast<std::size_t>(n);
    rep.max_order = max_order;
    for (int m = 1; m <= max_order; ++m) {
        auto sets = detail::subsets(n, m);
        std::vector<detail::ChunkResult> parts(threads);
        std::atomic<std::size_t> next{0};
        auto worker = [&](unsigned id) {
            auto& part = parts[id];
            for (std::size_t ri = next++; ri < sets.size(); ri = next++) {
                const auto& rows = sets[ri];
                for (const auto& cols : sets) {
                    ++part.checked;
                    int sign;
                    TermValue det;
                    if (exact) {
                        std::vector<std::vector<BigRational>> a(m, std::vector<BigRational>(m));
                        for (int i = 0; i < m; ++i)
                            for (int j = 0; j < m; ++j)
                                a[i][j] = *w.entry(rows[i], cols[j]).exact;
                        BigRational d = determinant(std::move(a));
                        sign = sgn(d);
                        det = TermValue::rational(d, w.alpha()[0].bits());
                    } else {
                        std::vector<std::vector<HPFloat>> a(m, std::vector<HPFloat>(m));
                        for (int i = 0; i < m; ++i)
                            for (int j = 0; j < m; ++j)
                                a[i][j] = w.entry(rows[i], cols[j]).approx;
                        HPFloat d = determinant(a);
                        sign = d.certain_sign();
                        if (sign == 0 && !d.is_exact_zero())
                            ++part.uncertain;
                        det = TermValue::real(d);
                    }
                    if (sign < 0) {
                        ++part.negative;
                        // each worker sees increasing ri, and cols in order
                        if (!part.first_negative) {
                            part.first_negative = ri;
                            part.witness = MinorWitness{rows, cols, det};
                        }
                    }
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker, t);
        for (auto& t : pool)
            t.join();
        unsigned long long order_count = 0;
        const detail::ChunkResult* best = nullptr;
        for (const auto& part : parts) {
            order_count += part.checked;
            rep.negative_count += part.negative;
            rep.uncertain_count += part.uncertain;
            if (part.first_negative && (!best || *part.first_negative < *best->first_negative))
                best = &part;
        }
        if (best && !rep.witness)
            rep.witness = best->witness;
        rep.per_order.push_back(order_count);
        rep.minors_checked += order_count;
    }
    rep.ok = rep.negative_count == 0;
    return rep;
}

/// Toeplitz window of the printed object: alpha_k = 1/(k+1)^{k+1}.
inline ToeplitzWindow reciprocal_power_window(std::size_t n = 5)
{
    std::vector<BigRational> a;
    for (std::size_t k = 0; k < n; ++k)
        a.push_back(make_rational(BigInt(1), BigInt(pow(BigRational(static_cast<long>(k) + 1), static_cast<long>(k) + 1))));
    return ToeplitzWindow::exact(a);
}

/// The printed 4 x 4 submatrix: rows {1,2,3,4}, columns {0,1,2,3}.
inline std::vector<std::vector<BigRational>> printed_minor_matrix()
{
    auto w = reciprocal_power_window(5);
    std::vector<std::vector<BigRational>> a(4, std::vector<BigRational>(4));
    for (long i = 0; i < 4; ++i)
        for (long j = 0; j < 4; ++j)
            a[i][j] = *w.entry(i + 1, j).exact;
    return a;
}

struct TpEvidence {
    std::string spec;
    bool divided_by_factorial = true;
    MinorsReport minors;
    jensen::MsTestReport ms;
    /// A certified negative minor while ms_test saw no failure.
    bool noteworthy = false;
    std::string note;
};

/// Minor report for alpha_k = gamma_k / k! (or gamma_k when divide_by_factorial
/// is false), normalized by alpha_0, cross-referenced with ms_test of the
/// same sequence through `ms_degree`.
inline TpEvidence tp_evidence(const SequenceSpec& spec, std::size_t n, int max_order, int ms_degree = 10,
    bool divide_by_factorial = true, const jensen::MsTestOptions& ms_opt = {}, unsigned long long budget = default_minor_budget)
{
    if (n == 0)
        throw DomainError("window N must be >= 1");
    const Bits bits = ms_opt.precision;
    auto terms = spec.terms(n, bits);
    std::vector<TermValue> alpha;
    for (std::size_t k = 0; k < n; ++k) {
        TermValue a = terms[k];
        if (divide_by_factorial)
            a = a / TermValue::rational(BigRational(factorial(k)), bits);
        alpha.push_back(a);
    }
    if (alpha[0].is_zero())
        throw DomainError("cannot normalize: alpha_0 = 0");
    if (alpha[0].sign() == 0)
        throw DomainError("cannot normalize: alpha_0 is not certified nonzero");
    const TermValue a0 = alpha[0];
    for (auto& a : alpha)
        a = a / a0;

    TpEvidence ev;
    ev.spec = spec.to_string();
    ev.divided_by_factorial = divide_by_factorial;
    ev.minors = minors_nonneg(ToeplitzWindow(std::move(alpha)), max_order, budget, ms_opt.threads);
    ev.ms = jensen::ms_test(spec, ms_degree, ms_opt);
    const bool ms_clean = !ev.ms.first_failure && ev.ms.uncertified_degrees().empty();
    if (!ev.minors.ok && ms_clean) {
        ev.noteworthy = true;
        ev.note = "negative minor while ms_test finds no failure through degree " + std::to_string(ms_degree);
    } else if (!ev.minors.ok) {
        ev.note = "negative minor and ms_test failure at degree " +
            (ev.ms.first_failure ? std::to_string(*ev.ms.first_failure) : std::string("?")) + " both present";
    } else if (ev.ms.first_failure) {
        ev.note = "no negative minor in the window; ms_test fails at degree " + std::to_string(*ev.ms.first_failure);
    } else {
        ev.note = "no negative minor in the window and no ms_test failure";
    }
    return ev;
}

} // namespace lpkit::tp
