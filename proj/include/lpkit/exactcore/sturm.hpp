#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "lpkit/error.hpp"
#include "lpkit/poly.hpp"
#include "lpkit/rational.hpp"

namespace lpkit::roots {

/// Real/non-real zero census of a polynomial, counted with multiplicity.
struct RootCount {
    std::size_t real_count = 0;
    std::size_t nonreal_pairs = 0;
    bool certified = false;
    long precision_bits = 0; // 0 on the exact path

    std::size_t degree() const { return real_count + 2 * nonreal_pairs; }
    friend bool operator==(const RootCount&, const RootCount&) = default;
};

/// Closed interval [lo, hi]; a missing endpoint means -inf / +inf.
struct Interval {
    std::optional<BigRational> lo;
    std::optional<BigRational> hi;

    static Interval whole_line() { return {}; }
    static Interval closed(BigRational a, BigRational b) { return {std::move(a), std::move(b)}; }
};

/// [lo, hi] containing exactly one distinct real root; neither endpoint is a
/// root unless lo == hi.
struct IsolatingInterval {
    BigRational lo;
    BigRational hi;
    int multiplicity = 1;

    BigRational width() const { return hi - lo; }
    BigRational midpoint() const { return (lo + hi) / 2; }
};

// Integer polynomial kernels ------------------------------------------------

inline BigInt content(const ZPoly& p)
{
    BigInt g = 0;
    for (const auto& c : p.coeffs())
        g = lpkit::gcd(g, c);
    return g;
}

/// Divides out the content; the sign of the leading coefficient is preserved.
inline ZPoly strip_content(const ZPoly& p)
{
    if (p.is_zero())
        return p;
    BigInt g = content(p);
    if (g == 1)
        return p;
    std::vector<BigInt> c(p.coeffs().begin(), p.coeffs().end());
    for (auto& v : c)
        v /= g;
    return ZPoly(std::move(c));
}

inline ZPoly positive_primitive(const ZPoly& p)
{
    ZPoly r = strip_content(p);
    if (!r.is_zero() && r.leading() < 0)
        r = -r;
    return r;
}

/// lc(b)^(deg a - deg b + 1) * a mod b, computed without fractions.
inline ZPoly pseudo_remainder(const ZPoly& a, const ZPoly& b)
{
    if (b.is_zero())
        throw DomainError("pseudo-remainder by zero polynomial");
    if (a.degree() < b.degree())
        return a;
    std::vector<BigInt> r(a.coeffs().begin(), a.coeffs().end());
    const BigInt& lb = b.leading();
    const std::size_t db = b.size() - 1;
    int steps = a.degree() - b.degree() + 1;
    for (std::size_t top = r.size(); top-- > db && steps > 0; --steps) {
        BigInt f = r[top];
        for (auto& v : r)
            v *= lb;
        if (f != 0)
            for (std::size_t j = 0; j <= db; ++j)
                r[top - db + j] -= f * b[j];
    }
    r.resize(db);
    return ZPoly(std::move(r));
}

/// Monic-normalized gcd over Q, computed by a primitive remainder sequence.
inline QPoly gcd(const QPoly& a, const QPoly& b)
{
    ZPoly x = positive_primitive(primitive_part(a));
    ZPoly y = positive_primitive(primitive_part(b));
    if (x.degree() < y.degree())
        std::swap(x, y);
    while (!y.is_zero()) {
        ZPoly r = positive_primitive(pseudo_remainder(x, y));
        x = std::move(y);
        y = std::move(r);
    }
    return monic(to_rational(x));
}

/// Exact quotient a / b (b must divide a).
inline QPoly exact_quotient(const QPoly& a, const QPoly& b)
{
    auto [q, r] = divmod(a, b);
    if (!r.is_zero())
        throw DomainError("exact_quotient: divisor does not divide");
    return q;
}

/// Sign of p(x) for exact rational x.
inline int sign_at(const ZPoly& p, const BigRational& x)
{
    if (p.is_zero())
        return 0;
    // Homogenized Horner: sum a_i n^i d^(deg-i), d > 0.
    const BigInt& n = x.get_num();
    const BigInt& d = x.get_den();
    BigInt acc = p.leading();
    BigInt dpow = 1;
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        dpow *= d;
        acc = acc * n + p[i] * dpow;
    }
    return sgn(acc);
}

inline int sign_at(const QPoly& p, const BigRational& x)
{
    if (p.is_zero())
        return 0;
    return sgn(p.evaluate(x));
}

// Square-free decomposition -------------------------------------------------

/// Yun's algorithm: returns pairs (f_i, i) with p = c * prod f_i^i, each f_i
/// monic, square-free and pairwise coprime. Constant p yields an empty list.
inline std::vector<std::pair<QPoly, int>> square_free_decomposition(const QPoly& p)
{
    if (p.is_zero())
        throw DomainError("indeterminate root count: zero polynomial");
    std::vector<std::pair<QPoly, int>> out;
    if (p.degree() < 1)
        return out;
    QPoly dp = p.derivative();
    QPoly b = gcd(p, dp);
    QPoly c = exact_quotient(p, b);
    QPoly d = exact_quotient(dp, b) - c.derivative();
    for (int i = 1; c.degree() > 0; ++i) {
        QPoly a = gcd(c, d);
        if (a.degree() > 0)
            out.emplace_back(a, i);
        c = exact_quotient(c, a);
        d = exact_quotient(d, a) - c.derivative();
    }
    return out;
}

inline QPoly square_free_part(const QPoly& p)
{
    if (p.is_zero())
        throw DomainError("indeterminate root count: zero polynomial");
    if (p.degree() < 1)
        return monic(p);
    return monic(exact_quotient(p, gcd(p, p.derivative())));
}

// Sturm chains ---------------------------------------------------------------

/// Sturm sequence of a square-free polynomial, built from pseudo-remainders
/// with content stripping (each element is a positive multiple of the
/// classical signed remainder).
class SturmChain {
public:
    explicit SturmChain(const QPoly& square_free)
    {
        if (square_free.is_zero())
            throw DomainError("indeterminate root count: zero polynomial");
        ZPoly p0 = strip_content(primitive_part(square_free));
        if (p0.leading() < 0)
            p0 = -p0;
        seq_.push_back(p0);
        if (p0.degree() < 1)
            return;
        seq_.push_back(strip_content(p0.derivative()));
        while (seq_.back().degree() > 0) {
            const ZPoly& a = seq_[seq_.size() - 2];
            const ZPoly& b = seq_.back();
            ZPoly r = pseudo_remainder(a, b);
            if (r.is_zero())
                break;
            // prem = lc(b)^(delta+1) * rem; Sturm wants -rem up to a positive factor.
            int delta = a.degree() - b.degree();
            bool factor_negative = (b.leading() < 0) && ((delta + 1) % 2 == 1);
            r = strip_content(r);
            seq_.push_back(factor_negative ? r : -r);
        }
    }

    const std::vector<ZPoly>& sequence() const { return seq_; }
    const ZPoly& polynomial() const { return seq_.front(); }

    int variations_at(const BigRational& x) const
    {
        int v = 0, last = 0;
        for (const auto& p : seq_) {
            int s = sign_at(p, x);
            if (s == 0)
                continue;
            if (last != 0 && s != last)
                ++v;
            last = s;
        }
        return v;
    }

    int variations_at_infinity(bool positive) const
    {
        int v = 0, last = 0;
        for (const auto& p : seq_) {
            int s = sgn(p.leading());
            if (!positive && p.degree() % 2 == 1)
                s = -s;
            if (last != 0 && s != last)
                ++v;
            last = s;
        }
        return v;
    }

    /// Distinct roots in the closed interval.
    std::size_t count(const Interval& iv) const
    {
        if (iv.lo && iv.hi && *iv.lo > *iv.hi)
            throw DomainError("empty interval: lo > hi");
        int va = iv.lo ? variations_at(*iv.lo) : variations_at_infinity(false);
        int vb = iv.hi ? variations_at(*iv.hi) : variations_at_infinity(true);
        int n = va - vb;
        if (iv.lo && sign_at(polynomial(), *iv.lo) == 0)
            ++n;
        return static_cast<std::size_t>(n);
    }

    /// Distinct roots in the half-open interval (lo, hi].
    int count_half_open(const BigRational& lo, const BigRational& hi) const
    {
        return variations_at(lo) - variations_at(hi);
    }

private:
    std::vector<ZPoly> seq_;
};

/// Exact number of distinct real roots of p in the closed interval.
inline std::size_t sturm_real_count(const QPoly& p, const Interval& iv = Interval::whole_line())
{
    return SturmChain(square_free_part(p)).count(iv);
}

/// Multiplicity-aware real/non-real census on the exact path.
inline RootCount count_roots(const QPoly& p)
{
    RootCount rc;
    rc.certified = true;
    rc.precision_bits = 0;
    for (const auto& [f, mult] : square_free_decomposition(p))
        rc.real_count += static_cast<std::size_t>(mult) * SturmChain(f).count(Interval::whole_line());
    rc.nonreal_pairs = (static_cast<std::size_t>(p.degree()) - rc.real_count) / 2;
    return rc;
}

// Isolation -----------------------------------------------------------------

/// Strict bound B with every root |z| < B (Cauchy).
inline BigRational cauchy_bound(const ZPoly& p)
{
    BigRational m = 0;
    BigRational lc = abs(BigRational(p.leading()));
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        BigRational r = abs(BigRational(p[i])) / lc;
        if (r > m)
            m = r;
    }
    return m + 1;
}

namespace detail {

/// A split point strictly inside (lo, hi) that is not a root of p.
inline BigRational split_point(const ZPoly& p, const BigRational& lo, const BigRational& hi)
{
    BigRational w = hi - lo;
    BigRational m = lo + w / 2;
    for (long j = 2; sign_at(p, m) == 0; ++j)
        m = lo + w * (BigRational(1, 2) + pow(BigRational(1, 2), j));
    return m;
}

/// Bisects (lo, hi] known to hold one root of the chain's polynomial.
inline void bisect_once(const SturmChain& chain, IsolatingInterval& iv)
{
    BigRational m = split_point(chain.polynomial(), iv.lo, iv.hi);
    if (chain.count_half_open(iv.lo, m) == 1)
        iv.hi = m;
    else
        iv.lo = m;
}

inline std::vector<IsolatingInterval> isolate_square_free(const SturmChain& chain)
{
    std::vector<IsolatingInterval> out;
    const ZPoly& p = chain.polynomial();
    if (p.degree() < 1)
        return out;
    BigRational b = cauchy_bound(p);
    std::vector<std::pair<BigRational, BigRational>> stack{{-b, b}};
    while (!stack.empty()) {
        auto [lo, hi] = std::move(stack.back());
        stack.pop_back();
        int n = chain.count_half_open(lo, hi);
        if (n == 0)
            continue;
        if (n == 1) {
            out.push_back({lo, hi, 1});
            continue;
        }
        BigRational m = split_point(p, lo, hi);
        stack.emplace_back(m, hi);
        stack.emplace_back(lo, m);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    // Make neighbours strictly disjoint; shared endpoints are never roots.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i + 1 < out.size(); ++i) {
            if (out[i].hi >= out[i + 1].lo) {
                bisect_once(chain, out[i]);
                bisect_once(chain, out[i + 1]);
                changed = true;
            }
        }
    }
    return out;
}

} // namespace detail

/// One disjoint rational interval per distinct real root, sorted ascending,
/// each tagged with the root's multiplicity.
inline std::vector<IsolatingInterval> real_roots_isolate(const QPoly& p)
{
    auto factors = square_free_decomposition(p);
    SturmChain chain(square_free_part(p));
    auto out = detail::isolate_square_free(chain);
    std::vector<SturmChain> factor_chains;
    for (const auto& f : factors)
        factor_chains.emplace_back(f.first);
    for (auto& iv : out) {
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (factor_chains[i].count_half_open(iv.lo, iv.hi) == 1) {
                iv.multiplicity = factors[i].second;
                break;
            }
        }
    }
    return out;
}

/// Bisects an isolating interval of p until its width is at most eps.
inline IsolatingInterval refine_root(const QPoly& p, IsolatingInterval iv, const BigRational& eps)
{
    if (eps <= 0)
        throw DomainError("refinement width must be positive");
    SturmChain chain(square_free_part(p));
    if (chain.count_half_open(iv.lo, iv.hi) != 1)
        throw DomainError("interval does not isolate a single root");
    while (iv.width() > eps)
        detail::bisect_once(chain, iv);
    return iv;
}

/// True iff the real roots of p and q strictly alternate (all simple, none
/// shared). Both inputs must be real-rooted with |deg p - deg q| <= 1.
inline bool strict_interlace_check(const QPoly& p, const QPoly& q)
{
    if (p.is_zero() || q.is_zero())
        throw DomainError("interlacing undefined: zero polynomial");
    auto rp = count_roots(p), rq = count_roots(q);
    if (rp.nonreal_pairs != 0 || rq.nonreal_pairs != 0)
        throw DomainError("interlacing undefined: input has non-real zeros");
    if (std::abs(p.degree() - q.degree()) > 1)
        throw DomainError("interlacing undefined: degrees differ by more than one");
    if (gcd(p, q).degree() > 0)
        return false;
    SturmChain cp(square_free_part(p)), cq(square_free_part(q));
    if (cp.polynomial().degree() != p.degree() || cq.polynomial().degree() != q.degree())
        return false; // a repeated root cannot interlace strictly
    auto ip = detail::isolate_square_free(cp);
    auto iq = detail::isolate_square_free(cq);
    auto overlap = [](const IsolatingInterval& a, const IsolatingInterval& b) { return !(a.hi < b.lo || b.hi < a.lo); };
    for (bool changed = true; changed;) {
        changed = false;
        for (auto& a : ip)
            for (auto& b : iq)
                if (overlap(a, b)) {
                    detail::bisect_once(cp, a);
                    detail::bisect_once(cq, b);
                    changed = true;
                }
    }
    std::vector<std::pair<BigRational, int>> merged;
    for (const auto& a : ip)
        merged.emplace_back(a.lo, 0);
    for (const auto& b : iq)
        merged.emplace_back(b.lo, 1);
    std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i + 1 < merged.size(); ++i)
        if (merged[i].second == merged[i + 1].second)
            return false;
    return true;
}

} // namespace lpkit::roots
