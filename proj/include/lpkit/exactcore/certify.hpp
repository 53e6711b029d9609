#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "lpkit/error.hpp"
#include "lpkit/exactcore/sturm.hpp"
#include "lpkit/poly.hpp"
#include "lpkit/real.hpp"

namespace lpkit::roots {

inline constexpr Bits default_precision_bits = 256;
inline constexpr Bits guard_bits = 32;
inline constexpr Bits max_precision_bits = 4096;

/// Inclusion disk holding exactly one root of the polynomial.
struct RootDisk {
    std::complex<double> center;
    double radius = 0;
    bool real = false;
};

struct RootClassification {
    RootCount count;
    std::vector<RootDisk> disks; // zeros stripped at the origin are not listed
    std::size_t zero_roots = 0;
};

namespace detail {

struct Complex {
    Real re;
    Real im;

    explicit Complex(Bits bits) : re(bits), im(bits) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator*(const Complex& a, const Complex& b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator/(const Complex& a, const Complex& b)
    {
        Real d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }

    Real abs() const
    {
        Real r(std::max(re.precision(), im.precision()));
        mpfr_hypot(r.get(), re.get(), im.get(), MPFR_RNDU);
        return r;
    }

    Complex conj() const { return {re, -im}; }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
};

/// Initial approximations on circles whose radii come from the upper convex
/// hull of (k, log2|c_k|).
inline std::vector<std::complex<double>> newton_polygon_start(const std::vector<Real>& c)
{
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<std::pair<int, double>> pts;
    for (int k = 0; k <= n; ++k) {
        if (c[k].is_zero())
            continue;
        long e = 0;
        double m = mpfr_get_d_2exp(&e, c[k].get(), MPFR_RNDN);
        pts.emplace_back(k, static_cast<double>(e) + std::log2(std::fabs(m)));
    }
    std::vector<std::pair<int, double>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            double cross = (b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first);
            if (cross >= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    std::vector<std::complex<double>> z;
    z.reserve(n);
    const double sigma = 0.7;
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
        int m = hull[h + 1].first - hull[h].first;
        double log2r = (hull[h].second - hull[h + 1].second) / m;
        double r = std::exp2(std::clamp(log2r, -900.0, 900.0));
        for (int j = 0; j < m; ++j) {
            double theta = 2 * std::numbers::pi * (static_cast<double>(j) / m + static_cast<double>(hull[h].first) / n) + sigma;
            z.emplace_back(r * std::cos(theta), r * std::sin(theta));
        }
    }
    return z;
}

inline void eval_with_derivative(const std::vector<Real>& c, const Complex& z, Complex& p, Complex& dp)
{
    const Bits bits = z.re.precision();
    p = Complex(Real(c.back()).rounded(bits), Real(bits));
    dp = Complex(bits);
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        dp = dp * z + p;
        p = p * z;
        p.re += c[i];
    }
}

/// sum |c_k| r^k
inline Real magnitude(const std::vector<Real>& c, const Real& r)
{
    Real acc = abs(c.back());
    for (std::size_t i = c.size() - 1; i-- > 0;)
        acc = acc * r + abs(c[i]);
    return acc;
}

/// Simultaneous Aberth-Ehrlich iteration at the precision carried by z.
/// Returns true when every correction is below 2^-(bits-8) relative.
inline bool aberth(const std::vector<Real>& c, std::vector<Complex>& z, int max_iter)
{
    const std::size_t n = z.size();
    const Bits bits = z.front().re.precision();
    Real tol = ldexp(Real(1, bits), -static_cast<long>(bits) + 8);
    Complex one(Real(1, bits), Real(bits));
    Complex p(bits), dp(bits);
    Real noise = ldexp(Real(8 * static_cast<long>(n + 1), 64), 1 - static_cast<long>(bits));
    std::vector<char> frozen(n, 0);
    for (int it = 0; it < max_iter; ++it) {
        bool done = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (frozen[i])
                continue;
            eval_with_derivative(c, z[i], p, dp);
            if (p.is_zero() || p.abs() <= noise * magnitude(c, z[i].abs())) {
                frozen[i] = 1; // residual is at rounding level
                continue;
            }
            if (dp.is_zero()) {
                done = false;
                z[i].re += ldexp(Real(1, bits), -20);
                continue;
            }
            Complex ratio = p / dp;
            Complex sum(bits);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                Complex d = z[i] - z[j];
                if (d.is_zero())
                    continue;
                sum = sum + one / d;
            }
            Complex denom = one - ratio * sum;
            Complex w = denom.is_zero() ? ratio : ratio / denom;
            z[i] = z[i] - w;
            Real scale = z[i].abs();
            if (scale.is_zero())
                scale = Real(1, bits);
            if (w.abs() > tol * scale)
                done = false;
            else
                frozen[i] = 1;
        }
        if (done)
            return true;
    }
    return false;
}

/// Coarse simultaneous iteration in hardware long double. Returns false when
/// the coefficients do not fit the long double range.
inline bool aberth_hardware(const std::vector<Real>& c, std::vector<std::complex<long double>>& z, int max_iter)
{
    using C = std::complex<long double>;
    std::vector<long double> a;
    for (const auto& v : c) {
        if (!v.is_zero() && std::abs(v.exponent()) > 16000)
            return false;
        a.push_back(mpfr_get_ld(v.get(), MPFR_RNDN));
    }
    const std::size_t n = z.size();
    std::vector<char> frozen(n, 0);
    for (int it = 0; it < max_iter; ++it) {
        bool done = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (frozen[i])
                continue;
            C p = a.back(), dp = 0;
            for (std::size_t k = a.size() - 1; k-- > 0;) {
                dp = dp * z[i] + p;
                p = p * z[i] + a[k];
            }
            if (p == C(0)) {
                frozen[i] = 1;
                continue;
            }
            if (dp == C(0)) {
                z[i] += C(1e-6L * (1 + std::abs(z[i])), 0);
                done = false;
                continue;
            }
            C ratio = p / dp, sum = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && z[i] != z[j])
                    sum += C(1) / (z[i] - z[j]);
            C denom = C(1) - ratio * sum;
            C w = denom == C(0) ? ratio : ratio / denom;
            z[i] -= w;
            if (std::abs(w) <= 1e-17L * std::abs(z[i]))
                frozen[i] = 1;
            else
                done = false;
        }
        if (done)
            return true;
    }
    return true;
}

inline Complex to_complex(const std::complex<long double>& v, Bits bits)
{
    Real re(bits), im(bits);
    mpfr_set_ld(re.get(), v.real(), MPFR_RNDN);
    mpfr_set_ld(im.get(), v.imag(), MPFR_RNDN);
    return {std::move(re), std::move(im)};
}

inline std::size_t leading_zero_count(const FPoly& p)
{
    std::size_t zeros = 0;
    while (zeros < p.size() && p[zeros].is_exact_zero())
        ++zeros;
    return zeros;
}

/// Starting approximations for the nonzero roots: Newton-polygon circles
/// refined in long double (or 64-bit MPFR when the range demands it).
inline std::vector<std::complex<long double>> coarse_roots(const FPoly& p)
{
    std::vector<Real> c;
    for (std::size_t k = leading_zero_count(p); k < p.size(); ++k)
        c.push_back(p[k].value.rounded(64));
    std::vector<std::complex<long double>> z;
    if (c.size() < 2)
        return z;
    for (const auto& s : newton_polygon_start(c))
        z.emplace_back(s.real(), s.imag());
    const int iters = 500 + 20 * static_cast<int>(c.size());
    if (aberth_hardware(c, z, iters))
        return z;
    std::vector<Complex> zm;
    for (const auto& s : newton_polygon_start(c))
        zm.push_back({Real::from_double(s.real(), 64), Real::from_double(s.imag(), 64)});
    aberth(c, zm, iters);
    z.clear();
    for (const auto& v : zm)
        z.emplace_back(mpfr_get_ld(v.re.get(), MPFR_RNDN), mpfr_get_ld(v.im.get(), MPFR_RNDN));
    return z;
}

/// Rigorous-in-intent disk classification at working precision `bits`.
/// Returns nullopt when the disks overlap or a disk straddles the axis
/// ambiguously.
inline std::optional<RootClassification> classify_at(const FPoly& p, Bits bits, const std::vector<std::complex<long double>>& start)
{
    std::size_t zeros = leading_zero_count(p);
    std::vector<Real> c, e;
    for (std::size_t k = zeros; k < p.size(); ++k) {
        c.push_back(p[k].value.rounded(bits));
        e.push_back(p[k].err);
    }
    const std::size_t n = c.size() - 1;
    RootClassification out;
    out.zero_roots = zeros;
    out.count.real_count = zeros;
    out.count.precision_bits = bits;
    if (n == 0)
        return out;

    Real lead_lo = abs(c.back()) - e.back();
    if (lead_lo.sign() <= 0)
        return std::nullopt;
    if (c.front().is_zero())
        return std::nullopt; // constant term is a ball around zero

    std::vector<Complex> z;
    for (const auto& v : start)
        z.push_back(to_complex(v, bits));
    aberth(c, z, 100 + static_cast<int>(bits / 4));

    // Radii: n * |p(z_i)| bound / (|a_n| lower bound * prod |z_i - z_j|).
    const Real u = ldexp(Real(1, 64), 1 - static_cast<long>(bits));
    std::vector<Real> r(n + 1, Real(bits));
    std::vector<Real> absz;
    for (const auto& zi : z)
        absz.push_back(zi.abs());
    for (std::size_t i = 0; i < n; ++i) {
        Complex val(bits), dummy(bits);
        eval_with_derivative(c, z[i], val, dummy);
        Real mag = abs(c[0]), err = e[0], pw(1, bits);
        for (std::size_t k = 1; k <= n; ++k) {
            pw = pw * absz[i];
            mag += abs(c[k]) * pw;
            err += e[k] * pw;
        }
        Real num = val.abs() + err + mag * u * static_cast<long>(4 * n + 8);
        Real den = lead_lo;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                den = den * (z[i] - z[j]).abs();
        if (den.sign() <= 0)
            return std::nullopt;
        r[i] = num * static_cast<long>(n) / den * (Real(1, bits) + ldexp(Real(1, bits), -20));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if ((z[i] - z[j]).abs() <= r[i] + r[j])
                return std::nullopt;

    std::size_t upper = 0, lower = 0, reals = 0;
    for (std::size_t i = 0; i < n; ++i) {
        RootDisk d{{z[i].re.to_double(), z[i].im.to_double()}, r[i].to_double(), false};
        if (abs(z[i].im) > r[i]) {
            (z[i].im.sign() > 0 ? upper : lower)++;
        } else {
            Complex zc = z[i].conj();
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && (zc - z[j]).abs() <= r[i] + r[j])
                    return std::nullopt;
            d.real = true;
            ++reals;
        }
        out.disks.push_back(d);
    }
    if (upper != lower)
        return std::nullopt;
    out.count.real_count += reals;
    out.count.nonreal_pairs = upper;
    return out;
}

} // namespace detail

/// Real/non-real census of a polynomial with ball coefficients. Classifies at
/// `precision_bits` and at twice that; certified only when both agree.
inline RootClassification certified_root_details(const FPoly& p, Bits precision_bits = default_precision_bits)
{
    if (p.degree() < 1)
        throw DomainError("certified classification needs degree >= 1");
    auto start = detail::coarse_roots(p);
    auto a = detail::classify_at(p, precision_bits, start);
    auto b = detail::classify_at(p, 2 * precision_bits, start);
    if (!a && !b)
        throw Uncertifiable("uncertifiable at requested precision (" + std::to_string(precision_bits) + " bits)");
    if (a && b && a->count.real_count == b->count.real_count && a->count.nonreal_pairs == b->count.nonreal_pairs) {
        a->count.certified = true;
        return *a;
    }
    RootClassification r = b ? *b : *a;
    r.count.certified = false;
    return r;
}

inline RootCount certified_root_classify(const FPoly& p, Bits precision_bits = default_precision_bits)
{
    return certified_root_details(p, precision_bits).count;
}

/// Escalation ladder: rebuilds the polynomial at each precision (plus guard
/// bits) and doubles until certified or max_bits is exceeded.
inline RootClassification certified_root_details(const std::function<FPoly(Bits)>& make, Bits start_bits = default_precision_bits,
    Bits max_bits = max_precision_bits)
{
    for (Bits bits = start_bits; bits <= max_bits; bits *= 2) {
        try {
            auto r = certified_root_details(make(bits + guard_bits), bits);
            if (r.count.certified)
                return r;
        } catch (const Uncertifiable&) {
        }
    }
    throw Uncertifiable("uncertifiable at requested precision (up to " + std::to_string(max_bits) + " bits)");
}

inline RootCount certified_root_classify(const std::function<FPoly(Bits)>& make, Bits start_bits = default_precision_bits,
    Bits max_bits = max_precision_bits)
{
    return certified_root_details(make, start_bits, max_bits).count;
}

} // namespace lpkit::roots
