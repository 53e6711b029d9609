#pragma once

#include <cmath>

#include "lpkit/error.hpp"
#include "lpkit/rational.hpp"
#include "lpkit/real.hpp"

namespace lpkit::specfun {

/// H_n = 1 + 1/2 + ... + 1/n.
inline BigRational harmonic(long n)
{
    if (n < 1)
        throw DomainError("harmonic number needs n >= 1");
    BigRational h = 0;
    for (long j = 1; j <= n; ++j)
        h += make_rational(1, j);
    return h;
}

/// Alternating binomial sum sum_{k=1}^n C(n,k) (-1)^(k-1) / k.
inline BigRational harmonic_binomial_sum(long n)
{
    if (n < 1)
        throw DomainError("harmonic number needs n >= 1");
    auto row = binomial_row(static_cast<unsigned long>(n));
    BigRational s = 0;
    for (long k = 1; k <= n; ++k)
        s += (k % 2 ? 1 : -1) * make_rational(row[k], BigInt(k));
    return s;
}

inline HPFloat euler_gamma(Bits bits) { return hp_euler(bits); }

namespace detail {

/// Ball from a guaranteed enclosure [lo, hi].
inline HPFloat enclose(const Real& lo, const Real& hi, Bits bits)
{
    Real mid(bits);
    mpfr_add(mid.get(), lo.get(), hi.get(), MPFR_RNDN);
    mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
    Real e1(HPFloat::err_bits), e2(HPFloat::err_bits);
    mpfr_sub(e1.get(), mid.get(), lo.get(), MPFR_RNDU);
    mpfr_sub(e2.get(), hi.get(), mid.get(), MPFR_RNDU);
    Real e = e1 < e2 ? e2 : e1;
    if (e.sign() < 0)
        e = Real(0, HPFloat::err_bits);
    return HPFloat(std::move(mid), std::move(e));
}

using MpfrUnary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

inline Real directed(MpfrUnary f, const Real& x, Bits bits, mpfr_rnd_t rnd)
{
    Real r(bits);
    f(r.get(), x.get(), rnd);
    return r;
}

/// Throws when the ball meets a nonpositive integer.
inline void require_off_poles(const HPFloat& x, const char* what)
{
    Real lo = x.lower(), hi = x.upper();
    if (lo.sign() > 0)
        return;
    Real n(lo.precision());
    mpfr_ceil(n.get(), lo.get());
    if (hi.sign() >= 0 || n <= hi)
        throw DomainError(std::string(what) + ": pole at a nonpositive integer");
}

inline HPFloat sin(const HPFloat& x)
{
    Real v(x.precision_bits());
    int t = mpfr_sin(v.get(), x.value.get(), MPFR_RNDN);
    return HPFloat(std::move(v), lpkit::detail::up_add(x.err, HPFloat::rounding_error(v, t)));
}

inline HPFloat cos(const HPFloat& x)
{
    Real v(x.precision_bits());
    int t = mpfr_cos(v.get(), x.value.get(), MPFR_RNDN);
    return HPFloat(std::move(v), lpkit::detail::up_add(x.err, HPFloat::rounding_error(v, t)));
}

} // namespace detail

/// Gamma function on real balls. Positive arguments are enclosed through
/// the monotone branches of Gamma on either side of its minimum; negative
/// arguments use the reflection formula.
inline HPFloat gamma(const HPFloat& x)
{
    const Bits bits = x.precision_bits();
    detail::require_off_poles(x, "Gamma");
    Real lo = x.lower(), hi = x.upper();
    if (lo.sign() > 0) {
        const Real left = Real::from_double(1.4616, 64), right = Real::from_double(1.4617, 64);
        auto g = [&](const Real& t, mpfr_rnd_t r) { return detail::directed(mpfr_gamma, t, bits, r); };
        if (hi <= left)
            return detail::enclose(g(hi, MPFR_RNDD), g(lo, MPFR_RNDU), bits);
        if (lo >= right)
            return detail::enclose(g(lo, MPFR_RNDD), g(hi, MPFR_RNDU), bits);
        Real gmin = Real::from_double(0.8856, 64);
        return detail::enclose(gmin, max(g(lo, MPFR_RNDU), g(hi, MPFR_RNDU)), bits);
    }
    HPFloat one = HPFloat::exact(1, bits);
    HPFloat pi = hp_pi(bits);
    return pi / (detail::sin(pi * x) * gamma(one - x));
}

/// Digamma psi = Gamma'/Gamma. Increasing on (0, inf); negative arguments use
/// psi(x) = psi(1 - x) - pi cot(pi x).
inline HPFloat digamma(const HPFloat& x)
{
    const Bits bits = x.precision_bits();
    detail::require_off_poles(x, "digamma");
    Real lo = x.lower(), hi = x.upper();
    if (lo.sign() > 0)
        return detail::enclose(
            detail::directed(mpfr_digamma, lo, bits, MPFR_RNDD), detail::directed(mpfr_digamma, hi, bits, MPFR_RNDU), bits);
    HPFloat one = HPFloat::exact(1, bits);
    HPFloat px = hp_pi(bits) * x;
    return digamma(one - x) - hp_pi(bits) * detail::cos(px) / detail::sin(px);
}

inline HPFloat gamma(const BigRational& x, Bits bits) { return gamma(HPFloat::exact(x, bits)); }
inline HPFloat digamma(const BigRational& x, Bits bits) { return digamma(HPFloat::exact(x, bits)); }

} // namespace lpkit::specfun
