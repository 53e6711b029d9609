#pragma once

#include <cmath>

#include "lpkit/error.hpp"
#include "lpkit/quadlab/de_quadrature.hpp"
#include "lpkit/rational.hpp"
#include "lpkit/real.hpp"
#include "lpkit/specfun/gamma.hpp"

namespace lpkit::quad {

namespace detail {

/// sum_{n>=1} x^n c_n / (n!)^2 with |c_n| <= 1, stopped at negligible terms.
template <class Coef>
Real bessel_like_sum(const Real& x, Bits bits, Coef coef, long shift = 0)
{
    Real sum(bits), t = Real(1, bits); // t = x^n / (n! (n+shift)!)
    const double xm = std::abs(x.to_double());
    for (long n = 1;; ++n) {
        t = t * x / Real(n * (n + shift), bits);
        if (t.is_zero())
            break;
        Real c = coef(n);
        sum += t * c;
        if (n > 2 * xm + 2 && negligible(t, sum.is_zero() ? Real(1, bits) : sum, bits))
            break;
    }
    return sum;
}

} // namespace detail

/// f(x, u) - f(x, 0) = sum_{n>=1} x^n (e^{-nu} - 1) / (n!)^2, with
/// d_n = e^{-nu} - 1 from d_{n+1} = d_n + (1 + d_n) expm1(-u).
inline Real f_minus_f0(const Real& x, const Real& u, Bits bits)
{
    const Real y = expm1(-u.rounded(bits));
    Real d(bits);
    long have = 0;
    return detail::bessel_like_sum(x, bits, [&](long n) {
        while (have < n) {
            d = d + (Real(1, bits) + d) * y;
            ++have;
        }
        return d;
    });
}

/// B(1/2, x) = -(1/(2 sqrt pi)) int_0^inf [f(x,u) - f(x,0)] u^{-3/2} du.
inline QuadResult bessel_sqrt_integral_u(const Real& x, double tol, const QuadOptions& opt = {})
{
    const Bits bits = opt.bits;
    const Real xx = x.rounded(bits);
    if (xx.is_zero()) {
        QuadResult r;
        r.value = HPFloat::exact(0, bits);
        r.abs_err_est = HPFloat::exact(0, HPFloat::err_bits);
        r.converged = true;
        return r;
    }
    Integrand g = [&](const Node& n) {
        Real u = n.from_left;
        return f_minus_f0(xx, u, bits) / (u * sqrt(u));
    };
    QuadResult r = exp_sinh(g, Real(0, bits), tol * std::sqrt(M_PI), opt);
    Real c = Real(-1, bits) / (2 * sqrt(const_pi(bits)));
    return scaled(std::move(r), c);
}

/// B(1/2, x) = (1/(2 sqrt pi)) int_0^1 [B(0,x) - B(0,xv)] dv / (v (-ln v)^{3/2}).
/// On [0, 1/2] the 1/v part of the n = 0 term is integrated in closed form,
/// (B(0,x) - 1) * 2 / sqrt(ln 2), leaving a bounded integrand.
inline QuadResult bessel_sqrt_integral_v(const Real& x, double tol, const QuadOptions& opt = {})
{
    const Bits bits = opt.bits;
    const Real xx = x.rounded(bits);
    if (xx.is_zero()) {
        QuadResult r;
        r.value = HPFloat::exact(0, bits);
        r.abs_err_est = HPFloat::exact(0, HPFloat::err_bits);
        r.converged = true;
        return r;
    }
    const Real one(1, bits), half = ldexp(Real(1, bits), -1);
    // [1/2, 1]: 1 - v^n = -expm1(n log1p(-(1 - v)))
    Integrand upper = [&](const Node& n) {
        Real lv = log1p(-n.to_right); // ln v
        Real s = detail::bessel_like_sum(xx, bits, [&](long k) { return -expm1(Real(k, bits) * lv); });
        Real m = -lv;
        return s / (n.x * m * sqrt(m));
    };
    // [0, 1/2]: -(B(0, xv) - 1) / (v (-ln v)^{3/2}) = -sum_{n>=1} x^n v^{n-1} / ((n!)^2 (-ln v)^{3/2})
    Integrand lower = [&](const Node& n) {
        const Real& v = n.from_left;
        Real vp = one;
        long have = 1;
        Real s = detail::bessel_like_sum(xx, bits, [&](long k) {
            for (; have < k; ++have)
                vp *= v;
            return vp;
        });
        Real m = -log(v);
        return -s / (m * sqrt(m));
    };
    QuadResult a = tanh_sinh(upper, half, one, tol * std::sqrt(M_PI), opt);
    QuadResult b = tanh_sinh(lower, Real(0, bits), half, tol * std::sqrt(M_PI), opt);
    Real b0m1 = detail::bessel_like_sum(xx, bits, [&](long) { return one; });
    Real closed = b0m1 * 2 / sqrt(log(Real(2, bits)));
    QuadResult sum = combine(a, b);
    sum.value.value += closed;
    return scaled(std::move(sum), one / (2 * sqrt(const_pi(bits))));
}

/// int_0^1 (1 - v^n) / (v (-ln v)^{1+s}) dv, which equals -n^s Gamma(-s) for 0 < s < 1.
inline QuadResult identity_check_nsg(long n, const BigRational& s, double tol, const QuadOptions& opt = {})
{
    if (n < 1)
        throw DomainError("identity_check_nsg needs n >= 1");
    if (!(s > 0 && s < 1))
        throw DomainError("identity_check_nsg needs 0 < s < 1");
    const Bits bits = opt.bits;
    const Real one(1, bits), half = ldexp(Real(1, bits), -1), sp1 = Real(s + 1, bits), rs = Real(s, bits);
    const Real rn(n, bits);
    Integrand upper = [&](const Node& nd) {
        Real lv = log1p(-nd.to_right);
        Real m = -lv;
        return -expm1(rn * lv) / (nd.x * pow(m, sp1));
    };
    // [0, 1/2]: 1/(v (-ln v)^{1+s}) integrates to (ln 2)^{-s} / s; the v^n part stays
    Integrand lower = [&](const Node& nd) {
        const Real& v = nd.from_left;
        Real m = -log(v);
        return -pow(v, Real(n - 1, bits)) / pow(m, sp1);
    };
    QuadResult a = tanh_sinh(upper, half, one, tol / 2, opt);
    QuadResult b = tanh_sinh(lower, Real(0, bits), half, tol / 2, opt);
    QuadResult sum = combine(a, b);
    sum.value.value += pow(log(Real(2, bits)), -rs) / rs;
    return sum;
}

/// phi(x) = (1/sqrt pi) int_0^1 sqrt(x) I_1(2 sqrt(xt)) / (sqrt t sqrt(-ln t)) dt,
/// with sqrt(x) I_1(2 sqrt(xt)) / sqrt t = x sum_k (xt)^k / (k! (k+1)!).
inline QuadResult phi_I1_integral(const Real& x, double tol, const QuadOptions& opt = {})
{
    const Bits bits = opt.bits;
    const Real xx = x.rounded(bits);
    if (xx.sign() < 0)
        throw DomainError("phi_I1_integral needs x >= 0");
    if (xx.is_zero()) {
        QuadResult r;
        r.value = HPFloat::exact(0, bits);
        r.abs_err_est = HPFloat::exact(0, HPFloat::err_bits);
        r.converged = true;
        return r;
    }
    const Real one(1, bits);
    Integrand g = [&](const Node& n) {
        Real y = xx * n.x;
        Real s = one + detail::bessel_like_sum(y, bits, [&](long) { return one; }, 1);
        Real m = -log1p(-n.to_right);
        return xx * s / sqrt(m);
    };
    QuadResult r = tanh_sinh(g, Real(0, bits), one, tol * std::sqrt(M_PI), opt);
    return scaled(std::move(r), one / sqrt(const_pi(bits)));
}

/// phi'(x) = (1/sqrt pi) int_0^1 I_0(2 sqrt(xt)) / sqrt(-ln t) dt.
inline QuadResult phi_prime_I0_integral(const Real& x, double tol, const QuadOptions& opt = {})
{
    const Bits bits = opt.bits;
    const Real xx = x.rounded(bits);
    if (xx.sign() < 0)
        throw DomainError("phi_prime_I0_integral needs x >= 0");
    const Real one(1, bits);
    Integrand g = [&](const Node& n) {
        Real y = xx * n.x;
        Real s = one + (xx.is_zero() ? Real(0, bits) : detail::bessel_like_sum(y, bits, [&](long) { return one; }));
        Real m = -log1p(-n.to_right);
        return s / sqrt(m);
    };
    QuadResult r = tanh_sinh(g, Real(0, bits), one, tol * std::sqrt(M_PI), opt);
    return scaled(std::move(r), one / sqrt(const_pi(bits)));
}

/// int_k^inf {t}/t^2 dt, summed over unit intervals with the exact
/// antiderivative, ln(1 + 1/m) - 1/(m + 1) on [m, m + 1), up to M = k + 2000;
/// the rest is 1/(2M) - 1/(12M^2) with remainder below 0.02/M^3.
inline QuadResult lagarias_check(long k, double tol = 1e-12, Bits bits = 128)
{
    if (k < 1)
        throw DomainError("lagarias_check needs k >= 1");
    const long M = k + 2000;
    Real sum(bits);
    for (long m = k; m < M; ++m) {
        Real rm(m, bits);
        sum += log1p(Real(1, bits) / rm) - Real(1, bits) / Real(m + 1, bits);
    }
    Real rM(M, bits);
    sum += Real(1, bits) / (2 * rM) - Real(1, bits) / (12 * rM * rM);
    const double bound = 0.02 / std::pow(static_cast<double>(M), 3) + std::ldexp(static_cast<double>(M), 8 - static_cast<int>(bits));
    QuadResult r;
    r.value = HPFloat(sum, Real::from_double(bound, HPFloat::err_bits));
    r.abs_err_est = HPFloat(Real::from_double(bound, HPFloat::err_bits), Real(0, HPFloat::err_bits));
    r.nodes = M - k;
    r.converged = bound <= tol;
    return r;
}

/// H_k - ln k - gamma, the closed form the fractional-part integral must match.
inline HPFloat lagarias_target(long k, Bits bits = 128)
{
    HPFloat h = HPFloat::exact(specfun::harmonic(k), bits);
    return h - log(HPFloat::exact(k, bits)) - specfun::euler_gamma(bits);
}

/// Gamma(-s) = int_0^inf [e^{-t} - sum_{j<=k} (-t)^j / j!] t^{-s-1} dt with
/// k = floor(s). On [0, 1] the bracket is summed from j = k + 1; on [1, inf)
/// the polynomial part integrates in closed form.
inline QuadResult cauchy_saalschutz_gamma(const BigRational& s, double tol, const QuadOptions& opt = {})
{
    if (is_integer(s))
        throw DomainError("cauchy_saalschutz_gamma needs non-integer s");
    if (s <= 0)
        throw DomainError("cauchy_saalschutz_gamma needs s > 0");
    const Bits bits = opt.bits;
    const long k = static_cast<long>(mpz_get_si(BigInt(s.get_num() / s.get_den()).get_mpz_t()));
    const Real one(1, bits), rs = Real(s, bits), ms1 = -(rs + one);
    Integrand near = [&](const Node& n) {
        const Real& t = n.x;
        // sum_{j>k} (-t)^j / j!
        Real term(1, bits), acc(bits);
        for (long j = 1; j <= k; ++j)
            term = term * (-t) / Real(j, bits);
        for (long j = k + 1;; ++j) {
            term = term * (-t) / Real(j, bits);
            acc += term;
            if (j > k + 3 && quad::detail::negligible(term, acc, bits))
                break;
        }
        return acc * pow(t, ms1);
    };
    Integrand far = [&](const Node& n) { return exp(-n.x) * pow(n.x, ms1); };
    QuadResult a = tanh_sinh(near, Real(0, bits), one, tol / 2, opt);
    QuadResult b = exp_sinh(far, one, tol / 2, opt);
    QuadResult sum = combine(a, b);
    // - sum_{j<=k} (-1)^j / j! * int_1^inf t^{j-s-1} dt = - sum (-1)^j / (j! (s - j))
    Real poly(bits);
    BigInt jf = 1;
    for (long j = 0; j <= k; ++j) {
        if (j)
            jf *= j;
        Real c = Real(make_rational(BigInt(1), jf), bits) / Real(s - j, bits);
        poly += (j % 2 ? -c : c);
    }
    sum.value.value -= poly;
    return sum;
}

} // namespace lpkit::quad
