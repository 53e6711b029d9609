#pragma once

#include <string>
#include <vector>

#include "lpkit/error.hpp"
#include "lpkit/poly.hpp"
#include "lpkit/rational.hpp"
#include "lpkit/real.hpp"
#include "lpkit/specfun/combinatorics.hpp"
#include "lpkit/specfun/gamma.hpp"
#include "lpkit/specfun/series.hpp"
#include "lpkit/specfun/zeros.hpp"

namespace lpkit::specfun {

/// L_n(x) by (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}.
inline HPFloat laguerre(long n, const HPFloat& x)
{
    if (n < 0)
        throw DomainError("Laguerre index must be >= 0");
    const Bits bits = x.precision_bits();
    HPFloat prev = HPFloat::exact(1, bits);
    if (n == 0)
        return prev;
    HPFloat cur = HPFloat::exact(1, bits) - x;
    for (long k = 1; k < n; ++k) {
        HPFloat next = ((HPFloat::exact(2 * k + 1, bits) - x) * cur - HPFloat::exact(k, bits) * prev) / HPFloat::exact(k + 1, bits);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// L_n as an exact polynomial, by the same recurrence.
inline QPoly laguerre_poly(long n)
{
    if (n < 0)
        throw DomainError("Laguerre index must be >= 0");
    QPoly prev(std::vector<BigRational>{1});
    if (n == 0)
        return prev;
    QPoly cur(std::vector<BigRational>{1, -1});
    for (long k = 1; k < n; ++k) {
        QPoly lin(std::vector<BigRational>{BigRational(2 * k + 1), -1});
        QPoly next = (lin * cur - QPoly(std::vector<BigRational>{BigRational(k)}) * prev)
            * QPoly(std::vector<BigRational>{make_rational(1, k + 1)});
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// cosh(sqrt x) = sum x^k / (2k)!, with cos(sqrt(-x)) for x < 0.
inline SeriesEval cosh_sqrt_series(const HPFloat& x, long fixed_terms = 0)
{
    const Bits bits = x.precision_bits();
    const double xm = detail::mag_up(x);
    return detail::sum_series(
        HPFloat::exact(1, bits), 0,
        [&](long k, const HPFloat& t) { return t * x / HPFloat::exact((2 * k + 1) * (2 * k + 2), bits); },
        [&](long N) { return detail::pad(xm / ((2.0 * N + 1) * (2.0 * N + 2))); }, bits, fixed_terms);
}

struct ProductEval {
    HPFloat value;
    long factors = 0;
    /// Estimate of the relative error of the truncated product,
    /// exp(|x| / (pi^2 (n + 1))) - 1.
    double remainder_estimate = 0;
};

/// prod_{k=0}^{n} (1 + x / (pi k + pi/2)^2), the Weierstrass product of
/// cosh(sqrt x). Convergence is O(x / (pi^2 n)).
inline ProductEval cosh_sqrt_product(const HPFloat& x, long n_factors)
{
    if (n_factors < 1)
        throw DomainError("cosh_sqrt_product needs n_factors >= 1");
    const Bits bits = x.precision_bits();
    const HPFloat pi = hp_pi(bits);
    const HPFloat half_pi = pi / HPFloat::exact(2, bits);
    const HPFloat one = HPFloat::exact(1, bits);
    HPFloat p = one;
    for (long k = 0; k < n_factors; ++k) {
        HPFloat d = pi * HPFloat::exact(k, bits) + half_pi;
        p *= one + x / (d * d);
    }
    ProductEval r;
    r.value = std::move(p);
    r.factors = n_factors;
    r.remainder_estimate = std::expm1(detail::mag_up(x) / (9.8696044010893586 * static_cast<double>(n_factors)));
    return r;
}

/// sqrt(pi) / (4^k Gamma(k + 1/2)).
inline HPFloat legendre_duplication_lhs(long k, Bits bits = 256)
{
    if (k < 0)
        throw DomainError("legendre_duplication_check needs k >= 0");
    HPFloat four_k = HPFloat::exact(pow(BigRational(4), k), bits);
    return sqrt(hp_pi(bits)) / (four_k * gamma(BigRational(k) + make_rational(1, 2), bits));
}

/// k! / (2k)!.
inline BigRational legendre_duplication_rhs(long k)
{
    if (k < 0)
        throw DomainError("legendre_duplication_check needs k >= 0");
    return make_rational(factorial(static_cast<unsigned long>(k)), factorial(static_cast<unsigned long>(2 * k)));
}

inline bool legendre_duplication_check(long k, Bits bits = 256)
{
    return legendre_duplication_lhs(k, bits).contains(legendre_duplication_rhs(k));
}

/// (k+1)^-(k+1) / [sqrt(2 pi) e^-(k+1) sqrt(k+1) / (k+1)!], which tends to 1.
inline HPFloat stirling_ratio(long k, Bits bits = 256)
{
    if (k < 0)
        throw DomainError("stirling_ratio needs k >= 0");
    const long m = k + 1;
    HPFloat mm = HPFloat::exact(m, bits);
    HPFloat lhs = HPFloat::exact(make_rational(BigInt(1), BigInt(pow(BigRational(m), m).get_num())), bits);
    HPFloat rhs = sqrt(HPFloat::exact(2, bits) * hp_pi(bits)) * exp(-mm) * sqrt(mm)
        / HPFloat::exact(BigRational(factorial(static_cast<unsigned long>(m))), bits);
    return lhs / rhs;
}

/// F(x) = sum (k^2 + 2) x^k / (k!)^2 against the candidate closed forms
/// (2 + x) I_0(sqrt x), (2 + x) I_0(2 sqrt x) and 0F1(-; 1; x).
struct FClosedFormReport {
    HPFloat series;
    HPFloat two_plus_x_I0_sqrt;
    HPFloat two_plus_x_I0_two_sqrt;
    HPFloat hyp0F1_1;
    HPFloat two_plus_x_hyp0F1_1;
    bool matches_I0_sqrt = false;
    bool matches_I0_two_sqrt = false;
    bool matches_hyp0F1 = false;
    bool matches_two_plus_x_hyp0F1 = false;
};

namespace detail {

inline bool balls_agree(const HPFloat& a, const HPFloat& b, double tol)
{
    HPFloat d = a - b;
    return d.magnitude().to_double() <= tol;
}

} // namespace detail

inline FClosedFormReport f_closed_forms(const HPFloat& x, double tol = 1e-30)
{
    if (x.certain_sign() < 0)
        throw DomainError("F closed-form check needs x >= 0");
    const Bits bits = x.precision_bits();
    FClosedFormReport r;
    const double xm = detail::mag_up(x);
    HPFloat u = HPFloat::exact(1, bits);
    r.series = detail::sum_series(
        HPFloat::exact(2, bits), 0,
        [&](long k, const HPFloat&) {
            u = u * x / HPFloat::exact((k + 1) * (k + 1), bits);
            return HPFloat::exact((k + 1) * (k + 1) + 2, bits) * u;
        },
        [&](long N) {
            if (N < 1)
                return -1.0;
            double g = ((N + 1.0) * (N + 1.0) + 2) / (N * N + 2.0);
            return detail::pad(g * xm / ((N + 1.0) * (N + 1.0)));
        },
        bits)
                   .value;
    const HPFloat two_x = HPFloat::exact(2, bits) + x;
    const HPFloat zero = HPFloat::exact(0, bits);
    HPFloat rt = sqrt(x);
    r.two_plus_x_I0_sqrt = two_x * bessel_I(zero, rt);
    r.two_plus_x_I0_two_sqrt = two_x * bessel_I(zero, HPFloat::exact(2, bits) * rt);
    r.hyp0F1_1 = hyp0F1(HPFloat::exact(1, bits), x);
    r.two_plus_x_hyp0F1_1 = two_x * r.hyp0F1_1;
    r.matches_I0_sqrt = detail::balls_agree(r.series, r.two_plus_x_I0_sqrt, tol);
    r.matches_I0_two_sqrt = detail::balls_agree(r.series, r.two_plus_x_I0_two_sqrt, tol);
    r.matches_hyp0F1 = detail::balls_agree(r.series, r.hyp0F1_1, tol);
    r.matches_two_plus_x_hyp0F1 = detail::balls_agree(r.series, r.two_plus_x_hyp0F1_1, tol);
    return r;
}

} // namespace lpkit::specfun
