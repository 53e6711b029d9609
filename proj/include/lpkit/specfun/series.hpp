#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "lpkit/error.hpp"
#include "lpkit/rational.hpp"
#include "lpkit/real.hpp"
#include "lpkit/specfun/gamma.hpp"

namespace lpkit::specfun {

/// A truncated power series. `value` already includes `tail_bound` in its
/// error; `tail_bound` alone bounds the omitted terms.
struct SeriesEval {
    HPFloat value;
    long terms_used = 0;
    HPFloat tail_bound;

    bool tail_finite() const { return tail_bound.value.is_finite(); }
};

namespace detail {

/// Upper bound on |x| as a double.
inline double mag_up(const HPFloat& x)
{
    Real m = x.magnitude();
    return mpfr_get_d(m.get(), MPFR_RNDU);
}

inline double lower_d(const HPFloat& x)
{
    Real lo = x.lower();
    return mpfr_get_d(lo.get(), MPFR_RNDD);
}

inline double pad(double r) { return r * (1 + 0x1p-40) + std::numeric_limits<double>::denorm_min(); }

/// Sums t_start + t_{start+1} + ... where `next(n, t_n)` returns t_{n+1} and
/// `ratio(N)` bounds |t_{m+1}/t_m| for every m >= N (negative: no bound yet).
/// Stops once that bound is < 1/2 and the geometric tail |t_N|/(1-rho) is
/// below 2^-bits relative to the running sum. With `fixed_terms` > 0 exactly
/// that many terms are summed and the tail is whatever the bound gives.
inline SeriesEval sum_series(HPFloat first, long start, const std::function<HPFloat(long, const HPFloat&)>& next,
    const std::function<double(long)>& ratio, Bits bits, long fixed_terms = 0, long max_terms = 200000)
{
    HPFloat sum = HPFloat::exact(0, bits);
    HPFloat t = std::move(first);
    long n = start;
    long used = 0;
    Real tail(HPFloat::err_bits);
    for (;;) {
        sum += t;
        ++used;
        t = next(n, t);
        ++n;
        const double rho = ratio(n);
        const bool has_bound = rho >= 0 && rho < 1;
        if (has_bound) {
            if (rho == 0 || t.is_exact_zero()) {
                tail = Real(0, HPFloat::err_bits);
            } else {
                mpfr_div_d(tail.get(), t.magnitude().get(), 1 - pad(rho), MPFR_RNDU);
            }
        } else {
            mpfr_set_inf(tail.get(), 1);
        }
        if (fixed_terms > 0) {
            if (used >= fixed_terms)
                break;
            continue;
        }
        if (has_bound && (rho == 0 || t.is_exact_zero() || rho < 0.5)) {
            Real target(HPFloat::err_bits);
            mpfr_abs(target.get(), sum.value.get(), MPFR_RNDD);
            Real floor(HPFloat::err_bits);
            mpfr_set_ui_2exp(floor.get(), 1, -static_cast<long>(bits), MPFR_RNDN);
            if (target < floor)
                target = floor;
            mpfr_mul_2si(target.get(), target.get(), -static_cast<long>(bits), MPFR_RNDD);
            if (tail <= target)
                break;
        }
        if (used >= max_terms)
            throw Inconclusive("series did not reach its tail target within " + std::to_string(max_terms) + " terms");
    }
    SeriesEval r;
    r.terms_used = used;
    r.tail_bound = HPFloat(Real(0, HPFloat::err_bits), Real(0, HPFloat::err_bits));
    r.tail_bound.value = tail;
    sum.err = lpkit::detail::up_add(sum.err, tail);
    r.value = std::move(sum);
    return r;
}

inline bool is_nonpositive_integer(const HPFloat& b)
{
    return b.is_exact() && mpfr_integer_p(b.value.get()) && b.value.sign() <= 0;
}

} // namespace detail

/// 0F1(-; b; x) = sum x^n / ((b)_n n!).
inline SeriesEval hyp0F1_series(const HPFloat& b, const HPFloat& x, long fixed_terms = 0)
{
    if (detail::is_nonpositive_integer(b))
        throw DomainError("0F1 needs b not a nonpositive integer");
    const Bits bits = std::max(b.precision_bits(), x.precision_bits());
    const double xm = detail::mag_up(x), blo = detail::lower_d(b);
    return detail::sum_series(
        HPFloat::exact(1, bits), 0,
        [&](long n, const HPFloat& t) { return t * x / ((b + HPFloat::exact(n, bits)) * HPFloat::exact(n + 1, bits)); },
        [&](long N) {
            double c = blo + static_cast<double>(N);
            return c <= 0 ? -1.0 : detail::pad(xm / (c * (N + 1)));
        },
        bits, fixed_terms);
}

inline HPFloat hyp0F1(const HPFloat& b, const HPFloat& x) { return hyp0F1_series(b, x).value; }

/// 1F1(a; b; x) = sum (a)_n x^n / ((b)_n n!).
inline SeriesEval hyp1F1_series(const HPFloat& a, const HPFloat& b, const HPFloat& x, long fixed_terms = 0)
{
    if (detail::is_nonpositive_integer(b))
        throw DomainError("1F1 needs b not a nonpositive integer");
    const Bits bits = std::max({a.precision_bits(), b.precision_bits(), x.precision_bits()});
    const double xm = detail::mag_up(x), am = detail::mag_up(a), bm = detail::mag_up(b);
    const bool terminating = detail::is_nonpositive_integer(a);
    const double stop = terminating ? -a.value.to_double() : 0;
    return detail::sum_series(
        HPFloat::exact(1, bits), 0,
        [&](long n, const HPFloat& t) {
            HPFloat nn = HPFloat::exact(n, bits);
            HPFloat num = a + nn;
            if (num.is_exact_zero() || t.is_exact_zero())
                return HPFloat::exact(0, bits);
            return t * num * x / ((b + nn) * HPFloat::exact(n + 1, bits));
        },
        [&](long N) {
            if (terminating && N > stop)
                return 0.0;
            if (N <= bm)
                return -1.0;
            return detail::pad((N + am) / (N - bm) * xm / (N + 1));
        },
        bits, fixed_terms);
}

inline HPFloat hyp1F1(const HPFloat& a, const HPFloat& b, const HPFloat& x) { return hyp1F1_series(a, b, x).value; }

/// I_p(x) = sum_k (x/2)^(2k+p) / (k! Gamma(k+p+1)), each Gamma evaluated
/// directly rather than by Pochhammer recurrence.
inline SeriesEval bessel_I_series(const HPFloat& p, const HPFloat& x, long fixed_terms = 0)
{
    const Bits bits = std::max(p.precision_bits(), x.precision_bits());
    if (p.is_exact() && mpfr_integer_p(p.value.get()) && p.value.sign() < 0)
        throw DomainError("I_p needs -p not a positive integer");
    const bool integral_p = p.is_exact() && mpfr_integer_p(p.value.get());
    HPFloat half = x / HPFloat::exact(2, bits);
    HPFloat pre;
    if (x.is_exact_zero()) {
        if (p.is_exact_zero())
            pre = HPFloat::exact(1, bits);
        else if (p.certain_sign() > 0)
            pre = HPFloat::exact(0, bits);
        else
            throw DomainError("I_p(0) is infinite for p < 0");
    } else if (integral_p) {
        pre = pow(half, BigRational(BigInt(mpfr_get_si(p.value.get(), MPFR_RNDN))));
    } else {
        if (x.certain_sign() <= 0)
            throw DomainError("I_p(x) with non-integer p needs x > 0");
        pre = exp(p * log(half));
    }
    HPFloat y = half * half;
    const double ym = detail::mag_up(y), plo = detail::lower_d(p);
    HPFloat ypow = HPFloat::exact(1, bits);
    BigInt kfact = 1;
    auto term = [&](long k) {
        HPFloat g = gamma(p + HPFloat::exact(k + 1, bits));
        return ypow / (HPFloat::exact(BigRational(kfact), bits) * g);
    };
    SeriesEval s = detail::sum_series(
        term(0), 0,
        [&](long k, const HPFloat&) {
            ypow *= y;
            kfact *= k + 1;
            return term(k + 1);
        },
        [&](long N) {
            double c = plo + N + 1;
            return c <= 0 ? -1.0 : detail::pad(ym / ((N + 1) * c));
        },
        bits, fixed_terms);
    const Real pm = pre.magnitude();
    s.value = pre * s.value;
    mpfr_mul(s.tail_bound.value.get(), s.tail_bound.value.get(), pm.get(), MPFR_RNDU);
    return s;
}

inline HPFloat bessel_I(const HPFloat& p, const HPFloat& x) { return bessel_I_series(p, x).value; }

/// I_p through the 0F1 identity (x/2)^p / Gamma(1+p) * 0F1(-; 1+p; x^2/4).
inline HPFloat bessel_I_via_0F1(const HPFloat& p, const HPFloat& x)
{
    const Bits bits = std::max(p.precision_bits(), x.precision_bits());
    HPFloat one = HPFloat::exact(1, bits);
    HPFloat half = x / HPFloat::exact(2, bits);
    HPFloat pre = p.is_exact_zero() ? one : exp(p * log(half));
    return pre / gamma(one + p) * hyp0F1(one + p, half * half);
}

/// B(s, x) = sum_n n^s x^n / (n!)^2 for s >= 0 (the n = 0 term is 1 when s = 0).
inline SeriesEval bessel_B_series(const BigRational& s, const HPFloat& x, long fixed_terms = 0)
{
    if (s < 0)
        throw DomainError("B(s, x) needs s >= 0");
    const Bits bits = x.precision_bits();
    const double xm = detail::mag_up(x), sd = s.get_d();
    HPFloat u = HPFloat::exact(1, bits); // x^n / (n!)^2
    auto term = [&](long n) { return n == 0 ? u : pow(HPFloat::exact(n, bits), s) * u; };
    const long start = s == 0 ? 0 : 1;
    if (start == 1)
        u = x;
    return detail::sum_series(
        term(start), start,
        [&](long n, const HPFloat&) {
            u = u * x / HPFloat::exact((n + 1) * (n + 1), bits);
            return term(n + 1);
        },
        [&](long N) {
            if (N < 1)
                return -1.0;
            return detail::pad(std::pow(1 + 1.0 / N, sd) * xm / ((N + 1.0) * (N + 1.0)));
        },
        bits, fixed_terms);
}

inline HPFloat bessel_B(const BigRational& s, const HPFloat& x) { return bessel_B_series(s, x).value; }

namespace detail {

/// Coefficients (n + a)^s / n! of E_{s,a}, cached per precision.
class HardyCoefficients {
public:
    HardyCoefficients(BigRational s, BigRational a, Bits bits) : s_(std::move(s)), a_(std::move(a)), bits_(bits)
    {
        if (a_ < 0)
            throw DomainError("E_{s,a} needs a >= 0");
    }

    long first_index() const { return a_ == 0 ? 1 : 0; }

    const HPFloat& operator[](long n)
    {
        while (static_cast<long>(c_.size()) <= n) {
            long m = static_cast<long>(c_.size());
            if (m < first_index()) {
                c_.push_back(HPFloat::exact(0, bits_));
                fact_ = 1;
                continue;
            }
            if (m > 0)
                fact_ *= m;
            HPFloat base = HPFloat::exact(BigRational(m) + a_, bits_);
            c_.push_back(pow(base, s_) / HPFloat::exact(BigRational(fact_), bits_));
        }
        return c_[n];
    }

    /// Bound on |t_{m+1}/t_m| for m >= N.
    double ratio(long N, double xm) const
    {
        double base = static_cast<double>(N) + a_.get_d();
        if (base <= 0)
            return -1.0;
        double grow = s_ > 0 ? std::pow(1 + 1 / base, s_.get_d()) : 1.0;
        return pad(grow * xm / (N + 1.0));
    }

    Bits bits() const { return bits_; }

private:
    BigRational s_, a_;
    Bits bits_;
    std::vector<HPFloat> c_;
    BigInt fact_ = 1;
};

inline SeriesEval hardy_E_with(HardyCoefficients& c, const HPFloat& x, long fixed_terms = 0)
{
    const Bits bits = c.bits();
    const double xm = mag_up(x);
    const long start = c.first_index();
    HPFloat xpow = start == 0 ? HPFloat::exact(1, bits) : x;
    return sum_series(
        c[start] * xpow, start,
        [&](long n, const HPFloat&) {
            xpow *= x;
            return c[n + 1] * xpow;
        },
        [&](long N) { return c.ratio(N, xm); }, bits, fixed_terms);
}

} // namespace detail

/// E_{s,a}(x) = sum_n (n + a)^s x^n / n!, starting at n = 1 when a = 0.
inline SeriesEval hardy_E(const BigRational& s, const BigRational& a, const HPFloat& x, long fixed_terms = 0)
{
    detail::HardyCoefficients c(s, a, x.precision_bits());
    return detail::hardy_E_with(c, x, fixed_terms);
}

} // namespace lpkit::specfun
