#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "lpkit/error.hpp"
#include "lpkit/rational.hpp"

namespace lpkit {

using Bits = mpfr_prec_t;

/// RAII handle for an mpfr_t. Precision is a property of each value; binary
/// operations produce a result at the larger of the operand precisions. There
/// is no ambient default precision.
class Real {
public:
    explicit Real(Bits bits = 64)
    {
        mpfr_init2(v_, bits);
        mpfr_set_zero(v_, 1);
    }

    Real(long value, Bits bits)
    {
        mpfr_init2(v_, bits);
        mpfr_set_si(v_, value, MPFR_RNDN);
    }

    Real(const BigRational& value, Bits bits, mpfr_rnd_t rnd = MPFR_RNDN)
    {
        mpfr_init2(v_, bits);
        mpfr_set_q(v_, value.get_mpq_t(), rnd);
    }

    static Real from_double(double value, Bits bits)
    {
        Real r(bits);
        mpfr_set_d(r.v_, value, MPFR_RNDN);
        return r;
    }

    static Real from_string(const std::string& text, Bits bits)
    {
        Real r(bits);
        if (mpfr_set_str(r.v_, text.c_str(), 10, MPFR_RNDN) != 0)
            throw ParseError("malformed real literal '" + text + "'", 0);
        return r;
    }

    Real(const Real& other)
    {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }

    Real(Real&& other) noexcept
    {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, other.v_);
    }

    Real& operator=(const Real& other)
    {
        if (this != &other) {
            mpfr_set_prec(v_, mpfr_get_prec(other.v_));
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }

    Real& operator=(Real&& other) noexcept
    {
        mpfr_swap(v_, other.v_);
        return *this;
    }

    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    Bits precision() const { return mpfr_get_prec(v_); }

    /// Same value, rounded to a new precision.
    Real rounded(Bits bits, mpfr_rnd_t rnd = MPFR_RNDN) const
    {
        Real r(bits);
        mpfr_set(r.v_, v_, rnd);
        return r;
    }

    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long exponent() const { return is_zero() ? 0 : mpfr_get_exp(v_); }

    /// Exact conversion: every finite binary float is a rational.
    BigRational to_rational() const
    {
        BigRational q;
        mpfr_get_q(q.get_mpq_t(), v_);
        return q;
    }

    std::string to_string(int digits = 20) const
    {
        char* buf = nullptr;
        mpfr_asprintf(&buf, "%.*Rg", digits, v_);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

    Real operator-() const
    {
        Real r(precision());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    Real& operator+=(const Real& o) { return apply(o, mpfr_add); }
    Real& operator-=(const Real& o) { return apply(o, mpfr_sub); }
    Real& operator*=(const Real& o) { return apply(o, mpfr_mul); }
    Real& operator/=(const Real& o) { return apply(o, mpfr_div); }

    friend Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add); }
    friend Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub); }
    friend Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul); }
    friend Real operator/(const Real& a, const Real& b) { return binary(a, b, mpfr_div); }

    friend Real operator*(const Real& a, long b)
    {
        Real r(a.precision());
        mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend Real operator*(long b, const Real& a) { return a * b; }
    friend Real operator/(const Real& a, long b)
    {
        Real r(a.precision());
        mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend Real operator+(const Real& a, long b)
    {
        Real r(a.precision());
        mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend Real operator-(const Real& a, long b)
    {
        Real r(a.precision());
        mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
    friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }

private:
    using BinaryOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

    static Real binary(const Real& a, const Real& b, BinaryOp op)
    {
        Real r(std::max(a.precision(), b.precision()));
        op(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    Real& apply(const Real& o, BinaryOp op)
    {
        if (o.precision() > precision())
            mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
        op(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }

    mpfr_t v_;
};

namespace detail {

using UnaryOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

inline Real unary(const Real& x, UnaryOp op, mpfr_rnd_t rnd = MPFR_RNDN)
{
    Real r(x.precision());
    op(r.get(), x.get(), rnd);
    return r;
}

} // namespace detail

inline Real abs(const Real& x) { return detail::unary(x, mpfr_abs); }
inline Real sqrt(const Real& x) { return detail::unary(x, mpfr_sqrt); }
inline Real log(const Real& x) { return detail::unary(x, mpfr_log); }
inline Real log1p(const Real& x) { return detail::unary(x, mpfr_log1p); }
inline Real exp(const Real& x) { return detail::unary(x, mpfr_exp); }
inline Real expm1(const Real& x) { return detail::unary(x, mpfr_expm1); }
inline Real sin(const Real& x) { return detail::unary(x, mpfr_sin); }
inline Real cos(const Real& x) { return detail::unary(x, mpfr_cos); }
inline Real sinh(const Real& x) { return detail::unary(x, mpfr_sinh); }
inline Real cosh(const Real& x) { return detail::unary(x, mpfr_cosh); }
inline Real tanh(const Real& x) { return detail::unary(x, mpfr_tanh); }
inline Real gamma(const Real& x) { return detail::unary(x, mpfr_gamma); }
inline Real digamma(const Real& x) { return detail::unary(x, mpfr_digamma); }

inline Real pow(const Real& x, const Real& y)
{
    Real r(std::max(x.precision(), y.precision()));
    mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
    return r;
}

inline Real ldexp(const Real& x, long e)
{
    Real r(x.precision());
    mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
    return r;
}

inline Real const_pi(Bits bits)
{
    Real r(bits);
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}

inline Real const_euler(Bits bits)
{
    Real r(bits);
    mpfr_const_euler(r.get(), MPFR_RNDN);
    return r;
}

inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return a < b ? a : b; }

/// A high-precision value with a rigorous-in-intent absolute error bound.
///
/// `value` is the midpoint at the working precision; `err` is an upper bound on
/// |true − value| kept at 64 bits and always rounded upward. Every operation
/// adds its own rounding contribution (nothing when MPFR reports the result
/// exact), so exact zeros and exact small rationals stay exact.
struct HPFloat {
    Real value;
    Real err;

    static constexpr Bits err_bits = 64;

    explicit HPFloat(Bits bits = 64) : value(bits), err(err_bits) {}
    HPFloat(Real v, Real e) : value(std::move(v)), err(std::move(e)) {}

    static HPFloat exact(const BigRational& q, Bits bits)
    {
        HPFloat r(bits);
        int t = mpfr_set_q(r.value.get(), q.get_mpq_t(), MPFR_RNDN);
        r.err = rounding_error(r.value, t);
        return r;
    }

    static HPFloat exact(long q, Bits bits) { return exact(BigRational(q), bits); }

    /// Wraps a correctly rounded MPFR result (`ternary` as returned by MPFR).
    static HPFloat rounded(Real v, int ternary)
    {
        Real e = rounding_error(v, ternary);
        return HPFloat(std::move(v), std::move(e));
    }

    Bits precision_bits() const { return value.precision(); }
    bool is_exact_zero() const { return value.is_zero() && err.is_zero(); }
    bool is_exact() const { return err.is_zero(); }

    /// Sign when the ball excludes zero; 0 when the ball contains zero.
    int certain_sign() const
    {
        if (mpfr_cmpabs(value.get(), err.get()) > 0)
            return value.sign();
        return 0;
    }

    Real lower() const
    {
        Real r(precision_bits());
        mpfr_sub(r.get(), value.get(), err.get(), MPFR_RNDD);
        return r;
    }

    Real upper() const
    {
        Real r(precision_bits());
        mpfr_add(r.get(), value.get(), err.get(), MPFR_RNDU);
        return r;
    }

    /// Upper bound on |x| for x in the ball.
    Real magnitude() const
    {
        Real r(err_bits);
        mpfr_abs(r.get(), value.get(), MPFR_RNDU);
        mpfr_add(r.get(), r.get(), err.get(), MPFR_RNDU);
        return r;
    }

    bool contains(const Real& x) const
    {
        Real d(std::max(precision_bits(), x.precision()) + 2);
        mpfr_sub(d.get(), value.get(), x.get(), MPFR_RNDN);
        mpfr_abs(d.get(), d.get(), MPFR_RNDN);
        return mpfr_lessequal_p(d.get(), err.get()) != 0;
    }

    bool contains(const BigRational& q) const { return contains(Real(q, precision_bits() + 64)); }

    double to_double() const { return value.to_double(); }

    std::string to_string(int digits = 20) const { return value.to_string(digits); }

    static Real rounding_error(const Real& v, int ternary)
    {
        Real e(err_bits);
        if (ternary == 0 || v.is_zero())
            return e;
        mpfr_abs(e.get(), v.get(), MPFR_RNDU);
        mpfr_mul_2si(e.get(), e.get(), 1 - static_cast<long>(v.precision()), MPFR_RNDU);
        return e;
    }
};

namespace detail {

// Upward-rounded helpers on 64-bit error quantities.
inline Real up_add(const Real& a, const Real& b)
{
    Real r(HPFloat::err_bits);
    mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDU);
    return r;
}

inline Real up_mul(const Real& a, const Real& b)
{
    Real r(HPFloat::err_bits);
    mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDU);
    return r;
}

inline Real up_abs(const Real& a)
{
    Real r(HPFloat::err_bits);
    mpfr_abs(r.get(), a.get(), MPFR_RNDU);
    return r;
}

inline Real up_div(const Real& a, const Real& b)
{
    Real r(HPFloat::err_bits);
    mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDU);
    return r;
}

} // namespace detail

inline HPFloat operator-(const HPFloat& a) { return HPFloat(-a.value, a.err); }

inline HPFloat operator+(const HPFloat& a, const HPFloat& b)
{
    Real v(std::max(a.precision_bits(), b.precision_bits()));
    int t = mpfr_add(v.get(), a.value.get(), b.value.get(), MPFR_RNDN);
    Real e = detail::up_add(detail::up_add(a.err, b.err), HPFloat::rounding_error(v, t));
    return HPFloat(std::move(v), std::move(e));
}

inline HPFloat operator-(const HPFloat& a, const HPFloat& b)
{
    Real v(std::max(a.precision_bits(), b.precision_bits()));
    int t = mpfr_sub(v.get(), a.value.get(), b.value.get(), MPFR_RNDN);
    Real e = detail::up_add(detail::up_add(a.err, b.err), HPFloat::rounding_error(v, t));
    return HPFloat(std::move(v), std::move(e));
}

inline HPFloat operator*(const HPFloat& a, const HPFloat& b)
{
    using namespace detail;
    Real v(std::max(a.precision_bits(), b.precision_bits()));
    int t = mpfr_mul(v.get(), a.value.get(), b.value.get(), MPFR_RNDN);
    Real e = up_add(up_add(up_mul(up_abs(a.value), b.err), up_mul(up_abs(b.value), a.err)), up_mul(a.err, b.err));
    e = up_add(e, HPFloat::rounding_error(v, t));
    return HPFloat(std::move(v), std::move(e));
}

inline HPFloat operator/(const HPFloat& a, const HPFloat& b)
{
    using namespace detail;
    if (b.certain_sign() == 0)
        throw DomainError("division by a value whose error ball contains zero");
    Real v(std::max(a.precision_bits(), b.precision_bits()));
    int t = mpfr_div(v.get(), a.value.get(), b.value.get(), MPFR_RNDN);
    // |a/b - a'/b'| <= (a.err + |q| b.err) / (|b'| - b.err)
    Real num = up_add(a.err, up_mul(up_abs(v), b.err));
    Real den(HPFloat::err_bits);
    mpfr_abs(den.get(), b.value.get(), MPFR_RNDD);
    mpfr_sub(den.get(), den.get(), b.err.get(), MPFR_RNDD);
    Real e = up_add(up_div(num, den), HPFloat::rounding_error(v, t));
    return HPFloat(std::move(v), std::move(e));
}

inline HPFloat& operator+=(HPFloat& a, const HPFloat& b) { return a = a + b; }
inline HPFloat& operator-=(HPFloat& a, const HPFloat& b) { return a = a - b; }
inline HPFloat& operator*=(HPFloat& a, const HPFloat& b) { return a = a * b; }
inline HPFloat& operator/=(HPFloat& a, const HPFloat& b) { return a = a / b; }

inline HPFloat abs(const HPFloat& x) { return HPFloat(abs(x.value), x.err); }

inline HPFloat sqrt(const HPFloat& x)
{
    using namespace detail;
    if (x.is_exact_zero())
        return x;
    Real lo = x.lower();
    Real v(x.precision_bits());
    if (lo.sign() > 0) {
        int t = mpfr_sqrt(v.get(), x.value.get(), MPFR_RNDN);
        Real slo(HPFloat::err_bits);
        mpfr_sqrt(slo.get(), lo.get(), MPFR_RNDD);
        Real e = up_add(up_div(x.err, slo), HPFloat::rounding_error(v, t));
        return HPFloat(std::move(v), std::move(e));
    }
    Real hi = x.upper();
    if (hi.sign() < 0)
        throw DomainError("square root of a negative value");
    if (x.value.sign() > 0)
        mpfr_sqrt(v.get(), x.value.get(), MPFR_RNDN);
    Real e(HPFloat::err_bits);
    mpfr_sqrt(e.get(), hi.get(), MPFR_RNDU);
    return HPFloat(std::move(v), std::move(e));
}

inline HPFloat log(const HPFloat& x)
{
    using namespace detail;
    Real lo = x.lower();
    if (lo.sign() <= 0)
        throw DomainError("logarithm of a value not certainly positive");
    Real v(x.precision_bits());
    int t = mpfr_log(v.get(), x.value.get(), MPFR_RNDN);
    Real e = up_add(up_div(x.err, lo.rounded(HPFloat::err_bits, MPFR_RNDD)), HPFloat::rounding_error(v, t));
    return HPFloat(std::move(v), std::move(e));
}

inline HPFloat exp(const HPFloat& x)
{
    using namespace detail;
    Real v(x.precision_bits());
    int t = mpfr_exp(v.get(), x.value.get(), MPFR_RNDN);
    Real e(HPFloat::err_bits);
    if (!x.err.is_zero()) {
        Real hi(HPFloat::err_bits);
        mpfr_add(hi.get(), x.value.get(), x.err.get(), MPFR_RNDU);
        mpfr_exp(e.get(), hi.get(), MPFR_RNDU);
        e = up_mul(e, x.err);
    }
    e = up_add(e, HPFloat::rounding_error(v, t));
    return HPFloat(std::move(v), std::move(e));
}

inline HPFloat cosh(const HPFloat& x)
{
    using namespace detail;
    Real v(x.precision_bits());
    int t = mpfr_cosh(v.get(), x.value.get(), MPFR_RNDN);
    Real e(HPFloat::err_bits);
    if (!x.err.is_zero()) {
        Real hi = x.magnitude();
        mpfr_cosh(e.get(), hi.get(), MPFR_RNDU);
        e = up_mul(e, x.err);
    }
    e = up_add(e, HPFloat::rounding_error(v, t));
    return HPFloat(std::move(v), std::move(e));
}

/// x^s for rational s; x must be certainly positive unless it is an exact zero
/// and s > 0.
inline HPFloat pow(const HPFloat& x, const BigRational& s)
{
    if (s == 0)
        return HPFloat::exact(1, x.precision_bits());
    if (x.is_exact_zero()) {
        if (s < 0)
            throw DomainError("zero raised to a negative power");
        return x;
    }
    if (is_integer(s) && mpz_fits_slong_p(s.get_num_mpz_t())) {
        long e = s.get_num().get_si();
        HPFloat base = e > 0 ? x : HPFloat::exact(1, x.precision_bits()) / x;
        unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
        HPFloat acc = HPFloat::exact(1, x.precision_bits());
        while (n) {
            if (n & 1)
                acc *= base;
            n >>= 1;
            if (n)
                base = base * base;
        }
        return acc;
    }
    HPFloat ls = HPFloat::exact(s, x.precision_bits());
    return exp(ls * log(x));
}

inline HPFloat hp_pi(Bits bits)
{
    Real v(bits);
    int t = mpfr_const_pi(v.get(), MPFR_RNDN);
    return HPFloat::rounded(std::move(v), t);
}

inline HPFloat hp_euler(Bits bits)
{
    Real v(bits);
    int t = mpfr_const_euler(v.get(), MPFR_RNDN);
    return HPFloat::rounded(std::move(v), t);
}

} // namespace lpkit
