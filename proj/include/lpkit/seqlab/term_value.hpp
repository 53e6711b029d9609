#pragma once

#include <optional>
#include <string>

#include "lpkit/error.hpp"
#include "lpkit/rational.hpp"
#include "lpkit/real.hpp"

namespace lpkit::seq {

/// One sequence term: an exact rational when one is known, and always a
/// high-precision ball that contains the true value.
struct TermValue {
    std::optional<BigRational> exact;
    HPFloat approx;

    TermValue() = default;
    TermValue(std::optional<BigRational> q, HPFloat a) : exact(std::move(q)), approx(std::move(a)) {}

    static TermValue rational(const BigRational& q, Bits bits) { return {q, HPFloat::exact(q, bits)}; }
    static TermValue rational(long q, Bits bits) { return rational(BigRational(q), bits); }
    static TermValue real(HPFloat v) { return {std::nullopt, std::move(v)}; }

    bool is_exact() const { return exact.has_value(); }
    Bits bits() const { return approx.precision_bits(); }

    bool is_zero() const { return exact ? *exact == 0 : approx.is_exact_zero(); }

    /// Exact sign when available, otherwise the certain sign of the ball (0
    /// when the ball straddles zero).
    int sign() const { return exact ? sgn(*exact) : approx.certain_sign(); }

    std::string to_string(int digits = 20) const { return exact ? to_fraction_string(*exact) : approx.to_string(digits); }
};

inline TermValue operator-(const TermValue& a)
{
    return {a.exact ? std::optional<BigRational>(-*a.exact) : std::nullopt, -a.approx};
}

#define LPKIT_TERM_BINOP(op)                                                                                                \
    inline TermValue operator op(const TermValue& a, const TermValue& b)                                                    \
    {                                                                                                                       \
        if (a.exact && b.exact) {                                                                                           \
            BigRational q = *a.exact op * b.exact;                                                                         \
            return TermValue::rational(q, std::max(a.bits(), b.bits()));                                                    \
        }                                                                                                                   \
        return TermValue::real(a.approx op b.approx);                                                                       \
    }

LPKIT_TERM_BINOP(+)
LPKIT_TERM_BINOP(-)
LPKIT_TERM_BINOP(*)
#undef LPKIT_TERM_BINOP

inline TermValue operator/(const TermValue& a, const TermValue& b)
{
    if (b.is_zero())
        throw DomainError("division by zero term");
    if (a.exact && b.exact)
        return TermValue::rational(*a.exact / *b.exact, std::max(a.bits(), b.bits()));
    if (a.is_zero())
        return TermValue::rational(0, std::max(a.bits(), b.bits()));
    return TermValue::real(a.approx / b.approx);
}

/// Exact r-th root of a nonnegative rational, when it exists.
inline std::optional<BigRational> exact_root(const BigRational& q, unsigned long r)
{
    if (q < 0)
        return std::nullopt;
    BigInt n, d;
    if (mpz_root(n.get_mpz_t(), q.get_num_mpz_t(), r) == 0)
        return std::nullopt;
    if (mpz_root(d.get_mpz_t(), q.get_den_mpz_t(), r) == 0)
        return std::nullopt;
    return make_rational(n, d);
}

/// b^e with exact rational exponent: exact whenever the result is rational.
inline TermValue pow(const TermValue& b, const BigRational& e)
{
    const Bits bits = b.bits();
    if (e == 0)
        return TermValue::rational(1, bits);
    if (b.is_zero()) {
        if (e < 0)
            throw DomainError("undefined term: zero raised to a negative power");
        return TermValue::rational(0, bits);
    }
    if (b.exact) {
        if (is_integer(e) && mpz_fits_slong_p(e.get_num_mpz_t()))
            return TermValue::rational(lpkit::pow(*b.exact, e.get_num().get_si()), bits);
        if (*b.exact < 0)
            throw DomainError("negative base with non-integer exponent");
        if (mpz_fits_ulong_p(e.get_den_mpz_t()) && mpz_fits_slong_p(e.get_num_mpz_t())) {
            if (auto root = exact_root(*b.exact, e.get_den().get_ui()))
                return TermValue::rational(lpkit::pow(*root, e.get_num().get_si()), bits);
        }
    } else if (!is_integer(e) && b.approx.certain_sign() <= 0) {
        throw DomainError("non-integer power of a value not certainly positive");
    }
    return TermValue::real(pow(b.approx, e));
}

inline TermValue pow(const TermValue& b, const TermValue& e)
{
    if (e.exact)
        return pow(b, *e.exact);
    if (b.is_zero()) {
        if (e.approx.certain_sign() > 0)
            return TermValue::rational(0, b.bits());
        throw DomainError("zero raised to a power not certainly positive");
    }
    if (b.sign() <= 0)
        throw DomainError("irrational power of a value not certainly positive");
    return TermValue::real(exp(e.approx * log(b.approx)));
}

inline TermValue sqrt(const TermValue& x) { return pow(x, BigRational(1, 2)); }

inline TermValue log(const TermValue& x)
{
    if (x.exact && *x.exact == 1)
        return TermValue::rational(0, x.bits());
    if (x.sign() <= 0)
        throw DomainError("logarithm of a value not certainly positive");
    return TermValue::real(log(x.approx));
}

inline TermValue exp(const TermValue& x)
{
    if (x.is_zero())
        return TermValue::rational(1, x.bits());
    return TermValue::real(exp(x.approx));
}

inline TermValue cosh(const TermValue& x)
{
    if (x.is_zero())
        return TermValue::rational(1, x.bits());
    return TermValue::real(cosh(x.approx));
}

inline unsigned long require_index(const TermValue& x, const char* what)
{
    if (!x.exact || !is_integer(*x.exact) || *x.exact < 0 || !mpz_fits_ulong_p(x.exact->get_num_mpz_t()))
        throw DomainError(std::string(what) + " needs a nonnegative integer argument");
    return x.exact->get_num().get_ui();
}

inline TermValue factorial(const TermValue& x)
{
    return TermValue::rational(BigRational(lpkit::factorial(require_index(x, "factorial"))), x.bits());
}

/// Harmonic number H_n = 1 + 1/2 + ... + 1/n, exact.
inline BigRational harmonic_number(unsigned long n)
{
    BigRational h = 0;
    for (unsigned long j = 1; j <= n; ++j)
        h += BigRational(1, j);
    return h;
}

inline TermValue harmonic(const TermValue& x) { return TermValue::rational(harmonic_number(require_index(x, "H")), x.bits()); }

} // namespace lpkit::seq
