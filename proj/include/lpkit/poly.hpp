#pragma once

#include <algorithm>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "lpkit/rational.hpp"
#include "lpkit/real.hpp"

namespace lpkit {

enum class CoefficientDomain { exact_rational, floating };

namespace detail {

inline bool is_zero_coeff(const BigRational& q) { return q == 0; }
inline bool is_zero_coeff(const BigInt& z) { return z == 0; }
inline bool is_zero_coeff(const HPFloat& x) { return x.is_exact_zero(); }

template <class T>
struct poly_traits;

template <>
struct poly_traits<BigRational> {
    static constexpr CoefficientDomain domain = CoefficientDomain::exact_rational;
};

template <>
struct poly_traits<BigInt> {
    static constexpr CoefficientDomain domain = CoefficientDomain::exact_rational;
};

template <>
struct poly_traits<HPFloat> {
    static constexpr CoefficientDomain domain = CoefficientDomain::floating;
};

} // namespace detail

/// Dense univariate polynomial, coefficients in ascending degree order.
/// Trailing (leading-degree) coefficients are never exact zeros, so the zero
/// polynomial has no coefficients and degree -1.
template <class T>
class Poly {
public:
    using value_type = T;
    static constexpr CoefficientDomain domain = detail::poly_traits<T>::domain;

    Poly() = default;
    explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

    static Poly monomial(T coeff, std::size_t degree)
    {
        std::vector<T> c(degree + 1, zero_like(coeff));
        c[degree] = std::move(coeff);
        return Poly(std::move(c));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    std::span<const T> coeffs() const { return c_; }
    std::size_t size() const { return c_.size(); }
    const T& operator[](std::size_t i) const { return c_[i]; }
    const T& leading() const { return c_.back(); }

    /// Coefficient of x^i, zero when i exceeds the degree.
    T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : zero(); }

    template <class X>
    X evaluate(const X& x) const
    {
        if (c_.empty())
            return zero_at(x);
        X acc = convert<X>(c_.back(), x);
        for (std::size_t i = c_.size() - 1; i-- > 0;)
            acc = acc * x + convert<X>(c_[i], x);
        return acc;
    }

    Poly derivative() const
    {
        if (c_.size() <= 1)
            return Poly();
        std::vector<T> d;
        d.reserve(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            d.push_back(scale_int(c_[i], static_cast<long>(i)));
        return Poly(std::move(d));
    }

    friend Poly operator+(const Poly& a, const Poly& b)
    {
        const Poly& big = a.size() >= b.size() ? a : b;
        const Poly& small = a.size() >= b.size() ? b : a;
        std::vector<T> r(big.c_);
        for (std::size_t i = 0; i < small.size(); ++i)
            r[i] = r[i] + small.c_[i];
        return Poly(std::move(r));
    }

    friend Poly operator-(const Poly& a)
    {
        std::vector<T> r;
        r.reserve(a.size());
        for (const auto& x : a.c_)
            r.push_back(-x);
        return Poly(std::move(r));
    }

    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    friend Poly operator*(const Poly& a, const Poly& b)
    {
        if (a.is_zero() || b.is_zero())
            return Poly();
        std::vector<T> r(a.size() + b.size() - 1, zero_like(a.c_[0]));
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (detail::is_zero_coeff(a.c_[i]))
                continue;
            for (std::size_t j = 0; j < b.size(); ++j)
                r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        }
        return Poly(std::move(r));
    }

    friend Poly operator*(const T& s, const Poly& p)
    {
        std::vector<T> r;
        r.reserve(p.size());
        for (const auto& x : p.c_)
            r.push_back(s * x);
        return Poly(std::move(r));
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

private:
    void trim()
    {
        while (!c_.empty() && detail::is_zero_coeff(c_.back()))
            c_.pop_back();
    }

    static T zero()
    {
        if constexpr (std::is_same_v<T, HPFloat>)
            return HPFloat(64);
        else
            return T(0);
    }

    static T zero_like(const T& ref)
    {
        if constexpr (std::is_same_v<T, HPFloat>)
            return HPFloat(ref.precision_bits());
        else
            return T(0);
    }

    static T scale_int(const T& x, long k)
    {
        if constexpr (std::is_same_v<T, HPFloat>)
            return x * HPFloat::exact(k, x.precision_bits());
        else
            return x * T(k);
    }

    template <class X>
    static X zero_at(const X& x)
    {
        if constexpr (std::is_same_v<X, HPFloat>)
            return HPFloat(x.precision_bits());
        else
            return X(0);
    }

    template <class X>
    static X convert(const T& c, const X& like)
    {
        if constexpr (std::is_same_v<X, T>) {
            return c;
        } else if constexpr (std::is_same_v<X, HPFloat> && std::is_same_v<T, BigRational>) {
            return HPFloat::exact(c, like.precision_bits());
        } else {
            return X(c);
        }
    }

    std::vector<T> c_;
};

using QPoly = Poly<BigRational>;
using ZPoly = Poly<BigInt>;
using FPoly = Poly<HPFloat>;

/// Parses a list of rational strings (ascending degree).
inline QPoly qpoly_from_strings(const std::vector<std::string>& coeffs)
{
    std::vector<BigRational> c;
    c.reserve(coeffs.size());
    for (const auto& s : coeffs)
        c.push_back(parse_rational(s));
    return QPoly(std::move(c));
}

inline std::vector<std::string> to_strings(const QPoly& p)
{
    std::vector<std::string> out;
    for (const auto& c : p.coeffs())
        out.push_back(to_fraction_string(c));
    return out;
}

inline FPoly to_float(const QPoly& p, Bits bits)
{
    std::vector<HPFloat> c;
    c.reserve(p.size());
    for (const auto& q : p.coeffs())
        c.push_back(HPFloat::exact(q, bits));
    return FPoly(std::move(c));
}

/// Human-readable form, e.g. "1 + 3*x + 5/2*x^2".
inline std::string to_display(const QPoly& p, const std::string& var = "x")
{
    if (p.is_zero())
        return "0";
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0)
            continue;
        if (!s.empty())
            s += (p[i] < 0) ? " - " : " + ";
        else if (p[i] < 0)
            s += "-";
        BigRational a = abs(p[i]);
        if (i == 0)
            s += a.get_str();
        else {
            if (a != 1)
                s += a.get_str() + "*";
            s += var;
            if (i > 1)
                s += "^" + std::to_string(i);
        }
    }
    return s;
}

// Exact-field helpers ------------------------------------------------------

/// Euclidean division over Q. Throws on division by zero.
inline std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b)
{
    if (b.is_zero())
        throw DomainError("polynomial division by zero");
    if (a.degree() < b.degree())
        return {QPoly(), a};
    std::vector<BigRational> r(a.coeffs().begin(), a.coeffs().end());
    std::vector<BigRational> q(a.size() - b.size() + 1);
    const auto& lb = b.leading();
    for (std::size_t i = q.size(); i-- > 0;) {
        BigRational f = r[i + b.size() - 1] / lb;
        q[i] = f;
        if (f == 0)
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] -= f * b[j];
    }
    r.resize(b.size() - 1);
    return {QPoly(std::move(q)), QPoly(std::move(r))};
}

inline QPoly monic(const QPoly& p)
{
    if (p.is_zero())
        return p;
    BigRational inv = 1 / p.leading();
    return inv * p;
}

/// Clears denominators and removes the content: returns the primitive integer
/// polynomial with the same roots and the same sign of leading coefficient.
inline ZPoly primitive_part(const QPoly& p)
{
    if (p.is_zero())
        return ZPoly();
    BigInt den = 1;
    for (const auto& c : p.coeffs())
        den = lcm(den, c.get_den());
    std::vector<BigInt> z;
    z.reserve(p.size());
    BigInt g = 0;
    for (const auto& c : p.coeffs()) {
        BigInt v = c.get_num() * (den / c.get_den());
        g = gcd(g, v);
        z.push_back(std::move(v));
    }
    if (g != 1)
        for (auto& v : z)
            v /= g;
    return ZPoly(std::move(z));
}

inline QPoly to_rational(const ZPoly& p)
{
    std::vector<BigRational> c;
    c.reserve(p.size());
    for (const auto& z : p.coeffs())
        c.emplace_back(z);
    return QPoly(std::move(c));
}

} // namespace lpkit
