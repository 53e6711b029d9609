#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "lpkit/error.hpp"

namespace lpkit {

using BigInt = mpz_class;

/// Exact rational. gmpxx keeps values canonical (den > 0, reduced) after every
/// arithmetic operation; values built from a raw num/den pair go through
/// make_rational.
using BigRational = mpq_class;

inline BigRational make_rational(const BigInt& num, const BigInt& den)
{
    if (den == 0)
        throw DomainError("rational with zero denominator");
    BigRational q(num, den);
    q.canonicalize();
    return q;
}

inline BigRational make_rational(long num, long den = 1)
{
    return make_rational(BigInt(num), BigInt(den));
}

/// Parses "p", "p/q" or a finite decimal such as "-0.125".
inline BigRational parse_rational(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start])))
        ++start;
    s = s.substr(start);
    if (s.empty())
        throw ParseError("empty rational literal", 0);

    auto valid_int = [](std::string_view v) {
        std::size_t i = (!v.empty() && (v[0] == '-' || v[0] == '+')) ? 1 : 0;
        if (i == v.size())
            return false;
        for (; i < v.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(v[i])))
                return false;
        return true;
    };
    auto to_int = [](std::string v) {
        if (!v.empty() && v[0] == '+')
            v.erase(0, 1);
        return BigInt(v);
    };

    if (auto slash = s.find('/'); slash != std::string::npos) {
        auto num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!valid_int(num))
            throw ParseError("malformed numerator in '" + s + "'", 0);
        if (!valid_int(den))
            throw ParseError("malformed denominator in '" + s + "'", slash + 1);
        BigInt d = to_int(den);
        if (d == 0)
            throw ParseError("zero denominator in '" + s + "'", slash + 1);
        return make_rational(to_int(num), d);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
        bool neg = !whole.empty() && whole[0] == '-';
        if (!whole.empty() && (whole[0] == '-' || whole[0] == '+'))
            whole.erase(0, 1);
        if (whole.empty())
            whole = "0";
        if (!valid_int(whole) || (!frac.empty() && !valid_int(frac)) || (!frac.empty() && (frac[0] == '-' || frac[0] == '+')))
            throw ParseError("malformed decimal '" + s + "'", 0);
        BigInt scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        BigInt num = BigInt(whole) * scale + (frac.empty() ? BigInt(0) : BigInt(frac));
        return make_rational(neg ? BigInt(-num) : num, scale);
    }
    if (!valid_int(s))
        throw ParseError("malformed rational '" + s + "'", 0);
    return BigRational(to_int(s));
}

/// Lossless "num/den" serialization (always carries the denominator).
inline std::string to_fraction_string(const BigRational& q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline bool is_integer(const BigRational& q) { return q.get_den() == 1; }

inline BigInt factorial(unsigned long n)
{
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

/// Row n of Pascal's triangle, built by the additive recurrence.
inline std::vector<BigInt> binomial_row(unsigned long n)
{
    std::vector<BigInt> row{1};
    row.reserve(n + 1);
    for (unsigned long i = 1; i <= n; ++i) {
        row.push_back(1);
        for (unsigned long k = i - 1; k >= 1; --k)
            row[k] += row[k - 1];
    }
    return row;
}

inline BigInt binomial(unsigned long n, unsigned long k)
{
    if (k > n)
        return 0;
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

/// q^e for integer e; 0^0 = 1, 0^negative is a domain error.
inline BigRational pow(const BigRational& q, long e)
{
    if (e == 0)
        return 1;
    if (q == 0) {
        if (e < 0)
            throw DomainError("zero raised to a negative power");
        return 0;
    }
    unsigned long ue = static_cast<unsigned long>(e < 0 ? -e : e);
    BigInt n, d;
    mpz_pow_ui(n.get_mpz_t(), q.get_num_mpz_t(), ue);
    mpz_pow_ui(d.get_mpz_t(), q.get_den_mpz_t(), ue);
    return e > 0 ? make_rational(n, d) : make_rational(d, n);
}

/// Exact square root when both numerator and denominator are perfect squares.
inline bool exact_sqrt(const BigRational& q, BigRational& out)
{
    if (q < 0)
        return false;
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
        return false;
    BigInt n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    out = make_rational(n, d);
    return true;
}

inline BigInt lcm(const BigInt& a, const BigInt& b)
{
    BigInt r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline BigInt gcd(const BigInt& a, const BigInt& b)
{
    BigInt r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

} // namespace lpkit
