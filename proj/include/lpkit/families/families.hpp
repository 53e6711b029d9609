#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lpkit/error.hpp"
#include "lpkit/jensen/jensen.hpp"
#include "lpkit/poly.hpp"
#include "lpkit/rational.hpp"
#include "lpkit/seqlab/sequence.hpp"
#include "lpkit/specfun/specfun.hpp"

namespace lpkit::families {

using seq::SequenceSpec;
using seq::TermValue;

/// A member of a fixed catalogue of Laguerre-Polya+ functions, each
/// phi(x) = sum gamma_k x^k / k! with gamma_k known exactly.
class LPFunction {
public:
    enum class Kind { exp_r, sq_fact, even_fact, poly_times_exp, one };

    /// e^{rx}, gamma_k = r^k.
    static LPFunction exp_r(const BigRational& r)
    {
        if (r < 0)
            throw DomainError("exp_r needs r >= 0");
        LPFunction f(Kind::exp_r);
        f.r_ = r;
        return f;
    }

    /// sum x^k / (k!)^2, gamma_k = 1/k!.
    static LPFunction sq_fact() { return LPFunction(Kind::sq_fact); }

    /// sum x^k / (2k)!, gamma_k = k!/(2k)!.
    static LPFunction even_fact() { return LPFunction(Kind::even_fact); }

    /// q(x) e^{rx} for a polynomial q with nonnegative coefficients.
    static LPFunction poly_times_exp(QPoly q, const BigRational& r = 0)
    {
        if (q.is_zero())
            throw DomainError("poly_times_exp needs a nonzero polynomial");
        for (int i = 0; i <= q.degree(); ++i)
            if (q[i] < 0)
                throw DomainError("not in 𝓛-𝓟⁺ witness form: negative coefficient in " + to_display(q));
        if (r < 0)
            throw DomainError("poly_times_exp needs r >= 0");
        LPFunction f(Kind::poly_times_exp);
        f.q_ = std::move(q);
        f.r_ = r;
        return f;
    }

    /// The constant 1, gamma = {1, 0, 0, ...}.
    static LPFunction one() { return LPFunction(Kind::one); }

    Kind kind() const { return kind_; }
    const BigRational& rate() const { return r_; }
    const QPoly& polynomial() const { return q_; }

    BigRational gamma(unsigned long k) const
    {
        switch (kind_) {
        case Kind::exp_r: return pow(r_, static_cast<long>(k));
        case Kind::sq_fact: return make_rational(BigInt(1), factorial(k));
        case Kind::even_fact: return make_rational(factorial(k), factorial(2 * k));
        case Kind::one: return k == 0 ? BigRational(1) : BigRational(0);
        case Kind::poly_times_exp: {
            // k! [x^k] q(x) e^{rx} = sum_j C(k,j) j! q_j r^{k-j}
            auto row = binomial_row(k);
            BigRational g = 0;
            for (unsigned long j = 0; j <= k && static_cast<int>(j) <= q_.degree(); ++j)
                g += BigRational(row[j] * factorial(j)) * q_[j] * pow(r_, static_cast<long>(k - j));
            return g;
        }
        }
        throw DomainError("unknown LP function kind");
    }

    BigRational jensen_gamma(unsigned long k) const { return gamma(k); }

    std::vector<BigRational> gammas(unsigned long count) const
    {
        std::vector<BigRational> g;
        g.reserve(count);
        for (unsigned long k = 0; k < count; ++k)
            g.push_back(gamma(k));
        return g;
    }

    std::string to_string() const
    {
        switch (kind_) {
        case Kind::exp_r: return "exp_r(" + to_fraction_string(r_) + ")";
        case Kind::sq_fact: return "sq_fact";
        case Kind::even_fact: return "even_fact";
        case Kind::one: return "one";
        case Kind::poly_times_exp: {
            std::string s = "poly_times_exp(" + to_display(q_);
            if (r_ != 0)
                s += ", " + to_fraction_string(r_);
            return s + ")";
        }
        }
        return "?";
    }

private:
    explicit LPFunction(Kind k) : kind_(k) {}

    Kind kind_;
    BigRational r_ = 0;
    QPoly q_;
};

struct FamilyValue {
    long k = 0;
    BigRational t, s;
    TermValue value;
};

inline void require_k(long k)
{
    if (k < 0)
        throw DomainError("family index k must be >= 0");
}

/// B_k(t) = sum_{j=0}^k C(k,j) (1-t)^j gamma_{k-j} t^{k-j}.
inline BigRational b_family_exact(const LPFunction& phi, const BigRational& t, long k)
{
    require_k(k);
    auto row = binomial_row(static_cast<unsigned long>(k));
    BigRational sum = 0;
    const BigRational u = 1 - t;
    for (long j = 0; j <= k; ++j)
        sum += BigRational(row[j]) * pow(u, j) * phi.gamma(static_cast<unsigned long>(k - j)) * pow(t, k - j);
    return sum;
}

inline TermValue b_family(const LPFunction& phi, const BigRational& t, long k, Bits bits = 256)
{
    return TermValue::rational(b_family_exact(phi, t, k), bits);
}

/// B_k as a polynomial in t.
inline QPoly b_family_poly(const LPFunction& phi, long k)
{
    require_k(k);
    auto row = binomial_row(static_cast<unsigned long>(k));
    const QPoly one_minus_t{1, -1}, t{0, 1};
    QPoly sum;
    QPoly tp{1};
    std::vector<QPoly> up(k + 1, QPoly{1});
    for (long j = 1; j <= k; ++j)
        up[j] = up[j - 1] * one_minus_t;
    std::vector<QPoly> tpow(k + 1, QPoly{1});
    for (long j = 1; j <= k; ++j)
        tpow[j] = tpow[j - 1] * t;
    for (long j = 0; j <= k; ++j)
        sum = sum + (BigRational(row[j]) * phi.gamma(static_cast<unsigned long>(k - j))) * (up[j] * tpow[k - j]);
    return sum;
}

/// C_k(t, s) = sum_{j=0}^k C(k,j) B_j^phi(t) B_{k-j}^Phi(s).
inline BigRational c_family_exact(const LPFunction& phi, const LPFunction& Phi, const BigRational& t, const BigRational& s, long k)
{
    require_k(k);
    auto row = binomial_row(static_cast<unsigned long>(k));
    BigRational sum = 0;
    for (long j = 0; j <= k; ++j)
        sum += BigRational(row[j]) * b_family_exact(phi, t, j) * b_family_exact(Phi, s, k - j);
    return sum;
}

inline TermValue c_family(const LPFunction& phi, const LPFunction& Phi, const BigRational& t, const BigRational& s, long k,
    Bits bits = 256)
{
    return TermValue::rational(c_family_exact(phi, Phi, t, s, k), bits);
}

/// C_0..C_{count-1} as an explicit sequence, for ms_test.
inline SequenceSpec c_family_sequence(const LPFunction& phi, const LPFunction& Phi, const BigRational& t, const BigRational& s,
    long count)
{
    std::vector<BigRational> v;
    for (long k = 0; k < count; ++k)
        v.push_back(c_family_exact(phi, Phi, t, s, k));
    return SequenceSpec::explicit_list(std::move(v));
}

/// t^k B_k(1/t) == sum_j C(k,j) (t-1)^j gamma_{k-j}.
inline bool bk_reversal_check(const LPFunction& phi, long k, const BigRational& t)
{
    require_k(k);
    if (t == 0)
        throw DomainError("bk_reversal_check needs t != 0");
    BigRational lhs = pow(t, k) * b_family_exact(phi, 1 / t, k);
    auto row = binomial_row(static_cast<unsigned long>(k));
    BigRational rhs = 0;
    for (long j = 0; j <= k; ++j)
        rhs += BigRational(row[j]) * pow(t - 1, j) * phi.gamma(static_cast<unsigned long>(k - j));
    return lhs == rhs;
}

/// Jensen polynomial g_j(x) = sum_i C(j,i) gamma_i x^i of phi, evaluated exactly.
inline BigRational jensen_value(const LPFunction& phi, long j, const BigRational& x)
{
    auto row = binomial_row(static_cast<unsigned long>(j));
    BigRational sum = 0;
    for (long i = 0; i <= j; ++i)
        sum += BigRational(row[i]) * phi.gamma(static_cast<unsigned long>(i)) * pow(x, i);
    return sum;
}

/// B_k(t) = sum_j C(k,j) g_j(t) (-1)^{j+k} t^{k-j}.
inline TermValue bk_via_jensen(const LPFunction& phi, long k, const BigRational& t, Bits bits = 256)
{
    require_k(k);
    auto row = binomial_row(static_cast<unsigned long>(k));
    BigRational sum = 0;
    for (long j = 0; j <= k; ++j) {
        BigRational term = BigRational(row[j]) * jensen_value(phi, j, t) * pow(t, k - j);
        sum += ((j + k) % 2 == 0) ? term : BigRational(-term);
    }
    return TermValue::rational(sum, bits);
}

/// (phi, Phi, t, s) with C_k^{phi,Phi}(t, s) = gamma_k.
struct CkWitness {
    LPFunction phi = LPFunction::one();
    LPFunction Phi = LPFunction::one();
    BigRational t, s;
    std::string to_string() const
    {
        return "(" + phi.to_string() + ", " + Phi.to_string() + ", " + to_fraction_string(t) + ", " + to_fraction_string(s) + ")";
    }
};

struct CkRepresentation {
    CkWitness witness;
    std::optional<CkWitness> alternative;
    long verified_through = -1;
};

namespace detail {

/// Coefficients of the interpolating polynomial for a bare poly/power generator.
inline std::optional<QPoly> interpolating_poly(const SequenceSpec& spec)
{
    if (spec.transform_count() != 0)
        return std::nullopt;
    const auto& a = spec.generator_args();
    switch (spec.generator()) {
    case seq::Generator::poly: return QPoly(a);
    case seq::Generator::one: return QPoly{1};
    case seq::Generator::power: {
        // (k + a)^s for integer s >= 0
        const BigRational& s = a[1];
        if (!is_integer(s) || s < 0 || !mpz_fits_slong_p(s.get_num_mpz_t()))
            return std::nullopt;
        QPoly base{a[0], 1}, p{1};
        for (long i = 0; i < s.get_num().get_si(); ++i)
            p = p * base;
        return p;
    }
    default: return std::nullopt;
    }
}

inline std::vector<BigInt> divisors(BigInt n)
{
    if (n < 0)
        n = -n;
    std::vector<BigInt> d;
    if (n == 0 || n > BigInt("1000000000000"))
        return d;
    for (BigInt i = 1; i * i <= n; ++i) {
        if (n % i == 0) {
            d.push_back(i);
            if (i * i != n)
                d.push_back(n / i);
        }
    }
    return d;
}

/// A rational root -rho <= 0 of q, if the rational root test finds one.
inline std::optional<BigRational> nonpositive_rational_root(const QPoly& q)
{
    ZPoly z = primitive_part(q);
    if (z[0] == 0)
        return BigRational(0);
    for (const BigInt& p : divisors(z[0]))
        for (const BigInt& d : divisors(z.leading())) {
            BigRational cand = -make_rational(p, d);
            if (q.evaluate(cand) == 0)
                return cand;
        }
    return std::nullopt;
}

inline QPoly scale_argument(const QPoly& q, const BigRational& c)
{
    std::vector<BigRational> v(static_cast<std::size_t>(q.degree()) + 1);
    for (int i = 0; i <= q.degree(); ++i)
        v[i] = q[i] * pow(c, i);
    return QPoly(std::move(v));
}

} // namespace detail

/// C_k-representation of a polynomially interpolated sequence, via
/// (poly_times_exp(p~), one, 1, 0), or of a geometric sequence r^k with
/// r in [0, 2], via (one, one, t, 2 - t - r). Every witness is checked
/// exactly for k <= verify_through.
inline CkRepresentation ck_represent(const SequenceSpec& spec, long verify_through = 25)
{
    CkRepresentation rep;
    std::vector<BigRational> target;
    auto values = spec.terms(static_cast<std::size_t>(verify_through) + 1, 64);
    for (const auto& v : values) {
        if (!v.exact)
            throw DomainError("ck_represent needs an exact sequence");
        target.push_back(*v.exact);
    }
    if (spec.generator() == seq::Generator::geometric && spec.transform_count() == 0) {
        const BigRational r = spec.generator_args()[0];
        if (r < 0 || r > 2)
            throw DomainError("out of construction range: geometric ratio " + to_fraction_string(r) + " outside [0, 2]");
        BigRational lo = std::max(BigRational(0), BigRational(1 - r)), hi = std::min(BigRational(1), BigRational(2 - r));
        rep.witness.t = (lo + hi) / 2;
        rep.witness.s = 2 - rep.witness.t - r;
    } else if (auto p = detail::interpolating_poly(spec)) {
        for (const auto& v : target)
            if (v < 0)
                throw DomainError("ck_represent needs nonnegative terms");
        QPoly tilde = jensen::poly_tilde(*p);
        rep.witness.phi = LPFunction::poly_times_exp(tilde);
        rep.witness.Phi = LPFunction::one();
        rep.witness.t = 1;
        rep.witness.s = 0;
        if (tilde.degree() >= 2) {
            if (auto root = detail::nonpositive_rational_root(tilde)) {
                QPoly lin{-*root, 1};
                auto [quot, rem] = divmod(tilde, lin);
                bool nonneg = rem.is_zero();
                for (int i = 0; nonneg && i <= quot.degree(); ++i)
                    nonneg = quot[i] >= 0;
                if (nonneg) {
                    // phi(x/2) Phi(x/2) = p~(x) with t = s = 1/2
                    CkWitness alt;
                    alt.phi = LPFunction::poly_times_exp(detail::scale_argument(lin, 2));
                    alt.Phi = LPFunction::poly_times_exp(detail::scale_argument(quot, 2));
                    alt.t = make_rational(1, 2);
                    alt.s = make_rational(1, 2);
                    rep.alternative = alt;
                }
            }
        }
    } else {
        throw DomainError("ck_represent needs a polynomially interpolated or geometric sequence, got " + spec.to_string());
    }
    auto check = [&](const CkWitness& w) {
        for (long k = 0; k <= verify_through; ++k)
            if (c_family_exact(w.phi, w.Phi, w.t, w.s, k) != target[k])
                throw DomainError("internal: C_k witness " + w.to_string() + " fails at k = " + std::to_string(k));
    };
    check(rep.witness);
    if (rep.alternative)
        check(*rep.alternative);
    rep.verified_through = verify_through;
    return rep;
}

// Closed forms for phi = Phi -------------------------------------------------

/// (1-s)^k sum_j C(k,j) c3^j g_j(c1) g_{k-j}(c2), c1 = t/(1-t), c2 = s/(1-s), c3 = (1-t)/(1-s).
inline BigRational c_family_jensen_form(const LPFunction& phi, const BigRational& t, const BigRational& s, long k)
{
    require_k(k);
    if (t == 1 || s == 1)
        throw DomainError("Jensen form needs t, s != 1");
    const BigRational c1 = t / (1 - t), c2 = s / (1 - s), c3 = (1 - t) / (1 - s);
    auto row = binomial_row(static_cast<unsigned long>(k));
    BigRational sum = 0;
    for (long j = 0; j <= k; ++j)
        sum += BigRational(row[j]) * pow(c3, j) * jensen_value(phi, j, c1) * jensen_value(phi, k - j, c2);
    return pow(1 - s, k) * sum;
}

/// phi = sq_fact: (1-s)^k sum_j C(k,j) ((1-t)/(1-s))^j L_j(t/(t-1)) L_{k-j}(s/(s-1)).
inline BigRational equal_pair_laguerre(const BigRational& t, const BigRational& s, long k)
{
    require_k(k);
    if (t == 1 || s == 1)
        throw DomainError("Laguerre closed form needs t, s != 1");
    const BigRational c3 = (1 - t) / (1 - s), xt = t / (t - 1), xs = s / (s - 1);
    auto row = binomial_row(static_cast<unsigned long>(k));
    BigRational sum = 0;
    for (long j = 0; j <= k; ++j)
        sum += BigRational(row[j]) * pow(c3, j) * specfun::laguerre_poly(j).evaluate(xt) * specfun::laguerre_poly(k - j).evaluate(xs);
    return pow(1 - s, k) * sum;
}

/// phi = even_fact: the same shape with 1F1(-j; 1/2; t/(4(t-1))), evaluated numerically.
inline HPFloat equal_pair_hyp1F1(const BigRational& t, const BigRational& s, long k, Bits bits = 256)
{
    require_k(k);
    if (t == 1 || s == 1)
        throw DomainError("1F1 closed form needs t, s != 1");
    const HPFloat half = HPFloat::exact(make_rational(1, 2), bits);
    const HPFloat zt = HPFloat::exact(t / (4 * (t - 1)), bits), zs = HPFloat::exact(s / (4 * (s - 1)), bits);
    const BigRational c3 = (1 - t) / (1 - s);
    auto row = binomial_row(static_cast<unsigned long>(k));
    HPFloat sum = HPFloat::exact(0, bits);
    for (long j = 0; j <= k; ++j) {
        HPFloat a = specfun::hyp1F1(HPFloat::exact(-j, bits), half, zt);
        HPFloat b = specfun::hyp1F1(HPFloat::exact(-(k - j), bits), half, zs);
        sum += HPFloat::exact(BigRational(row[j]) * pow(c3, j), bits) * a * b;
    }
    return HPFloat::exact(pow(1 - s, k), bits) * sum;
}

/// phi = exp_r: (2 + (s + t)(r - 1))^k.
inline BigRational equal_pair_exp(const BigRational& r, const BigRational& t, const BigRational& s, long k)
{
    require_k(k);
    return pow(2 + (s + t) * (r - 1), k);
}

} // namespace lpkit::families
