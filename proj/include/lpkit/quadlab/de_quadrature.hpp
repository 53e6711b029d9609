#pragma once

#include <cmath>
#include <functional>

#include "lpkit/error.hpp"
#include "lpkit/real.hpp"

namespace lpkit::quad {

struct QuadResult {
    HPFloat value;
    HPFloat abs_err_est;
    long nodes = 0;
    bool converged = false;
    int levels = 0;
};

/// Abscissa with its distances to both ends of the interval, so integrands
/// with endpoint singularities can avoid forming 1 - x by subtraction.
struct Node {
    Real x;
    Real from_left;
    Real to_right; // +inf on half-lines
};

using Integrand = std::function<Real(const Node&)>;

struct QuadOptions {
    Bits bits = 128;
    int max_level = 12;
    int min_level = 3;
    double t_max = 8.0;
};

namespace detail {

inline Real real_inf(Bits bits)
{
    Real r(bits);
    mpfr_set_inf(r.get(), 1);
    return r;
}

/// Negligible-term threshold relative to the running sum.
inline bool negligible(const Real& term, const Real& sum, Bits bits)
{
    if (term.is_zero())
        return true;
    Real a = abs(term), s = abs(sum);
    if (s.is_zero())
        return a.exponent() < -static_cast<long>(bits) - 20;
    return a.exponent() < s.exponent() - static_cast<long>(bits) - 4;
}

/// Runs the level-doubling trapezoid in t over the nodes produced by `at`,
/// which maps t to (node, weight). Each side stops once two consecutive
/// contributions are negligible or t exceeds t_max.
template <class NodeAt>
QuadResult de_levels(NodeAt at, const Integrand& f, double tol, const QuadOptions& opt)
{
    const Bits bits = opt.bits;
    Real total(bits); // sum of w f over all nodes so far
    Real prev_estimate(bits);
    QuadResult r;
    auto side = [&](double t0, double dt, Real& acc) {
        int quiet = 0;
        for (double t = t0; std::abs(t) <= opt.t_max; t += dt) {
            auto [node, w] = at(t);
            if (w.is_zero())
                break;
            Real c = w * f(node);
            ++r.nodes;
            acc += c;
            if (negligible(c, total.is_zero() ? acc : total, bits)) {
                if (++quiet >= 2)
                    break;
            } else {
                quiet = 0;
            }
        }
    };
    for (int level = 0; level <= opt.max_level; ++level) {
        const double h = std::ldexp(1.0, -level);
        Real add(bits);
        if (level == 0) {
            auto [node, w] = at(0.0);
            add += w * f(node);
            ++r.nodes;
            side(1.0, 1.0, add);
            side(-1.0, -1.0, add);
        } else {
            side(h, 2 * h, add);
            side(-h, -2 * h, add);
        }
        total += add;
        Real estimate = total * Real::from_double(h, bits);
        r.levels = level + 1;
        if (level > 0) {
            Real diff = abs(estimate - prev_estimate);
            Real floor = abs(estimate);
            mpfr_mul_2si(floor.get(), floor.get(), 16 - static_cast<long>(bits), MPFR_RNDU);
            if (diff < floor)
                diff = floor;
            r.abs_err_est = HPFloat(diff.rounded(HPFloat::err_bits, MPFR_RNDU), Real(0, HPFloat::err_bits));
            r.value = HPFloat(estimate, diff.rounded(HPFloat::err_bits, MPFR_RNDU));
            if (level >= opt.min_level && diff.to_double() <= tol) {
                r.converged = true;
                return r;
            }
        }
        prev_estimate = estimate;
    }
    return r;
}

} // namespace detail

/// tanh-sinh on [a, b]: x = c + h tanh(pi/2 sinh t).
inline QuadResult tanh_sinh(const Integrand& f, const Real& a, const Real& b, double tol, const QuadOptions& opt = {})
{
    if (!(a < b))
        throw DomainError("tanh_sinh needs a < b");
    const Bits bits = opt.bits;
    const Real len = (b - a).rounded(bits);
    const Real half_pi = ldexp(const_pi(bits), -1);
    const Real one(1, bits);
    auto at = [&](double t) {
        Real tt = Real::from_double(t, bits);
        Real u = half_pi * sinh(tt);
        Real e2 = exp(-2 * abs(u)); // exp(-2|u|)
        Real near = len * e2 / (one + e2);
        Real w = len * half_pi * cosh(tt) * 2 * e2 / ((one + e2) * (one + e2));
        Real far = len - near;
        Node n;
        if (t >= 0) {
            n.to_right = near;
            n.from_left = far;
            n.x = b - near;
        } else {
            n.from_left = near;
            n.to_right = far;
            n.x = a + near;
        }
        if (near.is_zero())
            w = Real(0, bits);
        return std::pair<Node, Real>{std::move(n), std::move(w)};
    };
    return detail::de_levels(at, f, tol, opt);
}

/// exp-sinh on [a, inf): x = a + exp(pi/2 sinh t).
inline QuadResult exp_sinh(const Integrand& f, const Real& a, double tol, const QuadOptions& opt = {})
{
    const Bits bits = opt.bits;
    const Real half_pi = ldexp(const_pi(bits), -1);
    auto at = [&](double t) {
        Real tt = Real::from_double(t, bits);
        Real d = exp(half_pi * sinh(tt));
        Real w = half_pi * cosh(tt) * d;
        Node n{a + d, d, detail::real_inf(bits)};
        if (d.is_zero() || !d.is_finite())
            w = Real(0, bits);
        return std::pair<Node, Real>{std::move(n), std::move(w)};
    };
    return detail::de_levels(at, f, tol, opt);
}

/// Scales a result by a constant known to the working precision.
inline QuadResult scaled(QuadResult r, const Real& c)
{
    Real m = abs(c).rounded(HPFloat::err_bits, MPFR_RNDU);
    Real e = r.abs_err_est.value * m;
    r.value = HPFloat(r.value.value * c, e.rounded(HPFloat::err_bits, MPFR_RNDU));
    r.abs_err_est = HPFloat(e.rounded(HPFloat::err_bits, MPFR_RNDU), Real(0, HPFloat::err_bits));
    return r;
}

inline QuadResult combine(const QuadResult& a, const QuadResult& b, int sign_b = 1)
{
    QuadResult r;
    Real e = a.abs_err_est.value + b.abs_err_est.value;
    Real v = sign_b > 0 ? a.value.value + b.value.value : a.value.value - b.value.value;
    r.value = HPFloat(v, e.rounded(HPFloat::err_bits, MPFR_RNDU));
    r.abs_err_est = HPFloat(e.rounded(HPFloat::err_bits, MPFR_RNDU), Real(0, HPFloat::err_bits));
    r.nodes = a.nodes + b.nodes;
    r.converged = a.converged && b.converged;
    r.levels = std::max(a.levels, b.levels);
    return r;
}

} // namespace lpkit::quad
