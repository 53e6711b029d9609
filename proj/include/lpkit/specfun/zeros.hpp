#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "lpkit/error.hpp"
#include "lpkit/rational.hpp"
#include "lpkit/specfun/gamma.hpp"
#include "lpkit/specfun/series.hpp"

namespace lpkit::specfun {

struct ZeroWindow {
    BigRational lo;
    BigRational hi;
};

struct ZeroScan {
    int count = 0;
    bool zero_at_origin = false;
    int sign_changes = 0;
    long nodes = 0;
    Bits precision_bits = 0;
    int sign_at_left = 0;
    int expected_left_sign = 0;
};

/// [-max(10, 4(s + a + 1))^2, 0].
inline ZeroWindow default_zero_window(const BigRational& s, const BigRational& a)
{
    BigRational w = 4 * (s + a + 1);
    if (w < 10)
        w = 10;
    return {-(w * w), 0};
}

/// Sign of E_{s,a}(x) as x -> -inf: (-1)^s for integer s >= 0, otherwise the
/// sign of 1/Gamma(-s).
inline int hardy_E_left_sign(const BigRational& s)
{
    if (is_integer(s)) {
        if (s < 0)
            return 1;
        return mpz_odd_p(s.get_num_mpz_t()) ? -1 : 1;
    }
    if (s < 0)
        return 1;
    BigInt k = s.get_num() / s.get_den(); // floor for s > 0
    return mpz_odd_p(k.get_mpz_t()) ? 1 : -1;
}

/// Counts real zeros of E_{s,a} in the window by sign changes of the certified
/// truncation at nodes lo, lo + step, ... up to the right end. For a = 0 the
/// zero at the origin is exact and counted separately. A node whose value is
/// not sign-certified is nudged inside its step; if none certifies, the scan
/// is inconclusive. The left end must show the asymptotic sign, otherwise the
/// window is too short to exclude zeros further left.
inline ZeroScan real_zero_scan(const BigRational& s, const BigRational& a, std::optional<ZeroWindow> window = std::nullopt,
    const BigRational& step = make_rational(1, 4), Bits bits = 256)
{
    if (a < 0)
        throw DomainError("E_{s,a} needs a >= 0");
    if (step <= 0)
        throw DomainError("scan step must be positive");
    ZeroWindow w = window ? *window : default_zero_window(s, a);
    if (w.lo >= w.hi)
        throw DomainError("scan window must have lo < hi");
    if (w.hi > 0)
        w.hi = 0; // E_{s,a} > 0 for x > 0
    ZeroScan r;
    const double span = std::max(std::abs(w.lo.get_d()), std::abs(w.hi.get_d()));
    // terms grow like e^|x|; for integer s >= 0 the value also decays like e^x
    const double decay = is_integer(s) && s >= 0 ? 1.4427 * span : 0;
    r.precision_bits = bits + static_cast<Bits>(std::ceil(1.4427 * span + decay)) + 32;
    detail::HardyCoefficients c(s, a, r.precision_bits);

    auto sign_near = [&](const BigRational& x, const BigRational& limit) {
        static const int nudges[] = {0, 1, 2, 3, 5};
        for (int j : nudges) {
            BigRational y = x + step * make_rational(j, 7);
            if (y > limit)
                break;
            if (y == 0 && a == 0)
                continue;
            SeriesEval e = detail::hardy_E_with(c, HPFloat::exact(y, r.precision_bits));
            int sg = e.value.certain_sign();
            if (sg != 0)
                return sg;
        }
        throw Inconclusive("inconclusive, refine: E_{" + to_fraction_string(s) + "," + to_fraction_string(a)
            + "} not sign-certified near x = " + to_fraction_string(x));
    };

    const bool origin = a == 0 && w.hi == 0;
    const BigRational right = origin ? BigRational(-step / 2) : w.hi;
    int prev = 0;
    auto visit = [&](const BigRational& x, const BigRational& limit) {
        int sg = sign_near(x, limit);
        if (r.nodes == 0)
            r.sign_at_left = sg;
        else if (sg != prev)
            ++r.sign_changes;
        prev = sg;
        ++r.nodes;
    };
    BigRational x = w.lo;
    for (; x <= right; x += step)
        visit(x, std::min(BigRational(x + step), right));
    if (origin) {
        // geometric nodes toward the exact zero at the origin
        BigRational h = x - step;
        for (int j = 0; j < 6; ++j) {
            h /= 2;
            visit(h, h / 2);
        }
    }
    if (r.nodes == 0)
        throw DomainError("scan window holds no nodes");
    r.zero_at_origin = origin;
    r.count = r.sign_changes + (origin ? 1 : 0);
    r.expected_left_sign = hardy_E_left_sign(s);
    if (r.sign_at_left != r.expected_left_sign)
        throw Inconclusive("inconclusive, refine: left end of the window does not show the asymptotic sign");
    return r;
}

} // namespace lpkit::specfun
