#pragma once

// Independent reference computations used only by the tests.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <complex>
#include <vector>

#include "lpkit/poly.hpp"

namespace oracle {

using mp = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<80>, boost::multiprecision::et_off>;
using MpMatrix = Eigen::Matrix<mp, Eigen::Dynamic, Eigen::Dynamic>;

/// Roots of p as eigenvalues of its companion matrix (about 266 bits).
inline std::vector<std::complex<mp>> companion_roots(const lpkit::QPoly& p)
{
    const int n = p.degree();
    MpMatrix m = MpMatrix::Zero(n, n);
    mp lead(p.leading().get_str());
    for (int i = 1; i < n; ++i)
        m(i, i - 1) = 1;
    for (int i = 0; i < n; ++i)
        m(i, n - 1) = -mp(p[i].get_str()) / lead;
    Eigen::EigenSolver<MpMatrix> es(m, false);
    std::vector<std::complex<mp>> out;
    for (int i = 0; i < n; ++i)
        out.emplace_back(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
    return out;
}

/// Distinct real roots: eigenvalues are grouped into clusters (a multiple
/// root splits into a small symmetric cloud); a cluster whose centroid lies on
/// the real axis is one real root.
inline std::size_t companion_distinct_real(const lpkit::QPoly& p, double cluster_tol = 1e-12)
{
    auto z = companion_roots(p);
    std::vector<int> owner(z.size(), -1);
    int clusters = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (owner[i] >= 0)
            continue;
        owner[i] = clusters;
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t j = 0; j < z.size(); ++j) {
                if (owner[j] >= 0)
                    continue;
                for (std::size_t k = 0; k < z.size(); ++k)
                    if (owner[k] == clusters && abs(z[j] - z[k]) < cluster_tol * (1 + abs(z[k]))) {
                        owner[j] = clusters;
                        grew = true;
                        break;
                    }
            }
        }
        ++clusters;
    }
    std::size_t n = 0;
    for (int c = 0; c < clusters; ++c) {
        mp im = 0;
        int m = 0;
        for (std::size_t i = 0; i < z.size(); ++i)
            if (owner[i] == c) {
                im += z[i].imag();
                ++m;
            }
        if (abs(im / m) < 1e-30)
            ++n;
    }
    return n;
}

/// Sign changes of p over a uniform grid on [-B, B]; a lower bound on the
/// number of odd-multiplicity real roots.
inline std::size_t grid_sign_changes(const lpkit::QPoly& p, const lpkit::BigRational& bound, int points)
{
    std::size_t changes = 0;
    int last = 0;
    for (int i = 0; i <= points; ++i) {
        lpkit::BigRational x = -bound + 2 * bound * lpkit::make_rational(i, points);
        int s = sgn(p.evaluate(x));
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++changes;
        last = s;
    }
    return changes;
}

} // namespace oracle

namespace oracle {

/// Coefficient of x^n in q(x) e^x, computed directly from the product.
inline lpkit::BigRational times_exp_coeff(const lpkit::QPoly& q, unsigned long n)
{
    lpkit::BigRational c = 0;
    for (unsigned long j = 0; j <= n && j < q.size(); ++j)
        c += q[j] / lpkit::BigRational(lpkit::factorial(n - j));
    return c;
}

/// p~ through forward differences: p~_j = (Delta^j p)(0) / j!.
inline lpkit::QPoly tilde_by_differences(const lpkit::QPoly& p)
{
    const std::size_t d = p.size();
    std::vector<lpkit::BigRational> vals;
    for (std::size_t k = 0; k < d; ++k)
        vals.push_back(p.evaluate(lpkit::BigRational(static_cast<long>(k))));
    std::vector<lpkit::BigRational> out;
    for (std::size_t j = 0; j < d; ++j) {
        out.push_back(vals[0] / lpkit::BigRational(lpkit::factorial(j)));
        for (std::size_t k = 0; k + 1 < vals.size(); ++k)
            vals[k] = vals[k + 1] - vals[k];
        if (!vals.empty())
            vals.pop_back();
    }
    return lpkit::QPoly(std::move(out));
}

} // namespace oracle
