#pragma once

#include <vector>

#include "lpkit/error.hpp"
#include "lpkit/rational.hpp"

namespace lpkit::specfun {

/// Stirling numbers of the second kind, S2(k, j) for 0 <= j <= k <= n, by
/// the recurrence S2(k, j) = j S2(k-1, j) + S2(k-1, j-1).
inline std::vector<std::vector<BigInt>> stirling2_table(unsigned long n)
{
    std::vector<std::vector<BigInt>> s(n + 1);
    s[0] = {1};
    for (unsigned long k = 1; k <= n; ++k) {
        s[k].assign(k + 1, 0);
        for (unsigned long j = 1; j <= k; ++j) {
            BigInt prev = j < k ? s[k - 1][j] : BigInt(0);
            s[k][j] = BigInt(j) * prev + s[k - 1][j - 1];
        }
    }
    return s;
}

inline BigInt stirling2(unsigned long k, unsigned long j)
{
    if (j > k)
        return 0;
    return stirling2_table(k)[k][j];
}

} // namespace lpkit::specfun
