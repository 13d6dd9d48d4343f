#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "permubuf/checked_math.hpp"
#include "permubuf/errors.hpp"

namespace permubuf {

// Lexicographic rank/unrank over permutations of (0, 1, ..., m-1), using the
// factorial number system. Rank 0 is the identity; rank m!-1 is the reversal.

inline std::vector<int> unrank_permutation(int m, exact_int rank) {
    const exact_int total = factorial(m);
    if (rank < 0 || rank >= total)
        throw invalid_parameter_error("permutation rank " + std::to_string(rank) +
                                      " out of range [0, " + std::to_string(total) + ")");
    std::vector<int> pool(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) pool[static_cast<std::size_t>(i)] = i;
    std::vector<int> perm;
    perm.reserve(static_cast<std::size_t>(m));
    exact_int radix = total;
    for (int i = m; i >= 1; --i) {
        radix /= i;
        const auto digit = static_cast<std::size_t>(rank / radix);
        rank %= radix;
        perm.push_back(pool[digit]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
    }
    return perm;
}

inline exact_int rank_permutation(const std::vector<int>& perm) {
    const int m = static_cast<int>(perm.size());
    std::vector<int> pool(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) pool[static_cast<std::size_t>(i)] = i;
    exact_int rank = 0;
    exact_int radix = factorial(m);
    for (int i = m; i >= 1; --i) {
        radix /= i;
        const auto it = std::find(pool.begin(), pool.end(), perm[static_cast<std::size_t>(m - i)]);
        if (it == pool.end())
            throw invalid_permutation_error("not a permutation of [0, m)");
        rank += radix * (it - pool.begin());
        pool.erase(it);
    }
    return rank;
}

} // namespace permubuf
