#pragma once

// Test-only oracles built by direct enumeration of S_n. Everything here is
// independent of the library's counting and sampling paths: permutations
// come from std::next_permutation and cycle types from explicit cycle
// chasing. Feasible up to n = 8 (40320 permutations).

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

namespace brute {

inline std::map<long, long> cycle_type(const std::vector<int>& perm) {
    std::map<long, long> type;
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        long len = 0;
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<std::size_t>(perm[j]);
            ++len;
        }
        type[len] += 1;
    }
    return type;
}

template <typename Visit>
void for_each_permutation(int n, Visit&& visit) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    do {
        visit(p);
    } while (std::next_permutation(p.begin(), p.end()));
}

/// Number of permutations of S_n with all cycle lengths <= alpha.
inline long count_constrained(int n, int alpha) {
    if (n == 0) return 1;
    long count = 0;
    for_each_permutation(n, [&](const std::vector<int>& p) {
        auto t = cycle_type(p);
        if (t.rbegin()->first <= alpha) ++count;
    });
    return count;
}

/// Law of the full cycle type on S_{n,alpha}: type -> #permutations.
inline std::map<std::map<long, long>, long> cycle_type_counts(int n, int alpha) {
    std::map<std::map<long, long>, long> law;
    for_each_permutation(n, [&](const std::vector<int>& p) {
        auto t = cycle_type(p);
        if (t.rbegin()->first <= alpha) law[t] += 1;
    });
    return law;
}

/// Law of (C_1..C_b) on S_{n,alpha}: prefix vector -> #permutations.
inline std::map<std::vector<long>, long> prefix_counts(int n, int alpha, int b) {
    std::map<std::vector<long>, long> law;
    std::vector<long> key(static_cast<std::size_t>(b));
    for_each_permutation(n, [&](const std::vector<int>& p) {
        auto t = cycle_type(p);
        if (t.rbegin()->first > alpha) return;
        std::fill(key.begin(), key.end(), 0);
        for (auto& [j, c] : t)
            if (j <= b) key[static_cast<std::size_t>(j - 1)] = c;
        law[key] += 1;
    });
    return law;
}

}  // namespace brute
