#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace steinauth {

using Point = std::int32_t;
using Subset = std::vector<Point>;

/// Binomial coefficient C(n, r); 0 when r < 0 or r > n. Throws on uint64 overflow.
std::uint64_t binomial(std::int64_t n, std::int64_t r);

/// Colex rank of a strictly increasing subset: sum_i C(s[i], i+1).
/// Dense in [0, C(n, |s|)) for subsets of {0..n-1}.
std::uint64_t colex_rank(std::span<const Point> subset);

/// Inverse of colex_rank for subsets of the given size.
Subset colex_unrank(std::uint64_t rank, int size);

/// All r-subsets of {0..n-1} in lexicographic order.
std::vector<Subset> all_subsets(int n, int r);

/// Calls f(subset) for every r-subset of `items`, in lexicographic position order.
/// `items` should be sorted if sorted subsets are wanted.
template <typename F>
void for_each_subset(std::span<const Point> items, int r, F&& f) {
    const std::size_t n = items.size();
    if (r < 0 || static_cast<std::size_t>(r) > n) return;
    const std::size_t m = static_cast<std::size_t>(r);
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    Subset cur(m);
    while (true) {
        for (std::size_t i = 0; i < m; ++i) cur[i] = items[idx[i]];
        f(static_cast<const Subset&>(cur));
        std::size_t i = m;
        while (i > 0 && idx[i - 1] == n - m + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace steinauth
