#include "steinauth/combinatorics.hpp"

#include <limits>

#include "steinauth/error.hpp"

namespace steinauth {

std::uint64_t binomial(std::int64_t n, std::int64_t r) {
    if (r < 0 || n < 0 || r > n) return 0;
    if (r > n - r) r = n - r;
    unsigned __int128 acc = 1;
    for (std::int64_t i = 1; i <= r; ++i) {
        acc = acc * static_cast<unsigned __int128>(n - r + i) / static_cast<unsigned __int128>(i);
        if (acc > std::numeric_limits<std::uint64_t>::max())
            fail(ErrorKind::Parameter, "binomial coefficient overflows 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

std::uint64_t colex_rank(std::span<const Point> subset) {
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < subset.size(); ++i)
        rank += binomial(subset[i], static_cast<std::int64_t>(i) + 1);
    return rank;
}

Subset colex_unrank(std::uint64_t rank, int size) {
    Subset out(static_cast<std::size_t>(size));
    for (int i = size; i >= 1; --i) {
        // largest c with C(c, i) <= rank
        Point c = i - 1;
        while (binomial(c + 1, i) <= rank) ++c;
        out[static_cast<std::size_t>(i - 1)] = c;
        rank -= binomial(c, i);
    }
    return out;
}

std::vector<Subset> all_subsets(int n, int r) {
    std::vector<Point> items(static_cast<std::size_t>(n > 0 ? n : 0));
    for (int i = 0; i < n; ++i) items[static_cast<std::size_t>(i)] = i;
    std::vector<Subset> out;
    for_each_subset(std::span<const Point>(items), r, [&](const Subset& s) { out.push_back(s); });
    return out;
}

}  // namespace steinauth
