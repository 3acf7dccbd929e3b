#pragma once

// Straightforward reference computations used to cross-check the library.
// They share no code with the implementations under test beyond the basic
// containers and Rational.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "steinauth/design.hpp"
#include "steinauth/ordering.hpp"
#include "steinauth/rational.hpp"

namespace oracle {

using steinauth::Point;
using steinauth::Rational;
using steinauth::Subset;

inline void subsets_rec(int n, int r, int from, Subset& cur, std::vector<Subset>& out) {
    if (static_cast<int>(cur.size()) == r) {
        out.push_back(cur);
        return;
    }
    for (int x = from; x < n; ++x) {
        cur.push_back(x);
        subsets_rec(n, r, x + 1, cur, out);
        cur.pop_back();
    }
}

inline std::vector<Subset> subsets(int n, int r) {
    std::vector<Subset> out;
    Subset cur;
    subsets_rec(n, r, 0, cur, out);
    return out;
}

inline std::uint64_t choose(int n, int r) {
    if (r < 0 || r > n) return 0;
    std::uint64_t c = 1;
    for (int i = 1; i <= r; ++i) c = c * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
    return c;
}

inline bool contains(const Subset& block, const Subset& s) {
    return std::includes(block.begin(), block.end(), s.begin(), s.end());
}

/// Distinct numbers of blocks through the s-subsets of the point set.
inline std::set<std::uint64_t> block_counts(const steinauth::Design& d, int s) {
    std::set<std::uint64_t> counts;
    for (const auto& sub : subsets(d.v, s)) {
        std::uint64_t c = 0;
        for (const auto& block : d.blocks) c += contains(block, sub) ? 1 : 0;
        counts.insert(c);
    }
    return counts;
}

inline bool is_steiner(const steinauth::Design& d) {
    const auto counts = block_counts(d, d.t);
    return counts.size() == 1 && *counts.begin() == 1;
}

/// Uniform rules, equiprobable sources. P_di by enumerating every i-subset of
/// messages and every candidate insertion.
inline Rational deception(const steinauth::EncodingMatrix& m, int i) {
    const auto b = static_cast<std::int64_t>(m.b());
    std::vector<Subset> valid;
    for (const auto& row : m.rows) {
        Subset s(row.begin(), row.end());
        std::sort(s.begin(), s.end());
        valid.push_back(s);
    }
    const Rational source_prob(1, static_cast<std::int64_t>(choose(m.k, i)));
    Rational total(0);
    for (const auto& observed : subsets(m.v, i)) {
        std::int64_t consistent = 0;
        for (const auto& s : valid) consistent += contains(s, observed) ? 1 : 0;
        if (consistent == 0) continue;
        std::int64_t best = 0;
        for (Point x = 0; x < m.v; ++x) {
            if (std::find(observed.begin(), observed.end(), x) != observed.end()) continue;
            Subset bigger = observed;
            bigger.push_back(x);
            std::sort(bigger.begin(), bigger.end());
            std::int64_t hits = 0;
            for (const auto& s : valid) hits += contains(s, bigger) ? 1 : 0;
            best = std::max(best, hits);
        }
        // p(M*) * payoff = (consistent/b * source_prob) * (best / consistent)
        total += Rational(best, b) * source_prob;
    }
    return total;
}

/// Perfect t*-fold secrecy for every t* <= level, checked as equality of the
/// posterior and prior of every source subset given every observable message
/// subset (uniform rules, equiprobable sources).
inline bool secrecy(const steinauth::EncodingMatrix& m, int level) {
    for (int ts = 1; ts <= level; ++ts) {
        std::map<Subset, std::map<Subset, std::int64_t>> joint;  // messages -> sources -> rules
        std::map<Subset, std::int64_t> seen;
        for (const auto& row : m.rows)
            for (const auto& cols : subsets(m.k, ts)) {
                Subset msgs;
                for (Point c : cols) msgs.push_back(row[static_cast<std::size_t>(c)]);
                std::sort(msgs.begin(), msgs.end());
                ++joint[msgs][cols];
                ++seen[msgs];
            }
        const Rational prior(1, static_cast<std::int64_t>(choose(m.k, ts)));
        for (const auto& [msgs, by_sources] : joint) {
            if (by_sources.size() != choose(m.k, ts)) return false;
            for (const auto& [sources, n] : by_sources)
                if (Rational(n, seen[msgs]) != prior) return false;
        }
    }
    return true;
}

}  // namespace oracle
