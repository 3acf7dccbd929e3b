#include "steinauth/design.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "steinauth/error.hpp"

namespace steinauth {

void Design::check_structure() const {
    if (t < 1 || t > k || k > v)
        fail(ErrorKind::Structural, "design parameters violate 1 <= t <= k <= v (t=" + std::to_string(t) +
                                        ", k=" + std::to_string(k) + ", v=" + std::to_string(v) + ")");
    std::set<Subset> seen;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Subset& blk = blocks[i];
        const std::string where = "block " + std::to_string(i);
        if (static_cast<int>(blk.size()) != k)
            fail(ErrorKind::Structural, where + " has " + std::to_string(blk.size()) + " points, expected " + std::to_string(k));
        for (std::size_t j = 0; j < blk.size(); ++j) {
            if (blk[j] < 0 || blk[j] >= v)
                fail(ErrorKind::Structural, where + " has point " + std::to_string(blk[j]) + " outside [0, " + std::to_string(v) + ")");
            if (j > 0 && blk[j] <= blk[j - 1])
                fail(ErrorKind::Structural, where + " is not strictly increasing");
        }
        if (!seen.insert(blk).second) fail(ErrorKind::Structural, where + " repeats an earlier block");
    }
}

void Design::canonicalize() { std::sort(blocks.begin(), blocks.end()); }

namespace {

/// Count of blocks through each s-subset, indexed by colex rank.
std::vector<std::uint64_t> subset_counts(const Design& d, int s) {
    std::vector<std::uint64_t> counts(binomial(d.v, s), 0);
    for (const Subset& blk : d.blocks)
        for_each_subset(std::span<const Point>(blk), s, [&](const Subset& sub) { ++counts[colex_rank(sub)]; });
    return counts;
}

}  // namespace

DesignReport verify_design(const Design& candidate) {
    candidate.check_structure();
    DesignReport report;
    const std::vector<std::uint64_t> counts = subset_counts(candidate, candidate.t);
    for (std::uint64_t rank = 0; rank < counts.size(); ++rank)
        if (counts[rank] != candidate.lambda) report.violations.push_back({colex_unrank(rank, candidate.t), counts[rank]});
    report.is_valid = report.violations.empty();

    report.lambda_profile.resize(static_cast<std::size_t>(candidate.t) + 1);
    for (int s = 0; s <= candidate.t; ++s) {
        const std::vector<std::uint64_t> c = s == candidate.t ? counts : subset_counts(candidate, s);
        if (!c.empty() && std::all_of(c.begin(), c.end(), [&](std::uint64_t x) { return x == c.front(); }))
            report.lambda_profile[static_cast<std::size_t>(s)] = c.front();
    }

    const auto& prof = report.lambda_profile;
    const std::uint64_t b = candidate.b();
    const std::uint64_t v = static_cast<std::uint64_t>(candidate.v);
    const std::uint64_t k = static_cast<std::uint64_t>(candidate.k);
    report.identities.bk_equals_vr = prof[1].has_value() && b * k == v * *prof[1];
    report.identities.subsets_equal_block_count =
        binomial(candidate.v, candidate.t) * candidate.lambda == b * binomial(candidate.k, candidate.t);
    if (candidate.t >= 2)
        report.identities.r_equals_lambda2_ratio =
            prof[1].has_value() && prof[2].has_value() && *prof[1] * (k - 1) == *prof[2] * (v - 1);
    return report;
}

std::uint64_t lambda_s(const Design& design, int s) {
    if (s < 0 || s > design.t)
        fail(ErrorKind::Parameter, "lambda_s needs 0 <= s <= t (s=" + std::to_string(s) + ", t=" + std::to_string(design.t) + ")");
    const std::uint64_t num = design.lambda * binomial(design.v - s, design.t - s);
    const std::uint64_t den = binomial(design.k - s, design.t - s);
    if (num % den != 0) fail(ErrorKind::Parameter, "lambda_s is not an integer for these parameters");
    return num / den;
}

Design construct_sts(int v) {
    if (v < 7 || (v % 6 != 1 && v % 6 != 3))
        fail(ErrorKind::Admissibility, "STS(" + std::to_string(v) + ") needs v = 1 or 3 (mod 6) and v >= 7; got v mod 6 = " +
                                           std::to_string(((v % 6) + 6) % 6));
    Design d{2, v, 3, 1, {}};
    // point (x, i) of Q x Z_3 is 3x + i; the extra point of Skolem's construction is v-1
    auto pt = [](int x, int i) { return 3 * x + (i % 3); };
    auto add = [&](Point a, Point b, Point c) {
        Subset blk{a, b, c};
        std::sort(blk.begin(), blk.end());
        d.blocks.push_back(blk);
    };
    if (v % 6 == 3) {
        const int q = v / 3;  // 2n+1, idempotent commutative quasigroup x o y = (x+y)(n+1)
        const int half = (q + 1) / 2;
        auto op = [&](int x, int y) { return ((x + y) * half) % q; };
        for (int x = 0; x < q; ++x) add(pt(x, 0), pt(x, 1), pt(x, 2));
        for (int i = 0; i < 3; ++i)
            for (int x = 0; x < q; ++x)
                for (int y = x + 1; y < q; ++y) add(pt(x, i), pt(y, i), pt(op(x, y), i + 1));
    } else {
        const int n = (v - 1) / 6;
        const int q = 2 * n;  // half-idempotent commutative quasigroup from Z_2n
        auto op = [&](int x, int y) {
            const int s = (x + y) % q;
            return s % 2 == 0 ? s / 2 : n + s / 2;
        };
        const Point inf = v - 1;
        for (int x = 0; x < n; ++x) add(pt(x, 0), pt(x, 1), pt(x, 2));
        for (int i = 0; i < 3; ++i)
            for (int x = 0; x < n; ++x) add(inf, pt(x + n, i), pt(x, i + 1));
        for (int i = 0; i < 3; ++i)
            for (int x = 0; x < q; ++x)
                for (int y = x + 1; y < q; ++y) add(pt(x, i), pt(y, i), pt(op(x, y), i + 1));
    }
    d.canonicalize();
    return d;
}

Design construct_boolean_sqs(int d) {
    if (d < 3) fail(ErrorKind::Parameter, "boolean SQS(2^d) needs d >= 3, got d=" + std::to_string(d));
    if (d > 20) fail(ErrorKind::Parameter, "boolean SQS(2^d) with d > 20 is too large");
    const int v = 1 << d;
    Design out{3, v, 4, 1, {}};
    // a < b < c and d = a^b^c > c enumerates each zero-sum 4-subset once
    for (Point a = 0; a < v; ++a)
        for (Point b = a + 1; b < v; ++b)
            for (Point c = b + 1; c < v; ++c) {
                const Point x = a ^ b ^ c;
                if (x > c) out.blocks.push_back({a, b, c, x});
            }
    out.canonicalize();
    return out;
}

std::vector<std::vector<std::pair<Point, Point>>> one_factorization(int v) {
    if (v < 2 || v % 2 != 0) fail(ErrorKind::Parameter, "1-factorization needs an even v >= 2, got " + std::to_string(v));
    const int m = v - 1;  // points 0..m-1 on the circle, m is the centre
    std::vector<std::vector<std::pair<Point, Point>>> factors(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        auto& f = factors[static_cast<std::size_t>(i)];
        f.emplace_back(std::min(i, m), std::max(i, m));
        for (int j = 1; j <= (v - 2) / 2; ++j) {
            const Point a = (i + j) % m;
            const Point b = ((i - j) % m + m) % m;
            f.emplace_back(std::min(a, b), std::max(a, b));
        }
    }
    return factors;
}

Design double_sqs(const Design& base) {
    if (base.t != 3 || base.k != 4 || base.lambda != 1)
        fail(ErrorKind::Parameter, "doubling needs a 3-(v,4,1) design");
    if (!verify_design(base).is_valid) fail(ErrorKind::Parameter, "doubling input is not a Steiner quadruple system");
    const int v = base.v;
    Design out{3, 2 * v, 4, 1, {}};
    out.blocks.reserve(2 * base.b() + static_cast<std::size_t>(v - 1) * static_cast<std::size_t>(v / 2) * static_cast<std::size_t>(v / 2));
    for (const Subset& blk : base.blocks) {
        out.blocks.push_back(blk);
        Subset shifted = blk;
        for (Point& p : shifted) p += v;
        out.blocks.push_back(shifted);
    }
    for (const auto& factor : one_factorization(v))
        for (const auto& [a, b] : factor)
            for (const auto& [c, d] : factor) out.blocks.push_back({a, b, c + v, d + v});
    out.canonicalize();
    return out;
}

CubeBlockType classify_cube_block(const Subset& block) {
    if (block.size() != 4 || std::any_of(block.begin(), block.end(), [](Point p) { return p < 0 || p >= 8; }))
        fail(ErrorKind::Parameter, "cube classification needs a 4-subset of {0..7}");
    for (int bit = 0; bit < 3; ++bit) {
        const int first = (block[0] >> bit) & 1;
        if (std::all_of(block.begin(), block.end(), [&](Point p) { return ((p >> bit) & 1) == first; }))
            return CubeBlockType::Face;
    }
    const auto parity = [](Point p) { return __builtin_popcount(static_cast<unsigned>(p)) & 1; };
    if (std::all_of(block.begin(), block.end(), [&](Point p) { return parity(p) == parity(block[0]); }))
        return CubeBlockType::Tetrahedron;
    return CubeBlockType::OppositeEdges;
}

CubeCensus cube_census(const Design& sqs8) {
    CubeCensus c;
    for (const Subset& blk : sqs8.blocks) {
        switch (classify_cube_block(blk)) {
            case CubeBlockType::Face: ++c.faces; break;
            case CubeBlockType::OppositeEdges: ++c.opposite_edges; break;
            case CubeBlockType::Tetrahedron: ++c.tetrahedra; break;
        }
    }
    return c;
}

}  // namespace steinauth
