#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "steinauth/combinatorics.hpp"

namespace steinauth {

/// A t-(v,k,lambda) block design on points 0..v-1. Blocks are strictly
/// increasing k-tuples; the canonical form keeps them in lexicographic order.
struct Design {
    int t = 0;
    int v = 0;
    int k = 0;
    std::uint64_t lambda = 0;
    std::vector<Subset> blocks;

    std::size_t b() const { return blocks.size(); }

    /// Throws ErrorKind::Structural naming the first offending block
    /// (wrong size, unsorted, out of range point, repeated block).
    void check_structure() const;

    /// Sorts blocks lexicographically.
    void canonicalize();

    friend bool operator==(const Design&, const Design&) = default;
};

struct Violation {
    Subset subset;
    std::uint64_t observed = 0;
};

struct IdentityChecks {
    bool bk_equals_vr = false;                 // bk = vr
    bool subsets_equal_block_count = false;    // C(v,t) lambda = b C(k,t)
    std::optional<bool> r_equals_lambda2_ratio;  // r(k-1) = lambda_2 (v-1), only for t >= 2
};

struct DesignReport {
    bool is_valid = false;
    std::vector<Violation> violations;
    /// lambda_profile[s] is the common number of blocks through every
    /// s-subset, or nullopt when that number is not constant.
    std::vector<std::optional<std::uint64_t>> lambda_profile;
    IdentityChecks identities;
};

/// Counts blocks through every t-subset, one pass over the blocks.
DesignReport verify_design(const Design& candidate);

/// lambda_s = lambda C(v-s, t-s) / C(k-s, t-s), for 0 <= s <= t.
std::uint64_t lambda_s(const Design& design, int s);

/// Steiner triple system: Bose construction for v = 3 (mod 6), Skolem for v = 1 (mod 6).
Design construct_sts(int v);

/// Points and planes of AG(d,2): all 4-subsets of Z_2^d with zero vector sum.
Design construct_boolean_sqs(int d);

/// Circle-method 1-factorization of K_v (v even): v-1 perfect matchings.
std::vector<std::vector<std::pair<Point, Point>>> one_factorization(int v);

/// SQS(v) -> SQS(2v): two copies plus crossing blocks {a, b, c+v, d+v}
/// for edges {a,b}, {c,d} of the same 1-factor.
Design double_sqs(const Design& base);

enum class CubeBlockType { Face, OppositeEdges, Tetrahedron };

/// Classifies a block of the boolean SQS(8) by its cube geometry.
CubeBlockType classify_cube_block(const Subset& block);

struct CubeCensus {
    int faces = 0;
    int opposite_edges = 0;
    int tetrahedra = 0;
};

CubeCensus cube_census(const Design& sqs8);

}  // namespace steinauth
