#include "doctest.h"

#include <set>

#include "oracles.hpp"
#include "steinauth/combinatorics.hpp"
#include "steinauth/design.hpp"
#include "steinauth/error.hpp"

using namespace steinauth;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Usage;
}

}  // namespace

TEST_CASE("binomial and colex ranks") {
    CHECK(binomial(26, 3) == 2600);
    CHECK(binomial(4, 5) == 0);
    CHECK(binomial(5, -1) == 0);
    for (int r = 1; r <= 3; ++r) {
        const auto all = all_subsets(7, r);
        REQUIRE(all.size() == oracle::choose(7, r));
        CHECK(all == oracle::subsets(7, r));
        std::set<std::uint64_t> ranks;
        for (const auto& s : all) {
            const auto rank = colex_rank(s);
            CHECK(colex_unrank(rank, r) == s);
            ranks.insert(rank);
        }
        CHECK(ranks.size() == all.size());
        CHECK(*ranks.rbegin() == all.size() - 1);
    }
}

TEST_CASE("Fano plane") {
    const Design fano = construct_sts(7);
    CHECK(fano.b() == 7);
    CHECK(oracle::is_steiner(fano));
    const auto report = verify_design(fano);
    CHECK(report.is_valid);
    CHECK(report.violations.empty());
    CHECK(report.identities.bk_equals_vr);
    CHECK(report.identities.subsets_equal_block_count);
    CHECK(report.identities.r_equals_lambda2_ratio == true);
}

TEST_CASE("Steiner triple systems of both residues") {
    for (int v : {7, 9, 13, 15, 19, 21, 25, 27}) {
        CAPTURE(v);
        const Design d = construct_sts(v);
        CHECK(d.b() == oracle::choose(v, 2) / 3);
        CHECK(oracle::is_steiner(d));
        CHECK(verify_design(d).is_valid);
    }
    CHECK(kind_of([] { construct_sts(8); }) == ErrorKind::Admissibility);
    CHECK(kind_of([] { construct_sts(11); }) == ErrorKind::Admissibility);
}

TEST_CASE("lambda_s agrees with brute-force block counts") {
    const std::vector<Design> designs{construct_sts(7), construct_sts(13), construct_boolean_sqs(3),
                                      construct_boolean_sqs(4), double_sqs(construct_boolean_sqs(3))};
    for (const auto& d : designs) {
        CAPTURE(d.v);
        const auto report = verify_design(d);
        for (int s = 0; s <= d.t; ++s) {
            const auto counts = oracle::block_counts(d, s);
            REQUIRE(counts.size() == 1);
            CHECK(lambda_s(d, s) == *counts.begin());
            CHECK(report.lambda_profile[static_cast<std::size_t>(s)] == *counts.begin());
        }
    }
}

TEST_CASE("boolean SQS(8) and its cube census") {
    const Design sqs8 = construct_boolean_sqs(3);
    CHECK(sqs8.t == 3);
    CHECK(sqs8.b() == 14);
    CHECK(oracle::is_steiner(sqs8));
    for (const auto& block : sqs8.blocks) CHECK((block[0] ^ block[1] ^ block[2] ^ block[3]) == 0);
    const auto census = cube_census(sqs8);
    CHECK(census.faces == 6);
    CHECK(census.opposite_edges == 6);
    CHECK(census.tetrahedra == 2);
    CHECK(classify_cube_block({0, 1, 2, 3}) == CubeBlockType::Face);
    CHECK(classify_cube_block({0, 1, 6, 7}) == CubeBlockType::OppositeEdges);
    CHECK(classify_cube_block({0, 3, 5, 6}) == CubeBlockType::Tetrahedron);
}

TEST_CASE("one-factorization covers every pair once") {
    for (int v : {2, 4, 8, 16}) {
        const auto factors = one_factorization(v);
        REQUIRE(factors.size() == static_cast<std::size_t>(v - 1));
        std::set<std::pair<Point, Point>> pairs;
        for (const auto& f : factors) {
            CHECK(f.size() == static_cast<std::size_t>(v / 2));
            std::set<Point> touched;
            for (auto [a, b] : f) {
                touched.insert(a);
                touched.insert(b);
                pairs.insert({std::min(a, b), std::max(a, b)});
            }
            CHECK(touched.size() == static_cast<std::size_t>(v));
        }
        CHECK(pairs.size() == oracle::choose(v, 2));
    }
}

TEST_CASE("doubling") {
    const Design sqs16 = double_sqs(construct_boolean_sqs(3));
    CHECK(sqs16.v == 16);
    CHECK(sqs16.b() == 140);
    CHECK(oracle::is_steiner(sqs16));
    const Design sqs32 = double_sqs(sqs16);
    CHECK(sqs32.b() == 1240);
    CHECK(verify_design(sqs32).is_valid);
    CHECK(kind_of([] { double_sqs(construct_sts(7)); }) == ErrorKind::Parameter);
}

TEST_CASE("verify_design reports a witness for a damaged design") {
    Design d = construct_boolean_sqs(3);
    d.blocks.pop_back();
    const auto report = verify_design(d);
    CHECK_FALSE(report.is_valid);
    REQUIRE_FALSE(report.violations.empty());
    CHECK(report.violations.front().observed == 0);
    CHECK_FALSE(report.identities.subsets_equal_block_count);

    Design bad = construct_sts(7);
    bad.blocks[0] = {0, 0, 1};
    CHECK(kind_of([&] { bad.check_structure(); }) == ErrorKind::Structural);
}
