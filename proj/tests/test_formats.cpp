#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "steinauth/design.hpp"
#include "steinauth/error.hpp"
#include "steinauth/formats.hpp"
#include "steinauth/ordering.hpp"
#include "steinauth/rational.hpp"
#include "steinauth/seed.hpp"
#include "steinauth/steinauth.h"

using namespace steinauth;

namespace {

ErrorKind parse_error_kind(const std::string& text) {
    std::istringstream in(text);
    try {
        read_design(in);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Usage;
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / ("steinauth-tests-" + std::to_string(derive_seed(0, "dir")));
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("rationals stay in lowest terms") {
    CHECK(Rational(2, 4).str() == "1/2");
    CHECK(Rational(3).str() == "3/1");
    CHECK(Rational(-2, -6) == Rational(1, 3));
    CHECK(Rational::parse("6/8") == Rational(3, 4));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("seed derivation is stable and label sensitive") {
    CHECK(derive_seed(42, "anneal", 0) == derive_seed(42, "anneal", 0));
    CHECK(derive_seed(42, "anneal", 0) != derive_seed(42, "anneal", 1));
    CHECK(derive_seed(42, "anneal", 0) != derive_seed(42, "backtrack", 0));
    CHECK(derive_seed(42, "anneal", 0) != derive_seed(43, "anneal", 0));
    CHECK(sa_derive_seed(42, "anneal", 3) == derive_seed(42, "anneal", 3));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        CHECK(uniform_below(rng, 7) < 7);
        const double u = uniform_unit(rng);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("design and matrix files round-trip") {
    const Design d = double_sqs(construct_boolean_sqs(3));
    std::stringstream out;
    write_design(out, d);
    std::istringstream in("# comment\n" + out.str());
    CHECK(read_design(in) == d);

    const auto m = EncodingMatrix::from_sorted_blocks(construct_sts(7));
    std::stringstream mout;
    write_matrix(mout, m);
    std::istringstream min(mout.str());
    CHECK(read_matrix(min) == m);

    const auto dir = scratch_dir();
    const auto path = (dir / "design.txt").string();
    write_design_file(path, d);
    CHECK(read_design_file(path) == d);
    write_matrix_file((dir / "matrix.txt").string(), m);
    CHECK(read_matrix_file((dir / "matrix.txt").string()) == m);
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        CHECK((name == "design.txt" || name == "matrix.txt"));
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("readers accept any block order and reject malformed input") {
    std::istringstream shuffled("2 7 3 1 7\n2 4 6\n0 1 2\n0 3 4\n0 5 6\n1 3 6\n1 4 5\n2 3 5\n");
    Design d = read_design(shuffled);
    CHECK(d.blocks.front() == Subset{2, 4, 6});
    CHECK(verify_design(d).is_valid);
    d.canonicalize();
    CHECK(d == construct_sts(7));

    CHECK(parse_error_kind("2 7 3 1 2\n0 1 2\n0 1 2\n") != ErrorKind::Usage);  // repeated block
    CHECK(parse_error_kind("2 7 3 1 1\n2 1 0\n") != ErrorKind::Usage);        // not increasing
    CHECK(parse_error_kind("2 7 3 1 2\n0 1 2\n") != ErrorKind::Usage);        // too few blocks
    CHECK(parse_error_kind("2 7 x 1 1\n0 1 2\n") != ErrorKind::Usage);
    CHECK(parse_error_kind("2 7 3 1 1\n0 1 9\n") != ErrorKind::Usage);
    CHECK_THROWS_AS(read_design_file("/nonexistent/design.txt"), Error);
}

TEST_CASE("C interface") {
    sa_design* fano = nullptr;
    REQUIRE(sa_design_sts(7, &fano) == SA_OK);
    CHECK(sa_design_get_params(fano).b == 7);
    CHECK(sa_design_verify(fano) == SA_OK);

    sa_matrix* m = nullptr;
    REQUIRE(sa_order(fano, 1, nullptr, &m) == SA_OK);
    CHECK(sa_matrix_rows(m) == 7);
    CHECK(sa_matrix_verify(m, fano, 1) == SA_OK);

    sa_report* r = nullptr;
    REQUIRE(sa_audit(fano, m, 1, 1, SA_METHOD_BAYES, &r) == SA_OK);
    CHECK(sa_report_secrecy_perfect(r) == 1);
    CHECK(sa_report_optimal(r) == 1);
    CHECK(sa_report_spoofing_level(r) == 1);
    sa_report_free(r);
    sa_matrix_free(m);

    sa_design* sqs8 = nullptr;
    REQUIRE(sa_design_boolean_sqs(3, &sqs8) == SA_OK);
    sa_census census{};
    REQUIRE(sa_design_cube_census(sqs8, &census) == SA_OK);
    CHECK(census.faces == 6);
    CHECK(census.opposite_edges == 6);
    CHECK(census.tetrahedra == 2);
    CHECK(sa_order(sqs8, 1, nullptr, &m) == SA_ADMISSIBILITY);
    CHECK(std::string(sa_last_error()).find("8 does not divide 14") != std::string::npos);

    sa_design* none = nullptr;
    CHECK(sa_design_sts(8, &none) == SA_ADMISSIBILITY);
    CHECK(none == nullptr);
    CHECK(sa_design_verify(nullptr) != SA_OK);
    size_t count = 0;
    CHECK(sa_order_symmetries(fano, 1, nullptr, 0, &count) == SA_OK);
    sa_design_free(sqs8);
    sa_design_free(fano);
}
