// End-to-end acceptance run: one PASS/FAIL line per criterion. The CLI is
// exercised as a subprocess; its artifacts are re-checked with the library and
// with the brute-force oracles.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "steinauth/audit.hpp"
#include "steinauth/authcode.hpp"
#include "steinauth/design.hpp"
#include "steinauth/exact_cover.hpp"
#include "steinauth/formats.hpp"
#include "steinauth/ordering.hpp"
#include "steinauth/seed.hpp"

#ifndef STEINAUTH_CLI
#error "STEINAUTH_CLI must name the command-line binary"
#endif

namespace fs = std::filesystem;
using namespace steinauth;
using json = nlohmann::json;

namespace {

fs::path work;

struct Outcome {
    int status = -1;
    std::string output;
};

Outcome run(const std::string& args) {
    const fs::path log = work / "cli.log";
    const std::string cmd = std::string("'") + STEINAUTH_CLI + "' " + args + " > '" + log.string() + "' 2>&1";
    const int raw = std::system(cmd.c_str());
    Outcome out;
    out.status = raw != -1 && WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    out.output = ss.str();
    return out;
}

std::string file(const std::string& name) { return (work / name).string(); }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::string& path) { return json::parse(slurp(path)); }

class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }
    bool ok() const { return failures_.empty(); }
    std::string summary() const {
        std::string s;
        for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
        return s;
    }

private:
    std::vector<std::string> failures_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void expect_spoofing(Check& c, const json& report, const std::vector<std::string>& values) {
    const auto& sp = report.at("spoofing");
    c.expect(sp.size() == values.size(), "spoofing orders reported: " + std::to_string(sp.size()));
    for (std::size_t i = 0; i < values.size() && i < sp.size(); ++i) {
        const std::string got = sp[i].at("p_deception");
        c.expect(got == values[i], "P_d" + std::to_string(i) + " = " + got + ", expected " + values[i]);
        c.expect(sp[i].at("massey_bound") == values[i], "bound at order " + std::to_string(i));
        c.expect(sp[i].at("tight") == true, "P_d" + std::to_string(i) + " not tight");
    }
}

void expect_oracle_spoofing(Check& c, const EncodingMatrix& m, const std::vector<std::string>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        c.expect(oracle::deception(m, static_cast<int>(i)) == Rational::parse(values[i]),
                 "brute-force P_d" + std::to_string(i) + " differs");
}

bool identities_hold(const Design& d) {
    const auto r = verify_design(d);
    return r.is_valid && r.identities.bk_equals_vr && r.identities.subsets_equal_block_count &&
           r.identities.r_equals_lambda2_ratio.value_or(true);
}

bool lambda_formula_matches(const Design& d) {
    for (int s = 0; s <= d.t; ++s) {
        const auto counts = oracle::block_counts(d, s);
        if (counts.size() != 1 || *counts.begin() != lambda_s(d, s)) return false;
    }
    return true;
}

// Artifacts shared between criteria.
std::string note;
std::vector<Design> constructed;
std::optional<Design> demo_design;
std::optional<EncodingMatrix> demo_matrix;

std::string fano() {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    auto r = run("construct --family sts --v 7 -o '" + file("fano.txt") + "'");
    c.expect(r.status == 0, "construct exit " + std::to_string(r.status));
    r = run("order --design '" + file("fano.txt") + "' --secrecy-level 1 -o '" + file("fano_matrix.txt") + "'");
    c.expect(r.status == 0, "order exit " + std::to_string(r.status));
    r = run("audit --design '" + file("fano.txt") + "' --matrix '" + file("fano_matrix.txt") +
            "' --max-spoofing-order 1 --secrecy-level 1 --json '" + file("fano.json") + "'");
    c.expect(r.status == 0, "audit exit " + std::to_string(r.status));
    const double elapsed = seconds_since(start);
    if (!c.ok()) return c.summary();

    const Design d = read_design_file(file("fano.txt"));
    const EncodingMatrix m = read_matrix_file(file("fano_matrix.txt"));
    constructed.push_back(d);
    c.expect(d.b() == 7, "blocks: " + std::to_string(d.b()));
    c.expect(oracle::is_steiner(d), "not a 2-(7,3,1) design");
    const json rep = read_json(file("fano.json"));
    expect_spoofing(c, rep, {"3/7", "1/3"});
    expect_oracle_spoofing(c, m, {"3/7", "1/3"});
    c.expect(rep.at("spoofing_security_level") == 1, "spoofing level");
    c.expect(rep.at("secrecy").at("perfect") == true, "one-fold secrecy not perfect");
    c.expect(oracle::secrecy(m, 1), "posterior oracle rejects the ordering");
    c.expect(rep.at("optimal") == true, "not optimal");
    c.expect(oracle::choose(7, 2) / oracle::choose(3, 2) == 7, "bound arithmetic");
    c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
    return c.ok() ? "" : c.summary();
}

std::string sqs8() {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    auto r = run("construct --family sqs-boolean --v 8 -o '" + file("sqs8.txt") + "'");
    c.expect(r.status == 0, "construct exit " + std::to_string(r.status));
    r = run("audit --design '" + file("sqs8.txt") + "' --max-spoofing-order 2 --secrecy-level 0 --json '" + file("sqs8.json") + "'");
    c.expect(r.status == 0, "audit exit " + std::to_string(r.status));
    const auto order = run("order --design '" + file("sqs8.txt") + "' --secrecy-level 1 -o '" + file("sqs8_matrix.txt") + "'");
    const double elapsed = seconds_since(start);
    c.expect(order.status == 2, "order exit " + std::to_string(order.status) + ", expected 2");
    c.expect(order.output.find("8 does not divide 14") != std::string::npos, "order message lacks '8 does not divide 14'");
    c.expect(!fs::exists(file("sqs8_matrix.txt")), "order wrote a matrix");
    if (!c.ok()) return c.summary();

    const Design d = read_design_file(file("sqs8.txt"));
    constructed.push_back(d);
    c.expect(d.b() == 14, "blocks: " + std::to_string(d.b()));
    c.expect(oracle::is_steiner(d), "not a 3-(8,4,1) design");
    const auto census = cube_census(d);
    c.expect(census.faces == 6 && census.opposite_edges == 6 && census.tetrahedra == 2, "census differs from {6,6,2}");
    const json rep = read_json(file("sqs8.json"));
    expect_spoofing(c, rep, {"1/2", "3/7", "1/3"});
    expect_oracle_spoofing(c, EncodingMatrix::from_sorted_blocks(d), {"1/2", "3/7", "1/3"});
    c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
    return c.ok() ? "" : c.summary();
}

std::string doubling() {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    auto r = run("construct --family sqs-double --base '" + file("sqs8.txt") + "' -o '" + file("sqs16.txt") + "'");
    c.expect(r.status == 0, "8 -> 16 exit " + std::to_string(r.status));
    r = run("construct --family sqs-double --base '" + file("sqs16.txt") + "' -o '" + file("sqs32.txt") + "'");
    c.expect(r.status == 0, "16 -> 32 exit " + std::to_string(r.status));
    const double elapsed = seconds_since(start);
    if (!c.ok()) return c.summary();
    const Design d16 = read_design_file(file("sqs16.txt"));
    const Design d32 = read_design_file(file("sqs32.txt"));
    constructed.push_back(d16);
    constructed.push_back(d32);
    c.expect(d16.b() == 140, "SQS(16) blocks: " + std::to_string(d16.b()));
    c.expect(verify_design(d16).is_valid && oracle::is_steiner(d16), "SQS(16) invalid");
    c.expect(d32.b() == 1240, "SQS(32) blocks: " + std::to_string(d32.b()));
    c.expect(verify_design(d32).is_valid, "SQS(32) invalid");
    c.expect(elapsed < 10.0, "runtime " + std::to_string(elapsed) + " s");
    return c.ok() ? "" : c.summary();
}

std::string cyclic() {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    const auto result = construct_cyclic_steiner(3, 26, 4, SolverBudget{50'000'000, 600.0, 0});
    const double elapsed = seconds_since(start);
    c.expect(result.verdict == SearchVerdict::Solved, std::string("verdict ") + to_string(result.verdict));
    if (!c.ok()) return c.summary();
    const Design& d = result.design;
    constructed.push_back(d);
    c.expect(d.b() == 650, "blocks: " + std::to_string(d.b()));
    c.expect(verify_design(d).is_valid && oracle::is_steiner(d), "not a 3-(26,4,1) design");
    std::set<Subset> blocks(d.blocks.begin(), d.blocks.end());
    for (const auto& b : d.blocks) {
        Subset shifted;
        for (Point x : b) shifted.push_back((x + 1) % 26);
        std::sort(shifted.begin(), shifted.end());
        if (!blocks.count(shifted)) {
            c.expect(false, "not closed under x -> x+1");
            break;
        }
    }
    const auto div = divisibility_check(d, 2);
    c.expect(div.size() == 2 && div[0].subsets == 26 && div[0].divides && div[1].subsets == 325 && div[1].divides,
             "divisibility verdicts");
    c.expect(elapsed < 600.0, "runtime " + std::to_string(elapsed) + " s");
    return c.ok() ? "" : c.summary();
}

std::string demo() {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    const auto r = run("demo --v 26 --out-dir '" + file("demo") + "'");
    const double elapsed = seconds_since(start);
    c.expect(r.status == 0, "demo exit " + std::to_string(r.status));
    c.expect(elapsed < 300.0, "runtime " + std::to_string(elapsed) + " s");
    if (r.status != 0) return c.summary();

    demo_design = read_design_file(file("demo/design.txt"));
    demo_matrix = read_matrix_file(file("demo/matrix.txt"));
    const Design& d = *demo_design;
    const EncodingMatrix& m = *demo_matrix;
    constructed.push_back(d);
    c.expect(d.b() == 650 && oracle::is_steiner(d), "design is not a 3-(26,4,1) design with 650 blocks");
    c.expect(verify_ordering(m, d, 2).ok, "verify_ordering rejects the matrix");

    std::map<std::pair<Point, int>, int> points;
    std::map<std::pair<Subset, Subset>, int> pairs;
    for (const auto& row : m.rows)
        for (int a = 0; a < 4; ++a) {
            ++points[{row[static_cast<std::size_t>(a)], a}];
            for (int b = a + 1; b < 4; ++b) {
                Subset msgs{row[static_cast<std::size_t>(a)], row[static_cast<std::size_t>(b)]};
                std::sort(msgs.begin(), msgs.end());
                ++pairs[{msgs, Subset{a, b}}];
            }
        }
    bool points_ok = points.size() == 26 * 4;
    for (const auto& [key, n] : points) points_ok = points_ok && n == 25;
    bool pairs_ok = pairs.size() == 325 * 6;
    for (const auto& [key, n] : pairs) pairs_ok = pairs_ok && n == 2;
    c.expect(points_ok, "some point does not occur 25 times in some column");
    c.expect(pairs_ok, "some message pair does not occur twice in some column pair");

    const auto code = from_matrix_equiprobable(m);
    c.expect(perfect_secrecy_check(code, 2, SecrecyMethod::BayesExact).perfect, "bayes-exact check rejects two-fold secrecy");
    c.expect(oracle::secrecy(m, 2), "posterior oracle rejects two-fold secrecy");

    const json rep = read_json(file("demo/report.json"));
    c.expect(rep.at("params").at("b") == 650, "report b");
    expect_spoofing(c, rep, {"2/13", "3/25", "1/12"});
    expect_oracle_spoofing(c, m, {"2/13", "3/25", "1/12"});
    c.expect(rep.at("spoofing_security_level") == 2, "spoofing level");
    c.expect(rep.at("secrecy").at("perfect") == true && rep.at("secrecy").at("level") == 2 &&
                 rep.at("secrecy").at("method") == "bayes-exact",
             "report secrecy");
    c.expect(rep.at("optimal") == true, "report not optimal");
    c.expect(oracle::choose(26, 3) / oracle::choose(4, 3) == 650 && oracle::choose(26, 3) % oracle::choose(4, 3) == 0,
             "bound arithmetic");
    return c.ok() ? "" : c.summary();
}

std::string tables() {
    Check c;
    for (std::int64_t v : {7, 13, 19}) {
        const auto r = table_regression({"k3", 0, 3, v, v * (v - 1) / 6});
        c.expect(r.matches, "k=3 v=" + std::to_string(v));
    }
    for (std::int64_t v : {13, 25}) {
        const auto r = table_regression({"k4", 0, 4, v, v * (v - 1) / 12});
        c.expect(r.matches, "k=4 v=" + std::to_string(v));
    }
    for (std::int64_t v : {26, 34}) {
        const auto r = table_regression({"sqs", 0, 4, v, v * (v - 1) * (v - 2) / 24});
        c.expect(r.matches, "two-fold k=4 v=" + std::to_string(v));
    }
    c.expect(table_regression({"sqs", 0, 4, 26, 650}).expected_b == 650, "v=26 gives b=650");
    c.expect(table_regression({"sqs", 0, 4, 34, 1496}).expected_b == 1496, "v=34 gives b=1496");
    const struct {
        int t_a, k;
        std::int64_t v, b;
    } literals[] = {{2, 5, 26, 260}, {3, 5, 11, 66}, {3, 7, 23, 253}, {4, 6, 12, 132}};
    for (const auto& l : literals) {
        const auto r = table_regression({"literal", l.t_a, l.k, l.v, l.b});
        c.expect(r.matches, "(" + std::to_string(l.k) + "," + std::to_string(l.v) + "," + std::to_string(l.b) + ")");
    }
    return c.ok() ? "" : c.summary();
}

std::string properties() {
    Check c;
    for (const auto& d : constructed) {
        const std::string name = std::to_string(d.t) + "-(" + std::to_string(d.v) + "," + std::to_string(d.k) + ",1)";
        c.expect(identities_hold(d), "identities fail on " + name);
        if (d.v <= 26) c.expect(lambda_formula_matches(d), "lambda_s differs from block counts on " + name);
    }
    c.expect(constructed.size() >= 6, "only " + std::to_string(constructed.size()) + " constructed designs available");

    std::vector<std::pair<const Design*, EncodingMatrix>> codes;
    const Design fano = construct_sts(7);
    const Design sqs8d = construct_boolean_sqs(3);
    codes.emplace_back(&fano, EncodingMatrix::from_sorted_blocks(fano));
    codes.emplace_back(&fano, order_design_onefold(fano, 0));
    codes.emplace_back(&sqs8d, EncodingMatrix::from_sorted_blocks(sqs8d));

    int mutations_changing_counts = 0;
    if (demo_design && demo_matrix) {
        codes.emplace_back(&*demo_design, *demo_matrix);
        const auto reference = column_frequencies(*demo_matrix, 2).counts;
        const auto reference1 = column_frequencies(*demo_matrix, 1).counts;
        std::mt19937_64 rng(derive_seed(0, "acceptance-mutation"));
        for (int trial = 0; trial < 12; ++trial) {
            EncodingMatrix mutated = *demo_matrix;
            auto& row = mutated.rows[uniform_below(rng, mutated.b())];
            const auto before = row;
            while (row == before) seeded_shuffle(row, rng);
            const bool changed = column_frequencies(mutated, 2).counts != reference ||
                                 column_frequencies(mutated, 1).counts != reference1;
            if (!changed) continue;
            ++mutations_changing_counts;
            const auto verdict = perfect_secrecy_check(from_matrix_equiprobable(mutated), 2, SecrecyMethod::BayesExact);
            c.expect(!verdict.perfect, "mutation " + std::to_string(trial) + " not flagged");
            c.expect(verdict.first_violation.has_value(), "mutation " + std::to_string(trial) + " has no witness");
            if (trial < 4) codes.emplace_back(&*demo_design, mutated);
        }
        c.expect(mutations_changing_counts > 0, "no mutation changed a count");
    } else {
        c.expect(false, "demo artifacts unavailable for the SQS(26) suites");
    }

    note = std::to_string(constructed.size()) + " designs, " + std::to_string(codes.size()) + " codes, " +
           std::to_string(mutations_changing_counts) + " count-changing mutations";
    for (const auto& [design, m] : codes) {
        const auto code = from_matrix_equiprobable(m);
        const int top = std::min(2, design->t - 1);
        bool lower_ok = true;
        for (int level = 1; level <= top; ++level) {
            const bool ok = verify_ordering(m, *design, level).ok;
            c.expect(lower_ok || !ok, "verify_ordering not monotone");
            lower_ok = ok;
            const bool bayes = perfect_secrecy_check(code, level, SecrecyMethod::BayesExact).perfect;
            const bool freq = perfect_secrecy_check(code, level, SecrecyMethod::FrequencyShortcut).perfect;
            c.expect(bayes == freq, "bayes-exact and frequency-shortcut disagree at level " + std::to_string(level));
            c.expect(bayes == ok, "secrecy verdict differs from verify_ordering at level " + std::to_string(level));
        }
        for (int i = 0; i < design->t; ++i)
            c.expect(deception_probability(code, i).observation_mass == Rational(1),
                     "observation probabilities do not sum to 1 at order " + std::to_string(i));
    }
    return c.ok() ? "" : c.summary();
}

std::string determinism() {
    Check c;
    const auto a = run("demo --v 26 --seed 42 --out-dir '" + file("seed42a") + "'");
    const auto b = run("demo --v 26 --seed 42 --out-dir '" + file("seed42b") + "'");
    c.expect(a.status == 0 && b.status == 0,
             "demo exits " + std::to_string(a.status) + " and " + std::to_string(b.status));
    for (const char* name : {"design.txt", "matrix.txt", "report.json"}) {
        const std::string x = slurp(file(std::string("seed42a/") + name));
        const std::string y = slurp(file(std::string("seed42b/") + name));
        c.expect(!x.empty() && x == y, std::string(name) + " differs between runs");
    }
    return c.ok() ? "" : c.summary();
}

}  // namespace

int main(int argc, char** argv) {
    work = fs::temp_directory_path() / ("steinauth-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(work);
    fs::create_directories(work);

    const std::vector<std::pair<std::string, std::function<std::string()>>> criteria{
        {"Fano pipeline", fano},
        {"boolean SQS(8)", sqs8},
        {"doubling to SQS(16) and SQS(32)", doubling},
        {"cyclic SQS(26) search", cyclic},
        {"SQS(26) two-fold demo", demo},
        {"parameter table regressions", tables},
        {"property suites", properties},
        {"determinism of demo --seed 42", determinism},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int number = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(number)) continue;
        const auto start = std::chrono::steady_clock::now();
        std::string problem;
        note.clear();
        try {
            problem = criteria[i].second();
        } catch (const std::exception& e) {
            problem = std::string("exception: ") + e.what();
        }
        const double elapsed = seconds_since(start);
        std::printf("%s %d %s (%.2f s%s%s)%s%s\n", problem.empty() ? "PASS" : "FAIL", number, criteria[i].first.c_str(),
                    elapsed, note.empty() ? "" : "; ", note.c_str(), problem.empty() ? "" : ": ", problem.c_str());
        std::fflush(stdout);
        failed += problem.empty() ? 0 : 1;
    }
    fs::remove_all(work);
    return failed == 0 ? 0 : 1;
}
