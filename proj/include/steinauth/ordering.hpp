#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steinauth/design.hpp"
#include "steinauth/exact_cover.hpp"

namespace steinauth {

/// b x k matrix of messages; row e is encoding rule e, column s is source state s.
struct EncodingMatrix {
    int v = 0;
    int k = 0;
    std::vector<std::vector<Point>> rows;

    std::size_t b() const { return rows.size(); }

    /// Rows of length k with distinct entries in [0, v); throws ErrorKind::Structural.
    void check() const;

    /// Every block written in ascending order, one row per block.
    static EncodingMatrix from_sorted_blocks(const Design& design);

    friend bool operator==(const EncodingMatrix&, const EncodingMatrix&) = default;
};

/// Occurrences of each t*-subset of messages in each t*-subset of columns.
/// Keys are (colex rank of the message subset, colex rank of the column subset);
/// absent keys have count zero.
struct FrequencyTable {
    int t_star = 0;
    int v = 0;
    int k = 0;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> counts;

    std::uint64_t count(const Subset& messages, const Subset& columns) const;
};

FrequencyTable column_frequencies(const EncodingMatrix& matrix, int t_star);

struct LevelDiagnostic {
    int t_star = 0;
    std::optional<std::uint64_t> target;  // b / C(v, t*), absent when not an integer
    bool ok = false;
    Subset messages;  // first violating cell, when !ok and a target exists
    Subset columns;
    std::uint64_t observed = 0;
};

struct OrderingVerdict {
    bool ok = false;
    std::vector<LevelDiagnostic> levels;
};

/// Throws ErrorKind::Structural unless the matrix rows, as sets, are exactly the design's blocks.
void check_matrix_matches_design(const EncodingMatrix& matrix, const Design& design);

/// True iff for every t* <= secrecy_level each t*-subset of messages occurs
/// exactly b / C(v, t*) times in every t*-subset of columns. Throws
/// ErrorKind::Structural when the matrix rows are not the design's blocks.
OrderingVerdict verify_ordering(const EncodingMatrix& matrix, const Design& design, int secrecy_level);

/// Sum over t* <= level of squared deviations of every frequency cell from b / C(v, t*).
std::int64_t ordering_energy(const EncodingMatrix& matrix, int level);

struct BipartiteMultigraph {
    int left = 0;
    int right = 0;
    std::vector<std::pair<int, int>> edges;  // (left vertex, right vertex)
};

/// Proper edge coloring of a `colors`-regular bipartite multigraph, built by
/// peeling off one perfect matching per color. Returns one color per edge.
std::vector<int> edge_color_regular_bipartite(const BipartiteMultigraph& graph, int colors);

/// Point-column balanced ordering: each point appears b/v times in every column.
/// Throws ErrorKind::Admissibility when v does not divide b.
EncodingMatrix order_design_onefold(const Design& design, std::uint64_t seed = 0);

struct AnnealingSchedule {
    double target_uphill_acceptance = 0.5;
    int warmup_samples = 2000;
    double cooling = 0.95;
    double sweeps_per_temperature = 20.0;  // moves per temperature = sweeps * orbits * C(k,2)
    double min_temperature = 0.05;
    int frozen_stages = 3;  // a restart ends after this many stages without an accepted energy change
};

struct OrderingConfig {
    int secrecy_level = 1;
    std::uint64_t seed = 0;
    double time_limit_seconds = 300.0;
    int max_restarts = 50;
    std::uint64_t backtrack_nodes = 20'000;  // node cap of each backtracking restart
    AnnealingSchedule schedule;
};

/// Symmetry imposed on an ordering: the group generated by x -> x+step and
/// x -> multiplier*x (mod v), where the multiplier also moves position c of
/// every row to column twist[c] and translations keep columns fixed.
struct OrderingSymmetry {
    int step = 0;
    int multiplier = 1;
    std::vector<int> twist;
    int orbits = 0;  // block orbits under the group
    bool relaxation_feasible = true;  // false when even fractional orderings cannot balance every cell
};

std::string to_string(const OrderingSymmetry& symmetry);

/// Steps s | v (ascending, always including v) for which x -> x+s permutes the blocks.
std::vector<int> translation_steps(const Design& design);

/// 1 followed by the least generator of each distinct cyclic group <a> of
/// units for which x -> a*x permutes the blocks.
std::vector<int> multiplier_generators(const Design& design);

/// Symmetries under which a level-`level` ordering is not ruled out by
/// parity, fewest orbits first. Only symmetries whose block orbits admit a
/// consistent ordering are listed. Those whose linear relaxation is
/// infeasible are kept but flagged, and the ordering search skips them.
std::vector<OrderingSymmetry> ordering_symmetries(const Design& design, int level);

struct OrderingResult {
    SearchVerdict verdict = SearchVerdict::Undecided;
    std::optional<EncodingMatrix> matrix;
    std::optional<OrderingSymmetry> symmetry;  // symmetry of the returned matrix, when one was imposed
    int restarts = 0;
    std::uint64_t moves = 0;  // annealing moves
    std::uint64_t nodes = 0;  // backtracking nodes
};

/// Ordering with perfect secrecy up to config.secrecy_level. Level 1 delegates
/// to order_design_onefold. Higher levels search the spaces of
/// ordering_symmetries: restart r works in the space indexed by the number of
/// trailing one bits of r/2 (capped at the last), so the space with the
/// fewest orbits gets half of the restarts; even restarts anneal, odd ones run
/// a capped randomized backtracking search, and a space that backtracking
/// exhausts is dropped. Without symmetric spaces every row moves on its own:
/// annealing by transpositions from the one-fold ordering. Throws
/// ErrorKind::Admissibility naming the first t* with C(v, t*) not dividing b.
OrderingResult order_design_multifold(const Design& design, const OrderingConfig& config);

/// Per-t* divisibility C(v, t*) | b for t* = 1..level.
std::vector<std::pair<int, bool>> divisibility_verdicts(const Design& design, int level);

}  // namespace steinauth
