#pragma once

#include <cstdint>
#include <vector>

#include "steinauth/design.hpp"

namespace steinauth {

struct ExactCoverInstance {
    int num_columns = 0;
    std::vector<std::vector<int>> rows;  // sorted column indices

    /// Throws ErrorKind::Parameter on empty rows, repeated or out of range columns.
    void check() const;
};

struct SolverBudget {
    std::uint64_t max_nodes = 50'000'000;
    double time_limit_seconds = 600.0;
    std::uint64_t seed = 0;
};

enum class SearchVerdict { Solved, Infeasible, Undecided };

const char* to_string(SearchVerdict verdict);

struct CoverResult {
    SearchVerdict verdict = SearchVerdict::Undecided;
    std::vector<std::size_t> rows;  // indices into instance.rows, ascending
    std::uint64_t nodes = 0;
};

/// Algorithm X over dancing links. Columns are chosen fewest-candidates-first
/// (ties to the lowest index); row order inside each column is a seeded
/// shuffle fixed before search starts.
CoverResult solve_exact_cover(const ExactCoverInstance& instance, const SolverBudget& budget);

/// True iff the chosen rows hit every column exactly once.
bool is_exact_cover(const ExactCoverInstance& instance, const std::vector<std::size_t>& chosen);

struct Orbit {
    Subset representative;  // lexicographically least image
    int length = 0;
};

/// Orbits of k-subsets and t-subsets of Z_v under x -> a*x + c, with c
/// arbitrary and a ranging over `multipliers` (just {1} for the cyclic group).
struct OrbitCatalog {
    int t = 0;
    int v = 0;
    int k = 0;
    std::vector<int> multipliers;
    std::vector<Orbit> k_orbits;
    std::vector<Orbit> t_orbits;
    /// incidence[i] lists (t-orbit index, multiplicity) pairs: how many times
    /// the whole k-orbit i covers each element of that t-orbit.
    std::vector<std::vector<std::pair<int, int>>> incidence;
};

OrbitCatalog build_orbit_catalog(int t, int v, int k, const std::vector<int>& multipliers = {});

/// Multiplicative subgroup of Z_v generated by the given units, sorted.
/// Throws ErrorKind::Parameter on a non-unit.
std::vector<int> multiplier_group(int v, const std::vector<int>& generators);

/// Distinct images of s under x -> a*x + c for a in multipliers, sorted.
std::vector<Subset> affine_orbit(const Subset& s, int v, const std::vector<int>& multipliers);

/// Lexicographically least translate of a subset of Z_v.
Subset cyclic_canonical(const Subset& s, int v);

/// All distinct translates of a subset of Z_v, each sorted.
std::vector<Subset> cyclic_orbit(const Subset& s, int v);

struct CyclicSearchResult {
    SearchVerdict verdict = SearchVerdict::Undecided;
    Design design;                      // valid only when Solved
    std::vector<Subset> base_blocks;    // orbit representatives used
    std::uint64_t nodes = 0;
    int attempts = 0;
};

/// Searches for a Steiner t-(v,k,1) design invariant under x -> x+1 (mod v)
/// and, when multipliers are given, also under x -> a*x for each of them.
/// Restarts with seeds derived from budget.seed and a growing per-attempt node
/// cap until the overall budget runs out. Throws ErrorKind::Admissibility when
/// the Steiner divisibility conditions fail.
CyclicSearchResult construct_cyclic_steiner(int t, int v, int k, const SolverBudget& budget,
                                            const std::vector<int>& multipliers = {});

}  // namespace steinauth
