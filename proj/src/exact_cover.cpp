#include "steinauth/exact_cover.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "steinauth/error.hpp"
#include "steinauth/seed.hpp"

namespace steinauth {

const char* to_string(SearchVerdict verdict) {
    switch (verdict) {
        case SearchVerdict::Solved: return "solved";
        case SearchVerdict::Infeasible: return "infeasible";
        case SearchVerdict::Undecided: return "undecided";
    }
    return "?";
}

void ExactCoverInstance::check() const {
    if (num_columns < 0) fail(ErrorKind::Parameter, "negative column count");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.empty()) fail(ErrorKind::Parameter, "exact cover row " + std::to_string(r) + " is empty");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] < 0 || row[i] >= num_columns)
                fail(ErrorKind::Parameter, "exact cover row " + std::to_string(r) + " has column out of range");
            if (i > 0 && row[i] <= row[i - 1])
                fail(ErrorKind::Parameter, "exact cover row " + std::to_string(r) + " is not strictly increasing");
        }
    }
}

bool is_exact_cover(const ExactCoverInstance& instance, const std::vector<std::size_t>& chosen) {
    std::vector<int> hits(static_cast<std::size_t>(instance.num_columns), 0);
    for (std::size_t r : chosen) {
        if (r >= instance.rows.size()) return false;
        for (int c : instance.rows[r]) ++hits[static_cast<std::size_t>(c)];
    }
    return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

namespace {

class DancingLinks {
public:
    DancingLinks(const ExactCoverInstance& inst, const std::vector<std::size_t>& row_order) {
        const int nc = inst.num_columns;
        // node 0 is the root, nodes 1..nc are column headers
        const std::size_t header_count = static_cast<std::size_t>(nc) + 1;
        std::size_t total = header_count;
        for (const auto& row : inst.rows) total += row.size();
        left_.resize(total);
        right_.resize(total);
        up_.resize(total);
        down_.resize(total);
        col_.resize(total);
        row_of_.resize(total);
        size_.assign(header_count, 0);
        for (std::size_t i = 0; i < header_count; ++i) {
            left_[i] = i == 0 ? static_cast<int>(nc) : static_cast<int>(i) - 1;
            right_[i] = i == static_cast<std::size_t>(nc) ? 0 : static_cast<int>(i) + 1;
            up_[i] = down_[i] = static_cast<int>(i);
            col_[i] = static_cast<int>(i);
        }
        int next = static_cast<int>(header_count);
        for (std::size_t r : row_order) {
            const auto& row = inst.rows[r];
            const int first = next;
            for (std::size_t j = 0; j < row.size(); ++j) {
                const int node = next++;
                const int c = row[j] + 1;
                col_[static_cast<std::size_t>(node)] = c;
                row_of_[static_cast<std::size_t>(node)] = r;
                up_[static_cast<std::size_t>(node)] = up_[static_cast<std::size_t>(c)];
                down_[static_cast<std::size_t>(node)] = c;
                down_[static_cast<std::size_t>(up_[static_cast<std::size_t>(c)])] = node;
                up_[static_cast<std::size_t>(c)] = node;
                ++size_[static_cast<std::size_t>(c)];
                left_[static_cast<std::size_t>(node)] = j == 0 ? node : node - 1;
                right_[static_cast<std::size_t>(node)] = first;
                if (j > 0) right_[static_cast<std::size_t>(node - 1)] = node;
                left_[static_cast<std::size_t>(first)] = node;
            }
        }
    }

    SearchVerdict run(std::uint64_t max_nodes, std::chrono::steady_clock::time_point deadline,
                      std::vector<std::size_t>& solution, std::uint64_t& nodes) {
        max_nodes_ = max_nodes;
        deadline_ = deadline;
        nodes_ = 0;
        out_of_budget_ = false;
        partial_.clear();
        const bool found = search();
        nodes = nodes_;
        if (found) {
            solution = partial_;
            std::sort(solution.begin(), solution.end());
            return SearchVerdict::Solved;
        }
        return out_of_budget_ ? SearchVerdict::Undecided : SearchVerdict::Infeasible;
    }

private:
    int& L(int i) { return left_[static_cast<std::size_t>(i)]; }
    int& R(int i) { return right_[static_cast<std::size_t>(i)]; }
    int& U(int i) { return up_[static_cast<std::size_t>(i)]; }
    int& D(int i) { return down_[static_cast<std::size_t>(i)]; }
    int C(int i) const { return col_[static_cast<std::size_t>(i)]; }

    void cover(int c) {
        R(L(c)) = R(c);
        L(R(c)) = L(c);
        for (int i = D(c); i != c; i = D(i))
            for (int j = R(i); j != i; j = R(j)) {
                D(U(j)) = D(j);
                U(D(j)) = U(j);
                --size_[static_cast<std::size_t>(C(j))];
            }
    }

    void uncover(int c) {
        for (int i = U(c); i != c; i = U(i))
            for (int j = L(i); j != i; j = L(j)) {
                ++size_[static_cast<std::size_t>(C(j))];
                D(U(j)) = j;
                U(D(j)) = j;
            }
        R(L(c)) = c;
        L(R(c)) = c;
    }

    bool search() {
        if (R(0) == 0) return true;
        int best = -1;
        for (int c = R(0); c != 0; c = R(c))
            if (best < 0 || size_[static_cast<std::size_t>(c)] < size_[static_cast<std::size_t>(best)]) best = c;
        if (size_[static_cast<std::size_t>(best)] == 0) return false;
        cover(best);
        for (int r = D(best); r != best; r = D(r)) {
            if (++nodes_ > max_nodes_ || ((nodes_ & 0xfff) == 0 && std::chrono::steady_clock::now() > deadline_)) {
                out_of_budget_ = true;
                break;
            }
            partial_.push_back(row_of_[static_cast<std::size_t>(r)]);
            for (int j = R(r); j != r; j = R(j)) cover(C(j));
            if (search()) {
                return true;
            }
            for (int j = L(r); j != r; j = L(j)) uncover(C(j));
            partial_.pop_back();
            if (out_of_budget_) break;
        }
        uncover(best);
        return false;
    }

    std::vector<int> left_, right_, up_, down_, col_;
    std::vector<std::size_t> row_of_;
    std::vector<std::size_t> size_;
    std::vector<std::size_t> partial_;
    std::uint64_t max_nodes_ = 0;
    std::uint64_t nodes_ = 0;
    bool out_of_budget_ = false;
    std::chrono::steady_clock::time_point deadline_;
};

}  // namespace

CoverResult solve_exact_cover(const ExactCoverInstance& instance, const SolverBudget& budget) {
    instance.check();
    std::vector<std::size_t> order(instance.rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(budget.seed);
    seeded_shuffle(order, rng);

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(budget.time_limit_seconds));
    DancingLinks dlx(instance, order);
    CoverResult result;
    result.verdict = dlx.run(budget.max_nodes, deadline, result.rows, result.nodes);
    return result;
}

Subset cyclic_canonical(const Subset& s, int v) {
    Subset best;
    Subset cur(s.size());
    for (int shift = 0; shift < v; ++shift) {
        for (std::size_t i = 0; i < s.size(); ++i) cur[i] = (s[i] + shift) % v;
        std::sort(cur.begin(), cur.end());
        if (best.empty() || cur < best) best = cur;
    }
    return best;
}

std::vector<Subset> cyclic_orbit(const Subset& s, int v) {
    std::vector<Subset> out;
    Subset cur(s.size());
    for (int shift = 0; shift < v; ++shift) {
        for (std::size_t i = 0; i < s.size(); ++i) cur[i] = (s[i] + shift) % v;
        std::sort(cur.begin(), cur.end());
        if (shift > 0 && cur == out.front()) break;  // orbit length divides v
        out.push_back(cur);
    }
    return out;
}

std::vector<int> multiplier_group(int v, const std::vector<int>& generators) {
    if (v < 2) fail(ErrorKind::Parameter, "multiplier group needs v >= 2");
    std::vector<int> group{1};
    for (int g : generators) {
        if (g <= 0 || g >= v || std::gcd(g, v) != 1)
            fail(ErrorKind::Parameter, "multiplier " + std::to_string(g) + " is not a unit mod " + std::to_string(v));
    }
    for (std::size_t i = 0; i < group.size(); ++i)
        for (int g : generators) {
            const int x = static_cast<int>(static_cast<long long>(group[i]) * g % v);
            if (std::find(group.begin(), group.end(), x) == group.end()) group.push_back(x);
        }
    std::sort(group.begin(), group.end());
    return group;
}

std::vector<Subset> affine_orbit(const Subset& s, int v, const std::vector<int>& multipliers) {
    std::vector<Subset> out;
    Subset cur(s.size());
    for (int a : multipliers)
        for (int shift = 0; shift < v; ++shift) {
            for (std::size_t i = 0; i < s.size(); ++i)
                cur[i] = static_cast<Point>((static_cast<long long>(a) * s[i] + shift) % v);
            std::sort(cur.begin(), cur.end());
            out.push_back(cur);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

std::vector<Orbit> enumerate_orbits(int v, int size, const std::vector<int>& group) {
    std::vector<Orbit> orbits;
    std::vector<char> seen(binomial(v, size), 0);
    for (const Subset& s : all_subsets(v, size)) {
        if (seen[colex_rank(s)]) continue;
        const auto orbit = affine_orbit(s, v, group);
        for (const Subset& x : orbit) seen[colex_rank(x)] = 1;
        orbits.push_back({orbit.front(), static_cast<int>(orbit.size())});
    }
    std::sort(orbits.begin(), orbits.end(), [](const Orbit& a, const Orbit& b) { return a.representative < b.representative; });
    return orbits;
}

}  // namespace

OrbitCatalog build_orbit_catalog(int t, int v, int k, const std::vector<int>& multipliers) {
    if (!(0 < t && t < k && k < v)) fail(ErrorKind::Parameter, "orbit catalog needs 0 < t < k < v");
    const std::vector<int> group = multiplier_group(v, multipliers);
    OrbitCatalog cat{t, v, k, group, enumerate_orbits(v, k, group), enumerate_orbits(v, t, group), {}};

    // t-subset colex rank -> t-orbit index
    std::vector<int> t_orbit_of(binomial(v, t), -1);
    for (std::size_t i = 0; i < cat.t_orbits.size(); ++i)
        for (const Subset& s : affine_orbit(cat.t_orbits[i].representative, v, group))
            t_orbit_of[colex_rank(s)] = static_cast<int>(i);

    cat.incidence.reserve(cat.k_orbits.size());
    std::vector<int> hits(t_orbit_of.size(), 0);
    for (const Orbit& ko : cat.k_orbits) {
        std::vector<std::uint64_t> touched;
        for (const Subset& blk : affine_orbit(ko.representative, v, group))
            for_each_subset(std::span<const Point>(blk), t, [&](const Subset& sub) {
                const std::uint64_t r = colex_rank(sub);
                if (hits[r]++ == 0) touched.push_back(r);
            });
        std::map<int, int> per_orbit;
        std::map<int, std::size_t> touched_per_orbit;
        for (std::uint64_t r : touched) {
            const int orbit = t_orbit_of[r];
            ++touched_per_orbit[orbit];
            auto [it, inserted] = per_orbit.emplace(orbit, hits[r]);
            if (!inserted && it->second != hits[r])
                fail(ErrorKind::Verification, "orbit coverage is not constant across a t-orbit");
        }
        for (const auto& [orbit, count] : touched_per_orbit)
            if (count != static_cast<std::size_t>(cat.t_orbits[static_cast<std::size_t>(orbit)].length))
                fail(ErrorKind::Verification, "orbit coverage is not constant across a t-orbit");
        for (std::uint64_t r : touched) hits[r] = 0;
        cat.incidence.emplace_back(per_orbit.begin(), per_orbit.end());
    }
    return cat;
}

namespace {

void require_steiner_admissible(int t, int v, int k) {
    if (!(0 < t && t < k && k < v)) fail(ErrorKind::Parameter, "cyclic Steiner search needs 0 < t < k < v");
    for (int s = 0; s < t; ++s)
        if (binomial(v - s, t - s) % binomial(k - s, t - s) != 0)
            fail(ErrorKind::Admissibility, "no Steiner " + std::to_string(t) + "-(" + std::to_string(v) + "," +
                                               std::to_string(k) + ",1) design: C(" + std::to_string(k - s) + "," +
                                               std::to_string(t - s) + ") does not divide C(" + std::to_string(v - s) +
                                               "," + std::to_string(t - s) + ")");
}

}  // namespace

CyclicSearchResult construct_cyclic_steiner(int t, int v, int k, const SolverBudget& budget,
                                            const std::vector<int>& multipliers) {
    require_steiner_admissible(t, v, k);
    const auto start = std::chrono::steady_clock::now();
    const OrbitCatalog cat = build_orbit_catalog(t, v, k, multipliers);

    ExactCoverInstance inst;
    inst.num_columns = static_cast<int>(cat.t_orbits.size());
    std::vector<std::size_t> orbit_of_row;
    for (std::size_t i = 0; i < cat.k_orbits.size(); ++i) {
        const auto& inc = cat.incidence[i];
        if (std::any_of(inc.begin(), inc.end(), [](const auto& p) { return p.second > 1; })) continue;
        std::vector<int> cols;
        for (const auto& [orbit, mult] : inc) cols.push_back(orbit);
        inst.rows.push_back(std::move(cols));
        orbit_of_row.push_back(i);
    }

    CyclicSearchResult result;
    std::uint64_t attempt_cap = 20'000;
    while (true) {
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const std::uint64_t remaining_nodes = budget.max_nodes > result.nodes ? budget.max_nodes - result.nodes : 0;
        if (remaining_nodes == 0 || elapsed >= budget.time_limit_seconds) break;
        SolverBudget attempt{std::min(attempt_cap, remaining_nodes), budget.time_limit_seconds - elapsed,
                             derive_seed(budget.seed, "cyclic-steiner", static_cast<std::uint64_t>(result.attempts))};
        const CoverResult cover = solve_exact_cover(inst, attempt);
        ++result.attempts;
        result.nodes += cover.nodes;
        if (cover.verdict == SearchVerdict::Infeasible) {
            result.verdict = SearchVerdict::Infeasible;
            return result;
        }
        if (cover.verdict == SearchVerdict::Solved) {
            if (!is_exact_cover(inst, cover.rows)) fail(ErrorKind::Verification, "exact cover solution does not partition the columns");
            Design d{t, v, k, 1, {}};
            for (std::size_t r : cover.rows) {
                const Subset& rep = cat.k_orbits[orbit_of_row[r]].representative;
                result.base_blocks.push_back(rep);
                for (Subset& blk : affine_orbit(rep, v, cat.multipliers)) d.blocks.push_back(std::move(blk));
            }
            std::sort(result.base_blocks.begin(), result.base_blocks.end());
            d.canonicalize();
            if (!verify_design(d).is_valid) fail(ErrorKind::Verification, "cyclic search produced an invalid design");
            result.design = std::move(d);
            result.verdict = SearchVerdict::Solved;
            return result;
        }
        attempt_cap += attempt_cap / 2;
    }
    result.verdict = SearchVerdict::Undecided;
    return result;
}

}  // namespace steinauth
