#include "steinauth/ordering.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>

#include "steinauth/error.hpp"
#include "steinauth/seed.hpp"

namespace steinauth {

void EncodingMatrix::check() const {
    if (k < 1 || v < k) fail(ErrorKind::Structural, "matrix needs 1 <= k <= v");
    std::vector<char> seen(static_cast<std::size_t>(v), 0);
    for (std::size_t e = 0; e < rows.size(); ++e) {
        const auto& row = rows[e];
        if (static_cast<int>(row.size()) != k)
            fail(ErrorKind::Structural, "rule " + std::to_string(e) + " has " + std::to_string(row.size()) + " entries, expected " + std::to_string(k));
        for (Point m : row) {
            if (m < 0 || m >= v) fail(ErrorKind::Structural, "rule " + std::to_string(e) + " has message " + std::to_string(m) + " outside [0, " + std::to_string(v) + ")");
            if (seen[static_cast<std::size_t>(m)]) fail(ErrorKind::Structural, "rule " + std::to_string(e) + " repeats message " + std::to_string(m));
            seen[static_cast<std::size_t>(m)] = 1;
        }
        for (Point m : row) seen[static_cast<std::size_t>(m)] = 0;
    }
}

EncodingMatrix EncodingMatrix::from_sorted_blocks(const Design& design) {
    return EncodingMatrix{design.v, design.k, design.blocks};
}

std::uint64_t FrequencyTable::count(const Subset& messages, const Subset& columns) const {
    Subset m = messages;
    Subset c = columns;
    std::sort(m.begin(), m.end());
    std::sort(c.begin(), c.end());
    const auto it = counts.find({colex_rank(m), colex_rank(c)});
    return it == counts.end() ? 0 : it->second;
}

namespace {

/// Message subset at the given positions of a row, sorted.
Subset messages_at(const std::vector<Point>& row, const Subset& positions) {
    Subset m(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) m[i] = row[static_cast<std::size_t>(positions[i])];
    std::sort(m.begin(), m.end());
    return m;
}

/// Dense frequency cells for one t*: index = msg_rank * C(k,t*) + col_rank.
std::vector<std::int64_t> dense_frequencies(const EncodingMatrix& matrix, int t_star) {
    const std::uint64_t per_msg = binomial(matrix.k, t_star);
    std::vector<std::int64_t> cells(binomial(matrix.v, t_star) * per_msg, 0);
    const std::vector<Subset> positions = all_subsets(matrix.k, t_star);
    for (const auto& row : matrix.rows)
        for (const Subset& p : positions) ++cells[colex_rank(messages_at(row, p)) * per_msg + colex_rank(p)];
    return cells;
}

}  // namespace

void check_matrix_matches_design(const EncodingMatrix& matrix, const Design& design) {
    if (matrix.v != design.v || matrix.k != design.k || matrix.b() != design.b())
        fail(ErrorKind::Structural, "matrix shape (v=" + std::to_string(matrix.v) + ", k=" + std::to_string(matrix.k) + ", b=" +
                                        std::to_string(matrix.b()) + ") does not match the design");
    std::vector<Subset> row_sets;
    row_sets.reserve(matrix.b());
    for (const auto& row : matrix.rows) {
        Subset s = row;
        std::sort(s.begin(), s.end());
        row_sets.push_back(std::move(s));
    }
    std::sort(row_sets.begin(), row_sets.end());
    std::vector<Subset> blocks = design.blocks;
    std::sort(blocks.begin(), blocks.end());
    if (row_sets != blocks) fail(ErrorKind::Structural, "matrix rows are not an ordering of the design's blocks");
}

FrequencyTable column_frequencies(const EncodingMatrix& matrix, int t_star) {
    if (t_star < 1 || t_star > matrix.k)
        fail(ErrorKind::Parameter, "t* must lie in [1, k]; got " + std::to_string(t_star));
    FrequencyTable table{t_star, matrix.v, matrix.k, {}};
    const std::vector<Subset> positions = all_subsets(matrix.k, t_star);
    for (const auto& row : matrix.rows)
        for (const Subset& p : positions) ++table.counts[{colex_rank(messages_at(row, p)), colex_rank(p)}];
    return table;
}

OrderingVerdict verify_ordering(const EncodingMatrix& matrix, const Design& design, int secrecy_level) {
    matrix.check();
    check_matrix_matches_design(matrix, design);
    OrderingVerdict verdict{true, {}};
    for (int ts = 1; ts <= secrecy_level; ++ts) {
        LevelDiagnostic diag;
        diag.t_star = ts;
        const std::uint64_t subsets = binomial(matrix.v, ts);
        if (ts > matrix.k || matrix.b() % subsets != 0) {
            diag.ok = false;
        } else {
            diag.target = matrix.b() / subsets;
            const std::uint64_t per_msg = binomial(matrix.k, ts);
            const std::vector<std::int64_t> cells = dense_frequencies(matrix, ts);
            diag.ok = true;
            for (std::uint64_t i = 0; i < cells.size(); ++i) {
                if (static_cast<std::uint64_t>(cells[i]) != *diag.target) {
                    diag.ok = false;
                    diag.messages = colex_unrank(i / per_msg, ts);
                    diag.columns = colex_unrank(i % per_msg, ts);
                    diag.observed = static_cast<std::uint64_t>(cells[i]);
                    break;
                }
            }
        }
        verdict.ok = verdict.ok && diag.ok;
        verdict.levels.push_back(std::move(diag));
    }
    return verdict;
}

std::int64_t ordering_energy(const EncodingMatrix& matrix, int level) {
    std::int64_t energy = 0;
    for (int ts = 1; ts <= level; ++ts) {
        const std::uint64_t subsets = binomial(matrix.v, ts);
        if (matrix.b() % subsets != 0)
            fail(ErrorKind::Admissibility, "energy target b / C(v," + std::to_string(ts) + ") is not an integer");
        const auto target = static_cast<std::int64_t>(matrix.b() / subsets);
        for (std::int64_t c : dense_frequencies(matrix, ts)) energy += (c - target) * (c - target);
    }
    return energy;
}

namespace {

/// Hopcroft-Karp over the edges still marked alive.
class PerfectMatcher {
public:
    PerfectMatcher(const BipartiteMultigraph& g, const std::vector<char>& alive) : g_(g), alive_(alive) {
        adj_.resize(static_cast<std::size_t>(g.left));
        for (std::size_t e = 0; e < g.edges.size(); ++e)
            if (alive[e]) adj_[static_cast<std::size_t>(g.edges[e].first)].push_back(static_cast<int>(e));
    }

    /// Edge id matched at each left vertex; throws if no perfect matching exists.
    std::vector<int> solve() {
        match_left_.assign(static_cast<std::size_t>(g_.left), -1);
        match_right_.assign(static_cast<std::size_t>(g_.right), -1);
        int matched = 0;
        while (bfs()) {
            it_.assign(static_cast<std::size_t>(g_.left), 0);
            for (int u = 0; u < g_.left; ++u)
                if (match_left_[static_cast<std::size_t>(u)] < 0 && dfs(u)) ++matched;
        }
        if (matched != g_.left) fail(ErrorKind::Verification, "regular bipartite graph without a perfect matching");
        return match_left_;
    }

private:
    int right_of(int e) const { return g_.edges[static_cast<std::size_t>(e)].second; }

    bool bfs() {
        dist_.assign(static_cast<std::size_t>(g_.left), -1);
        std::queue<int> q;
        for (int u = 0; u < g_.left; ++u)
            if (match_left_[static_cast<std::size_t>(u)] < 0) {
                dist_[static_cast<std::size_t>(u)] = 0;
                q.push(u);
            }
        bool reachable_free = false;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int e : adj_[static_cast<std::size_t>(u)]) {
                const int me = match_right_[static_cast<std::size_t>(right_of(e))];
                if (me < 0) {
                    reachable_free = true;
                } else {
                    const int u2 = g_.edges[static_cast<std::size_t>(me)].first;
                    if (dist_[static_cast<std::size_t>(u2)] < 0) {
                        dist_[static_cast<std::size_t>(u2)] = dist_[static_cast<std::size_t>(u)] + 1;
                        q.push(u2);
                    }
                }
            }
        }
        return reachable_free;
    }

    bool dfs(int u) {
        auto& edges = adj_[static_cast<std::size_t>(u)];
        for (std::size_t& i = it_[static_cast<std::size_t>(u)]; i < edges.size(); ++i) {
            const int e = edges[i];
            const int w = right_of(e);
            const int me = match_right_[static_cast<std::size_t>(w)];
            bool ok = me < 0;
            if (!ok) {
                const int u2 = g_.edges[static_cast<std::size_t>(me)].first;
                ok = dist_[static_cast<std::size_t>(u2)] == dist_[static_cast<std::size_t>(u)] + 1 && dfs(u2);
            }
            if (ok) {
                match_left_[static_cast<std::size_t>(u)] = e;
                match_right_[static_cast<std::size_t>(w)] = e;
                return true;
            }
        }
        dist_[static_cast<std::size_t>(u)] = -1;
        return false;
    }

    const BipartiteMultigraph& g_;
    const std::vector<char>& alive_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> match_left_, match_right_, dist_;
    std::vector<std::size_t> it_;
};

}  // namespace

std::vector<int> edge_color_regular_bipartite(const BipartiteMultigraph& graph, int colors) {
    if (colors < 1) fail(ErrorKind::Parameter, "edge coloring needs at least one color");
    std::vector<int> left_deg(static_cast<std::size_t>(graph.left), 0), right_deg(static_cast<std::size_t>(graph.right), 0);
    for (const auto& [u, w] : graph.edges) {
        if (u < 0 || u >= graph.left || w < 0 || w >= graph.right) fail(ErrorKind::Parameter, "edge endpoint out of range");
        ++left_deg[static_cast<std::size_t>(u)];
        ++right_deg[static_cast<std::size_t>(w)];
    }
    auto regular = [&](const std::vector<int>& deg) { return std::all_of(deg.begin(), deg.end(), [&](int d) { return d == colors; }); };
    if (!regular(left_deg) || !regular(right_deg))
        fail(ErrorKind::Parameter, "edge coloring needs every vertex to have degree exactly " + std::to_string(colors));

    std::vector<int> color(graph.edges.size(), -1);
    std::vector<char> alive(graph.edges.size(), 1);
    for (int c = 0; c < colors; ++c) {
        PerfectMatcher matcher(graph, alive);
        for (int e : matcher.solve()) {
            color[static_cast<std::size_t>(e)] = c;
            alive[static_cast<std::size_t>(e)] = 0;
        }
    }
    return color;
}

std::vector<std::pair<int, bool>> divisibility_verdicts(const Design& design, int level) {
    std::vector<std::pair<int, bool>> out;
    for (int ts = 1; ts <= level; ++ts) out.emplace_back(ts, design.b() % binomial(design.v, ts) == 0);
    return out;
}

EncodingMatrix order_design_onefold(const Design& design, std::uint64_t seed) {
    design.check_structure();
    const std::size_t b = design.b();
    const auto v = static_cast<std::size_t>(design.v);
    if (b % v != 0)
        fail(ErrorKind::Admissibility, "one-fold ordering needs C(v,1) | b: " + std::to_string(v) + " does not divide " + std::to_string(b));
    const std::size_t copies = b / v;

    // split point x into copies of degree k, round-robin over its blocks in order
    BipartiteMultigraph g{static_cast<int>(b), static_cast<int>(b), {}};
    std::vector<std::size_t> seen(v, 0);
    for (std::size_t blk = 0; blk < b; ++blk)
        for (Point x : design.blocks[blk]) {
            const std::size_t copy = seen[static_cast<std::size_t>(x)]++ % copies;
            g.edges.emplace_back(static_cast<int>(static_cast<std::size_t>(x) * copies + copy), static_cast<int>(blk));
        }
    const std::vector<int> color = edge_color_regular_bipartite(g, design.k);

    std::mt19937_64 rng(derive_seed(seed, "onefold-columns"));
    std::vector<int> relabel(static_cast<std::size_t>(design.k));
    std::iota(relabel.begin(), relabel.end(), 0);
    seeded_shuffle(relabel, rng);

    EncodingMatrix m{design.v, design.k, std::vector<std::vector<Point>>(b, std::vector<Point>(static_cast<std::size_t>(design.k), -1))};
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto blk = static_cast<std::size_t>(g.edges[e].second);
        const auto x = static_cast<Point>(static_cast<std::size_t>(g.edges[e].first) / copies);
        m.rows[blk][static_cast<std::size_t>(relabel[static_cast<std::size_t>(color[e])])] = x;
    }
    return m;
}

namespace {

int multiplicative_order(int a, int v) {
    int m = 1;
    for (long long x = a % v; x != 1 % v; x = x * a % v) ++m;
    return m;
}

bool maps_blocks_into(const Design& design, const std::set<Subset>& blocks, int mult, int add) {
    Subset image(static_cast<std::size_t>(design.k));
    for (const Subset& blk : design.blocks) {
        for (std::size_t i = 0; i < blk.size(); ++i)
            image[i] = static_cast<Point>((static_cast<long long>(mult) * blk[i] + add) % design.v);
        std::sort(image.begin(), image.end());
        if (!blocks.contains(image)) return false;
    }
    return true;
}

struct GroupElement {
    int mult = 1;
    int add = 0;
    std::vector<int> column;  // position c of the base ordering lands in column[c]
};

std::vector<GroupElement> symmetry_elements(const OrderingSymmetry& sym, int v, int k) {
    std::vector<GroupElement> out;
    std::vector<int> column(static_cast<std::size_t>(k));
    std::iota(column.begin(), column.end(), 0);
    int mult = 1;
    const int m = multiplicative_order(sym.multiplier, v);
    for (int i = 0; i < m; ++i) {
        for (int add = 0; add < v; add += sym.step) out.push_back({mult, add, column});
        mult = static_cast<int>(static_cast<long long>(mult) * sym.multiplier % v);
        for (int& c : column) c = sym.twist[static_cast<std::size_t>(c)];
    }
    return out;
}

std::vector<Point> image_row(const GroupElement& g, const std::vector<Point>& base, int v) {
    std::vector<Point> row(base.size());
    for (std::size_t c = 0; c < base.size(); ++c)
        row[static_cast<std::size_t>(g.column[c])] = static_cast<Point>((static_cast<long long>(g.mult) * base[c] + g.add) % v);
    return row;
}

/// One orbit of blocks under the symmetry group. The whole orbit is ordered by
/// choosing a base ordering of its first block; free orbits (trivial
/// stabilizer) accept any base ordering, the others only the listed ones.
struct OrbitVariable {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> element_of_row;
    bool free = true;
    std::vector<std::vector<Point>> options;
};

struct SearchSpace {
    OrderingSymmetry symmetry;
    std::vector<GroupElement> elements;
    std::vector<OrbitVariable> variables;
};

constexpr int max_enumerated_k = 8;
constexpr int max_secrecy_level = 16;

std::optional<SearchSpace> build_space(const Design& design, const std::map<Subset, std::size_t>& index,
                                       const OrderingSymmetry& sym) {
    SearchSpace space{sym, symmetry_elements(sym, design.v, design.k), {}};
    std::vector<char> assigned(design.b(), 0);
    for (std::size_t i = 0; i < design.b(); ++i) {
        if (assigned[i]) continue;
        OrbitVariable var;
        const Subset& base = design.blocks[i];
        for (std::size_t g = 0; g < space.elements.size(); ++g) {
            Subset key = image_row(space.elements[g], base, design.v);
            std::sort(key.begin(), key.end());
            const std::size_t row = index.at(key);
            if (std::find(var.rows.begin(), var.rows.end(), row) != var.rows.end()) continue;
            var.rows.push_back(row);
            var.element_of_row.push_back(g);
            assigned[row] = 1;
        }
        var.free = var.rows.size() == space.elements.size();
        if (!var.free) {
            if (design.k > max_enumerated_k) return std::nullopt;
            std::vector<Point> r0 = base;
            std::vector<std::vector<Point>> first(var.rows.size());
            do {
                bool consistent = true;
                std::map<std::size_t, std::vector<Point>> seen;
                for (std::size_t g = 0; g < space.elements.size() && consistent; ++g) {
                    std::vector<Point> row = image_row(space.elements[g], r0, design.v);
                    Subset key = row;
                    std::sort(key.begin(), key.end());
                    auto [it, inserted] = seen.emplace(index.at(key), row);
                    consistent = inserted || it->second == row;
                }
                if (consistent) var.options.push_back(r0);
            } while (std::next_permutation(r0.begin(), r0.end()));
            if (var.options.empty()) return std::nullopt;
        }
        space.variables.push_back(std::move(var));
    }
    return space;
}

/// Gaussian elimination over GF(2) on the frequency equations restricted to
/// the space: one indicator per (variable, base ordering), one-hot per
/// variable. False means no balanced ordering exists in the space.
bool parity_consistent(const SearchSpace& space, const Design& design, int level) {
    constexpr std::size_t max_unknowns = 8192;
    const int k = design.k;
    std::vector<std::vector<std::vector<Point>>> choices;
    std::size_t unknowns = 0;
    for (const auto& var : space.variables) {
        if (var.free) {
            if (k > max_enumerated_k) return true;
            std::vector<std::vector<Point>> all;
            std::vector<Point> r0 = design.blocks[var.rows.front()];
            do all.push_back(r0);
            while (std::next_permutation(r0.begin(), r0.end()));
            choices.push_back(std::move(all));
        } else {
            choices.push_back(var.options);
        }
        unknowns += choices.back().size();
        if (unknowns > max_unknowns) return true;
    }
    const std::size_t words = (unknowns + 1 + 63) / 64;  // bit 0 is the right-hand side
    using Equation = std::vector<std::uint64_t>;
    auto toggle = [](Equation& e, std::size_t bit) { e[bit / 64] ^= std::uint64_t{1} << (bit % 64); };

    std::vector<Equation> equations;
    std::vector<std::size_t> level_offset;
    for (int ts = 1; ts <= level; ++ts) {
        level_offset.push_back(equations.size());
        const std::uint64_t cells = binomial(design.v, ts) * binomial(k, ts);
        const bool odd = (design.b() / binomial(design.v, ts)) % 2 == 1;
        for (std::uint64_t c = 0; c < cells; ++c) {
            equations.emplace_back(words, 0);
            if (odd) toggle(equations.back(), 0);
        }
    }
    std::vector<std::vector<Subset>> positions;
    std::vector<std::vector<std::uint64_t>> position_rank;
    for (int ts = 1; ts <= level; ++ts) {
        positions.push_back(all_subsets(k, ts));
        position_rank.emplace_back();
        for (const Subset& p : positions.back()) position_rank.back().push_back(colex_rank(p));
    }
    std::size_t bit = 1;
    for (std::size_t vi = 0; vi < space.variables.size(); ++vi) {
        const auto& var = space.variables[vi];
        Equation one_hot(words, 0);
        toggle(one_hot, 0);
        for (const auto& r0 : choices[vi]) {
            toggle(one_hot, bit);
            for (std::size_t ri = 0; ri < var.rows.size(); ++ri) {
                const auto row = image_row(space.elements[var.element_of_row[ri]], r0, design.v);
                for (int ts = 1; ts <= level; ++ts) {
                    const auto li = static_cast<std::size_t>(ts - 1);
                    const std::uint64_t per_msg = binomial(k, ts);
                    for (std::size_t s = 0; s < positions[li].size(); ++s) {
                        const std::uint64_t cell = colex_rank(messages_at(row, positions[li][s])) * per_msg + position_rank[li][s];
                        toggle(equations[level_offset[li] + cell], bit);
                    }
                }
            }
            ++bit;
        }
        equations.push_back(std::move(one_hot));
    }

    std::vector<std::ptrdiff_t> pivot_row(unknowns + 1, -1);
    std::vector<Equation> basis;
    for (Equation& e : equations) {
        while (true) {
            std::size_t lead = 0;
            for (std::size_t w = 0; w < words && !lead; ++w) {
                const std::uint64_t word = w == 0 ? e[0] & ~std::uint64_t{1} : e[w];
                if (word) lead = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
            }
            if (!lead) {
                if (e[0] & 1) return false;
                break;
            }
            if (pivot_row[lead] < 0) {
                pivot_row[lead] = static_cast<std::ptrdiff_t>(basis.size());
                basis.push_back(std::move(e));
                break;
            }
            const Equation& p = basis[static_cast<std::size_t>(pivot_row[lead])];
            for (std::size_t w = 0; w < words; ++w) e[w] ^= p[w];
        }
    }
    return true;
}

/// Cycle-type representatives of S_k whose order divides m, each as the
/// permutation built from consecutive cycles of non-increasing length.
std::vector<std::vector<int>> twist_representatives(int k, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> parts;
    auto rec = [&](auto&& self, int remaining, int max_part) -> void {
        if (remaining == 0) {
            std::vector<int> perm(static_cast<std::size_t>(k));
            int start = 0;
            for (int len : parts) {
                for (int i = 0; i < len; ++i) perm[static_cast<std::size_t>(start + i)] = start + (i + 1) % len;
                start += len;
            }
            out.push_back(std::move(perm));
            return;
        }
        for (int len = std::min(remaining, max_part); len >= 1; --len) {
            if (m % len != 0) continue;
            parts.push_back(len);
            self(self, remaining - len, len);
            parts.pop_back();
        }
    };
    rec(rec, k, k);
    std::sort(out.begin(), out.end());
    return out;
}

std::map<Subset, std::size_t> block_index(const Design& design) {
    std::map<Subset, std::size_t> index;
    for (std::size_t i = 0; i < design.b(); ++i) index.emplace(design.blocks[i], i);
    return index;
}

std::vector<SearchSpace> symmetric_spaces(const Design& design, int level) {
    const auto index = block_index(design);
    std::vector<SearchSpace> spaces;
    for (int step : translation_steps(design))
        for (int a : multiplier_generators(design)) {
            if (step == design.v && a == 1) continue;
            for (auto& twist : twist_representatives(design.k, multiplicative_order(a, design.v))) {
                auto space = build_space(design, index, OrderingSymmetry{step, a, std::move(twist), 0});
                if (!space || !parity_consistent(*space, design, level)) continue;
                space->symmetry.orbits = static_cast<int>(space->variables.size());
                spaces.push_back(std::move(*space));
            }
        }
    std::stable_sort(spaces.begin(), spaces.end(), [](const SearchSpace& x, const SearchSpace& y) {
        return x.symmetry.orbits < y.symmetry.orbits;
    });
    return spaces;
}

SearchSpace plain_space(const Design& design) {
    SearchSpace space;
    space.symmetry.step = design.v;
    space.symmetry.multiplier = 1;
    space.symmetry.twist.resize(static_cast<std::size_t>(design.k));
    std::iota(space.symmetry.twist.begin(), space.symmetry.twist.end(), 0);
    space.symmetry.orbits = static_cast<int>(design.b());
    space.elements = symmetry_elements(space.symmetry, design.v, design.k);
    for (std::size_t r = 0; r < design.b(); ++r) space.variables.push_back({{r}, {0}, true, {}});
    return space;
}

/// Frequency cells of every level t* <= level, concatenated level by level.
class CellIndex {
public:
    CellIndex(int v, int k, std::size_t b, int level) {
        for (int ts = 1; ts <= level; ++ts) {
            Level lv;
            lv.t_star = ts;
            lv.offset = targets_.size();
            lv.per_msg = binomial(k, ts);
            lv.positions = all_subsets(k, ts);
            for (const Subset& p : lv.positions) lv.position_rank.push_back(colex_rank(p));
            for (int x = 0; x < v; ++x)
                for (int i = 0; i <= ts; ++i) lv.choose.push_back(binomial(x, i));
            targets_.insert(targets_.end(), binomial(v, ts) * lv.per_msg, static_cast<std::int64_t>(b / binomial(v, ts)));
            per_row_ += lv.positions.size();
            levels_.push_back(std::move(lv));
        }
    }

    std::size_t size() const { return targets_.size(); }
    std::size_t cells_per_row() const { return per_row_; }
    std::int64_t target(std::size_t cell) const { return targets_[cell]; }

    template <typename F>
    void for_each_cell(const std::vector<Point>& row, F&& f) const {
        for (const Level& lv : levels_)
            for (std::size_t s = 0; s < lv.positions.size(); ++s) f(lv.cell(row, s));
    }

private:
    struct Level {
        int t_star = 0;
        std::size_t offset = 0;
        std::uint64_t per_msg = 0;
        std::vector<Subset> positions;
        std::vector<std::uint64_t> position_rank;
        std::vector<std::uint64_t> choose;  // choose[x * (t_star + 1) + i] = C(x, i)

        std::size_t cell(const std::vector<Point>& row, std::size_t s) const {
            std::array<Point, max_secrecy_level> m{};
            const Subset& p = positions[s];
            for (int i = 0; i < t_star; ++i) {
                Point x = row[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])];
                int j = i;
                for (; j > 0 && m[static_cast<std::size_t>(j - 1)] > x; --j) m[static_cast<std::size_t>(j)] = m[static_cast<std::size_t>(j - 1)];
                m[static_cast<std::size_t>(j)] = x;
            }
            std::uint64_t rank = 0;
            for (int i = 0; i < t_star; ++i)
                rank += choose[static_cast<std::size_t>(m[static_cast<std::size_t>(i)] * (t_star + 1) + i + 1)];
            return offset + rank * per_msg + position_rank[s];
        }
    };

    std::vector<Level> levels_;
    std::vector<std::int64_t> targets_;
    std::size_t per_row_ = 0;
};

/// Allowed base orderings of one variable and the cells each one fills.
struct ChoiceTable {
    std::vector<std::vector<Point>> choices;  // lexicographic
    std::vector<std::uint32_t> start;         // entries of choice i are [start[i], start[i+1])
    std::vector<std::uint32_t> cell;
    std::vector<std::int32_t> mult;
    std::vector<std::uint32_t> swap_to;  // free variables: choice after transposing a position pair
};

std::uint32_t index_of(const std::vector<std::vector<Point>>& sorted, const std::vector<Point>& x) {
    return static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
}

/// Empty when the tables would be too large.
std::vector<ChoiceTable> tabulate(const SearchSpace& space, const CellIndex& index, const Design& design) {
    constexpr std::size_t max_entries = std::size_t{1} << 22;
    const int k = design.k;
    if (k > max_enumerated_k || index.size() > std::numeric_limits<std::uint32_t>::max()) return {};
    std::size_t perms = 1;
    for (int i = 2; i <= k; ++i) perms *= static_cast<std::size_t>(i);
    std::size_t entries = 0;
    for (const auto& var : space.variables)
        entries += (var.free ? perms : var.options.size()) * var.rows.size() * index.cells_per_row();
    if (entries > max_entries) return {};

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
    std::vector<ChoiceTable> tables;
    std::vector<std::uint32_t> filled;
    for (const auto& var : space.variables) {
        ChoiceTable tab;
        if (var.free) {
            std::vector<Point> r0 = design.blocks[var.rows.front()];
            do tab.choices.push_back(r0);
            while (std::next_permutation(r0.begin(), r0.end()));
        } else {
            tab.choices = var.options;
            std::sort(tab.choices.begin(), tab.choices.end());
        }
        for (const auto& base : tab.choices) {
            tab.start.push_back(static_cast<std::uint32_t>(tab.cell.size()));
            filled.clear();
            for (std::size_t ri = 0; ri < var.rows.size(); ++ri)
                index.for_each_cell(image_row(space.elements[var.element_of_row[ri]], base, design.v),
                                    [&](std::size_t c) { filled.push_back(static_cast<std::uint32_t>(c)); });
            std::sort(filled.begin(), filled.end());
            for (std::size_t i = 0; i < filled.size();) {
                std::size_t j = i;
                while (j < filled.size() && filled[j] == filled[i]) ++j;
                tab.cell.push_back(filled[i]);
                tab.mult.push_back(static_cast<std::int32_t>(j - i));
                i = j;
            }
        }
        tab.start.push_back(static_cast<std::uint32_t>(tab.cell.size()));
        if (var.free)
            for (const auto& base : tab.choices)
                for (const auto& [i, j] : pairs) {
                    std::vector<Point> swapped = base;
                    std::swap(swapped[static_cast<std::size_t>(i)], swapped[static_cast<std::size_t>(j)]);
                    tab.swap_to.push_back(index_of(tab.choices, swapped));
                }
        tables.push_back(std::move(tab));
    }
    return tables;
}

EncodingMatrix materialize(const SearchSpace& space, const Design& design, const std::vector<std::vector<Point>>& bases) {
    EncodingMatrix m{design.v, design.k, std::vector<std::vector<Point>>(design.b())};
    for (std::size_t vi = 0; vi < space.variables.size(); ++vi) {
        const auto& var = space.variables[vi];
        for (std::size_t ri = 0; ri < var.rows.size(); ++ri)
            m.rows[var.rows[ri]] = image_row(space.elements[var.element_of_row[ri]], bases[vi], design.v);
    }
    return m;
}

/// Incremental energy over a search space. A move either transposes two
/// positions of a free variable's base ordering or switches a constrained
/// variable to another allowed base ordering. Works from the choice tables
/// when there are any and recomputes the cells of the moved rows otherwise.
/// Phase one of the simplex method on the relaxation where each variable takes
/// a convex combination of its choices. False only when that relaxation has
/// no solution; true also when it is too large to decide here.
bool relaxation_feasible(const std::vector<ChoiceTable>& tables, const CellIndex& index) {
    constexpr std::size_t max_tableau = std::size_t{1} << 21;
    constexpr double eps = 1e-9;
    std::size_t n = 0;
    for (const auto& tab : tables) n += tab.choices.size();

    std::vector<std::vector<std::pair<std::uint32_t, std::int32_t>>> by_cell(index.size());
    std::uint32_t col = 0;
    for (const auto& tab : tables)
        for (std::size_t i = 0; i < tab.choices.size(); ++i, ++col)
            for (std::uint32_t e = tab.start[i]; e < tab.start[i + 1]; ++e) by_cell[tab.cell[e]].emplace_back(col, tab.mult[e]);
    std::set<std::pair<std::int64_t, std::vector<std::pair<std::uint32_t, std::int32_t>>>> distinct;
    for (std::size_t c = 0; c < by_cell.size(); ++c) distinct.emplace(index.target(c), std::move(by_cell[c]));

    const std::size_t m = tables.size() + distinct.size();
    if (m * (n + 1) > max_tableau) return true;
    std::vector<std::vector<double>> a(m, std::vector<double>(n + 1, 0.0));  // column n is the right-hand side
    std::size_t r = 0;
    col = 0;
    for (const auto& tab : tables) {
        for (std::size_t i = 0; i < tab.choices.size(); ++i) a[r][col++] = 1.0;
        a[r++][n] = 1.0;
    }
    for (const auto& [target, entries] : distinct) {
        for (const auto& [j, mult] : entries) a[r][j] = mult;
        a[r++][n] = static_cast<double>(target);
    }

    // Every row starts with its artificial variable basic; artificials never re-enter.
    std::vector<double> reduced(n + 1, 0.0);
    for (const auto& row : a)
        for (std::size_t j = 0; j <= n; ++j) reduced[j] -= row[j];
    for (std::size_t iter = 0;; ++iter) {
        std::size_t enter = n;
        for (std::size_t j = 0; j < n; ++j)
            if (reduced[j] < -eps && (enter == n || reduced[j] < reduced[enter])) enter = j;
        if (enter == n) return -reduced[n] < 1e-6;
        if (iter == 50 * (m + n)) return true;
        std::size_t leave = m;
        for (std::size_t i = 0; i < m; ++i) {
            if (a[i][enter] <= eps) continue;
            if (leave == m || a[i][n] * a[leave][enter] < a[leave][n] * a[i][enter]) leave = i;
        }
        if (leave == m) return true;
        const double pivot = a[leave][enter];
        for (auto& x : a[leave]) x /= pivot;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || a[i][enter] == 0.0) continue;
            const double f = a[i][enter];
            for (std::size_t j = 0; j <= n; ++j) a[i][j] -= f * a[leave][j];
        }
        const double f = reduced[enter];
        for (std::size_t j = 0; j <= n; ++j) reduced[j] -= f * a[leave][j];
    }
}

class Annealer {
public:
    Annealer(const SearchSpace& space, const CellIndex& index, const std::vector<ChoiceTable>& tables, int v,
             std::vector<std::vector<Point>> bases)
        : space_(space), index_(index), tables_(tables), v_(v), bases_(std::move(bases)) {
        excess_.resize(index.size());
        for (std::size_t c = 0; c < excess_.size(); ++c) excess_[c] = -index.target(c);
        if (!tables_.empty()) {
            for (std::size_t vi = 0; vi < bases_.size(); ++vi) {
                choice_.push_back(index_of(tables_[vi].choices, bases_[vi]));
                const ChoiceTable& tab = tables_[vi];
                for (std::uint32_t i = tab.start[choice_[vi]]; i < tab.start[choice_[vi] + 1]; ++i) excess_[tab.cell[i]] += tab.mult[i];
            }
        } else {
            std::vector<Point> row;
            for (std::size_t vi = 0; vi < bases_.size(); ++vi) {
                const auto& var = space_.variables[vi];
                for (std::size_t ri = 0; ri < var.rows.size(); ++ri)
                    index_.for_each_cell(image_row(space_.elements[var.element_of_row[ri]], bases_[vi], v_),
                                         [&](std::size_t c) { ++excess_[c]; });
            }
        }
        for (std::int64_t e : excess_) energy_ += e * e;
        if (!bases_.empty()) k_ = static_cast<int>(bases_.front().size());
        pairs_ = static_cast<std::size_t>(k_ * (k_ - 1) / 2);
    }

    std::int64_t energy() const { return energy_; }

    std::vector<std::vector<Point>> bases() const {
        if (tables_.empty()) return bases_;
        std::vector<std::vector<Point>> out;
        for (std::size_t vi = 0; vi < choice_.size(); ++vi) out.push_back(tables_[vi].choices[choice_[vi]]);
        return out;
    }

    /// Applies a random move and returns the exact energy change.
    std::int64_t propose(std::mt19937_64& rng) {
        last_ = uniform_below(rng, space_.variables.size());
        const auto& var = space_.variables[last_];
        if (!tables_.empty()) {
            const ChoiceTable& tab = tables_[last_];
            saved_choice_ = choice_[last_];
            std::uint32_t next = saved_choice_;
            if (var.free) {
                next = tab.swap_to[saved_choice_ * pairs_ + uniform_below(rng, pairs_)];
            } else {
                if (tab.choices.size() < 2) return 0;
                const auto pick = static_cast<std::uint32_t>(uniform_below(rng, tab.choices.size() - 1));
                next = pick >= saved_choice_ ? pick + 1 : pick;
            }
            return switch_choice(last_, next);
        }
        saved_ = bases_[last_];
        std::vector<Point> next = saved_;
        if (var.free) {
            const auto i = uniform_below(rng, static_cast<std::uint64_t>(k_));
            auto j = uniform_below(rng, static_cast<std::uint64_t>(k_ - 1));
            if (j >= i) ++j;
            std::swap(next[i], next[j]);
        } else {
            if (var.options.size() < 2) return 0;
            const auto current = std::find(var.options.begin(), var.options.end(), saved_) - var.options.begin();
            auto pick = uniform_below(rng, var.options.size() - 1);
            if (pick >= static_cast<std::uint64_t>(current)) ++pick;
            next = var.options[pick];
        }
        return set_base(last_, std::move(next));
    }

    void revert() {
        if (!tables_.empty())
            switch_choice(last_, saved_choice_);
        else
            set_base(last_, saved_);
    }

private:
    std::int64_t switch_choice(std::size_t vi, std::uint32_t next) {
        const ChoiceTable& tab = tables_[vi];
        std::int64_t d = 0;
        for (std::uint32_t i = tab.start[choice_[vi]]; i < tab.start[choice_[vi] + 1]; ++i) {
            auto& e = excess_[tab.cell[i]];
            const std::int64_t m = tab.mult[i];
            d += m * m - 2 * m * e;
            e -= m;
        }
        for (std::uint32_t i = tab.start[next]; i < tab.start[next + 1]; ++i) {
            auto& e = excess_[tab.cell[i]];
            const std::int64_t m = tab.mult[i];
            d += m * m + 2 * m * e;
            e += m;
        }
        choice_[vi] = next;
        energy_ += d;
        return d;
    }

    std::int64_t set_base(std::size_t vi, std::vector<Point> base) {
        const auto& var = space_.variables[vi];
        std::int64_t d = 0;
        for (std::size_t ri = 0; ri < var.rows.size(); ++ri) {
            const GroupElement& g = space_.elements[var.element_of_row[ri]];
            index_.for_each_cell(image_row(g, bases_[vi], v_), [&](std::size_t c) {
                d += 1 - 2 * excess_[c];
                --excess_[c];
            });
            index_.for_each_cell(image_row(g, base, v_), [&](std::size_t c) {
                d += 1 + 2 * excess_[c];
                ++excess_[c];
            });
        }
        bases_[vi] = std::move(base);
        energy_ += d;
        return d;
    }

    const SearchSpace& space_;
    const CellIndex& index_;
    const std::vector<ChoiceTable>& tables_;
    int v_;
    int k_ = 0;
    std::size_t pairs_ = 0;
    std::vector<std::vector<Point>> bases_;
    std::vector<std::uint32_t> choice_;
    std::vector<std::int64_t> excess_;  // count minus target
    std::int64_t energy_ = 0;

    std::size_t last_ = 0;
    std::vector<Point> saved_;
    std::uint32_t saved_choice_ = 0;
};

/// Randomized depth-first search over the tabulated variables: the variable
/// with the fewest fitting choices goes first, its choices in seeded order.
/// A branch dies when a cell would exceed its target or a cell below target
/// is out of reach of every fitting choice left.
class Backtracker {
public:
    Backtracker(const std::vector<ChoiceTable>& tables, const CellIndex& index)
        : tables_(tables), excess_(index.size()), touched_(index.size(), 0), assigned_(tables.size(), 0),
          choice_(tables.size(), 0), fitting_(tables.size() + 1) {
        for (std::size_t c = 0; c < excess_.size(); ++c) excess_[c] = -index.target(c);
    }

    SearchVerdict run(std::mt19937_64& rng, std::uint64_t max_nodes, std::chrono::steady_clock::time_point deadline,
                      std::uint64_t& nodes) {
        rng_ = &rng;
        max_nodes_ = max_nodes;
        deadline_ = deadline;
        nodes_ = 0;
        const int r = search(0);
        nodes = nodes_;
        return r > 0 ? SearchVerdict::Solved : r == 0 ? SearchVerdict::Infeasible : SearchVerdict::Undecided;
    }

    std::vector<std::vector<Point>> bases() const {
        std::vector<std::vector<Point>> out;
        for (std::size_t vi = 0; vi < tables_.size(); ++vi) out.push_back(tables_[vi].choices[choice_[vi]]);
        return out;
    }

private:
    bool fits(std::size_t vi, std::uint32_t ch) const {
        const ChoiceTable& tab = tables_[vi];
        for (std::uint32_t i = tab.start[ch]; i < tab.start[ch + 1]; ++i)
            if (excess_[tab.cell[i]] + tab.mult[i] > 0) return false;
        return true;
    }

    void place(std::size_t vi, std::uint32_t ch, int sign) {
        const ChoiceTable& tab = tables_[vi];
        for (std::uint32_t i = tab.start[ch]; i < tab.start[ch + 1]; ++i) excess_[tab.cell[i]] += sign * tab.mult[i];
    }

    /// 1 solved, 0 subtree exhausted, -1 out of budget.
    int search(std::size_t depth) {
        if (++nodes_ > max_nodes_) return -1;
        if ((nodes_ & 0xff) == 0 && std::chrono::steady_clock::now() > deadline_) return -1;
        if (depth == tables_.size())
            return std::all_of(excess_.begin(), excess_.end(), [](std::int32_t e) { return e == 0; }) ? 1 : 0;

        ++stamp_;
        auto& best = fitting_[depth];
        std::vector<std::uint32_t> candidates;
        std::size_t chosen = tables_.size();
        for (std::size_t vi = 0; vi < tables_.size(); ++vi) {
            if (assigned_[vi]) continue;
            candidates.clear();
            const ChoiceTable& tab = tables_[vi];
            for (std::uint32_t ch = 0; ch + 1 < tab.start.size(); ++ch) {
                if (!fits(vi, ch)) continue;
                candidates.push_back(ch);
                for (std::uint32_t i = tab.start[ch]; i < tab.start[ch + 1]; ++i) touched_[tab.cell[i]] = stamp_;
            }
            if (candidates.empty()) return 0;
            if (chosen == tables_.size() || candidates.size() < best.size()) {
                chosen = vi;
                best.swap(candidates);
            }
        }
        for (std::size_t c = 0; c < excess_.size(); ++c)
            if (excess_[c] < 0 && touched_[c] != stamp_) return 0;

        seeded_shuffle(best, *rng_);
        assigned_[chosen] = 1;
        for (std::uint32_t ch : best) {
            place(chosen, ch, +1);
            const int r = search(depth + 1);
            if (r > 0) {
                choice_[chosen] = ch;
                return 1;
            }
            place(chosen, ch, -1);
            if (r < 0) {
                assigned_[chosen] = 0;
                return -1;
            }
        }
        assigned_[chosen] = 0;
        return 0;
    }

    const std::vector<ChoiceTable>& tables_;
    std::vector<std::int32_t> excess_;
    std::vector<std::uint64_t> touched_;
    std::uint64_t stamp_ = 0;
    std::vector<char> assigned_;
    std::vector<std::uint32_t> choice_;
    std::vector<std::vector<std::uint32_t>> fitting_;
    std::mt19937_64* rng_ = nullptr;
    std::uint64_t max_nodes_ = 0;
    std::uint64_t nodes_ = 0;
    std::chrono::steady_clock::time_point deadline_;
};

std::vector<std::vector<Point>> random_bases(const SearchSpace& space, const Design& design, std::mt19937_64& rng) {
    std::vector<std::vector<Point>> bases;
    for (const auto& var : space.variables) {
        if (var.free) {
            std::vector<Point> r0 = design.blocks[var.rows.front()];
            seeded_shuffle(r0, rng);
            bases.push_back(std::move(r0));
        } else {
            bases.push_back(var.options[uniform_below(rng, var.options.size())]);
        }
    }
    return bases;
}

}  // namespace

std::vector<int> translation_steps(const Design& design) {
    const std::set<Subset> blocks(design.blocks.begin(), design.blocks.end());
    std::vector<int> steps;
    for (int s = 1; s <= design.v; ++s)
        if (design.v % s == 0 && (s == design.v || maps_blocks_into(design, blocks, 1, s))) steps.push_back(s);
    return steps;
}

std::vector<int> multiplier_generators(const Design& design) {
    const std::set<Subset> blocks(design.blocks.begin(), design.blocks.end());
    std::vector<int> out{1};
    std::set<std::vector<int>> subgroups;
    for (int a = 2; a < design.v; ++a) {
        if (std::gcd(a, design.v) != 1 || !maps_blocks_into(design, blocks, a, 0)) continue;
        if (subgroups.insert(multiplier_group(design.v, {a})).second) out.push_back(a);
    }
    return out;
}

std::string to_string(const OrderingSymmetry& sym) {
    std::string s = "x->x+" + std::to_string(sym.step) + ", x->" + std::to_string(sym.multiplier) + "x, columns (";
    for (std::size_t i = 0; i < sym.twist.size(); ++i) s += (i ? "," : "") + std::to_string(sym.twist[i]);
    return s + "), " + std::to_string(sym.orbits) + " orbits";
}

std::vector<OrderingSymmetry> ordering_symmetries(const Design& design, int level) {
    design.check_structure();
    std::vector<OrderingSymmetry> out;
    if (level < 1 || level > design.t - 1 || level > max_secrecy_level) return out;
    const CellIndex index(design.v, design.k, design.b(), level);
    for (auto& space : symmetric_spaces(design, level)) {
        const auto tables = tabulate(space, index, design);
        if (!tables.empty()) space.symmetry.relaxation_feasible = relaxation_feasible(tables, index);
        out.push_back(std::move(space.symmetry));
    }
    return out;
}

namespace {

/// One annealing run; true when it reached energy zero.
bool anneal(Annealer& state, const SearchSpace& space, int k, const AnnealingSchedule& sched, std::mt19937_64& rng,
            std::chrono::steady_clock::time_point deadline, std::uint64_t& moves) {
    // initial temperature: mean uphill step accepted with the target probability
    double uphill_sum = 0;
    int uphill_count = 0;
    for (int s = 0; s < sched.warmup_samples; ++s) {
        const std::int64_t d = state.propose(rng);
        state.revert();
        if (d > 0) {
            uphill_sum += static_cast<double>(d);
            ++uphill_count;
        }
    }
    const double mean_uphill = uphill_count > 0 ? uphill_sum / uphill_count : 1.0;
    double temperature = -mean_uphill / std::log(sched.target_uphill_acceptance);

    const auto moves_per_temperature = static_cast<std::uint64_t>(
        std::max(1.0, sched.sweeps_per_temperature * static_cast<double>(space.variables.size() * binomial(k, 2))));
    int quiet_stages = 0;
    while (state.energy() > 0 && temperature >= sched.min_temperature && quiet_stages < sched.frozen_stages) {
        std::uint64_t changes = 0;
        for (std::uint64_t step = 0; step < moves_per_temperature && state.energy() > 0; ++step) {
            const std::int64_t d = state.propose(rng);
            if (d > 0 && uniform_unit(rng) >= std::exp(-static_cast<double>(d) / temperature))
                state.revert();
            else if (d != 0)
                ++changes;
            if ((++moves & 0xfff) == 0 && std::chrono::steady_clock::now() > deadline) return false;
        }
        quiet_stages = changes == 0 ? quiet_stages + 1 : 0;
        temperature *= sched.cooling;
    }
    return state.energy() == 0;
}

}  // namespace

OrderingResult order_design_multifold(const Design& design, const OrderingConfig& config) {
    design.check_structure();
    if (config.secrecy_level < 1) fail(ErrorKind::Parameter, "secrecy level must be at least 1");
    if (config.secrecy_level > design.t - 1)
        fail(ErrorKind::Parameter, "secrecy level " + std::to_string(config.secrecy_level) + " exceeds t-1 = " + std::to_string(design.t - 1));
    if (config.secrecy_level > max_secrecy_level)
        fail(ErrorKind::Parameter, "secrecy level above " + std::to_string(max_secrecy_level) + " is not supported");
    for (const auto& [ts, ok] : divisibility_verdicts(design, config.secrecy_level))
        if (!ok)
            fail(ErrorKind::Admissibility, "ordering needs C(v,t*) | b for every t* <= " + std::to_string(config.secrecy_level) +
                                               "; fails at t*=" + std::to_string(ts) + ": " + std::to_string(binomial(design.v, ts)) +
                                               " does not divide " + std::to_string(design.b()));

    OrderingResult result;
    if (config.secrecy_level == 1) {
        result.matrix = order_design_onefold(design, config.seed);
        result.verdict = SearchVerdict::Solved;
        return result;
    }

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(config.time_limit_seconds));
    const CellIndex index(design.v, design.k, design.b(), config.secrecy_level);
    std::vector<SearchSpace> spaces = symmetric_spaces(design, config.secrecy_level);
    std::vector<std::vector<ChoiceTable>> tables;
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        tables.push_back(tabulate(spaces[i], index, design));
        if (!tables[i].empty()) spaces[i].symmetry.relaxation_feasible = relaxation_feasible(tables[i], index);
        if (spaces[i].symmetry.relaxation_feasible) live.push_back(i);
    }
    const SearchSpace plain = plain_space(design);
    std::optional<std::vector<ChoiceTable>> plain_tables;

    auto accept = [&](const SearchSpace& space, const std::vector<std::vector<Point>>& bases) {
        EncodingMatrix m = materialize(space, design, bases);
        if (!verify_ordering(m, design, config.secrecy_level).ok)
            fail(ErrorKind::Verification, "ordering search reached a balanced state that does not verify");
        result.matrix = std::move(m);
        if (&space != &plain) result.symmetry = space.symmetry;
        result.verdict = SearchVerdict::Solved;
    };

    for (int restart = 0; restart <= config.max_restarts && std::chrono::steady_clock::now() < deadline; ++restart) {
        result.restarts = restart;
        const auto r = static_cast<std::uint64_t>(restart);
        if (live.empty()) {
            if (!plain_tables) plain_tables = tabulate(plain, index, design);
            std::mt19937_64 rng(derive_seed(config.seed, "anneal", r));
            Annealer state(plain, index, *plain_tables, design.v,
                           order_design_onefold(design, derive_seed(config.seed, "anneal-start", r)).rows);
            if (anneal(state, plain, design.k, config.schedule, rng, deadline, result.moves)) {
                accept(plain, state.bases());
                return result;
            }
            continue;
        }
        const auto ones = static_cast<std::size_t>(std::countr_one(r >> 1));
        const std::size_t si = live[std::min(ones, live.size() - 1)];
        const SearchSpace& space = spaces[si];
        if (r % 2 == 1 && !tables[si].empty()) {
            std::mt19937_64 rng(derive_seed(config.seed, "backtrack", r));
            Backtracker search(tables[si], index);
            std::uint64_t nodes = 0;
            const SearchVerdict verdict = search.run(rng, config.backtrack_nodes, deadline, nodes);
            result.nodes += nodes;
            if (verdict == SearchVerdict::Solved) {
                accept(space, search.bases());
                return result;
            }
            if (verdict == SearchVerdict::Infeasible) live.erase(std::find(live.begin(), live.end(), si));
            continue;
        }
        std::mt19937_64 rng(derive_seed(config.seed, "anneal", r));
        Annealer state(space, index, tables[si], design.v, random_bases(space, design, rng));
        if (anneal(state, space, design.k, config.schedule, rng, deadline, result.moves)) {
            accept(space, state.bases());
            return result;
        }
    }
    result.verdict = SearchVerdict::Undecided;
    return result;
}

}  // namespace steinauth
