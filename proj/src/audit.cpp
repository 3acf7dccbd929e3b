#include "steinauth/audit.hpp"

#include <algorithm>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "steinauth/error.hpp"

namespace steinauth {

Rational massey_bound(int k, int v, int i) {
    if (i < 0 || i >= k || k > v)
        fail(ErrorKind::Parameter, "Massey bound needs 0 <= i < k <= v (i=" + std::to_string(i) + ", k=" + std::to_string(k) +
                                       ", v=" + std::to_string(v) + ")");
    return Rational(k - i, v - i);
}

namespace {

/// Every i-subset of a valid-message set, with the rules whose M(e) contains it.
std::map<Subset, std::vector<std::size_t>> observable_sets(const AuthenticationCode& code, int i) {
    std::map<Subset, std::vector<std::size_t>> out;
    for (std::size_t e = 0; e < code.b(); ++e) {
        const Subset valid = code.valid_messages(e);
        for_each_subset(std::span<const Point>(valid), i, [&](const Subset& m) { out[m].push_back(e); });
    }
    return out;
}

}  // namespace

DeceptionAssessment deception_probability(const AuthenticationCode& code, int i, bool with_details) {
    if (i < 0 || i >= code.k()) fail(ErrorKind::Parameter, "spoofing order must lie in [0, k); got " + std::to_string(i));
    DeceptionAssessment out;
    out.order = i;
    out.massey_bound = massey_bound(code.k(), code.v(), i);
    const auto& weights = code.strategy().weights;

    if (i == 0) {
        std::vector<Rational> mass(static_cast<std::size_t>(code.v()));
        for (std::size_t e = 0; e < code.b(); ++e)
            for (Point m : code.matrix().rows[e]) mass[static_cast<std::size_t>(m)] += weights[e];
        const auto best = std::max_element(mass.begin(), mass.end());
        out.p_deception = *best;
        out.observation_count = 1;
        out.observation_mass = Rational(1);
        if (with_details)
            out.details.push_back({{}, Rational(1), static_cast<Point>(best - mass.begin()), *best});
    } else {
        if (!code.sources().defines_size(i))
            fail(ErrorKind::Parameter, "source distribution does not define subsets of size " + std::to_string(i));
        for (const auto& [observed, rules] : observable_sets(code, i)) {
            // p(M*) = sum_e p_E(e) p_S(f_e(M*)); payoff numerators accumulate per inserted message
            Rational p_observed;
            std::map<Point, Rational> insertion;
            for (std::size_t e : rules) {
                const Rational w = weights[e] * code.sources().probability(code.source_preimage(e, observed));
                if (w.is_zero()) continue;
                p_observed += w;
                for (Point m : code.matrix().rows[e])
                    if (!std::binary_search(observed.begin(), observed.end(), m)) insertion[m] += w;
            }
            if (p_observed.is_zero()) continue;
            ++out.observation_count;
            out.observation_mass += p_observed;
            std::optional<Point> best_msg;
            Rational best;
            for (const auto& [m, num] : insertion)
                if (!best_msg || num > best) {
                    best = num;
                    best_msg = m;
                }
            out.p_deception += best;
            if (with_details) out.details.push_back({observed, p_observed, best_msg, best / p_observed});
        }
    }
    if (out.p_deception < out.massey_bound)
        fail(ErrorKind::Verification, "deception probability " + out.p_deception.str() + " below the Massey bound " +
                                          out.massey_bound.str() + " at order " + std::to_string(i));
    out.tight = out.p_deception == out.massey_bound;
    return out;
}

int spoofing_security_level(const std::vector<DeceptionAssessment>& assessments, int max_order) {
    int level = -1;
    for (int i = 0; i <= max_order; ++i) {
        const auto it = std::find_if(assessments.begin(), assessments.end(), [&](const DeceptionAssessment& a) { return a.order == i; });
        if (it == assessments.end() || !it->tight) break;
        level = i;
    }
    return level;
}

int spoofing_security_level(const AuthenticationCode& code, int t_design) {
    const int max_order = std::min(t_design - 1, code.k() - 1);
    std::vector<DeceptionAssessment> assessments;
    for (int i = 0; i <= max_order; ++i) {
        assessments.push_back(deception_probability(code, i));
        if (!assessments.back().tight) break;
    }
    return spoofing_security_level(assessments, max_order);
}

const char* to_string(SecrecyMethod method) {
    return method == SecrecyMethod::BayesExact ? "bayes-exact" : "frequency-shortcut";
}

SecrecyAssessment perfect_secrecy_check(const AuthenticationCode& code, int level, SecrecyMethod method) {
    if (level < 0 || level > code.k()) fail(ErrorKind::Parameter, "secrecy level must lie in [0, k]; got " + std::to_string(level));
    if (method == SecrecyMethod::FrequencyShortcut && (!code.strategy().is_uniform() || !code.sources().is_equiprobable()))
        fail(ErrorKind::Parameter, "frequency-shortcut secrecy check needs a uniform strategy and equiprobable sources");

    SecrecyAssessment out{level, true, method, std::nullopt};
    const auto& weights = code.strategy().weights;
    for (int ts = 1; ts <= level && out.perfect; ++ts) {
        const std::vector<Subset> source_sets = all_subsets(code.k(), ts);
        if (method == SecrecyMethod::BayesExact && !code.sources().defines_size(ts))
            fail(ErrorKind::Parameter, "source distribution does not define subsets of size " + std::to_string(ts));
        for (const auto& [observed, rules] : observable_sets(code, ts)) {
            std::map<Subset, Rational> lhs;   // sum of p_E(e) over rules with f_e(M*) = S*
            std::map<Subset, std::uint64_t> freq;
            Rational rhs;
            for (std::size_t e : rules) {
                const Subset preimage = code.source_preimage(e, observed);
                if (method == SecrecyMethod::BayesExact) {
                    lhs[preimage] += weights[e];
                    rhs += weights[e] * code.sources().probability(preimage);
                } else {
                    ++freq[preimage];
                }
            }
            if (method == SecrecyMethod::BayesExact && rhs.is_zero()) continue;  // never observed
            for (const Subset& s : source_sets) {
                bool holds;
                if (method == SecrecyMethod::BayesExact) {
                    if (code.sources().probability(s).is_zero()) continue;
                    const auto it = lhs.find(s);
                    holds = (it == lhs.end() ? Rational(0) : it->second) == rhs;
                } else {
                    const auto it = freq.find(s);
                    const std::uint64_t c = it == freq.end() ? 0 : it->second;
                    holds = c * source_sets.size() == rules.size();
                }
                if (!holds) {
                    out.perfect = false;
                    out.first_violation = SecrecyWitness{ts, observed, s};
                    break;
                }
            }
            if (!out.perfect) break;
        }
    }
    return out;
}

OptimalityVerdict optimality_check(const AuthenticationCode& code, int t) {
    if (t < 1 || t > code.k()) fail(ErrorKind::Parameter, "optimality check needs 1 <= t <= k");
    OptimalityVerdict out;
    out.bound = Rational(static_cast<std::int64_t>(binomial(code.v(), t)), static_cast<std::int64_t>(binomial(code.k(), t)));
    out.optimal = Rational(static_cast<std::int64_t>(code.b())) == out.bound;
    return out;
}

std::vector<DivisibilityVerdict> divisibility_check(const Design& design, int level) {
    std::vector<DivisibilityVerdict> out;
    for (int ts = 1; ts <= std::min(level, design.t - 1); ++ts) {
        const std::uint64_t n = binomial(design.v, ts);
        out.push_back({ts, n, design.b(), design.b() % n == 0});
    }
    return out;
}

namespace {

bool is_prime_power(std::int64_t q) {
    if (q < 2) return false;
    std::int64_t p = 2;
    while (p * p <= q && q % p != 0) ++p;
    if (q % p != 0) return true;  // q itself is prime
    while (q % p == 0) q /= p;
    return q == 1;
}

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

struct LiteralRow {
    int t_a, k;
    std::int64_t v, b;
};

// optimal codes with perfect one-fold secrecy from specific designs
constexpr LiteralRow kLiteralRows[] = {
    {2, 5, 26, 260},       {3, 5, 11, 66},         {3, 7, 23, 253},        {3, 5, 23, 1771},
    {3, 5, 47, 35673},     {3, 5, 83, 367524},     {3, 5, 71, 194327},     {3, 5, 107, 1032122},
    {3, 5, 131, 2343328},  {3, 5, 167, 6251311},   {3, 5, 243, 28344492},  {4, 6, 12, 132},
    {4, 6, 84, 5145336},   {4, 6, 244, 1152676008},
};

}  // namespace

TableCheck table_regression(const TableRow& row) {
    TableCheck out;
    const std::int64_t v = row.v;
    const std::int64_t k = row.k;
    if (row.id == "projective" || row.id == "mobius") {
        const bool q_ok = is_prime_power(row.q) && row.d >= 2 && row.d % 2 == 0 && k == row.q + 1;
        if (row.id == "projective") {
            out.admissible = q_ok && v == (ipow(row.q, row.d + 1) - 1) / (row.q - 1);
            out.expected_b = v * (v - 1) / (k * (k - 1));
        } else {
            out.admissible = q_ok && v == ipow(row.q, row.d) + 1;
            out.expected_b = v * (v - 1) * (v - 2) / (k * (k - 1) * (k - 2));
        }
    } else if (row.id == "k3") {
        out.admissible = k == 3 && v % 6 == 1;
        out.expected_b = v * (v - 1) / 6;
    } else if (row.id == "k4") {
        out.admissible = k == 4 && v % 12 == 1;
        out.expected_b = v * (v - 1) / 12;
    } else if (row.id == "k5") {
        out.admissible = k == 5 && v % 20 == 1;
        out.expected_b = v * (v - 1) / 20;
    } else if (row.id == "sqs") {
        out.admissible = k == 4 && (v % 24 == 2 || v % 24 == 10);
        out.expected_b = v * (v - 1) * (v - 2) / 24;
    } else if (row.id == "literal") {
        const auto* it = std::find_if(std::begin(kLiteralRows), std::end(kLiteralRows),
                                      [&](const LiteralRow& r) { return r.t_a == row.t_a && r.k == k && r.v == v; });
        if (it == std::end(kLiteralRows))
            fail(ErrorKind::Parameter, "no tabulated code with t_A=" + std::to_string(row.t_a) + ", k=" + std::to_string(k) + ", v=" + std::to_string(v));
        out.admissible = true;
        out.expected_b = it->b;
    } else {
        fail(ErrorKind::Parameter, "unknown table row '" + row.id + "'");
    }
    out.matches = out.admissible && out.expected_b == row.b;
    return out;
}

AuditReport run_audit(const Design& design, const std::optional<EncodingMatrix>& matrix, const AuditOptions& options) {
    design.check_structure();
    if (options.max_spoofing_order < 0 || options.max_spoofing_order >= design.k)
        fail(ErrorKind::Usage, "max spoofing order must lie in [0, k)");
    if (options.secrecy_level < 0 || options.secrecy_level > design.k) fail(ErrorKind::Usage, "secrecy level must lie in [0, k]");
    EncodingMatrix m = matrix ? *matrix : EncodingMatrix::from_sorted_blocks(design);
    m.check();
    check_matrix_matches_design(m, design);
    const AuthenticationCode code = from_matrix_equiprobable(std::move(m));

    AuditReport r;
    r.t = design.t;
    r.v = design.v;
    r.k = design.k;
    r.lambda = design.lambda;
    r.b = design.b();
    for (int i = 0; i <= options.max_spoofing_order; ++i) r.spoofing.push_back(deception_probability(code, i));
    r.spoofing_security_level = spoofing_security_level(r.spoofing, std::min(options.max_spoofing_order, design.t - 1));
    r.secrecy = perfect_secrecy_check(code, options.secrecy_level, options.method);
    r.optimality = optimality_check(code, design.t);
    r.divisibility = divisibility_check(design, options.secrecy_level);
    return r;
}

std::string AuditReport::to_json() const {
    using nlohmann::ordered_json;
    ordered_json j;
    j["params"] = {{"t", t}, {"v", v}, {"k", k}, {"lambda", lambda}, {"b", b}};
    ordered_json spoof = ordered_json::array();
    for (const auto& a : spoofing)
        spoof.push_back({{"order", a.order},
                         {"p_deception", a.p_deception.str()},
                         {"massey_bound", a.massey_bound.str()},
                         {"tight", a.tight}});
    j["spoofing"] = spoof;
    j["spoofing_security_level"] = spoofing_security_level;
    ordered_json sec = {{"level", secrecy.level}, {"perfect", secrecy.perfect}, {"method", to_string(secrecy.method)}};
    if (secrecy.first_violation)
        sec["witness"] = {{"t_star", secrecy.first_violation->t_star},
                          {"messages", secrecy.first_violation->messages},
                          {"sources", secrecy.first_violation->sources}};
    j["secrecy"] = sec;
    j["optimal"] = optimality.optimal;
    j["optimality_bound"] = optimality.bound.str();
    ordered_json div = ordered_json::array();
    for (const auto& d : divisibility)
        div.push_back({{"t_star", d.t_star}, {"subsets", d.subsets}, {"b", d.b}, {"divides", d.divides}});
    j["divisibility"] = div;
    return j.dump(2) + "\n";
}

}  // namespace steinauth
