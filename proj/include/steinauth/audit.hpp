#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "steinauth/authcode.hpp"
#include "steinauth/design.hpp"

namespace steinauth {

/// (k - i) / (v - i), the lower bound on the order-i deception probability.
Rational massey_bound(int k, int v, int i);

struct ObservationDetail {
    Subset observed;                    // M*
    Rational probability;               // p(M*), the induced message-set mass
    std::optional<Point> best_insertion;  // none when every insertion has payoff 0
    Rational payoff;
};

struct DeceptionAssessment {
    int order = 0;
    Rational p_deception;
    Rational massey_bound;
    bool tight = false;
    std::size_t observation_count = 0;
    Rational observation_mass;  // sum of p(M*) over observed sets; 1 for i >= 1
    std::vector<ObservationDetail> details;
};

/// Optimal-insertion spoofing attack of order i, computed exactly. For i >= 1
/// only message sets contained in some valid-message set are enumerated.
DeceptionAssessment deception_probability(const AuthenticationCode& code, int i, bool with_details = false);

/// Largest t_A <= max_order with P_di tight for every i <= t_A; -1 when P_d0 is not tight.
int spoofing_security_level(const std::vector<DeceptionAssessment>& assessments, int max_order);
int spoofing_security_level(const AuthenticationCode& code, int t_design);

enum class SecrecyMethod { BayesExact, FrequencyShortcut };

const char* to_string(SecrecyMethod method);

struct SecrecyWitness {
    int t_star = 0;
    Subset messages;  // M*
    Subset sources;   // S*
};

struct SecrecyAssessment {
    int level = 0;
    bool perfect = false;
    SecrecyMethod method = SecrecyMethod::BayesExact;
    std::optional<SecrecyWitness> first_violation;
};

/// Perfect t-fold secrecy for every t* <= level. BayesExact checks
///   sum_{e : S* = f_e(M*)} p_E(e) = sum_{e : M* in M(e)} p_E(e) p_S(f_e(M*))
/// for every observable M* and every S* of positive prior. FrequencyShortcut
/// (uniform strategy, equiprobable sources only) checks that each observed
/// message set occurs equally often in every set of t* columns.
SecrecyAssessment perfect_secrecy_check(const AuthenticationCode& code, int level, SecrecyMethod method = SecrecyMethod::BayesExact);

struct OptimalityVerdict {
    bool optimal = false;
    Rational bound;  // C(v,t) / C(k,t)
};

OptimalityVerdict optimality_check(const AuthenticationCode& code, int t);

struct DivisibilityVerdict {
    int t_star = 0;
    std::uint64_t subsets = 0;  // C(v, t*)
    std::uint64_t b = 0;
    bool divides = false;
};

/// C(v, t*) | b for t* = 1..min(level, t-1).
std::vector<DivisibilityVerdict> divisibility_check(const Design& design, int level);

/// One row of the published parameter tables.
struct TableRow {
    std::string id;  // "projective", "k3", "k4", "k5", "mobius", "sqs" (formula rows) or "literal"
    int t_a = 0;     // only consulted for "literal"
    int k = 0;
    std::int64_t v = 0;
    std::int64_t b = 0;  // claimed number of encoding rules
    int q = 0;           // projective / Moebius rows
    int d = 0;
};

struct TableCheck {
    bool admissible = false;  // the row's side conditions on (k, v, q, d) hold
    std::int64_t expected_b = 0;
    bool matches = false;
};

/// Parameter arithmetic only: evaluates the row's b formula or literal.
/// Throws ErrorKind::Parameter for an unknown row or literal entry.
TableCheck table_regression(const TableRow& row);

struct AuditOptions {
    int max_spoofing_order = 0;
    int secrecy_level = 1;
    SecrecyMethod method = SecrecyMethod::BayesExact;
};

struct AuditReport {
    int t = 0;
    int v = 0;
    int k = 0;
    std::uint64_t lambda = 0;
    std::uint64_t b = 0;
    std::vector<DeceptionAssessment> spoofing;
    int spoofing_security_level = -1;
    SecrecyAssessment secrecy;
    OptimalityVerdict optimality;
    std::vector<DivisibilityVerdict> divisibility;

    /// Canonical JSON: rationals as "p/q" strings, fixed key order, trailing newline.
    std::string to_json() const;
};

/// Audits the code given by `matrix` (rows must be the design's blocks) with a
/// uniform strategy and equiprobable sources. Without a matrix the blocks are
/// used in ascending order.
AuditReport run_audit(const Design& design, const std::optional<EncodingMatrix>& matrix, const AuditOptions& options);

}  // namespace steinauth
