#pragma once

#include <map>
#include <optional>
#include <vector>

#include "steinauth/ordering.hpp"
#include "steinauth/rational.hpp"

namespace steinauth {

/// Probability of each i-subset of source states. Either equiprobable
/// (1 / C(k, i) for every i-subset) or explicit per subset size.
class SourceDistribution {
public:
    static SourceDistribution equiprobable(int k);

    /// Explicit probabilities per subset size; each size's entries must sum to 1.
    /// Subsets not listed have probability zero.
    static SourceDistribution explicit_subsets(int k, std::map<int, std::map<Subset, Rational>> by_size);

    int k() const { return k_; }
    bool is_equiprobable() const { return !explicit_.has_value(); }
    bool defines_size(int i) const;

    Rational probability(const Subset& sources) const;

private:
    int k_ = 0;
    std::optional<std::map<int, std::map<Subset, Rational>>> explicit_;
};

struct EncodingStrategy {
    std::vector<Rational> weights;

    static EncodingStrategy uniform(std::size_t b);

    std::size_t b() const { return weights.size(); }
    bool is_uniform() const;

    /// Nonnegative weights summing to exactly 1; throws ErrorKind::Parameter otherwise.
    void check() const;
};

class AuthenticationCode {
public:
    AuthenticationCode(EncodingMatrix matrix, EncodingStrategy strategy, SourceDistribution sources);

    const EncodingMatrix& matrix() const { return matrix_; }
    const EncodingStrategy& strategy() const { return strategy_; }
    const SourceDistribution& sources() const { return sources_; }

    int k() const { return matrix_.k; }
    int v() const { return matrix_.v; }
    std::size_t b() const { return matrix_.b(); }

    Point encode(std::size_t rule, int source) const;

    /// Throws ErrorKind::NotAuthentic when the message is not valid under the rule.
    int decode(std::size_t rule, Point message) const;

    /// M(e), sorted.
    Subset valid_messages(std::size_t rule) const;

    /// f_e(M*): sources whose encodings under the rule lie in `messages`, sorted.
    Subset source_preimage(std::size_t rule, const Subset& messages) const;

private:
    void check_rule(std::size_t rule) const;

    EncodingMatrix matrix_;
    EncodingStrategy strategy_;
    SourceDistribution sources_;
    std::vector<std::vector<int>> inverse_;  // inverse_[rule][message] = source or -1
};

/// Uniform encoding strategy 1/b and equiprobable sources.
AuthenticationCode from_matrix_equiprobable(EncodingMatrix matrix);

}  // namespace steinauth
