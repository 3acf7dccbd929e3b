#include "steinauth/authcode.hpp"

#include <algorithm>
#include <string>

#include "steinauth/error.hpp"

namespace steinauth {

SourceDistribution SourceDistribution::equiprobable(int k) {
    if (k < 1) fail(ErrorKind::Parameter, "source distribution needs k >= 1");
    SourceDistribution d;
    d.k_ = k;
    return d;
}

SourceDistribution SourceDistribution::explicit_subsets(int k, std::map<int, std::map<Subset, Rational>> by_size) {
    if (k < 1) fail(ErrorKind::Parameter, "source distribution needs k >= 1");
    for (const auto& [size, table] : by_size) {
        Rational total;
        for (const auto& [subset, p] : table) {
            if (static_cast<int>(subset.size()) != size || !std::is_sorted(subset.begin(), subset.end()) ||
                std::adjacent_find(subset.begin(), subset.end()) != subset.end() ||
                std::any_of(subset.begin(), subset.end(), [&](Point s) { return s < 0 || s >= k; }))
                fail(ErrorKind::Parameter, "source subset does not match its declared size " + std::to_string(size));
            if (p < Rational(0)) fail(ErrorKind::Parameter, "negative source probability");
            total += p;
        }
        if (total != Rational(1))
            fail(ErrorKind::Parameter, "source probabilities of size " + std::to_string(size) + " sum to " + total.str());
    }
    SourceDistribution d;
    d.k_ = k;
    d.explicit_ = std::move(by_size);
    return d;
}

bool SourceDistribution::defines_size(int i) const {
    if (i < 0 || i > k_) return false;
    return !explicit_ || explicit_->count(i) > 0;
}

Rational SourceDistribution::probability(const Subset& sources) const {
    const int i = static_cast<int>(sources.size());
    if (!defines_size(i)) fail(ErrorKind::Parameter, "no source distribution for subsets of size " + std::to_string(i));
    if (!explicit_) return Rational(1, static_cast<std::int64_t>(binomial(k_, i)));
    const auto& table = explicit_->at(i);
    const auto it = table.find(sources);
    return it == table.end() ? Rational(0) : it->second;
}

EncodingStrategy EncodingStrategy::uniform(std::size_t b) {
    if (b == 0) fail(ErrorKind::Parameter, "encoding strategy needs at least one rule");
    return EncodingStrategy{std::vector<Rational>(b, Rational(1, static_cast<std::int64_t>(b)))};
}

bool EncodingStrategy::is_uniform() const {
    return std::all_of(weights.begin(), weights.end(), [&](const Rational& w) { return w == weights.front(); });
}

void EncodingStrategy::check() const {
    if (weights.empty()) fail(ErrorKind::Parameter, "encoding strategy needs at least one rule");
    Rational total;
    for (const Rational& w : weights) {
        if (w < Rational(0)) fail(ErrorKind::Parameter, "negative encoding rule weight");
        total += w;
    }
    if (total != Rational(1)) fail(ErrorKind::Parameter, "encoding rule weights sum to " + total.str());
}

AuthenticationCode::AuthenticationCode(EncodingMatrix matrix, EncodingStrategy strategy, SourceDistribution sources)
    : matrix_(std::move(matrix)), strategy_(std::move(strategy)), sources_(std::move(sources)) {
    matrix_.check();
    strategy_.check();
    if (strategy_.b() != matrix_.b()) fail(ErrorKind::Parameter, "strategy and matrix disagree on the number of rules");
    if (sources_.k() != matrix_.k) fail(ErrorKind::Parameter, "source distribution and matrix disagree on k");
    inverse_.assign(matrix_.b(), std::vector<int>(static_cast<std::size_t>(matrix_.v), -1));
    for (std::size_t e = 0; e < matrix_.b(); ++e)
        for (int s = 0; s < matrix_.k; ++s) inverse_[e][static_cast<std::size_t>(matrix_.rows[e][static_cast<std::size_t>(s)])] = s;
}

void AuthenticationCode::check_rule(std::size_t rule) const {
    if (rule >= b()) fail(ErrorKind::Parameter, "rule " + std::to_string(rule) + " out of range [0, " + std::to_string(b()) + ")");
}

Point AuthenticationCode::encode(std::size_t rule, int source) const {
    check_rule(rule);
    if (source < 0 || source >= k()) fail(ErrorKind::Parameter, "source " + std::to_string(source) + " out of range");
    return matrix_.rows[rule][static_cast<std::size_t>(source)];
}

int AuthenticationCode::decode(std::size_t rule, Point message) const {
    check_rule(rule);
    if (message < 0 || message >= v() || inverse_[rule][static_cast<std::size_t>(message)] < 0)
        fail(ErrorKind::NotAuthentic, "message " + std::to_string(message) + " is not authentic under rule " + std::to_string(rule));
    return inverse_[rule][static_cast<std::size_t>(message)];
}

Subset AuthenticationCode::valid_messages(std::size_t rule) const {
    check_rule(rule);
    Subset m = matrix_.rows[rule];
    std::sort(m.begin(), m.end());
    return m;
}

Subset AuthenticationCode::source_preimage(std::size_t rule, const Subset& messages) const {
    check_rule(rule);
    Subset out;
    for (Point m : messages)
        if (m >= 0 && m < v() && inverse_[rule][static_cast<std::size_t>(m)] >= 0) out.push_back(inverse_[rule][static_cast<std::size_t>(m)]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

AuthenticationCode from_matrix_equiprobable(EncodingMatrix matrix) {
    const std::size_t b = matrix.b();
    const int k = matrix.k;
    return AuthenticationCode(std::move(matrix), EncodingStrategy::uniform(b), SourceDistribution::equiprobable(k));
}

}  // namespace steinauth
