#include "steinauth/steinauth.h"

#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "steinauth/audit.hpp"
#include "steinauth/design.hpp"
#include "steinauth/error.hpp"
#include "steinauth/exact_cover.hpp"
#include "steinauth/formats.hpp"
#include "steinauth/ordering.hpp"
#include "steinauth/seed.hpp"

struct sa_design {
    steinauth::Design value;
};

struct sa_matrix {
    steinauth::EncodingMatrix value;
};

struct sa_report {
    steinauth::AuditReport value;
    std::string json;
};

namespace {

thread_local std::string last_error;

sa_status status_of(steinauth::ErrorKind kind) {
    using steinauth::ErrorKind;
    switch (kind) {
        case ErrorKind::Usage: return SA_USAGE;
        case ErrorKind::Admissibility: return SA_ADMISSIBILITY;
        case ErrorKind::Undecided: return SA_UNDECIDED;
        case ErrorKind::Verification: return SA_VERIFICATION;
        case ErrorKind::Io: return SA_IO;
        case ErrorKind::Parameter:
        case ErrorKind::Structural:
        case ErrorKind::Parse:
        case ErrorKind::NotAuthentic: return SA_INVALID_INPUT;
    }
    return SA_INTERNAL;
}

sa_status fail_with(sa_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

template <typename F>
sa_status guarded(F&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const steinauth::Error& e) {
        return fail_with(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail_with(SA_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail_with(SA_INTERNAL, e.what());
    }
}

sa_status null_argument(const char* name) { return fail_with(SA_USAGE, std::string("null argument: ") + name); }

sa_status hand_out(steinauth::Design design, sa_design** out) {
    *out = new sa_design{std::move(design)};
    return SA_OK;
}

sa_search_options options_or_default(const sa_search_options* options) {
    return options ? *options : sa_default_search_options();
}

}  // namespace

extern "C" {

const char* sa_last_error(void) { return last_error.c_str(); }

const char* sa_status_name(sa_status status) {
    switch (status) {
        case SA_OK: return "ok";
        case SA_USAGE: return "usage";
        case SA_ADMISSIBILITY: return "admissibility";
        case SA_UNDECIDED: return "undecided";
        case SA_VERIFICATION: return "verification";
        case SA_INVALID_INPUT: return "invalid input";
        case SA_IO: return "io";
        case SA_INTERNAL: return "internal";
    }
    return "unknown";
}

sa_search_options sa_default_search_options(void) { return sa_search_options{0, 300.0, 50}; }

uint64_t sa_derive_seed(uint64_t master, const char* label, uint64_t index) {
    return steinauth::derive_seed(master, label ? label : "", index);
}

sa_status sa_design_sts(int v, sa_design** out) {
    if (!out) return null_argument("out");
    return guarded([&] { return hand_out(steinauth::construct_sts(v), out); });
}

sa_status sa_design_boolean_sqs(int d, sa_design** out) {
    if (!out) return null_argument("out");
    return guarded([&] { return hand_out(steinauth::construct_boolean_sqs(d), out); });
}

sa_status sa_design_double(const sa_design* base, sa_design** out) {
    if (!base) return null_argument("base");
    if (!out) return null_argument("out");
    return guarded([&] { return hand_out(steinauth::double_sqs(base->value), out); });
}

sa_status sa_design_cyclic(int t, int v, int k, const int* multipliers, size_t multiplier_count,
                           const sa_search_options* options, sa_design** out) {
    if (!out) return null_argument("out");
    if (multiplier_count && !multipliers) return null_argument("multipliers");
    const auto opts = options_or_default(options);
    return guarded([&] {
        steinauth::SolverBudget budget;
        budget.seed = opts.seed;
        budget.time_limit_seconds = opts.time_limit_seconds;
        const std::vector<int> mults(multipliers, multipliers + multiplier_count);
        auto result = steinauth::construct_cyclic_steiner(t, v, k, budget, mults);
        switch (result.verdict) {
            case steinauth::SearchVerdict::Solved: return hand_out(std::move(result.design), out);
            case steinauth::SearchVerdict::Infeasible:
                return fail_with(SA_ADMISSIBILITY, "no cyclic " + std::to_string(t) + "-(" + std::to_string(v) + "," +
                                                       std::to_string(k) + ",1) design" +
                                                       (mults.empty() ? "" : " with the given multipliers") + " exists");
            case steinauth::SearchVerdict::Undecided: break;
        }
        return fail_with(SA_UNDECIDED, "cyclic search budget exhausted after " + std::to_string(result.attempts) +
                                           " attempts and " + std::to_string(result.nodes) + " nodes");
    });
}

sa_status sa_design_read(const char* path, sa_design** out) {
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    return guarded([&] { return hand_out(steinauth::read_design_file(path), out); });
}

sa_status sa_design_write(const sa_design* design, const char* path) {
    if (!design) return null_argument("design");
    if (!path) return null_argument("path");
    return guarded([&] {
        steinauth::write_design_file(path, design->value);
        return SA_OK;
    });
}

sa_design_params sa_design_get_params(const sa_design* design) {
    if (!design) return sa_design_params{0, 0, 0, 0, 0};
    const auto& d = design->value;
    return sa_design_params{d.t, d.v, d.k, d.lambda, d.b()};
}

sa_status sa_design_block(const sa_design* design, size_t i, int32_t* points) {
    if (!design) return null_argument("design");
    if (!points) return null_argument("points");
    if (i >= design->value.b()) return fail_with(SA_USAGE, "block index out of range");
    const auto& block = design->value.blocks[i];
    for (std::size_t j = 0; j < block.size(); ++j) points[j] = block[j];
    return SA_OK;
}

sa_status sa_design_verify(const sa_design* design) {
    if (!design) return null_argument("design");
    return guarded([&] {
        const auto report = steinauth::verify_design(design->value);
        if (report.is_valid) return SA_OK;
        std::string message = "not a " + std::to_string(design->value.t) + "-design";
        if (!report.violations.empty()) {
            const auto& first = report.violations.front();
            message += ": subset {";
            for (std::size_t i = 0; i < first.subset.size(); ++i)
                message += (i ? "," : "") + std::to_string(first.subset[i]);
            message += "} lies in " + std::to_string(first.observed) + " blocks";
        }
        return fail_with(SA_VERIFICATION, message);
    });
}

sa_status sa_design_cube_census(const sa_design* design, sa_census* out) {
    if (!design) return null_argument("design");
    if (!out) return null_argument("out");
    return guarded([&] {
        const auto census = steinauth::cube_census(design->value);
        *out = sa_census{census.faces, census.opposite_edges, census.tetrahedra};
        return SA_OK;
    });
}

void sa_design_free(sa_design* design) { delete design; }

sa_status sa_order(const sa_design* design, int secrecy_level, const sa_search_options* options, sa_matrix** out) {
    if (!design) return null_argument("design");
    if (!out) return null_argument("out");
    const auto opts = options_or_default(options);
    return guarded([&] {
        steinauth::OrderingConfig config;
        config.secrecy_level = secrecy_level;
        config.seed = opts.seed;
        config.time_limit_seconds = opts.time_limit_seconds;
        config.max_restarts = opts.max_restarts;
        auto result = steinauth::order_design_multifold(design->value, config);
        if (result.verdict != steinauth::SearchVerdict::Solved || !result.matrix)
            return fail_with(SA_UNDECIDED, "no level-" + std::to_string(secrecy_level) + " ordering found after " +
                                               std::to_string(result.restarts) + " restarts");
        if (!steinauth::verify_ordering(*result.matrix, design->value, secrecy_level).ok)
            return fail_with(SA_VERIFICATION, "ordering search returned an unbalanced matrix");
        *out = new sa_matrix{std::move(*result.matrix)};
        return SA_OK;
    });
}

sa_status sa_order_symmetries(const sa_design* design, int secrecy_level, sa_symmetry* out, size_t capacity,
                              size_t* count) {
    if (!design) return null_argument("design");
    if (!count) return null_argument("count");
    if (capacity > 0 && !out) return null_argument("out");
    return guarded([&] {
        const auto found = steinauth::ordering_symmetries(design->value, secrecy_level);
        *count = found.size();
        for (std::size_t i = 0; i < found.size() && i < capacity; ++i)
            out[i] = sa_symmetry{found[i].step, found[i].multiplier, found[i].orbits, found[i].relaxation_feasible ? 1 : 0};
        return SA_OK;
    });
}

sa_status sa_matrix_read(const char* path, sa_matrix** out) {
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = new sa_matrix{steinauth::read_matrix_file(path)};
        return SA_OK;
    });
}

sa_status sa_matrix_write(const sa_matrix* matrix, const char* path) {
    if (!matrix) return null_argument("matrix");
    if (!path) return null_argument("path");
    return guarded([&] {
        steinauth::write_matrix_file(path, matrix->value);
        return SA_OK;
    });
}

size_t sa_matrix_rows(const sa_matrix* matrix) { return matrix ? matrix->value.b() : 0; }

sa_status sa_matrix_verify(const sa_matrix* matrix, const sa_design* design, int secrecy_level) {
    if (!matrix) return null_argument("matrix");
    if (!design) return null_argument("design");
    return guarded([&] {
        const auto verdict = steinauth::verify_ordering(matrix->value, design->value, secrecy_level);
        if (verdict.ok) return SA_OK;
        for (const auto& level : verdict.levels) {
            if (level.ok) continue;
            if (!level.target)
                return fail_with(SA_VERIFICATION, "C(v," + std::to_string(level.t_star) + ") does not divide b");
            std::string message = "level " + std::to_string(level.t_star) + ": messages {";
            for (std::size_t i = 0; i < level.messages.size(); ++i)
                message += (i ? "," : "") + std::to_string(level.messages[i]);
            message += "} occur " + std::to_string(level.observed) + " times in columns {";
            for (std::size_t i = 0; i < level.columns.size(); ++i)
                message += (i ? "," : "") + std::to_string(level.columns[i]);
            message += "}, expected " + std::to_string(*level.target);
            return fail_with(SA_VERIFICATION, message);
        }
        return fail_with(SA_VERIFICATION, "ordering is not balanced");
    });
}

void sa_matrix_free(sa_matrix* matrix) { delete matrix; }

sa_status sa_audit(const sa_design* design, const sa_matrix* matrix, int max_spoofing_order, int secrecy_level,
                   sa_secrecy_method method, sa_report** out) {
    if (!design) return null_argument("design");
    if (!out) return null_argument("out");
    if (method != SA_METHOD_BAYES && method != SA_METHOD_FREQUENCY) return fail_with(SA_USAGE, "unknown secrecy method");
    return guarded([&] {
        steinauth::AuditOptions options;
        options.max_spoofing_order = max_spoofing_order;
        options.secrecy_level = secrecy_level;
        options.method = method == SA_METHOD_BAYES ? steinauth::SecrecyMethod::BayesExact
                                                   : steinauth::SecrecyMethod::FrequencyShortcut;
        std::optional<steinauth::EncodingMatrix> m;
        if (matrix) m = matrix->value;
        auto report = steinauth::run_audit(design->value, m, options);
        auto json = report.to_json();
        *out = new sa_report{std::move(report), std::move(json)};
        return SA_OK;
    });
}

const char* sa_report_json(const sa_report* report) { return report ? report->json.c_str() : ""; }

int sa_report_secrecy_perfect(const sa_report* report) { return report && report->value.secrecy.perfect ? 1 : 0; }

int sa_report_optimal(const sa_report* report) { return report && report->value.optimality.optimal ? 1 : 0; }

int sa_report_spoofing_level(const sa_report* report) { return report ? report->value.spoofing_security_level : -1; }

sa_status sa_report_write(const sa_report* report, const char* path) {
    if (!report) return null_argument("report");
    if (!path) return null_argument("path");
    return guarded([&] {
        steinauth::write_file_atomic(path, report->json);
        return SA_OK;
    });
}

void sa_report_free(sa_report* report) { delete report; }

}  // extern "C"
