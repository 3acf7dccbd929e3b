#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "steinauth/steinauth.h"

namespace {

int exit_code(sa_status status) {
    switch (status) {
        case SA_OK: return 0;
        case SA_USAGE:
        case SA_INVALID_INPUT:
        case SA_IO: return 1;
        case SA_ADMISSIBILITY: return 2;
        case SA_UNDECIDED: return 3;
        case SA_VERIFICATION:
        case SA_INTERNAL: return 4;
    }
    return 4;
}

int report_failure(const char* stage, sa_status status) {
    std::fprintf(stderr, "%s failed (%s): %s\n", stage, sa_status_name(status), sa_last_error());
    return exit_code(status);
}

struct DesignHandle {
    sa_design* ptr = nullptr;
    ~DesignHandle() { sa_design_free(ptr); }
    void reset() { sa_design_free(ptr); ptr = nullptr; }
};

struct MatrixHandle {
    sa_matrix* ptr = nullptr;
    ~MatrixHandle() { sa_matrix_free(ptr); }
    void reset() { sa_matrix_free(ptr); ptr = nullptr; }
};

struct ReportHandle {
    sa_report* ptr = nullptr;
    ~ReportHandle() { sa_report_free(ptr); }
};

struct ConstructArgs {
    std::string family;
    int v = 0;
    std::optional<int> d;
    std::string base;
    int t = 3;
    int k = 4;
    std::vector<int> multipliers;
    uint64_t seed = 0;
    double time_limit = 600.0;
    std::string output;
};

struct OrderArgs {
    std::string design;
    int level = 1;
    uint64_t seed = 0;
    double time_limit = 300.0;
    int max_restarts = 50;
    std::string output;
};

struct AuditArgs {
    std::string design;
    std::string matrix;
    int max_order = 0;
    int level = 1;
    std::string method = "bayes";
    std::string json;
};

struct DemoArgs {
    int v = 26;
    uint64_t seed = 0;
    double time_limit = 300.0;
    int restarts_per_design = 64;
    std::string out_dir = ".";
};

int log2_exact(int v) {
    int d = 0;
    while ((1 << d) < v) ++d;
    return (1 << d) == v ? d : -1;
}

int run_construct(const ConstructArgs& a) {
    DesignHandle design;
    sa_status status = SA_OK;
    sa_search_options options = sa_default_search_options();
    options.seed = a.seed;
    options.time_limit_seconds = a.time_limit;
    if (a.family == "sts") {
        status = sa_design_sts(a.v, &design.ptr);
    } else if (a.family == "sqs-boolean") {
        int d = a.d ? *a.d : log2_exact(a.v);
        if (a.d && a.v != 0 && a.v != (1 << *a.d)) {
            std::fprintf(stderr, "--v %d does not match --d %d\n", a.v, *a.d);
            return 1;
        }
        if (d < 0) {
            std::fprintf(stderr, "sqs-boolean needs v = 2^d, got v = %d\n", a.v);
            return 2;
        }
        status = sa_design_boolean_sqs(d, &design.ptr);
    } else if (a.family == "sqs-double") {
        DesignHandle base;
        if (!a.base.empty()) {
            status = sa_design_read(a.base.c_str(), &base.ptr);
            if (status != SA_OK) return report_failure("reading base design", status);
            status = sa_design_verify(base.ptr);
            if (status != SA_OK) return report_failure("verifying base design", status);
        } else {
            int d = a.v > 0 ? log2_exact(a.v) : -1;
            if (d < 4) {
                std::fprintf(stderr, "sqs-double without --base needs v = 2^d with d >= 4, got v = %d\n", a.v);
                return 2;
            }
            status = sa_design_boolean_sqs(3, &base.ptr);
            for (int doubled = 3; status == SA_OK && doubled < d; ++doubled) {
                DesignHandle next;
                status = sa_design_double(base.ptr, &next.ptr);
                std::swap(base.ptr, next.ptr);
            }
            if (status != SA_OK) return report_failure("construct", status);
            design.ptr = base.ptr;
            base.ptr = nullptr;
        }
        if (!design.ptr) {
            status = sa_design_double(base.ptr, &design.ptr);
            if (status == SA_OK && a.v != 0 && sa_design_get_params(design.ptr).v != a.v) {
                std::fprintf(stderr, "doubling gives v = %d, not %d\n", sa_design_get_params(design.ptr).v, a.v);
                return 1;
            }
        }
    } else if (a.family == "cyclic") {
        status = sa_design_cyclic(a.t, a.v, a.k, a.multipliers.data(), a.multipliers.size(), &options, &design.ptr);
    }
    if (status != SA_OK) return report_failure("construct", status);
    status = sa_design_verify(design.ptr);
    if (status != SA_OK) return report_failure("verification", status);
    status = sa_design_write(design.ptr, a.output.c_str());
    if (status != SA_OK) return report_failure("writing design", status);
    const auto p = sa_design_get_params(design.ptr);
    std::printf("%d-(%d,%d,%llu) design with %llu blocks written to %s\n", p.t, p.v, p.k,
                static_cast<unsigned long long>(p.lambda), static_cast<unsigned long long>(p.b), a.output.c_str());
    return 0;
}

int run_order(const OrderArgs& a) {
    DesignHandle design;
    sa_status status = sa_design_read(a.design.c_str(), &design.ptr);
    if (status != SA_OK) return report_failure("reading design", status);
    sa_search_options options{a.seed, a.time_limit, a.max_restarts};
    MatrixHandle matrix;
    status = sa_order(design.ptr, a.level, &options, &matrix.ptr);
    if (status != SA_OK) return report_failure("order", status);
    status = sa_matrix_write(matrix.ptr, a.output.c_str());
    if (status != SA_OK) return report_failure("writing matrix", status);
    std::printf("level-%d ordering of %zu rules written to %s\n", a.level, sa_matrix_rows(matrix.ptr), a.output.c_str());
    return 0;
}

int run_audit(const AuditArgs& a) {
    DesignHandle design;
    sa_status status = sa_design_read(a.design.c_str(), &design.ptr);
    if (status != SA_OK) return report_failure("reading design", status);
    MatrixHandle matrix;
    if (!a.matrix.empty()) {
        status = sa_matrix_read(a.matrix.c_str(), &matrix.ptr);
        if (status != SA_OK) return report_failure("reading matrix", status);
    }
    ReportHandle report;
    const auto method = a.method == "frequency" ? SA_METHOD_FREQUENCY : SA_METHOD_BAYES;
    status = sa_audit(design.ptr, matrix.ptr, a.max_order, a.level, method, &report.ptr);
    if (status != SA_OK) return report_failure("audit", status);
    status = sa_report_write(report.ptr, a.json.c_str());
    if (status != SA_OK) return report_failure("writing report", status);
    std::fputs(sa_report_json(report.ptr), stdout);
    return 0;
}

int cube_root_of_unity(int v) {
    for (int a = 2; a < v; ++a)
        if (static_cast<long long>(a) * a % v * a % v == 1) return a;
    return 0;
}

int run_demo(const DemoArgs& a) {
    if (a.v < 26 || a.v % 24 != 2) {
        std::fprintf(stderr, "demo needs v = 2 (mod 24) with v >= 26, got v = %d\n", a.v);
        return 2;
    }
    std::error_code ec;
    std::filesystem::create_directories(a.out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "cannot create %s: %s\n", a.out_dir.c_str(), ec.message().c_str());
        return 1;
    }
    const auto path = [&](const char* name) { return (std::filesystem::path(a.out_dir) / name).string(); };
    const auto started = std::chrono::steady_clock::now();
    const auto remaining = [&] {
        return a.time_limit - std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    DesignHandle design;
    MatrixHandle matrix;
    sa_status status = SA_UNDECIDED;
    for (uint64_t attempt = 0; status != SA_OK; ++attempt) {
        if (remaining() <= 0) return report_failure("level-2 ordering", status);
        const uint64_t seed = attempt == 0 ? a.seed : sa_derive_seed(a.seed, "demo-design", attempt);
        sa_search_options options{seed, remaining(), 1'000'000};
        design.reset();
        status = SA_UNDECIDED;
        if (const int mult = cube_root_of_unity(a.v)) {
            status = sa_design_cyclic(3, a.v, 4, &mult, 1, &options, &design.ptr);
            if (status == SA_OK) std::printf("cyclic SQS(%d) also invariant under x -> %dx\n", a.v, mult);
        }
        if (status != SA_OK) {
            options.time_limit_seconds = remaining();
            if (options.time_limit_seconds <= 0) return report_failure("cyclic construction", SA_UNDECIDED);
            status = sa_design_cyclic(3, a.v, 4, nullptr, 0, &options, &design.ptr);
        }
        if (status != SA_OK) return report_failure("cyclic construction", status);
        status = sa_design_verify(design.ptr);
        if (status != SA_OK) return report_failure("design verification", status);
        const auto p = sa_design_get_params(design.ptr);
        std::printf("cyclic SQS(%d): %llu blocks\n", p.v, static_cast<unsigned long long>(p.b));
        status = sa_design_write(design.ptr, path("design.txt").c_str());
        if (status != SA_OK) return report_failure("writing design", status);

        const auto pairs = static_cast<uint64_t>(p.v) * (p.v - 1) / 2;
        std::printf("divisibility: %d | %llu %s, %llu | %llu %s\n", p.v, static_cast<unsigned long long>(p.b),
                    p.b % p.v == 0 ? "ok" : "fails", static_cast<unsigned long long>(pairs),
                    static_cast<unsigned long long>(p.b), p.b % pairs == 0 ? "ok" : "fails");
        if (p.b % p.v != 0 || p.b % pairs != 0) return 2;

        sa_symmetry best{};
        size_t spaces = 0;
        status = sa_order_symmetries(design.ptr, 2, &best, 1, &spaces);
        if (status != SA_OK) return report_failure("ordering symmetries", status);
        if (spaces > 0 && !best.relaxation_feasible && attempt < 16) {
            std::printf("no fractional level-2 ordering with %d orbits, trying another design\n", best.orbits);
            status = SA_UNDECIDED;
            continue;
        }

        options.time_limit_seconds = remaining();
        options.max_restarts = a.restarts_per_design;
        if (options.time_limit_seconds <= 0) return report_failure("level-2 ordering", SA_UNDECIDED);
        matrix.reset();
        status = sa_order(design.ptr, 2, &options, &matrix.ptr);
        if (status == SA_UNDECIDED) std::printf("no level-2 ordering after %d restarts, trying another design\n", a.restarts_per_design);
        else if (status != SA_OK) return report_failure("level-2 ordering", status);
    }
    status = sa_matrix_verify(matrix.ptr, design.ptr, 2);
    if (status != SA_OK) return report_failure("ordering verification", status);
    status = sa_matrix_write(matrix.ptr, path("matrix.txt").c_str());
    if (status != SA_OK) return report_failure("writing matrix", status);
    std::printf("level-2 ordering verified\n");

    ReportHandle report;
    status = sa_audit(design.ptr, matrix.ptr, 2, 2, SA_METHOD_BAYES, &report.ptr);
    if (status != SA_OK) return report_failure("audit", status);
    status = sa_report_write(report.ptr, path("report.json").c_str());
    if (status != SA_OK) return report_failure("writing report", status);
    std::fputs(sa_report_json(report.ptr), stdout);

    const bool ok = sa_report_secrecy_perfect(report.ptr) && sa_report_optimal(report.ptr) &&
                    sa_report_spoofing_level(report.ptr) == 2;
    if (!ok) {
        std::fprintf(stderr, "verification failure: the ordered code is not optimal with two-fold security and secrecy\n");
        return 4;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Build, order and audit authentication codes from Steiner designs"};
    app.require_subcommand(1);

    ConstructArgs construct;
    auto* c = app.add_subcommand("construct", "Build a Steiner design");
    c->add_option("--family", construct.family, "Design family")
        ->required()
        ->check(CLI::IsMember({"sts", "sqs-boolean", "sqs-double", "cyclic"}));
    c->add_option("--v", construct.v, "Number of points");
    c->add_option("--d", construct.d, "Dimension for sqs-boolean");
    c->add_option("--base", construct.base, "Base SQS file for sqs-double")->check(CLI::ExistingFile);
    c->add_option("--t", construct.t, "Strength for cyclic search");
    c->add_option("--k", construct.k, "Block size for cyclic search");
    c->add_option("--multiplier", construct.multipliers, "Unit a; the cyclic design is also invariant under x -> a*x");
    c->add_option("--seed", construct.seed, "Master seed");
    c->add_option("--time-limit", construct.time_limit, "Search budget in seconds")->check(CLI::PositiveNumber);
    c->add_option("-o,--output", construct.output, "Design file to write")->required();

    OrderArgs order;
    auto* o = app.add_subcommand("order", "Order the blocks of a design into an encoding matrix");
    o->add_option("--design", order.design, "Design file")->required()->check(CLI::ExistingFile);
    o->add_option("--secrecy-level", order.level, "Secrecy level")->required()->check(CLI::PositiveNumber);
    o->add_option("--seed", order.seed, "Master seed");
    o->add_option("--time-limit", order.time_limit, "Search budget in seconds")->check(CLI::PositiveNumber);
    o->add_option("--max-restarts", order.max_restarts, "Annealing restarts")->check(CLI::PositiveNumber);
    o->add_option("-o,--output", order.output, "Matrix file to write")->required();

    AuditArgs audit;
    auto* a = app.add_subcommand("audit", "Verify spoofing security, secrecy and optimality");
    a->add_option("--design", audit.design, "Design file")->required()->check(CLI::ExistingFile);
    a->add_option("--matrix", audit.matrix, "Matrix file")->check(CLI::ExistingFile);
    a->add_option("--max-spoofing-order", audit.max_order, "Highest spoofing order")->required()->check(CLI::NonNegativeNumber);
    a->add_option("--secrecy-level", audit.level, "Secrecy level")->required()->check(CLI::NonNegativeNumber);
    a->add_option("--method", audit.method, "Secrecy check")->check(CLI::IsMember({"bayes", "frequency"}));
    a->add_option("--json", audit.json, "Report file to write")->required();

    DemoArgs demo;
    auto* d = app.add_subcommand("demo", "Cyclic SQS(v), level-2 ordering and full audit");
    d->add_option("--v", demo.v, "Number of points, 2 mod 24");
    d->add_option("--seed", demo.seed, "Master seed");
    d->add_option("--time-limit", demo.time_limit, "Overall search budget in seconds")->check(CLI::PositiveNumber);
    d->add_option("--restarts", demo.restarts_per_design, "Ordering restarts before moving to another design")
        ->check(CLI::PositiveNumber);
    d->add_option("--out-dir", demo.out_dir, "Directory for design.txt, matrix.txt and report.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (c->parsed()) {
        if (construct.d && construct.family != "sqs-boolean") {
            std::fprintf(stderr, "--d only applies to family sqs-boolean\n");
            return 1;
        }
        if (!construct.multipliers.empty() && construct.family != "cyclic") {
            std::fprintf(stderr, "--multiplier only applies to family cyclic\n");
            return 1;
        }
        if (!construct.base.empty() && construct.family != "sqs-double") {
            std::fprintf(stderr, "--base only applies to family sqs-double\n");
            return 1;
        }
        if (construct.family != "sqs-double" && construct.family != "sqs-boolean" && construct.v <= 0) {
            std::fprintf(stderr, "--v is required for family %s\n", construct.family.c_str());
            return 1;
        }
        if (construct.family == "sqs-boolean" && !construct.d && construct.v <= 0) {
            std::fprintf(stderr, "sqs-boolean needs --v or --d\n");
            return 1;
        }
        if (construct.family == "sqs-double" && construct.base.empty() && construct.v <= 0) {
            std::fprintf(stderr, "sqs-double needs --v or --base\n");
            return 1;
        }
        return run_construct(construct);
    }
    if (o->parsed()) return run_order(order);
    if (a->parsed()) return run_audit(audit);
    return run_demo(demo);
}
