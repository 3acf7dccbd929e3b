#ifndef STEINAUTH_H
#define STEINAUTH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(STEINAUTH_BUILDING)
#define SA_API __attribute__((visibility("default")))
#else
#define SA_API
#endif

/* Status codes. 1-4 coincide with the command-line exit statuses. */
typedef enum sa_status {
    SA_OK = 0,
    SA_USAGE = 1,
    SA_ADMISSIBILITY = 2,
    SA_UNDECIDED = 3,
    SA_VERIFICATION = 4,
    SA_INVALID_INPUT = 5,
    SA_IO = 6,
    SA_INTERNAL = 7
} sa_status;

typedef struct sa_design sa_design;
typedef struct sa_matrix sa_matrix;
typedef struct sa_report sa_report;

typedef enum sa_secrecy_method { SA_METHOD_BAYES = 0, SA_METHOD_FREQUENCY = 1 } sa_secrecy_method;

typedef struct sa_design_params {
    int t;
    int v;
    int k;
    uint64_t lambda;
    uint64_t b;
} sa_design_params;

typedef struct sa_search_options {
    uint64_t seed;
    double time_limit_seconds;
    int max_restarts;
} sa_search_options;

typedef struct sa_symmetry {
    int step;
    int multiplier;
    int orbits;
    int relaxation_feasible;
} sa_symmetry;

typedef struct sa_census {
    int faces;
    int opposite_edges;
    int tetrahedra;
} sa_census;

/* Message of the last failed call on this thread; "" after a success. */
SA_API const char* sa_last_error(void);
SA_API const char* sa_status_name(sa_status status);
SA_API sa_search_options sa_default_search_options(void);
/* Sub-seed for the index-th use of label under a master seed. */
SA_API uint64_t sa_derive_seed(uint64_t master, const char* label, uint64_t index);

SA_API sa_status sa_design_sts(int v, sa_design** out);
SA_API sa_status sa_design_boolean_sqs(int d, sa_design** out);
SA_API sa_status sa_design_double(const sa_design* base, sa_design** out);
/* Steiner t-(v,k,1) design invariant under x -> x+1 and under x -> a*x for
 * each of the multipliers (which may be NULL when count is 0). */
SA_API sa_status sa_design_cyclic(int t, int v, int k, const int* multipliers, size_t multiplier_count,
                                  const sa_search_options* options, sa_design** out);
SA_API sa_status sa_design_read(const char* path, sa_design** out);
SA_API sa_status sa_design_write(const sa_design* design, const char* path);
SA_API sa_design_params sa_design_get_params(const sa_design* design);
/* Copies block i (k points) into points. */
SA_API sa_status sa_design_block(const sa_design* design, size_t i, int32_t* points);
/* SA_OK when the design is a valid t-(v,k,lambda) design, SA_VERIFICATION otherwise. */
SA_API sa_status sa_design_verify(const sa_design* design);
SA_API sa_status sa_design_cube_census(const sa_design* design, sa_census* out);
SA_API void sa_design_free(sa_design* design);

SA_API sa_status sa_order(const sa_design* design, int secrecy_level, const sa_search_options* options, sa_matrix** out);
/* Symmetric search spaces for an ordering, fewest orbits first. Writes at most
   capacity entries and sets *count to the total. */
SA_API sa_status sa_order_symmetries(const sa_design* design, int secrecy_level, sa_symmetry* out, size_t capacity,
                                     size_t* count);
SA_API sa_status sa_matrix_read(const char* path, sa_matrix** out);
SA_API sa_status sa_matrix_write(const sa_matrix* matrix, const char* path);
SA_API size_t sa_matrix_rows(const sa_matrix* matrix);
/* SA_OK when every t* <= secrecy_level is balanced, SA_VERIFICATION otherwise. */
SA_API sa_status sa_matrix_verify(const sa_matrix* matrix, const sa_design* design, int secrecy_level);
SA_API void sa_matrix_free(sa_matrix* matrix);

/* matrix may be NULL: the blocks are then used in ascending order. */
SA_API sa_status sa_audit(const sa_design* design, const sa_matrix* matrix, int max_spoofing_order, int secrecy_level,
                          sa_secrecy_method method, sa_report** out);
/* Canonical JSON text owned by the report. */
SA_API const char* sa_report_json(const sa_report* report);
SA_API int sa_report_secrecy_perfect(const sa_report* report);
SA_API int sa_report_optimal(const sa_report* report);
SA_API int sa_report_spoofing_level(const sa_report* report);
SA_API sa_status sa_report_write(const sa_report* report, const char* path);
SA_API void sa_report_free(sa_report* report);

#ifdef __cplusplus
}
#endif

#endif
