/*
 * fermred — fermionic mode/particle reductions over the occupation-number
 * basis, exposed as a C shared-library API.
 *
 * Conventions:
 *  - states are complex amplitude vectors of length 2^n; the basis label
 *    (j_1, ..., j_n) maps to the index with j_1 as the most significant bit
 *  - complex buffers are interleaved doubles: re, im, re, im, ...
 *  - every function returns fr_status; on failure fr_last_error() carries a
 *    human-readable message for the calling thread
 */
#ifndef FERMRED_H
#define FERMRED_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fr_status {
    FR_OK = 0,
    FR_ERR_ARGUMENT = 1,     /* bad argument / malformed input */
    FR_ERR_VALIDATION = 2,   /* data fails a structural invariant */
    FR_ERR_PRECONDITION = 3, /* mathematical precondition not met */
    FR_ERR_NUMERIC = 4,      /* solver failure */
    FR_ERR_IO = 5            /* file problem */
} fr_status;

typedef struct fr_state fr_state;   /* amplitude vector over 2^n labels */
typedef struct fr_matrix fr_matrix; /* dense complex matrix */

const char* fr_version(void);
const char* fr_last_error(void);

/* ---- states ---------------------------------------------------------- */

fr_status fr_state_create(int modes, const double* amplitudes_interleaved,
                          int normalize, fr_state** out);
fr_status fr_state_load(const char* path, fr_state** out);
fr_status fr_state_save(const fr_state* state, const char* path);
void fr_state_free(fr_state* state);

int fr_state_modes(const fr_state* state);
/* buffer of 2 * 2^n doubles */
fr_status fr_state_amplitudes(const fr_state* state, double* out, size_t capacity);

/* ensemble: "general" | "ssr" | "fixed-N"; param: parity (0 even, 1 odd)
 * for ssr, particle number for fixed-N, ignored otherwise */
fr_status fr_state_sample(int modes, const char* ensemble, uint64_t seed, int param,
                          fr_state** out);

/* 0 = even, 1 = odd, 2 = mixed */
fr_status fr_state_parity(const fr_state* state, double zero_threshold, int* out);

/* scan of odd-order products of distinct-mode ladder operators */
fr_status fr_state_is_even(const fr_state* state, double tol, int* even,
                           double* max_violation, char* worst_monomial, size_t capacity);

/* ---- matrices -------------------------------------------------------- */

void fr_matrix_free(fr_matrix* m);
size_t fr_matrix_rows(const fr_matrix* m);
size_t fr_matrix_cols(const fr_matrix* m);
/* buffer of 2 * rows * cols doubles, row major */
fr_status fr_matrix_get(const fr_matrix* m, double* out, size_t capacity);

/* |psi><psi| over the 2^n basis */
fr_status fr_state_projector(const fr_state* state, fr_matrix** out);

/* descending eigenvalues of a Hermitian matrix; values has rows entries */
fr_status fr_matrix_spectrum(const fr_matrix* m, double* values, size_t capacity);

/* ---- ladder algebra -------------------------------------------------- */

fr_status fr_creation_matrix(int mode, int modes, fr_matrix** out);
fr_status fr_annihilation_matrix(int mode, int modes, fr_matrix** out);
fr_status fr_car_check(int modes, double* max_dev_mixed, double* max_dev_same);

/* ---- mode reduction --------------------------------------------------- */

/* subset: the modes forming the first block, 1-based; block: 0 first,
 * 1 second; non-contiguous subsets are relabeled through adjacent
 * fermionic swaps before the contiguous reduction */
fr_status fr_reduce_modes(const fr_state* state, const int* subset, int subset_len,
                          int block, fr_matrix** out);

fr_status fr_equispectral(const fr_state* state, const int* subset, int subset_len,
                          double tol, int* equal, double* max_gap, double* spectrum_first,
                          size_t cap_first, double* spectrum_second, size_t cap_second);

/* amplitudes c00, c01, c10, c11 of a 2-mode state */
fr_status fr_two_mode_criterion(const fr_state* state, double* out);

fr_status fr_entropy_report(const fr_state* state, const int* subset, int subset_len,
                            double* s1_bits, double* s2_bits, double* violation_bits);

/* core state sqrt(lambda_t) |0..0 bin(t) bin(t)>; lambda_len = 2^(n-m), m >= n-m */
fr_status fr_canonical_purification(const double* lambda, size_t lambda_len, int m,
                                    int modes, fr_state** out);

typedef struct fr_purification {
    fr_state* phi;
    fr_matrix* u1;
    fr_matrix* u2;
    fr_state* reconstructed; /* U2 U1 |phi> */
    double fidelity;
    double marginal_gap1;
    double marginal_gap2;
    int simple_spectrum;
    int recovered;
    int used_fallback;
} fr_purification;

fr_status fr_purify(const fr_state* state, const int* subset, int subset_len, double tol,
                    fr_purification* out);
void fr_purification_free(fr_purification* p);

/* ---- particle reduction ----------------------------------------------- */

/* C(n,p)-dimensional matrix over ordered mode tuples (colex order) */
fr_status fr_rdm_matrix(const fr_state* state, int p, fr_matrix** out);
/* the same data as a 2^n operator on the p-particle sector */
fr_status fr_rdm_operator(const fr_state* state, int p, fr_matrix** out);

/* p-fold application of rho -> sum_j a_j rho a_j^+ */
fr_status fr_phi_pow(const fr_matrix* rho, int modes, int p, fr_matrix** out);

/* fixed-N comparison of the iterated map against the p-particle operator;
 * factor receives the (N-p)! divided out of the map side */
fr_status fr_check_fixed_n(const fr_state* state, int p, double tol, int* particle_number,
                           double* max_gap, double* factor, int* pass);

/* descending 1-particle occupation spectrum; values has n entries */
fr_status fr_natural_occupations(const fr_state* state, double* values, size_t capacity);

fr_status fr_pauli_check(const fr_state* state, double tol, int* asserted, int* pass,
                         char* description, size_t capacity);

/* verdict: 0 agree, 1 disagree, 2 inconclusive */
fr_status fr_conjecture_trial(const fr_state* state, int p, double agree_tol,
                              double disagree_floor, double* max_gap, int* verdict);

/* ---- property suites and fuzzing -------------------------------------- */

typedef struct fr_suite_result {
    int passed;
    uint64_t trials_run;
    double max_gap;
    int has_counterexample;
    uint64_t cx_seed;
    char cx_description[512];
} fr_suite_result;

/* suite: car | matrix-units | theorem1 | theorem2 | prop4 | prop5 | pauli */
fr_status fr_verify_suite(const char* suite, uint64_t trials, int n_max, uint64_t seed,
                          double tol, fr_suite_result* out);

typedef struct fr_fuzz_summary {
    uint64_t trials_run;
    uint64_t trials_total;
    uint64_t agree;
    uint64_t disagree;
    uint64_t inconclusive;
    double worst_gap;
    int has_first_disagree;
    uint64_t first_disagree_index;
    uint64_t first_disagree_seed;
    int first_disagree_n;
    int first_disagree_p;
    double first_disagree_gap;
} fr_fuzz_summary;

/* p = 0 draws p per trial; record_path may be NULL; threads <= 0 reads
 * FERMRED_THREADS (default 1) */
fr_status fr_fuzz_campaign(int n_min, int n_max, int p, uint64_t trials,
                           const char* ensemble, uint64_t seed, const char* record_path,
                           int resume, int threads, double agree_tol, double disagree_floor,
                           fr_fuzz_summary* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FERMRED_H */
