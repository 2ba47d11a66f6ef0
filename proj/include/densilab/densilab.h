#ifndef DENSILAB_H
#define DENSILAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DENSILAB_BUILDING)
#    define DL_API __declspec(dllexport)
#  else
#    define DL_API __declspec(dllimport)
#  endif
#else
#  define DL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dl_status {
  DL_OK = 0,
  DL_NOT_SYMMETRIC = 1,
  DL_NOT_EXPANSIVE = 2,
  DL_NOT_POSITIVE = 3,
  DL_SINGULAR_MATRIX = 4,
  DL_BAD_PARAMETER = 5,
  DL_DEGENERATE_WINDOW = 6,
  DL_NOT_INVARIANT = 7,
  DL_NOT_EXPANDING = 8,
  DL_WRONG_DETERMINANT = 9,
  DL_WRONG_SIGN = 10,
  DL_BAD_ROW = 11,
  DL_NOT_UNIMODULAR = 12,
  DL_PRECONDITION_VIOLATED = 13,
  DL_PARSE_ERROR = 14,
  DL_INTERNAL = 15
} dl_status;

typedef enum dl_classification {
  DL_CONVERGES_TO_ONE = 0,
  DL_CONVERGES_TO_ZERO = 1,
  DL_OTHER = 2
} dl_classification;

typedef enum dl_certification { DL_EXACT_INTEGER = 0, DL_NUMERIC = 1 } dl_certification;

typedef struct dl_matrix dl_matrix;   /* symmetric d x d map */
typedef struct dl_region dl_region;
typedef struct dl_verdict dl_verdict;
typedef struct dl_series dl_series;

typedef struct dl_sampling {
  uint64_t samples;  /* 0 selects the default, 10^6 */
  uint64_t seed;
  unsigned threads;  /* 0: hardware concurrency */
} dl_sampling;

/* Message of the last failing call on this thread; never NULL. */
DL_API const char* dl_last_error(void);
DL_API const char* dl_status_name(dl_status s);
/* Frees strings returned through char** out-parameters. */
DL_API void dl_string_free(char* s);

/* ---- matrices ---- */
DL_API dl_status dl_matrix_create(int dim, const double* row_major, double tol, dl_matrix** out);
/* JSON {"dim","rows"} or inline "2,0;0,4". */
DL_API dl_status dl_matrix_parse(const char* text, double tol, dl_matrix** out);
DL_API void dl_matrix_free(dl_matrix* m);
DL_API int dl_matrix_dim(const dl_matrix* m);
DL_API int dl_matrix_is_exact(const dl_matrix* m);
DL_API dl_status dl_matrix_entries(const dl_matrix* m, double* row_major_out);

DL_API dl_status dl_is_expansive(const dl_matrix* m, int* out);
DL_API dl_status dl_is_positive(const dl_matrix* m, int* out);
DL_API dl_status dl_check_lattice_condition(const dl_matrix* m, int* out);
/* eigenvalues_out: d values, one per basis column; basis_out: d x d row-major,
   eigenvectors in columns. Either may be NULL. */
DL_API dl_status dl_decompose(const dl_matrix* m, double tol, double* eigenvalues_out, double* basis_out);
DL_API dl_status dl_power(const dl_matrix* m, double t, dl_matrix** out);
DL_API dl_status dl_absolutize(const dl_matrix* m, dl_matrix** out);
DL_API dl_status dl_analyze_json(const dl_matrix* m, double tol, char** json_out);

/* ---- equivalence ---- */
DL_API dl_status dl_decide_equivalence(const dl_matrix* a1, const dl_matrix* a2, double tol,
                                       dl_verdict** out);
DL_API void dl_verdict_free(dl_verdict* v);
DL_API int dl_verdict_equivalent(const dl_verdict* v);
/* DL_PRECONDITION_VIOLATED when the verdict carries no exponent. */
DL_API dl_status dl_verdict_exponent(const dl_verdict* v, double* t_out);
DL_API dl_certification dl_verdict_certification(const dl_verdict* v);
DL_API dl_status dl_verdict_json(const dl_verdict* v, char** json_out);
/* {status, lattice_ok, equivalence, trivial_witness, note} */
DL_API dl_status dl_mra_report_json(const dl_matrix* a1, const dl_matrix* a2, char** json_out);

/* ---- regions ---- */
DL_API dl_status dl_region_parse(const char* descriptor_json, int dim, dl_region** out);
DL_API dl_status dl_region_conjugate(const double* c_row_major, int dim, const dl_region* e,
                                     dl_region** out);
DL_API void dl_region_free(dl_region* r);
DL_API dl_status dl_region_contains(const dl_region* r, const double* x, int* out);

/* ---- density ---- */
DL_API dl_status dl_density_ratio(const dl_region* e, const dl_matrix* a, int j, const dl_region* window,
                                  const dl_sampling* opts, double* ratio_out, double* stderr_out);
DL_API dl_status dl_density_sweep(const dl_region* e, const dl_matrix* a, const dl_region* window, int j_min,
                                  int j_max, const dl_sampling* opts, dl_series** out);
DL_API void dl_series_free(dl_series* s);
DL_API size_t dl_series_size(const dl_series* s);
DL_API dl_status dl_series_get(const dl_series* s, size_t i, int* j, double* ratio, double* std_error,
                               uint64_t* samples);
DL_API dl_classification dl_series_classification(const dl_series* s);
DL_API dl_status dl_series_json(const dl_series* s, char** json_out);
DL_API dl_status dl_exact_ealpha_ratio(double l1, double l2, double alpha, int j, double* out);

/* ---- lattice (2x2 entries row-major) ---- */
/* Full classification report of any integer matrix text; see README. */
DL_API dl_status dl_classify_json(const char* matrix_text, int bound, int l_max, char** json_out);
DL_API dl_status dl_minimal_root_of_identity(const int64_t m[4], int l_max, int* found, int* l,
                                             uint64_t* n);
DL_API dl_status dl_verify_theoremE_row(const int64_t m[4], int l, uint64_t n, int* out);
DL_API dl_status dl_corollaryD_check(const int64_t m[4], int* out);
DL_API dl_status dl_theoremC_witness(int l, uint64_t n, int* found, int64_t m_out[4]);
DL_API dl_status dl_perfect_power(uint64_t a, uint64_t* base, int* exponent);
DL_API dl_status dl_multiplicative_dependence(uint64_t a, uint64_t b, int* found, uint64_t* base, int* p,
                                              int* q);
DL_API dl_status dl_dyadic_class(const dl_matrix* m, int* dyadic, double* exponent);

#ifdef __cplusplus
}
#endif

#endif
