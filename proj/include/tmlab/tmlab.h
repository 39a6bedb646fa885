/* C interface to the machine laboratory. Handles are opaque; every call
 * returns a status code and, on failure, leaves a message retrievable with
 * tmlab_last_error() on the calling thread. Strings returned through char**
 * out-parameters are owned by the caller and released with tmlab_free(). */

#ifndef TMLAB_TMLAB_H_
#define TMLAB_TMLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TMLAB_BUILDING)
#    define TMLAB_API __declspec(dllexport)
#  else
#    define TMLAB_API __declspec(dllimport)
#  endif
#else
#  define TMLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tmlab_status {
  TMLAB_OK = 0,
  TMLAB_E_INVALID_ARGUMENT = 1,
  TMLAB_E_PARSE = 2,
  TMLAB_E_INVALID_INPUT = 3,
  TMLAB_E_DETERMINISM = 4,
  TMLAB_E_SCRIPT = 5,
  TMLAB_E_SPLICE = 6,
  TMLAB_E_NO_WITNESS = 7,
  TMLAB_E_CAP_EXCEEDED = 8,
  TMLAB_E_COMPILE = 9,
  TMLAB_E_IO = 10,
  TMLAB_E_INTERNAL = 11
} tmlab_status;

typedef enum tmlab_outcome {
  TMLAB_ACCEPTED = 0,
  TMLAB_REJECTED = 1,
  TMLAB_HUNG = 2,
  TMLAB_FUEL_EXHAUSTED = 3
} tmlab_outcome;

typedef struct tmlab_machine tmlab_machine;
typedef struct tmlab_nfa tmlab_nfa;

TMLAB_API const char* tmlab_last_error(void);
TMLAB_API const char* tmlab_status_name(tmlab_status s);
TMLAB_API const char* tmlab_outcome_name(tmlab_outcome o);
TMLAB_API void tmlab_free(char* s);

/* Machines. `selector` is a catalog name or a spec file path. */
TMLAB_API tmlab_status tmlab_machine_load(const char* selector, tmlab_machine** out);
TMLAB_API tmlab_status tmlab_machine_from_text(const char* text, tmlab_machine** out);
TMLAB_API void tmlab_machine_free(tmlab_machine* m);
TMLAB_API tmlab_status tmlab_machine_export(const tmlab_machine* m, char** out);
/* Newline-separated catalog names. */
TMLAB_API tmlab_status tmlab_catalog_names(char** out);

typedef struct tmlab_machine_info {
  size_t states;
  size_t symbols;
  size_t transitions;
  int catalog;        /* nonzero for catalog machines */
  int deterministic;  /* catalog flag; files report 1 iff no slot has two moves */
  int has_scripts;    /* a guess-script provider is available */
} tmlab_machine_info;

TMLAB_API tmlab_status tmlab_machine_describe(const tmlab_machine* m, tmlab_machine_info* out);

/* The unary word a^n as input text; fails for non-unary machines. */
TMLAB_API tmlab_status tmlab_unary_input(const tmlab_machine* m, uint64_t n, char** out);
/* Guess script realizing an accepting computation on a^n. */
TMLAB_API tmlab_status tmlab_oracle_script(const tmlab_machine* m, uint64_t n, char** out);

typedef struct tmlab_run_summary {
  tmlab_outcome outcome;
  uint64_t time;
  uint64_t max_crossing;
  uint64_t left_moves;
  uint64_t right_moves;
} tmlab_run_summary;

/* `script` may be NULL for a deterministic run; `report` may be NULL. With
 * `boundaries` nonzero the report lists every crossing-sequence length. */
TMLAB_API tmlab_status tmlab_run(const tmlab_machine* m, const char* input, const char* script,
                                 uint64_t fuel, int boundaries, tmlab_run_summary* summary,
                                 char** report);

typedef struct tmlab_profile_options {
  const char* resource;  /* "time" or "crossing" */
  const char* measure;   /* "strong", "accept" or "weak" */
  uint64_t fuel;
  uint64_t max_branches;
  int use_scripts;       /* follow the catalog's guess scripts */
  unsigned threads;
} tmlab_profile_options;

/* CSV with header n,resource,measure,value,exactness,outcome. */
TMLAB_API tmlab_status tmlab_profile(const tmlab_machine* m, const uint64_t* ns, size_t count,
                                     const tmlab_profile_options* options, char** csv);

/* model: "n", "nlogn", "loglog" or "nloglog". `passed` is set to 0 or 1. */
TMLAB_API tmlab_status tmlab_check_growth(const char* csv, const char* model, uint64_t fit_upto,
                                          double slack, int* passed, char** report);

TMLAB_API tmlab_status tmlab_nfa_build(const tmlab_machine* m, size_t k, size_t max_states,
                                       tmlab_nfa** out);
TMLAB_API void tmlab_nfa_free(tmlab_nfa* nfa);
TMLAB_API tmlab_status tmlab_nfa_export(const tmlab_nfa* nfa, char** out);
TMLAB_API tmlab_status tmlab_nfa_accepts(const tmlab_nfa* nfa, const char* word, int* accepts);

typedef struct tmlab_comparison {
  int agree;                     /* no disagreement up to max_len */
  size_t disagreement_length;    /* valid when agree == 0 */
  int machine_accepts;           /* at the disagreement */
  uint64_t words_checked;
  uint64_t inconclusive;
} tmlab_comparison;

/* Catalog machines are decided by their own decider, others by exhaustive
 * enumeration with `fuel` and `max_branches`. */
TMLAB_API tmlab_status tmlab_nfa_compare(const tmlab_machine* m, const tmlab_nfa* nfa,
                                         size_t max_len, uint64_t fuel, uint64_t max_branches,
                                         tmlab_comparison* result, char** report);

/* language: "L0", "LAM" or "coLAM". CSV header n,min_dfa_states,karp_bound,meets. */
TMLAB_API tmlab_status tmlab_karp(const char* language, uint64_t n_max, uint64_t step,
                                  size_t* witnesses, char** csv);

typedef struct tmlab_splice_result {
  int replay_valid;
  int parity_holds;
  tmlab_outcome outcome;
  tmlab_outcome expected;
  size_t shared_length;
} tmlab_splice_result;

TMLAB_API tmlab_status tmlab_splice(const tmlab_machine* m, const char* input1, size_t b1,
                                    const char* script1, const char* input2, size_t b2,
                                    const char* script2, uint64_t fuel,
                                    tmlab_splice_result* result, char** report);

/* gnuplot script for a CSV written to `csv_path`. */
TMLAB_API tmlab_status tmlab_plot_script(const char* csv_path, const char* title, char** out);

#ifdef __cplusplus
}
#endif

#endif /* TMLAB_TMLAB_H_ */
