/* Exercises the C interface from plain C. */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "tmlab/tmlab.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond, \
              tmlab_last_error());                                    \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static const char* kSweeper =
    "states: q0 acc\n"
    "input: a\n"
    "tape: x\n"
    "blank: _\n"
    "initial: q0\n"
    "accept: acc\n"
    "transitions:\n"
    "(q0, a) -> (q0, a, R)\n"
    "(q0, _) -> (acc, x, R)\n";

static void test_catalog_and_run(void) {
  char* names = NULL;
  EXPECT(tmlab_catalog_names(&names) == TMLAB_OK);
  EXPECT(names && strstr(names, "L0") && strstr(names, "coLAM"));
  tmlab_free(names);

  tmlab_machine* m = NULL;
  EXPECT(tmlab_machine_load("L0", &m) == TMLAB_OK);
  tmlab_machine_info info;
  EXPECT(tmlab_machine_describe(m, &info) == TMLAB_OK);
  EXPECT(info.catalog && info.deterministic && !info.has_scripts);
  EXPECT(info.states > 2);

  char* input = NULL;
  EXPECT(tmlab_unary_input(m, 6, &input) == TMLAB_OK);
  tmlab_run_summary s;
  char* report = NULL;
  EXPECT(tmlab_run(m, input, NULL, 10000000, 1, &s, &report) == TMLAB_OK);
  EXPECT(s.outcome == TMLAB_ACCEPTED);
  EXPECT(s.time > 0 && s.max_crossing > 0);
  EXPECT(report && strstr(report, "outcome: accepted") && strstr(report, "crossing lengths"));
  tmlab_free(report);
  tmlab_free(input);

  EXPECT(tmlab_unary_input(m, 4, &input) == TMLAB_OK);
  EXPECT(tmlab_run(m, input, NULL, 10000000, 0, &s, NULL) == TMLAB_OK);
  EXPECT(s.outcome == TMLAB_REJECTED);
  tmlab_free(input);

  const uint64_t ns[] = {64, 128, 256};
  tmlab_profile_options opt = {"time", "strong", 100000000, 1, 0, 2};
  char* csv = NULL;
  EXPECT(tmlab_profile(m, ns, 3, &opt, &csv) == TMLAB_OK);
  EXPECT(csv && strncmp(csv, "n,resource,measure,value,exactness,outcome\n", 43) == 0);
  int passed = 0;
  char* growth = NULL;
  EXPECT(tmlab_check_growth(csv, "nlogn", 64, 2.0, &passed, &growth) == TMLAB_OK);
  EXPECT(passed == 1);
  tmlab_free(growth);
  EXPECT(tmlab_check_growth(csv, "cubic", 64, 2.0, &passed, NULL) == TMLAB_E_INVALID_ARGUMENT);
  tmlab_free(csv);
  EXPECT(tmlab_profile(m, ns, 0, &opt, &csv) != TMLAB_OK);
  tmlab_machine_free(m);
}

static void test_scripts(void) {
  tmlab_machine* m = NULL;
  EXPECT(tmlab_machine_load("coLAM", &m) == TMLAB_OK);
  char* script = NULL;
  char* input = NULL;
  EXPECT(tmlab_oracle_script(m, 12, &script) == TMLAB_OK);
  EXPECT(tmlab_unary_input(m, 12, &input) == TMLAB_OK);
  tmlab_run_summary s;
  EXPECT(tmlab_run(m, input, script, 10000000, 0, &s, NULL) == TMLAB_OK);
  EXPECT(s.outcome == TMLAB_ACCEPTED);
  tmlab_free(script);
  tmlab_free(input);
  EXPECT(tmlab_oracle_script(m, 6, &script) == TMLAB_E_NO_WITNESS);
  EXPECT(strlen(tmlab_last_error()) > 0);
  tmlab_machine_free(m);
}

static void test_nfa_and_splice(void) {
  tmlab_machine* m = NULL;
  EXPECT(tmlab_machine_from_text(kSweeper, &m) == TMLAB_OK);
  tmlab_machine_info info;
  EXPECT(tmlab_machine_describe(m, &info) == TMLAB_OK);
  EXPECT(!info.catalog && info.deterministic && info.states == 2);

  char* text = NULL;
  EXPECT(tmlab_machine_export(m, &text) == TMLAB_OK);
  tmlab_machine* again = NULL;
  EXPECT(tmlab_machine_from_text(text, &again) == TMLAB_OK);
  tmlab_machine_free(again);
  tmlab_free(text);

  tmlab_nfa* nfa = NULL;
  EXPECT(tmlab_nfa_build(m, 1, 1000, &nfa) == TMLAB_OK);
  int accepts = 0;
  EXPECT(tmlab_nfa_accepts(nfa, "aaa", &accepts) == TMLAB_OK);
  EXPECT(accepts == 1);
  tmlab_comparison cmp;
  EXPECT(tmlab_nfa_compare(m, nfa, 10, 1000, 100000, &cmp, NULL) == TMLAB_OK);
  EXPECT(cmp.agree == 1 && cmp.words_checked == 11 && cmp.inconclusive == 0);
  EXPECT(tmlab_nfa_export(nfa, &text) == TMLAB_OK);
  EXPECT(text && strncmp(text, "nfa k=1", 7) == 0);
  tmlab_free(text);
  tmlab_nfa_free(nfa);

  tmlab_splice_result r;
  char* report = NULL;
  EXPECT(tmlab_splice(m, "aaaaa", 3, NULL, "aaa", 1, NULL, 100, &r, &report) == TMLAB_OK);
  EXPECT(r.replay_valid && r.parity_holds && r.outcome == TMLAB_ACCEPTED && r.shared_length == 1);
  EXPECT(report && strstr(report, "replay: valid"));
  tmlab_free(report);
  EXPECT(tmlab_splice(m, "aaa", 4, NULL, "aaa", 1, NULL, 100, &r, NULL) == TMLAB_E_INVALID_ARGUMENT);
  tmlab_machine_free(m);

  EXPECT(tmlab_machine_load("zigzag", &m) == TMLAB_OK);
  EXPECT(tmlab_splice(m, "aaaaaa", 1, NULL, "aaaaaa", 3, NULL, 1000, &r, NULL) == TMLAB_E_SPLICE);
  tmlab_machine_free(m);
}

static void test_karp_and_errors(void) {
  size_t witnesses = 0;
  char* csv = NULL;
  EXPECT(tmlab_karp("LAM", 256, 1, &witnesses, &csv) == TMLAB_OK);
  EXPECT(witnesses >= 1);
  EXPECT(csv && strncmp(csv, "n,min_dfa_states,karp_bound,meets\n", 34) == 0);
  tmlab_free(csv);
  EXPECT(tmlab_karp("LXM", 10, 1, &witnesses, &csv) == TMLAB_E_INVALID_ARGUMENT);

  tmlab_machine* m = NULL;
  EXPECT(tmlab_machine_load("no-such-machine", &m) == TMLAB_E_INVALID_ARGUMENT);
  EXPECT(m == NULL);
  EXPECT(strstr(tmlab_last_error(), "no-such-machine") != NULL);
  EXPECT(tmlab_machine_from_text("states: q0\nbogus line\n", &m) == TMLAB_E_PARSE);
  EXPECT(tmlab_machine_load(NULL, &m) == TMLAB_E_INVALID_ARGUMENT);

  char* plot = NULL;
  EXPECT(tmlab_plot_script("out.csv", "t", &plot) == TMLAB_OK);
  EXPECT(plot && strstr(plot, "out.csv"));
  tmlab_free(plot);
  EXPECT(strcmp(tmlab_status_name(TMLAB_E_SPLICE), "splice error") == 0);
  EXPECT(strcmp(tmlab_outcome_name(TMLAB_ACCEPTED), "accepted") == 0);
}

int main(void) {
  test_catalog_and_run();
  test_scripts();
  test_nfa_and_splice();
  test_karp_and_errors();
  if (failures) {
    fprintf(stderr, "%d failures\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
