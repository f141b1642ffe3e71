#include <stdio.h>
#include <string.h>

#include "nmda.h"

static const char *FIG7 =
    "NMDA\n"
    "alphabet: a\n"
    "states: q1 q2\n"
    "initial: q1\n"
    "t: q1 a q2 5 2\n"
    "t: q1 a q1 4 2\n"
    "t: q2 a q2 1 2\n";

int main(void) {
    NmdaAutomaton *a = NULL;
    NmdaAutomaton *d = NULL;
    char *value = NULL;
    bool same = false;
    if (nmda_automaton_parse(FIG7, &a) != NMDA_STATUS_OK) return 1;
    if (nmda_word_value(a, "aa", &value) != NMDA_STATUS_OK) return 2;
    if (strcmp(value, "11/2") != 0) return 3;
    nmda_string_free(value);
    if (nmda_determinize(a, 0, &d) != NMDA_STATUS_OK) return 4;
    if (nmda_automaton_num_states(d) != 4) return 5;
    if (nmda_equivalent(a, d, NMDA_MODE_INFINITE, &same) != NMDA_STATUS_OK || !same) return 6;
    if (nmda_word_value(a, "b", &value) != NMDA_STATUS_PARSE) return 7;
    if (nmda_last_error() == NULL) return 8;
    nmda_automaton_free(d);
    nmda_automaton_free(a);
    puts("ok");
    return 0;
}
