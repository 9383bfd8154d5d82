#include <stdio.h>
#include <string.h>

#include "lammult.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__,    \
                    #cond, lm_last_error());                          \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    LmTerm *t = NULL, *r = NULL;
    char *s = NULL;
    uint64_t steps = 0;

    CHECK(lm_term_parse("(((\\x1 x2 x3 x4. x1) a b) c d)", &t) == LM_STATUS_OK);
    CHECK(lm_eval(t, LM_MACHINE_EVAL_APPLY, 100, &r, &steps) == LM_STATUS_OK);
    CHECK(steps == 6);
    CHECK(lm_term_print(r, &s) == LM_STATUS_OK);
    CHECK(strcmp(s, "a") == 0);
    lm_string_free(s);
    lm_term_free(r);

    CHECK(lm_compare_json(t, 1000, &s) == LM_STATUS_OK);
    CHECK(strstr(s, "\"verdict\":\"agree\"") != NULL);
    lm_string_free(s);
    lm_term_free(t);

    CHECK(lm_term_parse("(f)", &t) == LM_STATUS_PARSE_ERROR);
    CHECK(strstr(lm_last_error(), "arity-zero") != NULL);

    puts("ok");
    return 0;
}
