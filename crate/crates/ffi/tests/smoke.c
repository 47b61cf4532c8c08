#include <stdio.h>
#include <string.h>
#include "contlogic.h"

int main(void) {
    ClFormula *f = NULL;
    char *code = NULL;
    if (cl_formula_parse("d(c1, c2)", "metric", &f) != CL_STATUS_OK) return 1;
    if (cl_formula_encode(f, &code) != CL_STATUS_OK) return 2;
    printf("%s\n", code);
    cl_string_free(code);
    cl_formula_free(f);
    if (cl_formula_parse("d(c1,", "metric", &f) != CL_STATUS_PARSE) return 3;
    if (cl_last_error_message() == NULL) return 4;
    ClCondition *c = NULL;
    ClAnswer a;
    cl_condition_new(&c);
    if (cl_forces_sup_leq(c, "d(x, x)", "x", "0", 8, &a) != CL_STATUS_OK || a != CL_ANSWER_YES) return 5;
    cl_condition_free(c);
    return 0;
}
