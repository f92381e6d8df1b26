#include <stdio.h>
#include "tsvf_lab.h"
int main(void) {
    TsvfTwoState *tsv = NULL; TsvfOperator *pa = NULL;
    if (tsvf_two_state_scenario("three-box", &tsv) != TSVF_STATUS_OK) return 1;
    if (tsvf_operator_builtin("P_A", &pa) != TSVF_STATUS_OK) return 1;
    double v[2], p[2]; size_t n = 0;
    if (tsvf_abl(tsv, pa, v, p, 2, &n) != TSVF_STATUS_OK) return 1;
    printf("p(A=1) = %.17g\n", p[1]);
    tsvf_operator_free(pa); tsvf_two_state_free(tsv);
    return 0;
}
