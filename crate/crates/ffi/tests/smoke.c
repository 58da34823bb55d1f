#include <math.h>
#include <stdio.h>
#include "ballmap.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, bm_last_error() ? bm_last_error() : ""); return 1; } } while (0)

int main(void) {
    BmState *s = NULL;
    BmMap *m = NULL;
    BmWitness *w = NULL;
    double r = 0.0, value = 0.0, bound = 0.0, p[81] = {0};
    bool ok = false;

    CHECK(bm_state_new_maximally_mixed(3, &s) == BM_STATUS_OK);
    CHECK(bm_state_r_max(s, &r) == BM_STATUS_OK);
    CHECK(fabs(r - 1.0 / sqrt(6.0)) < 1e-15);

    CHECK(bm_map_new_choi_family(s, M_PI / 3.0, &m) == BM_STATUS_OK);
    CHECK(bm_witness_from_map(m, &w) == BM_STATUS_OK);
    for (int i = 0; i < 3; i++)
        for (int j = 0; j < 3; j++)
            p[(4 * i) * 9 + 4 * j] = 1.0 / 3.0;
    CHECK(bm_witness_detect(w, p, NULL, &value) == BM_STATUS_OK);
    CHECK(fabs(value + 0.5) < 1e-12);
    CHECK(bm_witness_block_positivity(w, 10, 0, &bound, &ok) == BM_STATUS_OK && ok);

    CHECK(bm_state_new_maximally_mixed(3, NULL) == BM_STATUS_NULL_POINTER);
    CHECK(bm_state_new_maximally_mixed(1, &s) == BM_STATUS_INVALID_ARGUMENT);

    bm_witness_free(w);
    bm_map_free(m);
    bm_state_free(s);
    printf("ok %s\n", bm_version());
    return 0;
}
