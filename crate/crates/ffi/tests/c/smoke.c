#include <stdio.h>
#include <string.h>
#include "resmatch.h"

static const char *CNF = "p cnf 2 2\n1 2 0\n-1 2 0\n";

int main(void) {
    ResmatchArtifact *art = NULL;
    if (resmatch_reduce(CNF, 1, 2, &art) != RESMATCH_STATUS_OK) {
        fprintf(stderr, "reduce: %s\n", resmatch_last_error_message());
        return 1;
    }
    size_t k = 0;
    resmatch_artifact_k(art, &k);

    ResmatchGraph *g = NULL;
    resmatch_artifact_graph(art, &g);
    ResmatchStats st;
    resmatch_graph_stats(g, &st);

    size_t lo = 0, hi = 0;
    if (resmatch_residual_range(g, 0, &lo, &hi) != RESMATCH_STATUS_OK) {
        fprintf(stderr, "range: %s\n", resmatch_last_error_message());
        return 1;
    }
    bool yes = false;
    resmatch_decide(g, RESMATCH_MODE_AT_MOST, k, 0, &yes);

    char *json = NULL;
    resmatch_artifact_json(art, &json);
    int has_meta = strstr(json, "\"meta\"") != NULL;
    resmatch_string_free(json);

    printf("k=%zu V=%zu E=%zu min=%zu max=%zu le=%d meta=%d\n",
           k, st.vertices, st.edges, lo, hi, (int)yes, has_meta);
    resmatch_graph_free(g);
    resmatch_artifact_free(art);
    return 0;
}
