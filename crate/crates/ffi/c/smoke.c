#include <stdio.h>
#include "mediagraph.h"

int main(int argc, char **argv) {
    if (argc < 2) {
        fprintf(stderr, "usage: %s CORPUS.jsonl\n", argv[0]);
        return 1;
    }
    MgGraph *g = NULL;
    if (mg_graph_build_builtin(argv[1], NULL, &g) != MG_STATUS_OK) {
        fprintf(stderr, "error: %s\n", mg_last_error());
        return 1;
    }
    size_t v = 0, e = 0;
    mg_graph_vertex_count(g, &v);
    mg_graph_edge_count(g, &e);
    printf("mediagraph %s: %zu vertices, %zu edges\n", mg_version(), v, e);

    char *summary = NULL;
    if (mg_graph_summary_json(g, MG_WEIGHT_FREQUENCY, 0, &summary) == MG_STATUS_OK) {
        puts(summary);
        mg_string_free(summary);
    }
    mg_graph_free(g);
    return 0;
}
