/* Solves the MAX-CUT relaxation of a triangle and prints the bound and the best cut. */
#include <stdio.h>
#include "sparse_sdp.h"

int main(void) {
    SsdpGraph *g = NULL;
    SsdpCut *cut = NULL;
    const char *text = "3 3\n1 2\n2 3\n1 3\n";
    if (ssdp_graph_parse(text, &g) != SSDP_STATUS_OK) {
        fprintf(stderr, "%s\n", ssdp_last_error());
        return 1;
    }
    SsdpConfig cfg = ssdp_config_default();
    if (ssdp_maxcut(g, &cfg, 1000, 7, &cut) != SSDP_STATUS_OK) {
        fprintf(stderr, "%s\n", ssdp_last_error());
        ssdp_graph_free(g);
        return 1;
    }
    double value = 0.0, bound = 0.0;
    unsigned char sides[3];
    ssdp_cut_value(cut, &value, &bound);
    ssdp_cut_sides(cut, sides, 3);
    printf("bound %.4f cut %.0f sides %d%d%d\n", bound, value, sides[0], sides[1], sides[2]);
    ssdp_cut_free(cut);
    ssdp_graph_free(g);
    return 0;
}
