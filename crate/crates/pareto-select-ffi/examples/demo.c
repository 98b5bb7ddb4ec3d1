/* Build (from the workspace root, after `cargo build -p pareto-select-ffi`):
 *
 *   cc crates/pareto-select-ffi/examples/demo.c \
 *      -Icrates/pareto-select-ffi/include \
 *      target/debug/libpareto_select_ffi.a -lm -o demo
 *
 * Builds a two-objective candidate set, extracts its frontier, and
 * picks the member closest to the utopia point (1, 0).
 */
#include <stdio.h>

#include "pareto_select.h"

int main(void) {
    const char *names[] = {"ndcg", "seconds"};
    PsDirection directions[] = {PS_DIRECTION_MAXIMIZE, PS_DIRECTION_MINIMIZE};
    const char *ids[] = {"nn_1", "nn_2", "nn_slow"};
    double values[] = {
        0.5144, 3.3003e-6,
        0.5185, 1.0476e-5,
        0.5100, 2.0000e-5, /* dominated by both others */
    };

    PsCandidateSet *set = NULL;
    PsStatus status = ps_candidate_set_new(names, directions, 2, ids, values, 3, &set);
    if (status != PS_STATUS_OK) {
        fprintf(stderr, "building the set failed: %s\n", ps_last_error_message());
        return 1;
    }

    PsFrontier *frontier = NULL;
    if (ps_frontier_extract(set, &frontier) != PS_STATUS_OK) {
        fprintf(stderr, "frontier failed: %s\n", ps_last_error_message());
        ps_candidate_set_free(set);
        return 1;
    }
    printf("frontier (%zu of %zu):", ps_frontier_len(frontier), ps_candidate_set_len(set));
    for (size_t i = 0; i < ps_frontier_len(frontier); i++) {
        printf(" %s", ps_frontier_id(frontier, i));
    }
    printf("\n");

    PsParams *params = ps_params_new();
    double utopia[] = {1.0, 0.0};
    ps_params_set_utopia(params, utopia, 2);

    PsSelection *selection = NULL;
    status = ps_select(set, PS_STRATEGY_DISTANCE_TO_UTOPIA, NULL, params, &selection);
    if (status != PS_STATUS_OK) {
        fprintf(stderr, "selection failed: %s\n", ps_last_error_message());
        ps_params_free(params);
        ps_frontier_free(frontier);
        ps_candidate_set_free(set);
        return 1;
    }
    printf("chosen: %s\n", ps_selection_chosen_id(selection));
    for (size_t i = 0; i < ps_selection_len(selection); i++) {
        double score;
        ps_selection_member_score(selection, i, &score);
        printf("  %-8s %.6g\n", ps_selection_member_id(selection, i), score);
    }

    ps_selection_free(selection);
    ps_params_free(params);
    ps_frontier_free(frontier);
    ps_candidate_set_free(set);
    return 0;
}
