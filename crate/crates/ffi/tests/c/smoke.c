#include <stdio.h>
#include <stdlib.h>

#include "mclp.h"

static const char *WORKED =
    "{\"budget\": 2, \"budget_mode\": \"at_most\", \"radius\": 1.5,"
    " \"demand_points\": [{\"x\": 0, \"y\": 0, \"weight\": 5}, {\"x\": 1, \"y\": 0, \"weight\": 2},"
    " {\"x\": 3, \"y\": 0, \"weight\": 4}, {\"x\": 4, \"y\": 0, \"weight\": 3}],"
    " \"sites\": [{\"x\": 0.5, \"y\": 0}, {\"x\": 2, \"y\": 0}, {\"x\": 3.5, \"y\": 0}]}";

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "check failed line %d: %s\n", __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    MclpInstance *inst = NULL;
    CHECK(mclp_instance_from_json(WORKED, &inst) == MCLP_STATUS_OK);
    CHECK(mclp_instance_site_count(inst) == 3);

    MclpSolveOptions opts = mclp_solve_options_default();
    opts.flags &= ~MCLP_FLAG_PREPROCESS;
    MclpSolution *sol = NULL;
    CHECK(mclp_solve(inst, MCLP_SOLVER_DP, &opts, &sol) == MCLP_STATUS_OK);
    CHECK(mclp_solution_objective(sol) == 14.0);
    CHECK(mclp_solution_is_exact(sol));

    size_t ids[3];
    CHECK(mclp_solution_copy_selected(sol, ids, 3) == 2);
    CHECK(ids[0] == 0 && ids[1] == 2);

    char *json = NULL;
    CHECK(mclp_solution_to_json(sol, &json) == MCLP_STATUS_OK);
    printf("%s", json);
    mclp_string_free(json);
    mclp_solution_free(sol);
    mclp_instance_free(inst);

    CHECK(mclp_instance_from_json("[]", &inst) == MCLP_STATUS_PARSE_ERROR);
    CHECK(mclp_last_error_message() != NULL);
    return 0;
}
