#include <math.h>
#include <stdio.h>
#include "fdsat.h"

int main(void) {
    FdsatScenario *s = NULL;
    if (fdsat_scenario_reference("FU-UD", &s) != FDSAT_STATUS_OK) return 10;
    if (fdsat_scenario_set_sic(s, 80.0) != FDSAT_STATUS_OK) return 11;
    FdsatAssessment *a = NULL;
    if (fdsat_assess(s, &a) != FDSAT_STATUS_OK) return 12;
    FdsatSummary sum;
    if (fdsat_assessment_summary(a, &sum) != FDSAT_STATUS_OK) return 13;
    if (!(sum.se_fd_bps_hz > sum.se_fdd_bps_hz)) return 14;
    if (fdsat_scenario_set_sic(s, -1.0) != FDSAT_STATUS_INVALID) return 15;
    if (fdsat_last_error_message() == NULL) return 16;
    double sic[3] = {60.0, 70.0, 80.0};
    FdsatSweepPoint pts[3];
    if (fdsat_sweep_sic(s, sic, 3, pts) != FDSAT_STATUS_OK) return 17;
    printf("%.6f %.6f %.6f\n", sum.se_fdd_bps_hz, sum.se_fd_bps_hz, pts[1].gain_percent);
    fdsat_assessment_free(a);
    fdsat_scenario_free(s);
    return 0;
}
