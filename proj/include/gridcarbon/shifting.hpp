#pragma once

#include <map>
#include <vector>

#include "gridcarbon/grid.hpp"

namespace gridcarbon {

// Temporal load-shifting configuration for the data-center fleet.
struct ShiftConfig {
    double nominal_mw = 250.0; // D_nom, per data center per step
    double epsilon = 0.2;      // +/- fraction of D_nom each step may move
    int horizon = 24;          // steps per shifting window (one "day")
};

// Chosen demand per data-center bus per step within one window.
struct ShiftPlan {
    std::vector<int> dc_buses;                   // bus ids, input order
    std::vector<std::vector<double>> demand_mw;  // [dc][step]
    double estimated_emissions = 0.0;            // sum intensity * demand
};

// Minimize sum_{d,t} e[d][t] * x[d][t] subject to per-window energy
// conservation sum x = N_d * N_t * D_nom and (1-eps)D_nom <= x <= (1+eps)D_nom.
// Ties broken toward the nominal profile: demand moves only between step/bus
// pairs whose intensities strictly differ, lowest-intensity receivers filling
// first. A NaN intensity pins its step/bus pair at the nominal demand.
ShiftPlan solve_shift(const std::vector<int>& dc_buses,
                      const std::vector<std::vector<double>>& intensity,
                      const ShiftConfig& config);

// Score a plan against (pre-shift) intensities: sum_{d,t} e[d][t] * demand.
// NaN intensities contribute nothing. Equals plan.estimated_emissions when
// scored with the intensities the plan was solved against.
double estimated_accounting(const std::vector<std::vector<double>>& intensity,
                            const ShiftPlan& plan);

} // namespace gridcarbon
