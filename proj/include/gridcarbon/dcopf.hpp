#pragma once

#include <map>
#include <vector>

#include "gridcarbon/grid.hpp"
#include "gridcarbon/lp.hpp"

namespace gridcarbon {

enum class LimitSide { Min, Max };

// Active-set classification of an optimal dispatch.
struct ActiveSet {
    // (line index, side): Max = flow at +limit, Min = flow at -limit.
    std::vector<std::pair<int, LimitSide>> flow_limits;
    // (generator id, side) for set-points at p_min / p_max.
    std::vector<std::pair<int, LimitSide>> generator_limits;
    // (generator id, segment index) for epigraph rows holding with equality.
    std::vector<std::pair<int, int>> segments;

    bool operator==(const ActiveSet&) const = default;
};

struct DispatchResult {
    std::map<int, double> theta; // bus id -> voltage angle (rad), theta_ref = 0
    std::map<int, double> p_g;   // gen id -> set-point (MW)
    std::map<int, double> c_g;   // gen id -> cost (currency/h)
    double objective = 0.0;
    ActiveSet active;
};

// Column layout of the dispatch LP: theta per bus, then p per gen, then C per
// gen, n = N + 2*N_G in total. Also maps each constraint to its LP row id.
struct VariableIndexMap {
    std::map<int, int> theta_col; // bus id -> column
    std::map<int, int> p_col;     // gen id -> column
    std::map<int, int> c_col;     // gen id -> column
    std::vector<int> bus_order;   // bus ids ascending
    std::vector<int> gen_order;   // gen ids ascending

    std::map<int, std::int64_t> balance_row;           // bus id -> row id
    std::int64_t ref_row = 0;
    std::vector<std::int64_t> flow_upper_row;          // per line index; -1 if unlimited
    std::vector<std::int64_t> flow_lower_row;
    std::map<std::pair<int, int>, std::int64_t> segment_row; // (gen id, segment) -> row id

    int num_cols() const { return static_cast<int>(theta_col.size() + 2 * p_col.size()); }
};

std::pair<LpProblem, VariableIndexMap> build_dcopf(const Network& network);

// Solve the dispatch LP and classify the active set. Throws SolveError on
// infeasible / unbounded / numerically failed problems.
DispatchResult solve_dcopf(const Network& network);

// As solve_dcopf, reusing the previous solution's basis when it is still the
// unique optimum. Same result as solve_dcopf for any hint.
DispatchResult solve_dcopf_warm(const Network& network, const LpSolution* hint,
                                LpSolution* basis_out);

// Signed MW flow on each line, -beta*base*(theta_from - theta_to), positive
// in the from->to direction.
std::vector<double> line_flows(const Network& network, const DispatchResult& dispatch);

// Total generation emissions sum_g e_g * p_g (tCO2/h).
double total_emissions(const Network& network, const DispatchResult& dispatch);

} // namespace gridcarbon
