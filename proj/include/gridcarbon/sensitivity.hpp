#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridcarbon/dcopf.hpp"
#include "gridcarbon/grid.hpp"

namespace gridcarbon {

// Square linearization A dx = db of the dispatch around an optimal point over
// x = [theta (bus id asc); p_G (gen id asc); C_G (gen id asc)], n = N + 2N_G.
// Rows: the N nodal balance rows by bus id, the reference-angle row, then
// every binding inequality in a fixed order (flow limits by line index, upper
// before lower; generator bounds by gen id; PWL segments by gen id then
// segment index). Square and full-rank iff the optimum is non-degenerate.
struct SensitivitySystem {
    Eigen::MatrixXd a;
    std::vector<std::string> row_provenance; // one label per row
    std::vector<int> bus_order;              // bus ids ascending
    std::vector<int> gen_order;              // gen ids ascending
    int num_cols = 0;
    bool full_rank = false;

    bool square() const { return static_cast<int>(row_provenance.size()) == num_cols; }
    bool degenerate() const { return !square() || !full_rank; }
};

SensitivitySystem build_sensitivity_system(const Network& network,
                                           const DispatchResult& dispatch);

// B[g][i] = d p_g / d p_D,i: rows N+1..N+N_G, columns 1..N of A^-1, computed
// as N solves against one factorization. Columns sum to 1 (+-1e-6). Row order
// = gen_order, column order = bus_order. Throws ValidationError when the
// system is degenerate; callers should fall back to finite differences.
Eigen::MatrixXd generation_shift_matrix(const SensitivitySystem& system);

// Locational marginal carbon emissions per bus: lmce_i = sum_g B[g][i] e_g.
// Degenerate optima fall back to finite differences (used_fallback, when
// given, reports this); buses where both +delta and -delta perturbations
// fail to solve get NaN.
std::map<int, double> lmce(const Network& network, const DispatchResult& dispatch,
                           bool* used_fallback = nullptr);

// (E(load_bus + delta) - E(load_bus)) / delta from two full dispatches.
// Throws SolveError when the perturbed problem does not solve; callers may
// retry with -delta.
double lmce_finite_difference(const Network& network, int bus, double delta);

// Finite differences at every bus: delta first, then -delta, then NaN.
std::map<int, double> lmce_finite_difference_all(const Network& network, double delta);

// Stable string form of the active set, for detecting active-set changes
// between a base case and a perturbed case.
std::string active_set_signature(const ActiveSet& active);

} // namespace gridcarbon
