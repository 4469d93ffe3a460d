#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace gridcarbon {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Classification tolerances shared with the sensitivity module.
inline constexpr double kFeasTol = 1e-8;  // primal feasibility (scaled)
inline constexpr double kOptTol = 1e-8;   // objective / duality gap
inline constexpr double kSlackTol = 1e-6; // binding-row classification

enum class Relation { LessEq, Equal, GreaterEq };

struct LpRow {
    std::int64_t id = 0; // stable identifier, unique within a problem
    std::vector<std::pair<int, double>> coeffs; // (column, coefficient), columns ascending
    Relation rel = Relation::Equal;
    double rhs = 0.0;
};

// min c'x  s.t. rows, lower <= x <= upper. Columns are identified by index.
struct LpProblem {
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<LpRow> rows;

    int add_variable(double lo, double hi, double cost);
    void add_row(std::int64_t id, std::vector<std::pair<int, double>> coeffs,
                 Relation rel, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

enum class BoundSide { Lower, Upper };

struct LpSolution {
    LpStatus status = LpStatus::NumericalFailure;
    std::vector<double> x; // primal values, length num_vars
    double objective = 0.0;
    std::vector<std::int64_t> active_rows; // |slack| <= kSlackTol, ascending by row id
    std::vector<std::pair<int, BoundSide>> active_bounds; // columns at a bound
    std::vector<double> row_duals;      // aligned with problem.rows
    std::vector<double> reduced_costs;  // per column; bound multipliers
    int pivots = 0;

    // Basis snapshot for warm starts; one entry per internal column.
    std::vector<std::uint8_t> basis_state;
};

// Deterministic bounded-variable revised simplex (Bland's rule, dense LU basis).
// Identical inputs produce identical solutions.
LpSolution solve_lp(const LpProblem& problem);

// Warm-started variant with the same contract as solve_lp. The hint is used
// only when it pins down the unique optimal basis; otherwise this falls back
// to a cold solve, so the returned solution never depends on the hint.
LpSolution solve_lp_warm(const LpProblem& problem, const LpSolution& hint);

// Fixed-point text dump, one row per line, for external solver cross-checks.
std::string dump_problem(const LpProblem& problem);

} // namespace gridcarbon
