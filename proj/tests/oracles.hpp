// Independent brute-force oracles used to pin down solver results.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "gridcarbon/lp.hpp"

namespace oracles {

// Minimum of sum(cost[i] * x[i]) over the box [lo, hi]^n intersected with
// sum(x) = total, by enumerating vertices: at a vertex at most one variable
// sits strictly between its bounds. Returns +inf if infeasible.
inline double shift_vertex_optimum(const std::vector<double>& cost, double lo, double hi,
                                   double total) {
    const int n = static_cast<int>(cost.size());
    double best = std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < (1 << n); ++mask) {
        // Candidate with every variable pinned by the mask.
        double sum = 0.0;
        double obj = 0.0;
        for (int i = 0; i < n; ++i) {
            double v = (mask >> i & 1) != 0 ? hi : lo;
            sum += v;
            obj += cost[static_cast<std::size_t>(i)] * v;
        }
        if (std::abs(sum - total) <= 1e-9 * std::max(1.0, std::abs(total))) {
            best = std::min(best, obj);
        }
        // Candidates with one variable freed to absorb the residual.
        for (int f = 0; f < n; ++f) {
            double vf = (mask >> f & 1) != 0 ? hi : lo;
            double xf = total - (sum - vf);
            if (xf < lo - 1e-12 || xf > hi + 1e-12) continue;
            best = std::min(best,
                            obj + cost[static_cast<std::size_t>(f)] * (xf - vf));
        }
    }
    return best;
}

// Exhaustive vertex enumeration for a small LpProblem: a vertex is the
// solution of n linearly independent tight constraints chosen among the rows
// (as equalities) and the variable bounds. Returns +inf if no feasible
// vertex exists. Intended for n <= 4, a handful of rows.
inline double lp_vertex_optimum(const gridcarbon::LpProblem& lp) {
    const int n = static_cast<int>(lp.objective.size());
    const int m = static_cast<int>(lp.rows.size());

    struct Plane {
        Eigen::VectorXd a;
        double b;
    };
    std::vector<Plane> planes;
    for (const gridcarbon::LpRow& row : lp.rows) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
        for (const auto& [col, coef] : row.coeffs) a(col) += coef;
        planes.push_back({a, row.rhs});
    }
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
        a(j) = 1.0;
        if (std::isfinite(lp.lower[static_cast<std::size_t>(j)])) {
            planes.push_back({a, lp.lower[static_cast<std::size_t>(j)]});
        }
        if (std::isfinite(lp.upper[static_cast<std::size_t>(j)])) {
            planes.push_back({a, lp.upper[static_cast<std::size_t>(j)]});
        }
    }

    const int p = static_cast<int>(planes.size());
    std::vector<int> pick(static_cast<std::size_t>(n));
    double best = std::numeric_limits<double>::infinity();

    auto feasible = [&](const Eigen::VectorXd& x) {
        for (int j = 0; j < n; ++j) {
            if (x(j) < lp.lower[static_cast<std::size_t>(j)] - 1e-7) return false;
            if (x(j) > lp.upper[static_cast<std::size_t>(j)] + 1e-7) return false;
        }
        for (int i = 0; i < m; ++i) {
            double lhs = planes[static_cast<std::size_t>(i)].a.dot(x);
            double rhs = planes[static_cast<std::size_t>(i)].b;
            double tol = 1e-7 * std::max(1.0, std::abs(rhs));
            switch (lp.rows[static_cast<std::size_t>(i)].rel) {
            case gridcarbon::Relation::LessEq:
                if (lhs > rhs + tol) return false;
                break;
            case gridcarbon::Relation::Equal:
                if (std::abs(lhs - rhs) > tol) return false;
                break;
            case gridcarbon::Relation::GreaterEq:
                if (lhs < rhs - tol) return false;
                break;
            }
        }
        return true;
    };

    std::function<void(int, int)> recurse = [&](int start, int depth) {
        if (depth == n) {
            Eigen::MatrixXd a(n, n);
            Eigen::VectorXd b(n);
            for (int k = 0; k < n; ++k) {
                a.row(k) = planes[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])].a;
                b(k) = planes[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])].b;
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
            if (lu.rank() < n) return;
            Eigen::VectorXd x = lu.solve(b);
            if (!feasible(x)) return;
            double obj = 0.0;
            for (int j = 0; j < n; ++j) obj += lp.objective[static_cast<std::size_t>(j)] * x(j);
            best = std::min(best, obj);
            return;
        }
        for (int i = start; i < p; ++i) {
            pick[static_cast<std::size_t>(depth)] = i;
            recurse(i + 1, depth + 1);
        }
    };
    recurse(0, 0);
    return best;
}

} // namespace oracles
