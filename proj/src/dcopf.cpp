#include "gridcarbon/dcopf.hpp"

#include <algorithm>
#include <cmath>

#include "gridcarbon/errors.hpp"
#include "gridcarbon/format.hpp"

namespace gridcarbon {

namespace {

// Stable row-id encoding: kind in the high 32 bits, index below.
constexpr std::int64_t kBalanceKind = 1;
constexpr std::int64_t kRefKind = 2;
constexpr std::int64_t kFlowUpperKind = 3;
constexpr std::int64_t kFlowLowerKind = 4;
constexpr std::int64_t kSegmentKind = 5;

std::int64_t row_id(std::int64_t kind, std::int64_t index) { return (kind << 32) | index; }

} // namespace

std::pair<LpProblem, VariableIndexMap> build_dcopf(const Network& network) {
    LpProblem lp;
    VariableIndexMap map;

    for (const Bus& b : network.buses) map.bus_order.push_back(b.id);
    std::sort(map.bus_order.begin(), map.bus_order.end());
    for (const Generator& g : network.generators) map.gen_order.push_back(g.id);
    std::sort(map.gen_order.begin(), map.gen_order.end());

    for (int bus : map.bus_order) {
        map.theta_col[bus] = lp.add_variable(-kInf, kInf, 0.0);
    }
    for (int gid : map.gen_order) {
        const Generator& g = *network.find_generator(gid);
        map.p_col[gid] = lp.add_variable(g.p_min, g.p_max, 0.0);
    }
    for (int gid : map.gen_order) {
        map.c_col[gid] = lp.add_variable(-kInf, kInf, 1.0);
    }

    // Nodal balance: sum of local generation plus the weighted-Laplacian row
    // of theta equals local demand. Line (a,b) carries -beta*base*(th_a-th_b).
    for (int bus : map.bus_order) {
        std::vector<std::pair<int, double>> coeffs;
        double diag = 0.0;
        std::vector<std::pair<int, double>> offdiag; // (other bus theta col, -beta')
        for (const Line& ln : network.lines) {
            if (ln.from_bus != bus && ln.to_bus != bus) continue;
            double w = ln.susceptance * network.base_mva;
            int other = ln.from_bus == bus ? ln.to_bus : ln.from_bus;
            diag += w;
            offdiag.push_back({map.theta_col.at(other), -w});
        }
        coeffs.push_back({map.theta_col.at(bus), diag});
        for (auto& e : offdiag) coeffs.push_back(e);
        for (int gid : map.gen_order) {
            if (network.find_generator(gid)->bus == bus) {
                coeffs.push_back({map.p_col.at(gid), 1.0});
            }
        }
        // Merge duplicate theta columns (parallel lines) and order columns.
        std::sort(coeffs.begin(), coeffs.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::pair<int, double>> merged;
        for (const auto& [col, coef] : coeffs) {
            if (!merged.empty() && merged.back().first == col) {
                merged.back().second += coef;
            } else {
                merged.push_back({col, coef});
            }
        }
        std::erase_if(merged, [](const auto& e) { return e.second == 0.0; });
        std::int64_t id = row_id(kBalanceKind, bus);
        lp.add_row(id, merged, Relation::Equal, network.load_at_bus(bus));
        map.balance_row[bus] = id;
    }

    map.ref_row = row_id(kRefKind, 0);
    lp.add_row(map.ref_row, {{map.theta_col.at(network.ref_bus()), 1.0}}, Relation::Equal, 0.0);

    map.flow_upper_row.assign(network.lines.size(), -1);
    map.flow_lower_row.assign(network.lines.size(), -1);
    for (std::size_t li = 0; li < network.lines.size(); ++li) {
        const Line& ln = network.lines[li];
        if (std::isinf(ln.flow_limit)) continue;
        double w = ln.susceptance * network.base_mva;
        int ca = map.theta_col.at(ln.from_bus);
        int cb = map.theta_col.at(ln.to_bus);
        std::vector<std::pair<int, double>> coeffs{{ca, -w}, {cb, w}};
        if (ca > cb) std::swap(coeffs[0], coeffs[1]);
        std::int64_t up = row_id(kFlowUpperKind, static_cast<std::int64_t>(li));
        std::int64_t lo = row_id(kFlowLowerKind, static_cast<std::int64_t>(li));
        lp.add_row(up, coeffs, Relation::LessEq, ln.flow_limit);
        lp.add_row(lo, coeffs, Relation::GreaterEq, -ln.flow_limit);
        map.flow_upper_row[li] = up;
        map.flow_lower_row[li] = lo;
    }

    // Epigraph: C_g >= slope_k * p_g + intercept_k for every segment.
    for (int gid : map.gen_order) {
        const Generator& g = *network.find_generator(gid);
        for (int k = 0; k < g.segment_count(); ++k) {
            std::int64_t id = row_id(kSegmentKind, static_cast<std::int64_t>(gid) * 10000 + k);
            int pc = map.p_col.at(gid);
            int cc = map.c_col.at(gid);
            std::vector<std::pair<int, double>> coeffs{{pc, g.segment_slope(k)}, {cc, -1.0}};
            lp.add_row(id, coeffs, Relation::LessEq, -g.segment_intercept(k));
            map.segment_row[{gid, k}] = id;
        }
    }

    return {std::move(lp), std::move(map)};
}

namespace {

DispatchResult classify(const Network& network, const VariableIndexMap& map,
                        const LpSolution& sol) {
    DispatchResult out;
    // Angles are shift-invariant; re-anchor so theta at the reference bus is
    // exactly zero rather than solver noise.
    double ref_angle = sol.x[static_cast<std::size_t>(map.theta_col.at(network.ref_bus()))];
    for (int bus : map.bus_order) {
        out.theta[bus] = sol.x[static_cast<std::size_t>(map.theta_col.at(bus))] - ref_angle;
    }
    for (int gid : map.gen_order) {
        out.p_g[gid] = sol.x[static_cast<std::size_t>(map.p_col.at(gid))];
        out.c_g[gid] = sol.x[static_cast<std::size_t>(map.c_col.at(gid))];
    }
    out.objective = sol.objective;

    for (std::size_t li = 0; li < network.lines.size(); ++li) {
        const Line& ln = network.lines[li];
        if (std::isinf(ln.flow_limit)) continue;
        double flow = -ln.susceptance * network.base_mva *
                      (out.theta.at(ln.from_bus) - out.theta.at(ln.to_bus));
        if (std::abs(flow - ln.flow_limit) <= kSlackTol) {
            out.active.flow_limits.push_back({static_cast<int>(li), LimitSide::Max});
        } else if (std::abs(flow + ln.flow_limit) <= kSlackTol) {
            out.active.flow_limits.push_back({static_cast<int>(li), LimitSide::Min});
        }
    }
    for (int gid : map.gen_order) {
        const Generator& g = *network.find_generator(gid);
        double p = out.p_g.at(gid);
        if (std::abs(p - g.p_min) <= kSlackTol) {
            out.active.generator_limits.push_back({gid, LimitSide::Min});
        } else if (std::abs(p - g.p_max) <= kSlackTol) {
            out.active.generator_limits.push_back({gid, LimitSide::Max});
        }
    }
    for (int gid : map.gen_order) {
        const Generator& g = *network.find_generator(gid);
        double p = out.p_g.at(gid);
        double c = out.c_g.at(gid);
        double tol = kSlackTol * std::max(1.0, std::abs(c));
        for (int k = 0; k < g.segment_count(); ++k) {
            double f = g.segment_slope(k) * p + g.segment_intercept(k);
            if (std::abs(c - f) <= tol) {
                out.active.segments.push_back({gid, k});
            }
        }
    }
    return out;
}

[[noreturn]] void raise_solve_error(LpStatus status) {
    switch (status) {
    case LpStatus::Infeasible:
        throw SolveError(SolveFailure::Infeasible, "dispatch is infeasible");
    case LpStatus::Unbounded:
        throw SolveError(SolveFailure::Unbounded, "dispatch cost is unbounded below");
    default:
        throw SolveError(SolveFailure::Numerical, "dispatch solve failed numerically");
    }
}

} // namespace

DispatchResult solve_dcopf(const Network& network) {
    auto [lp, map] = build_dcopf(network);
    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) raise_solve_error(sol.status);
    return classify(network, map, sol);
}

DispatchResult solve_dcopf_warm(const Network& network, const LpSolution* hint,
                                LpSolution* basis_out) {
    auto [lp, map] = build_dcopf(network);
    LpSolution sol = hint ? solve_lp_warm(lp, *hint) : solve_lp(lp);
    if (sol.status != LpStatus::Optimal) raise_solve_error(sol.status);
    DispatchResult out = classify(network, map, sol);
    if (basis_out) *basis_out = std::move(sol);
    return out;
}

std::vector<double> line_flows(const Network& network, const DispatchResult& dispatch) {
    std::vector<double> flows;
    flows.reserve(network.lines.size());
    for (const Line& ln : network.lines) {
        flows.push_back(-ln.susceptance * network.base_mva *
                        (dispatch.theta.at(ln.from_bus) - dispatch.theta.at(ln.to_bus)));
    }
    return flows;
}

double total_emissions(const Network& network, const DispatchResult& dispatch) {
    double sum = 0.0;
    for (const Generator& g : network.generators) {
        sum += g.emission_intensity * dispatch.p_g.at(g.id);
    }
    return sum;
}

} // namespace gridcarbon
