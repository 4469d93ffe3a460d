#include "gridcarbon/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gridcarbon/errors.hpp"
#include "gridcarbon/lp.hpp"

namespace gridcarbon {

namespace {

constexpr double kRankTolFactor = 1e-9;
constexpr double kFallbackDelta = 1e-3; // MW

} // namespace

SensitivitySystem build_sensitivity_system(const Network& network,
                                           const DispatchResult& dispatch) {
    SensitivitySystem sys;
    for (const Bus& b : network.buses) sys.bus_order.push_back(b.id);
    std::sort(sys.bus_order.begin(), sys.bus_order.end());
    for (const Generator& g : network.generators) sys.gen_order.push_back(g.id);
    std::sort(sys.gen_order.begin(), sys.gen_order.end());

    const int num_buses = static_cast<int>(sys.bus_order.size());
    const int num_gens = static_cast<int>(sys.gen_order.size());
    sys.num_cols = num_buses + 2 * num_gens;

    std::map<int, int> theta_col;
    std::map<int, int> p_col;
    std::map<int, int> c_col;
    for (int i = 0; i < num_buses; ++i) theta_col[sys.bus_order[static_cast<std::size_t>(i)]] = i;
    for (int g = 0; g < num_gens; ++g) {
        p_col[sys.gen_order[static_cast<std::size_t>(g)]] = num_buses + g;
        c_col[sys.gen_order[static_cast<std::size_t>(g)]] = num_buses + num_gens + g;
    }

    std::vector<Eigen::VectorXd> rows;
    auto add_row = [&](const std::string& provenance) -> Eigen::VectorXd& {
        rows.emplace_back(Eigen::VectorXd::Zero(sys.num_cols));
        sys.row_provenance.push_back(provenance);
        return rows.back();
    };

    for (int bus : sys.bus_order) {
        Eigen::VectorXd& row = add_row("balance bus " + std::to_string(bus));
        for (const Line& ln : network.lines) {
            if (ln.from_bus != bus && ln.to_bus != bus) continue;
            double w = ln.susceptance * network.base_mva;
            int other = ln.from_bus == bus ? ln.to_bus : ln.from_bus;
            row(theta_col.at(bus)) += w;
            row(theta_col.at(other)) -= w;
        }
        for (const Generator& g : network.generators) {
            if (g.bus == bus) row(p_col.at(g.id)) += 1.0;
        }
    }

    add_row("reference angle")(theta_col.at(network.ref_bus())) = 1.0;

    for (const auto& [line_index, side] : dispatch.active.flow_limits) {
        const Line& ln = network.lines[static_cast<std::size_t>(line_index)];
        double w = ln.susceptance * network.base_mva;
        std::string label = "flow limit line " + std::to_string(line_index) +
                            (side == LimitSide::Max ? " upper" : " lower");
        Eigen::VectorXd& row = add_row(label);
        row(theta_col.at(ln.from_bus)) = -w;
        row(theta_col.at(ln.to_bus)) = w;
    }

    for (const auto& [gen_id, side] : dispatch.active.generator_limits) {
        std::string label = "generator " + std::to_string(gen_id) +
                            (side == LimitSide::Max ? " at p_max" : " at p_min");
        add_row(label)(p_col.at(gen_id)) = 1.0;
    }

    for (const auto& [gen_id, seg] : dispatch.active.segments) {
        const Generator& g = *network.find_generator(gen_id);
        Eigen::VectorXd& row =
            add_row("segment " + std::to_string(seg) + " of generator " + std::to_string(gen_id));
        row(p_col.at(gen_id)) = g.segment_slope(seg);
        row(c_col.at(gen_id)) = -1.0;
    }

    sys.a.resize(static_cast<Eigen::Index>(rows.size()), sys.num_cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        sys.a.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    }

    if (sys.square()) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys.a);
        Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
        double tol = kRankTolFactor * (diag.size() > 0 ? diag.maxCoeff() : 0.0);
        int rank = 0;
        for (Eigen::Index i = 0; i < diag.size(); ++i) {
            if (diag(i) > tol) ++rank;
        }
        sys.full_rank = (rank == sys.num_cols);
    } else {
        sys.full_rank = false;
    }
    return sys;
}

Eigen::MatrixXd generation_shift_matrix(const SensitivitySystem& system) {
    if (system.degenerate()) {
        throw ValidationError(
            "sensitivity system is degenerate; use the finite-difference fallback");
    }
    const int num_buses = static_cast<int>(system.bus_order.size());
    const int num_gens = static_cast<int>(system.gen_order.size());
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system.a);
    Eigen::MatrixXd shift(num_gens, num_buses);
    // Column i of A^-1 restricted to the p_G block: one unit-load solve per bus.
    for (int i = 0; i < num_buses; ++i) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(system.num_cols);
        rhs(i) = 1.0;
        Eigen::VectorXd dx = lu.solve(rhs);
        for (int g = 0; g < num_gens; ++g) {
            shift(g, i) = dx(num_buses + g);
        }
    }
    return shift;
}

namespace {

// Dispatch with an extra (possibly negative) load tacked onto one bus.
double emissions_with_load_delta(const Network& network, int bus, double delta,
                                 ActiveSet* active_out) {
    Network perturbed = network;
    int next_id = 0;
    for (const Load& l : perturbed.loads) next_id = std::max(next_id, l.id);
    Load extra;
    extra.id = next_id + 1;
    extra.bus = bus;
    extra.p = delta;
    perturbed.loads.push_back(extra);
    DispatchResult dispatch = solve_dcopf(perturbed);
    if (active_out) *active_out = dispatch.active;
    return total_emissions(perturbed, dispatch);
}

} // namespace

double lmce_finite_difference(const Network& network, int bus, double delta) {
    if (delta == 0.0) {
        throw ValidationError("finite-difference delta must be nonzero");
    }
    if (!network.find_bus(bus)) {
        throw ValidationError("finite-difference bus " + std::to_string(bus) + " does not exist");
    }
    DispatchResult base = solve_dcopf(network);
    double e0 = total_emissions(network, base);
    double e1 = emissions_with_load_delta(network, bus, delta, nullptr);
    return (e1 - e0) / delta;
}

std::map<int, double> lmce_finite_difference_all(const Network& network, double delta) {
    std::map<int, double> out;
    DispatchResult base = solve_dcopf(network);
    double e0 = total_emissions(network, base);
    for (const Bus& b : network.buses) {
        double value = std::numeric_limits<double>::quiet_NaN();
        for (double d : {delta, -delta}) {
            try {
                double e1 = emissions_with_load_delta(network, b.id, d, nullptr);
                value = (e1 - e0) / d;
                break;
            } catch (const SolveError&) {
                continue;
            }
        }
        out[b.id] = value;
    }
    return out;
}

std::map<int, double> lmce(const Network& network, const DispatchResult& dispatch,
                           bool* used_fallback) {
    SensitivitySystem sys = build_sensitivity_system(network, dispatch);
    if (sys.degenerate()) {
        if (used_fallback) *used_fallback = true;
        return lmce_finite_difference_all(network, kFallbackDelta);
    }
    if (used_fallback) *used_fallback = false;
    Eigen::MatrixXd shift = generation_shift_matrix(sys);
    std::map<int, double> out;
    for (std::size_t i = 0; i < sys.bus_order.size(); ++i) {
        double value = 0.0;
        for (std::size_t g = 0; g < sys.gen_order.size(); ++g) {
            const Generator* gen = network.find_generator(sys.gen_order[g]);
            value += shift(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(i)) *
                     gen->emission_intensity;
        }
        out[sys.bus_order[i]] = value;
    }
    return out;
}

std::string active_set_signature(const ActiveSet& active) {
    std::ostringstream out;
    out << "flows[";
    for (const auto& [line, side] : active.flow_limits) {
        out << line << (side == LimitSide::Max ? "+" : "-") << " ";
    }
    out << "] gens[";
    for (const auto& [gen, side] : active.generator_limits) {
        out << gen << (side == LimitSide::Max ? "^" : "_") << " ";
    }
    out << "] segs[";
    for (const auto& [gen, seg] : active.segments) {
        out << gen << ":" << seg << " ";
    }
    out << "]";
    return out.str();
}

} // namespace gridcarbon
