#include "gridcarbon/shifting.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gridcarbon/errors.hpp"

namespace gridcarbon {

namespace {

struct Cell {
    double intensity = 0.0;
    int t = 0;   // step index, 0-based
    int d = 0;   // datacenter index in input order
    int bus = 0; // bus id, for tie-breaking
};

} // namespace

// Exchange greedy from the nominal profile: repeatedly move demand from the
// highest-intensity cell that can still give to the lowest-intensity cell
// that can still take, while the intensities strictly differ. For a
// transportation-style LP with one equality and box bounds this is optimal,
// and starting from nominal leaves equal-intensity cells untouched, which
// pins down the tie-break (lowest intensity first, then (t, bus id)).
ShiftPlan solve_shift(const std::vector<int>& dc_buses,
                      const std::vector<std::vector<double>>& intensity,
                      const ShiftConfig& config) {
    const int num_dc = static_cast<int>(dc_buses.size());
    if (num_dc == 0) {
        throw ValidationError("load shifting needs at least one datacenter bus");
    }
    std::set<int> unique_buses(dc_buses.begin(), dc_buses.end());
    if (static_cast<int>(unique_buses.size()) != num_dc) {
        throw ValidationError("datacenter bus list contains duplicates");
    }
    if (static_cast<int>(intensity.size()) != num_dc) {
        throw ValidationError("intensity rows (" + std::to_string(intensity.size()) +
                              ") do not match datacenter count (" + std::to_string(num_dc) + ")");
    }
    if (config.horizon < 1) {
        throw ValidationError("shifting horizon must be at least 1 step");
    }
    for (const auto& row : intensity) {
        if (static_cast<int>(row.size()) != config.horizon) {
            throw ValidationError("intensity row length " + std::to_string(row.size()) +
                                  " does not match horizon " + std::to_string(config.horizon));
        }
    }
    if (!(config.epsilon >= 0.0 && config.epsilon < 1.0)) {
        throw ValidationError("shifting epsilon must lie in [0, 1)");
    }
    if (config.nominal_mw < 0) {
        throw ValidationError("nominal datacenter demand must be nonnegative");
    }

    ShiftPlan plan;
    plan.dc_buses = dc_buses;
    plan.demand_mw.assign(static_cast<std::size_t>(num_dc),
                          std::vector<double>(static_cast<std::size_t>(config.horizon),
                                              config.nominal_mw));

    const double lower = (1.0 - config.epsilon) * config.nominal_mw;
    const double upper = (1.0 + config.epsilon) * config.nominal_mw;

    std::vector<Cell> cells;
    for (int d = 0; d < num_dc; ++d) {
        for (int t = 0; t < config.horizon; ++t) {
            double e = intensity[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)];
            if (std::isnan(e)) continue; // no signal: stays at nominal
            cells.push_back({e, t, d, dc_buses[static_cast<std::size_t>(d)]});
        }
    }

    std::vector<const Cell*> receivers;
    std::vector<const Cell*> donors;
    for (const Cell& c : cells) {
        receivers.push_back(&c);
        donors.push_back(&c);
    }
    std::sort(receivers.begin(), receivers.end(), [](const Cell* a, const Cell* b) {
        if (a->intensity != b->intensity) return a->intensity < b->intensity;
        if (a->t != b->t) return a->t < b->t;
        return a->bus < b->bus;
    });
    std::sort(donors.begin(), donors.end(), [](const Cell* a, const Cell* b) {
        if (a->intensity != b->intensity) return a->intensity > b->intensity;
        if (a->t != b->t) return a->t < b->t;
        return a->bus < b->bus;
    });

    auto demand = [&](const Cell* c) -> double& {
        return plan.demand_mw[static_cast<std::size_t>(c->d)][static_cast<std::size_t>(c->t)];
    };

    std::size_t r = 0;
    std::size_t o = 0;
    while (r < receivers.size() && o < donors.size() &&
           receivers[r]->intensity < donors[o]->intensity) {
        double room = upper - demand(receivers[r]);
        double stock = demand(donors[o]) - lower;
        double transfer = std::min(room, stock);
        if (transfer > 0) {
            demand(receivers[r]) += transfer;
            demand(donors[o]) -= transfer;
            room -= transfer;
            stock -= transfer;
        }
        if (room <= 0) ++r;
        if (stock <= 0) ++o;
    }

    plan.estimated_emissions = estimated_accounting(intensity, plan);
    return plan;
}

double estimated_accounting(const std::vector<std::vector<double>>& intensity,
                            const ShiftPlan& plan) {
    if (intensity.size() != plan.demand_mw.size()) {
        throw ValidationError("intensity rows do not match the plan's datacenter count");
    }
    double total = 0.0;
    for (std::size_t d = 0; d < plan.demand_mw.size(); ++d) {
        if (intensity[d].size() != plan.demand_mw[d].size()) {
            throw ValidationError("intensity row length does not match the plan horizon");
        }
        for (std::size_t t = 0; t < plan.demand_mw[d].size(); ++t) {
            double e = intensity[d][t];
            if (std::isnan(e)) continue;
            total += e * plan.demand_mw[d][t];
        }
    }
    return total;
}

} // namespace gridcarbon
