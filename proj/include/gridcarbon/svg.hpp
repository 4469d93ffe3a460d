#pragma once

#include <map>
#include <string>
#include <vector>

#include "gridcarbon/grid.hpp"
#include "gridcarbon/workflow.hpp"

namespace gridcarbon {

// Fixed 5-stop color ramp (dark purple -> yellow). t is clamped to [0, 1];
// stops are interpolated per RGB channel. Returns "#rrggbb".
std::string ramp_color(double t);

// Deterministic bus placement: mpc.bus_geo coordinates when present, else a
// unit circle ordered by bus id. Coordinates normalized to [0, 1].
std::map<int, std::pair<double, double>> layout_buses(const Network& network);

// Network diagram: grey line segments, buses as circles filled by intensity,
// a labeled color-scale legend spanning [min, max] of the finite values.
// NaN intensities render as unfilled circles.
std::string render_network_svg(const Network& network,
                               const std::map<int, double>& intensity,
                               const std::string& title);

// 2x2 grid of network diagrams, one panel per metric (insertion order).
std::string render_network_panels_svg(const Network& network,
                                      const std::vector<std::pair<std::string, std::map<int, double>>>& panels,
                                      const std::string& title);

// Histogram bars plus mean/median/p10/p90 marker lines.
std::string render_histogram_svg(const DeltaDistribution& dist, const std::string& title,
                                 const std::string& x_label);

} // namespace gridcarbon
