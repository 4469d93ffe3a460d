#include "gridcarbon/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gridcarbon/format.hpp"

namespace gridcarbon {

namespace {

struct Rgb {
    int r, g, b;
};

constexpr Rgb kRampStops[5] = {
    {0x44, 0x01, 0x54}, // dark purple
    {0x3b, 0x52, 0x8b},
    {0x21, 0x91, 0x8c},
    {0x5e, 0xc9, 0x62},
    {0xfd, 0xe7, 0x25}, // yellow
};

std::string hex_color(const Rgb& c) {
    static const char* digits = "0123456789abcdef";
    std::string out = "#";
    for (int v : {c.r, c.g, c.b}) {
        out.push_back(digits[(v >> 4) & 0xf]);
        out.push_back(digits[v & 0xf]);
    }
    return out;
}

std::string fmt(double v) { return format_fixed(v, 2); }

struct Extent {
    double lo = 0.0;
    double hi = 1.0;
    bool any = false;
};

Extent finite_extent(const std::map<int, double>& values) {
    Extent e;
    for (const auto& [key, v] : values) {
        if (std::isnan(v)) continue;
        if (!e.any) {
            e.lo = e.hi = v;
            e.any = true;
        } else {
            e.lo = std::min(e.lo, v);
            e.hi = std::max(e.hi, v);
        }
    }
    return e;
}

// Draw one network panel into `out` at the given viewport. The viewport
// includes space for the title line and the legend strip underneath.
void draw_network_panel(std::ostringstream& out, const Network& network,
                        const std::map<int, std::pair<double, double>>& layout,
                        const std::map<int, double>& intensity, const std::string& title,
                        double ox, double oy, double width, double height) {
    const double title_h = 24.0;
    const double legend_h = 56.0;
    const double pad = 26.0;
    const double plot_w = width - 2 * pad;
    const double plot_h = height - title_h - legend_h - 2 * pad;

    auto px = [&](double x) { return ox + pad + x * plot_w; };
    auto py = [&](double y) { return oy + title_h + pad + (1.0 - y) * plot_h; };

    out << "<text x=\"" << fmt(ox + width / 2) << "\" y=\"" << fmt(oy + 16)
        << "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\">" << title
        << "</text>\n";

    for (const Line& ln : network.lines) {
        const auto& a = layout.at(ln.from_bus);
        const auto& b = layout.at(ln.to_bus);
        out << "<line x1=\"" << fmt(px(a.first)) << "\" y1=\"" << fmt(py(a.second)) << "\" x2=\""
            << fmt(px(b.first)) << "\" y2=\"" << fmt(py(b.second))
            << "\" stroke=\"#b0b4ba\" stroke-width=\"2\"/>\n";
    }

    Extent e = finite_extent(intensity);
    double span = e.hi - e.lo;
    for (const Bus& bus : network.buses) {
        const auto& p = layout.at(bus.id);
        auto it = intensity.find(bus.id);
        bool defined = it != intensity.end() && !std::isnan(it->second);
        std::string fill = "none";
        if (defined) {
            double t = span > 0 ? (it->second - e.lo) / span : 0.5;
            fill = ramp_color(t);
        }
        out << "<circle cx=\"" << fmt(px(p.first)) << "\" cy=\"" << fmt(py(p.second))
            << "\" r=\"11\" fill=\"" << fill << "\" stroke=\"#202124\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt(px(p.first)) << "\" y=\"" << fmt(py(p.second) - 14)
            << "\" text-anchor=\"middle\" font-size=\"10\" font-family=\"sans-serif\">" << bus.id
            << "</text>\n";
    }

    // Legend: a 64-slice gradient strip spanning the finite value range.
    const double strip_y = oy + height - legend_h + 8;
    const double strip_h = 14.0;
    const int slices = 64;
    for (int s = 0; s < slices; ++s) {
        double t = (s + 0.5) / slices;
        double x0 = ox + pad + plot_w * s / slices;
        double x1 = ox + pad + plot_w * (s + 1) / slices;
        out << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(strip_y) << "\" width=\""
            << fmt(x1 - x0 + 0.5) << "\" height=\"" << fmt(strip_h) << "\" fill=\""
            << ramp_color(t) << "\"/>\n";
    }
    out << "<text x=\"" << fmt(ox + pad) << "\" y=\"" << fmt(strip_y + strip_h + 16)
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << format_fixed(e.any ? e.lo : 0.0, 4)
        << "</text>\n";
    out << "<text x=\"" << fmt(ox + pad + plot_w) << "\" y=\"" << fmt(strip_y + strip_h + 16)
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
        << format_fixed(e.any ? e.hi : 0.0, 4) << "</text>\n";
    out << "<text x=\"" << fmt(ox + pad + plot_w / 2) << "\" y=\"" << fmt(strip_y + strip_h + 16)
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">tCO2/MWh"
        << "</text>\n";
}

std::string svg_open(double width, double height) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
        << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
        << "\" fill=\"#ffffff\"/>\n";
    return out.str();
}

} // namespace

std::string ramp_color(double t) {
    if (std::isnan(t)) t = 0.0;
    t = std::clamp(t, 0.0, 1.0);
    double scaled = t * 4.0;
    int k = std::min(3, static_cast<int>(scaled));
    double frac = scaled - k;
    const Rgb& a = kRampStops[k];
    const Rgb& b = kRampStops[k + 1];
    Rgb mix{
        static_cast<int>(std::lround(a.r + (b.r - a.r) * frac)),
        static_cast<int>(std::lround(a.g + (b.g - a.g) * frac)),
        static_cast<int>(std::lround(a.b + (b.b - a.b) * frac)),
    };
    return hex_color(mix);
}

std::map<int, std::pair<double, double>> layout_buses(const Network& network) {
    std::map<int, std::pair<double, double>> layout;
    bool have_geo = !network.geometry.empty();
    if (have_geo) {
        std::map<int, std::pair<double, double>> raw;
        for (const BusGeo& g : network.geometry) raw[g.bus] = {g.x, g.y};
        for (const Bus& b : network.buses) {
            if (!raw.count(b.id)) {
                have_geo = false; // incomplete table: fall back entirely
                break;
            }
        }
        if (have_geo) {
            double xlo = raw.begin()->second.first, xhi = xlo;
            double ylo = raw.begin()->second.second, yhi = ylo;
            for (const auto& [bus, p] : raw) {
                xlo = std::min(xlo, p.first);
                xhi = std::max(xhi, p.first);
                ylo = std::min(ylo, p.second);
                yhi = std::max(yhi, p.second);
            }
            double xspan = xhi - xlo;
            double yspan = yhi - ylo;
            for (const auto& [bus, p] : raw) {
                layout[bus] = {xspan > 0 ? (p.first - xlo) / xspan : 0.5,
                               yspan > 0 ? (p.second - ylo) / yspan : 0.5};
            }
            return layout;
        }
    }
    std::vector<int> ids;
    for (const Bus& b : network.buses) ids.push_back(b.id);
    std::sort(ids.begin(), ids.end());
    const double pi = 3.14159265358979323846;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        double angle = 2.0 * pi * static_cast<double>(k) / static_cast<double>(ids.size()) -
                       pi / 2.0;
        layout[ids[k]] = {0.5 + 0.45 * std::cos(angle), 0.5 - 0.45 * std::sin(angle)};
    }
    return layout;
}

std::string render_network_svg(const Network& network, const std::map<int, double>& intensity,
                               const std::string& title) {
    const double width = 640;
    const double height = 560;
    std::ostringstream out;
    out << svg_open(width, height);
    draw_network_panel(out, network, layout_buses(network), intensity, title, 0, 0, width,
                       height);
    out << "</svg>\n";
    return out.str();
}

std::string render_network_panels_svg(
    const Network& network,
    const std::vector<std::pair<std::string, std::map<int, double>>>& panels,
    const std::string& title) {
    const double panel_w = 480;
    const double panel_h = 430;
    const int columns = 2;
    const int rows = static_cast<int>((panels.size() + 1) / 2);
    const double width = panel_w * columns;
    const double height = 36 + panel_h * rows;
    std::ostringstream out;
    out << svg_open(width, height);
    out << "<text x=\"" << fmt(width / 2)
        << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\" font-family=\"sans-serif\">"
        << title << "</text>\n";
    auto layout = layout_buses(network);
    for (std::size_t i = 0; i < panels.size(); ++i) {
        double ox = panel_w * static_cast<double>(i % columns);
        double oy = 36 + panel_h * static_cast<double>(i / columns);
        draw_network_panel(out, network, layout, panels[i].second, panels[i].first, ox, oy,
                           panel_w, panel_h);
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_histogram_svg(const DeltaDistribution& dist, const std::string& title,
                                 const std::string& x_label) {
    const double width = 640;
    const double height = 420;
    const double pad_left = 56;
    const double pad_right = 24;
    const double pad_top = 48;
    const double pad_bottom = 64;
    const double plot_w = width - pad_left - pad_right;
    const double plot_h = height - pad_top - pad_bottom;

    std::int64_t max_count = 1;
    for (std::int64_t c : dist.counts) max_count = std::max(max_count, c);
    double xlo = dist.bin_edges.front();
    double xhi = dist.bin_edges.back();
    double span = xhi - xlo;

    auto px = [&](double v) { return pad_left + (v - xlo) / span * plot_w; };
    auto py = [&](double c) {
        return pad_top + plot_h - c / static_cast<double>(max_count) * plot_h;
    };

    std::ostringstream out;
    out << svg_open(width, height);
    out << "<text x=\"" << fmt(width / 2)
        << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" font-family=\"sans-serif\">"
        << title << "</text>\n";

    for (std::size_t k = 0; k < dist.counts.size(); ++k) {
        double x0 = px(dist.bin_edges[k]);
        double x1 = px(dist.bin_edges[k + 1]);
        double y = py(static_cast<double>(dist.counts[k]));
        double h = pad_top + plot_h - y;
        if (dist.counts[k] == 0) continue;
        out << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y) << "\" width=\""
            << fmt(std::max(0.5, x1 - x0 - 1.0)) << "\" height=\"" << fmt(h)
            << "\" fill=\"#3b528b\"/>\n";
    }

    // Axes.
    out << "<line x1=\"" << fmt(pad_left) << "\" y1=\"" << fmt(pad_top + plot_h) << "\" x2=\""
        << fmt(pad_left + plot_w) << "\" y2=\"" << fmt(pad_top + plot_h)
        << "\" stroke=\"#202124\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << fmt(pad_left) << "\" y1=\"" << fmt(pad_top) << "\" x2=\""
        << fmt(pad_left) << "\" y2=\"" << fmt(pad_top + plot_h)
        << "\" stroke=\"#202124\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(pad_left) << "\" y=\"" << fmt(height - 28)
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << format_fixed(xlo, 3)
        << "</text>\n";
    out << "<text x=\"" << fmt(pad_left + plot_w) << "\" y=\"" << fmt(height - 28)
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
        << format_fixed(xhi, 3) << "</text>\n";
    out << "<text x=\"" << fmt(width / 2) << "\" y=\"" << fmt(height - 10)
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << x_label
        << "</text>\n";
    out << "<text x=\"" << fmt(pad_left - 8) << "\" y=\"" << fmt(pad_top + 4)
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << max_count
        << "</text>\n";

    struct Marker {
        double value;
        const char* color;
        const char* dash;
        const char* label;
    };
    const Marker markers[] = {
        {dist.mean, "#d62728", "", "mean"},
        {dist.median, "#2ca02c", "", "median"},
        {dist.p10, "#7f7f7f", "4 3", "p10"},
        {dist.p90, "#7f7f7f", "4 3", "p90"},
    };
    double label_y = pad_top + 12;
    for (const Marker& m : markers) {
        double x = px(std::clamp(m.value, xlo, xhi));
        out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(pad_top) << "\" x2=\"" << fmt(x)
            << "\" y2=\"" << fmt(pad_top + plot_h) << "\" stroke=\"" << m.color
            << "\" stroke-width=\"1.5\"";
        if (m.dash[0] != '\0') out << " stroke-dasharray=\"" << m.dash << "\"";
        out << "/>\n";
        out << "<text x=\"" << fmt(x + 3) << "\" y=\"" << fmt(label_y) << "\" font-size=\"10\""
            << " font-family=\"sans-serif\" fill=\"" << m.color << "\">" << m.label << " "
            << format_fixed(m.value, 3) << "</text>\n";
        label_y += 12;
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace gridcarbon
