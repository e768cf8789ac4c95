#include "ctraj/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ctraj {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Mapper {
    double minx, miny, spanx, spany;
    double width, height;

    double X(double x) const { return (x - minx) / spanx * width; }
    double Y(double y) const { return height - (y - miny) / spany * height; }
};

// Sample point of the plot: (t, value) in 1D, (x, y) otherwise.
std::pair<double, double> plot_point(const TrajectorySet& set, EntityId e, double t) {
    const auto p = set.position(e, t);
    if (set.dim() == 1) return {t, p[0]};
    return {p[0], p.size() > 1 ? p[1] : 0.0};
}

} // namespace

std::string render_svg(const TrajectorySet& set, const CentralTrajectory& ct) {
    const auto& times = set.grid().times();

    double minx = 1e300, maxx = -1e300, miny = 1e300, maxy = -1e300;
    for (EntityId e = 0; e < set.size(); ++e) {
        for (double t : times) {
            const auto [x, y] = plot_point(set, e, t);
            minx = std::min(minx, x);
            maxx = std::max(maxx, x);
            miny = std::min(miny, y);
            maxy = std::max(maxy, y);
        }
    }
    const double padx = std::max(1e-9, (maxx - minx) * 0.05);
    const double pady = std::max(1e-9, (maxy - miny) * 0.05);
    Mapper map{minx - padx, miny - pady, (maxx - minx) + 2 * padx, (maxy - miny) + 2 * pady, 800.0, 500.0};

    std::ostringstream svg;
    svg.precision(8);
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << map.width << " " << map.height
        << "\" width=\"" << map.width << "\" height=\"" << map.height << "\">\n";
    svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (EntityId e = 0; e < set.size(); ++e) {
        svg << "  <polyline fill=\"none\" stroke=\"#9aa0a6\" stroke-width=\"1\" points=\"";
        for (std::size_t k = 0; k < times.size(); ++k) {
            const auto [x, y] = plot_point(set, e, times[k]);
            svg << (k ? " " : "") << map.X(x) << "," << map.Y(y);
        }
        svg << "\"><title>" << xml_escape(set.trajectory(e).name) << "</title></polyline>\n";
    }

    for (const auto& piece : ct.pieces) {
        std::vector<double> ts{piece.span.lo};
        for (double t : times)
            if (t > piece.span.lo && t < piece.span.hi) ts.push_back(t);
        ts.push_back(piece.span.hi);
        svg << "  <polyline fill=\"none\" stroke=\"#c5221f\" stroke-width=\"2.5\" points=\"";
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const auto [x, y] = plot_point(set, piece.entity, ts[i]);
            svg << (i ? " " : "") << map.X(x) << "," << map.Y(y);
        }
        svg << "\"><title>central: " << xml_escape(set.trajectory(piece.entity).name) << "</title></polyline>\n";
    }

    for (const auto& j : ct.jumps) {
        const auto [x1, y1] = plot_point(set, j.from, j.t);
        const auto [x2, y2] = plot_point(set, j.to, j.t);
        svg << "  <line stroke=\"#c5221f\" stroke-width=\"1.5\" stroke-dasharray=\"5,4\" x1=\"" << map.X(x1)
            << "\" y1=\"" << map.Y(y1) << "\" x2=\"" << map.X(x2) << "\" y2=\"" << map.Y(y2) << "\"/>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

} // namespace ctraj
