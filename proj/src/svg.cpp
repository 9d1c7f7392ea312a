#include "scalegraph/svg.hpp"

#include "scalegraph/errors.hpp"
#include "scalegraph/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace scalegraph {

namespace {

struct Point {
    std::string id;
    double x, y;
};

std::string px(double v) { return format_double(v, 2); }

} // namespace

std::string render_scatter_svg(const PositionMap& pred, const GoldPositions& gold,
                               const ScatterOptions& options) {
    std::vector<Point> points;
    for (const auto& [id, y] : pred) {
        auto it = gold.scores.find(id);
        if (it != gold.scores.end()) points.push_back({id, it->second, y});
    }
    if (points.size() < 2)
        throw FormatError("plot needs at least 2 matched points, got " +
                          std::to_string(points.size()));

    double xmin = points[0].x, xmax = points[0].x, ymin = points[0].y, ymax = points[0].y;
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (const auto& p : points) {
        sxy += (p.x - mx) * (p.y - my);
        sxx += (p.x - mx) * (p.x - mx);
        syy += (p.y - my) * (p.y - my);
    }

    const double xpad = (xmax > xmin ? 0.08 * (xmax - xmin) : 1.0);
    const double ypad = (ymax > ymin ? 0.08 * (ymax - ymin) : 1.0);
    xmin -= xpad;
    xmax += xpad;
    ymin -= ypad;
    ymax += ypad;

    const double left = 56, right = 16, top = 16, bottom = 44;
    const double w = options.width - left - right;
    const double h = options.height - top - bottom;
    const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * w; };
    const auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
        << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width << " "
        << options.height << "\">\n";
    svg << "<rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\"" << px(w)
        << "\" height=\"" << px(h) << "\" fill=\"white\" stroke=\"#444\"/>\n";

    // axis extent labels
    svg << "<text x=\"" << px(left) << "\" y=\"" << px(top + h + 16)
        << "\" font-size=\"11\" fill=\"#444\">" << format_double(xmin + xpad, 2) << "</text>\n";
    svg << "<text x=\"" << px(left + w) << "\" y=\"" << px(top + h + 16)
        << "\" font-size=\"11\" fill=\"#444\" text-anchor=\"end\">" << format_double(xmax - xpad, 2)
        << "</text>\n";
    svg << "<text x=\"" << px(left + w / 2) << "\" y=\"" << px(top + h + 34)
        << "\" font-size=\"12\" fill=\"#222\" text-anchor=\"middle\">" << options.x_label
        << "</text>\n";
    svg << "<text x=\"14\" y=\"" << px(top + h / 2)
        << "\" font-size=\"12\" fill=\"#222\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << px(top + h / 2) << ")\">" << options.y_label << "</text>\n";

    // least-squares fit across the data extent
    if (sxx > 0.0) {
        const double slope = sxy / sxx;
        const double x0 = xmin + xpad, x1 = xmax - xpad;
        const double y0 = my + slope * (x0 - mx), y1 = my + slope * (x1 - mx);
        svg << "<line x1=\"" << px(sx(x0)) << "\" y1=\"" << px(sy(y0)) << "\" x2=\"" << px(sx(x1))
            << "\" y2=\"" << px(sy(y1)) << "\" stroke=\"#c44\" stroke-width=\"1.5\"/>\n";
    }

    for (const auto& p : points) {
        svg << "<circle cx=\"" << px(sx(p.x)) << "\" cy=\"" << px(sy(p.y))
            << "\" r=\"3.5\" fill=\"#27c\"/>\n";
        svg << "<text x=\"" << px(sx(p.x) + 5) << "\" y=\"" << px(sy(p.y) - 5)
            << "\" font-size=\"10\" fill=\"#333\">" << p.id << "</text>\n";
    }

    std::string r_text = "r = n/a";
    if (sxx > 0.0 && syy > 0.0)
        r_text = "r = " + format_double(sxy / std::sqrt(sxx * syy), 2);
    svg << "<text x=\"" << px(left + 8) << "\" y=\"" << px(top + 18)
        << "\" font-size=\"13\" fill=\"#000\">" << r_text << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

} // namespace scalegraph
