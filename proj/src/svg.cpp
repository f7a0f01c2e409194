#include "typomap/svg.hpp"

#include "typomap/error.hpp"
#include "typomap/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string_view>

namespace typomap {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                          "#e377c2", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a"};
constexpr int kPaletteSize = 12;
const char* kNoMatchColor = "#999999";

std::string fmt(double v) {
    // fixed two decimals; enough for screen coordinates and byte-stable
    const double r = std::round(v * 100.0) / 100.0;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", r);
    // avoid the "-0.00" artifact
    if (std::string_view(buf) == "-0.00") return "0.00";
    return buf;
}

std::string escape(const std::string& s) {
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

} // namespace

std::string render_svg(const SemanticMap& map, const std::string& code,
                       const std::vector<ContourSet>& contours) {
    if (map.points.empty()) throw Error("render_svg: empty map");
    if (std::find(map.languages.begin(), map.languages.end(), code) == map.languages.end())
        throw Error("render_svg: unknown language " + code);

    // labels sorted, NOMATCH forced last
    std::set<std::string> label_set;
    for (const UsagePoint& up : map.points) label_set.insert(up.labels.at(code));
    std::vector<std::string> labels(label_set.begin(), label_set.end());
    auto nomatch = std::find(labels.begin(), labels.end(), kNoMatch);
    if (nomatch != labels.end()) {
        labels.erase(nomatch);
        labels.push_back(kNoMatch);
    }
    std::map<std::string, std::string> color;
    int idx = 0;
    for (const std::string& label : labels) {
        color[label] = label == kNoMatch ? kNoMatchColor : kPalette[idx % kPaletteSize];
        ++idx;
    }

    double xmin = map.coords[0][0], xmax = xmin, ymin = map.coords[0][1], ymax = ymin;
    for (const auto& c : map.coords) {
        xmin = std::min(xmin, c[0]);
        xmax = std::max(xmax, c[0]);
        ymin = std::min(ymin, c[1]);
        ymax = std::max(ymax, c[1]);
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const double plot_w = 640.0, plot_h = 480.0, margin = 40.0;
    const double legend_w = 180.0;
    const double width = margin * 2 + plot_w + legend_w;
    const double height = margin * 2 + plot_h;
    auto sx = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double y) { return margin + (ymax - y) / (ymax - ymin) * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
           fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(margin) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" +
           escape(code) + "</text>\n";

    // contour polylines, level opacity rising toward 1
    for (const ContourSet& cs : contours) {
        auto col = color.find(cs.label);
        const std::string stroke = col == color.end() ? kNoMatchColor : col->second;
        for (std::size_t li = 0; li < cs.levels.size(); ++li) {
            const double opacity = 0.25 + 0.75 * (li + 1.0) / cs.levels.size();
            for (const Polyline& line : cs.polylines[li]) {
                if (line.size() < 2) continue;
                svg += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-opacity=\"" +
                       fmt(opacity) + "\" stroke-width=\"1.5\" points=\"";
                for (std::size_t k = 0; k < line.size(); ++k) {
                    if (k) svg += ' ';
                    svg += fmt(sx(line[k][0])) + "," + fmt(sy(line[k][1]));
                }
                svg += "\"/>\n";
            }
        }
    }

    for (std::size_t i = 0; i < map.points.size(); ++i) {
        const std::string& label = map.points[i].labels.at(code);
        svg += "<circle cx=\"" + fmt(sx(map.coords[i][0])) + "\" cy=\"" +
               fmt(sy(map.coords[i][1])) + "\" r=\"3\" fill=\"" + color.at(label) +
               "\" fill-opacity=\"0.8\"/>\n";
    }

    // legend
    double ly = margin + 10.0;
    const double lx = margin + plot_w + 24.0;
    for (const std::string& label : labels) {
        svg += "<circle cx=\"" + fmt(lx) + "\" cy=\"" + fmt(ly - 4.0) + "\" r=\"5\" fill=\"" +
               color.at(label) + "\"/>\n";
        svg += "<text x=\"" + fmt(lx + 12.0) + "\" y=\"" + fmt(ly) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(label) + "</text>\n";
        ly += 20.0;
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace typomap
