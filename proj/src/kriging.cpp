#include "typomap/kriging.hpp"

#include "typomap/error.hpp"
#include "typomap/io.hpp"
#include "typomap/linalg.hpp"
#include "typomap/log.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace typomap {

double gaussian_variogram(double h, const VariogramParams& p) {
    if (h < 0.0) throw Error("gaussian_variogram: negative lag");
    return p.nugget + p.psill * (1.0 - std::exp(-3.0 * h * h / (p.range * p.range)));
}

double GridSpec::x_at(int i) const {
    if (nx == 1) return (xmin + xmax) / 2.0;
    return xmin + (xmax - xmin) * static_cast<double>(i) / static_cast<double>(nx - 1);
}

double GridSpec::y_at(int j) const {
    if (ny == 1) return (ymin + ymax) / 2.0;
    return ymin + (ymax - ymin) * static_cast<double>(j) / static_cast<double>(ny - 1);
}

KrigingGrid ordinary_krige(std::span<const KrigeSample> samples, const VariogramParams& p,
                           const GridSpec& grid, KrigingDiagnostics* diag) {
    if (p.psill <= 0.0 || p.range <= 0.0 || p.nugget < 0.0)
        throw Error("ordinary_krige: invalid variogram parameters");
    if (grid.nx < 1 || grid.ny < 1) throw Error("ordinary_krige: empty grid");
    for (const KrigeSample& s : samples)
        if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.value))
            throw Error("ordinary_krige: non-finite sample");

    // average duplicate locations; "duplicate" includes coordinates within
    // 1e-9 of the sample extent, which absorbs embedding noise on points
    // that are identical upstream
    double xmin = samples.empty() ? 0.0 : samples[0].x, xmax = xmin;
    double ymin = samples.empty() ? 0.0 : samples[0].y, ymax = ymin;
    for (const KrigeSample& s : samples) {
        xmin = std::min(xmin, s.x);
        xmax = std::max(xmax, s.x);
        ymin = std::min(ymin, s.y);
        ymax = std::max(ymax, s.y);
    }
    const double extent_diag = std::hypot(xmax - xmin, ymax - ymin);
    const double step = 1e-9 * std::max(extent_diag, 1.0);
    struct Acc {
        double x = 0.0, y = 0.0, value = 0.0;
        int n = 0;
    };
    std::map<std::pair<std::int64_t, std::int64_t>, Acc> merged;
    for (const KrigeSample& s : samples) {
        Acc& slot = merged[{static_cast<std::int64_t>(std::llround(s.x / step)),
                            static_cast<std::int64_t>(std::llround(s.y / step))}];
        slot.x += s.x;
        slot.y += s.y;
        slot.value += s.value;
        slot.n += 1;
    }
    std::vector<KrigeSample> pts;
    pts.reserve(merged.size());
    for (const auto& [key, acc] : merged)
        pts.push_back({acc.x / acc.n, acc.y / acc.n, acc.value / acc.n});
    const std::size_t m = pts.size();
    if (m < 2) throw Error("ordinary_krige: need >= 2 distinct sample locations");

    // semivariance with the exact-zero-distance nugget discontinuity
    auto semivar = [&](double dx, double dy) {
        const double h = std::sqrt(dx * dx + dy * dy);
        return h == 0.0 ? 0.0 : gaussian_variogram(h, p);
    };

    linalg::Matrix a(m + 1, m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            a.at(i, j) = semivar(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
        a.at(i, m) = 1.0;
        a.at(m, i) = 1.0;
    }
    a.at(m, m) = 0.0;
    const linalg::LuDecomposition lu{std::move(a)};

    KrigingGrid out;
    out.spec = grid;
    out.z.resize(static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny));
    double max_dev = 0.0;
    std::vector<double> rhs(m + 1);
    for (int j = 0; j < grid.ny; ++j) {
        const double gy = grid.y_at(j);
        for (int i = 0; i < grid.nx; ++i) {
            const double gx = grid.x_at(i);
            for (std::size_t s = 0; s < m; ++s) rhs[s] = semivar(gx - pts[s].x, gy - pts[s].y);
            rhs[m] = 1.0;
            const std::vector<double> w = lu.solve(rhs);
            double pred = 0.0, wsum = 0.0;
            for (std::size_t s = 0; s < m; ++s) {
                pred += w[s] * pts[s].value;
                wsum += w[s];
            }
            max_dev = std::max(max_dev, std::fabs(wsum - 1.0));
            out.z[static_cast<std::size_t>(j) * grid.nx + i] = pred;
        }
    }
    if (diag) diag->max_weight_deviation = max_dev;

    const auto [mn, mx] = std::minmax_element(out.z.begin(), out.z.end());
    out.z_norm.assign(out.z.size(), 0.0);
    // fields that are constant up to solver noise stay flat; normalizing
    // their spread would amplify rounding error into a full-range surface
    const double flat_tol = 1e-8 * std::max({1.0, std::fabs(*mn), std::fabs(*mx)});
    if (*mx - *mn > flat_tol)
        for (std::size_t k = 0; k < out.z.size(); ++k)
            out.z_norm[k] = (out.z[k] - *mn) / (*mx - *mn);
    return out;
}

namespace {

struct Segment {
    std::array<double, 2> a, b;
};

// interpolate the level crossing between two corners
std::array<double, 2> lerp_edge(double x0, double y0, double v0, double x1, double y1, double v1,
                                double level) {
    double t = v1 == v0 ? 0.5 : (level - v0) / (v1 - v0);
    t = std::clamp(t, 0.0, 1.0);
    return {x0 + t * (x1 - x0), y0 + t * (y1 - y0)};
}

std::int64_t quantize(double v) {
    return static_cast<std::int64_t>(std::llround(v * 1e9));
}

// joins segments whose endpoints coincide within 1e-9
std::vector<Polyline> chain_segments(std::vector<Segment> segs) {
    using Key = std::pair<std::int64_t, std::int64_t>;
    std::multimap<Key, std::size_t> by_end;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        by_end.emplace(Key{quantize(segs[s].a[0]), quantize(segs[s].a[1])}, s);
        by_end.emplace(Key{quantize(segs[s].b[0]), quantize(segs[s].b[1])}, s);
    }
    std::vector<bool> used(segs.size(), false);
    std::vector<Polyline> lines;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        if (used[s]) continue;
        used[s] = true;
        Polyline line{segs[s].a, segs[s].b};
        // extend forward then backward
        for (int dir = 0; dir < 2; ++dir) {
            while (true) {
                const std::array<double, 2>& tip = dir == 0 ? line.back() : line.front();
                const Key key{quantize(tip[0]), quantize(tip[1])};
                auto [lo, hi] = by_end.equal_range(key);
                std::size_t found = segs.size();
                for (auto it = lo; it != hi; ++it)
                    if (!used[it->second]) {
                        found = it->second;
                        break;
                    }
                if (found == segs.size()) break;
                used[found] = true;
                const Segment& nxt = segs[found];
                const bool from_a =
                    quantize(nxt.a[0]) == key.first && quantize(nxt.a[1]) == key.second;
                const std::array<double, 2>& add = from_a ? nxt.b : nxt.a;
                if (dir == 0)
                    line.push_back(add);
                else
                    line.insert(line.begin(), add);
            }
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

} // namespace

ContourSet extract_contours(const KrigingGrid& grid, std::span<const double> levels) {
    for (double level : levels)
        if (level < 0.0 || level > 1.0)
            throw Error("extract_contours: level outside [0, 1]");
    std::vector<double> sorted(levels.begin(), levels.end());
    std::sort(sorted.begin(), sorted.end());

    ContourSet out;
    out.levels = sorted;
    out.polylines.resize(sorted.size());
    const GridSpec& spec = grid.spec;
    if (spec.nx < 2 || spec.ny < 2) return out;

    for (std::size_t li = 0; li < sorted.size(); ++li) {
        const double level = sorted[li];
        std::vector<Segment> segs;
        for (int j = 0; j + 1 < spec.ny; ++j) {
            for (int i = 0; i + 1 < spec.nx; ++i) {
                const double v00 = grid.norm_at(i, j);       // bottom-left
                const double v10 = grid.norm_at(i + 1, j);   // bottom-right
                const double v11 = grid.norm_at(i + 1, j + 1); // top-right
                const double v01 = grid.norm_at(i, j + 1);   // top-left
                const double x0 = spec.x_at(i), x1 = spec.x_at(i + 1);
                const double y0 = spec.y_at(j), y1 = spec.y_at(j + 1);
                int mask = 0;
                if (v00 >= level) mask |= 1;
                if (v10 >= level) mask |= 2;
                if (v11 >= level) mask |= 4;
                if (v01 >= level) mask |= 8;
                if (mask == 0 || mask == 15) continue;

                const auto bottom = [&] { return lerp_edge(x0, y0, v00, x1, y0, v10, level); };
                const auto right = [&] { return lerp_edge(x1, y0, v10, x1, y1, v11, level); };
                const auto top = [&] { return lerp_edge(x0, y1, v01, x1, y1, v11, level); };
                const auto left = [&] { return lerp_edge(x0, y0, v00, x0, y1, v01, level); };

                switch (mask) {
                case 1:
                case 14:
                    segs.push_back({left(), bottom()});
                    break;
                case 2:
                case 13:
                    segs.push_back({bottom(), right()});
                    break;
                case 4:
                case 11:
                    segs.push_back({right(), top()});
                    break;
                case 8:
                case 7:
                    segs.push_back({top(), left()});
                    break;
                case 3:
                case 12:
                    segs.push_back({left(), right()});
                    break;
                case 6:
                case 9:
                    segs.push_back({bottom(), top()});
                    break;
                case 5:
                case 10: {
                    // saddle: the cell-center mean picks the separation
                    const double center = (v00 + v10 + v11 + v01) / 4.0;
                    const bool center_in = center >= level;
                    if ((mask == 5) == center_in) {
                        segs.push_back({left(), top()});
                        segs.push_back({bottom(), right()});
                    } else {
                        segs.push_back({left(), bottom()});
                        segs.push_back({right(), top()});
                    }
                    break;
                }
                default:
                    break;
                }
            }
        }
        out.polylines[li] = chain_segments(std::move(segs));
    }
    return out;
}

GridSpec default_grid_for(const SemanticMap& map, int nx, int ny) {
    if (map.coords.empty()) throw Error("default_grid_for: empty map");
    double xmin = map.coords[0][0], xmax = xmin;
    double ymin = map.coords[0][1], ymax = ymin;
    for (const auto& c : map.coords) {
        xmin = std::min(xmin, c[0]);
        xmax = std::max(xmax, c[0]);
        ymin = std::min(ymin, c[1]);
        ymax = std::max(ymax, c[1]);
    }
    double dx = xmax - xmin, dy = ymax - ymin;
    if (dx == 0.0) dx = 1.0;
    if (dy == 0.0) dy = 1.0;
    GridSpec spec;
    spec.nx = nx;
    spec.ny = ny;
    spec.xmin = xmin - 0.05 * dx;
    spec.xmax = xmax + 0.05 * dx;
    spec.ymin = ymin - 0.05 * dy;
    spec.ymax = ymax + 0.05 * dy;
    return spec;
}

std::vector<LabelField> krige_language(const SemanticMap& map, const std::string& code,
                                       const std::optional<VariogramParams>& params,
                                       const std::optional<GridSpec>& grid_spec,
                                       std::span<const double> levels) {
    auto lang_col = std::find(map.languages.begin(), map.languages.end(), code);
    if (lang_col == map.languages.end()) throw Error("krige_language: unknown language " + code);

    std::set<std::string> label_set;
    for (const UsagePoint& up : map.points) label_set.insert(up.labels.at(code));

    const GridSpec grid = grid_spec ? *grid_spec : default_grid_for(map);
    std::vector<LabelField> fields;
    for (const std::string& label : label_set) {
        std::vector<KrigeSample> samples;
        samples.reserve(map.points.size());
        int positives = 0;
        for (std::size_t i = 0; i < map.points.size(); ++i) {
            const bool hit = map.points[i].labels.at(code) == label;
            positives += hit ? 1 : 0;
            samples.push_back({map.coords[i][0], map.coords[i][1], hit ? 1.0 : 0.0});
        }
        if (positives < 2) {
            log::warn(code + ": label '" + label + "' has " + std::to_string(positives) +
                      " positive sample(s); skipped");
            continue;
        }
        VariogramParams vp;
        if (params) {
            vp = *params;
        } else {
            // indicator variance as partial sill, half the grid diagonal as
            // range; calibration stays user-overridable
            const double mean = static_cast<double>(positives) / samples.size();
            double var = mean * (1.0 - mean);
            if (var <= 0.0) var = 1.0;
            vp.nugget = 0.0;
            vp.psill = var;
            const double ddx = grid.xmax - grid.xmin, ddy = grid.ymax - grid.ymin;
            vp.range = 0.5 * std::sqrt(ddx * ddx + ddy * ddy);
        }
        LabelField field;
        field.label = label;
        field.grid = ordinary_krige(samples, vp, grid);
        field.contours = extract_contours(field.grid, levels);
        field.contours.label = label;
        fields.push_back(std::move(field));
    }
    return fields;
}

void write_grid_tsv(const std::filesystem::path& path, const KrigingGrid& grid) {
    std::string out = "# nx\tny\txmin\txmax\tymin\tymax\n";
    out += "# " + std::to_string(grid.spec.nx) + "\t" + std::to_string(grid.spec.ny) + "\t" +
           io::format_double(grid.spec.xmin) + "\t" + io::format_double(grid.spec.xmax) + "\t" +
           io::format_double(grid.spec.ymin) + "\t" + io::format_double(grid.spec.ymax) + "\n";
    for (int j = 0; j < grid.spec.ny; ++j) {
        for (int i = 0; i < grid.spec.nx; ++i) {
            if (i) out += '\t';
            out += io::format_double(grid.norm_at(i, j));
        }
        out += '\n';
    }
    io::write_file(path, out);
}

void write_contours_tsv(const std::filesystem::path& path, const ContourSet& contours) {
    std::string out = "# label\t" + contours.label + "\n";
    std::string levels_line = "# levels";
    for (double level : contours.levels) levels_line += "\t" + io::format_double(level);
    out += levels_line + "\n";
    for (std::size_t li = 0; li < contours.levels.size(); ++li) {
        for (const Polyline& line : contours.polylines[li]) {
            out += io::format_double(contours.levels[li]);
            out += '\t';
            for (std::size_t k = 0; k < line.size(); ++k) {
                if (k) out += ' ';
                out += io::format_double(line[k][0]);
                out += ',';
                out += io::format_double(line[k][1]);
            }
            out += '\n';
        }
    }
    io::write_file(path, out);
}

ContourSet load_contours_tsv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = io::split_lines(io::read_file(path));
    if (lines.size() < 2 || lines[0].rfind("# label\t", 0) != 0 ||
        lines[1].rfind("# levels", 0) != 0)
        throw Error(path.string() + ": not a contour file");
    ContourSet out;
    out.label = lines[0].substr(8);
    const std::vector<std::string> level_cols = io::split(lines[1], '\t');
    for (std::size_t c = 1; c < level_cols.size(); ++c)
        out.levels.push_back(io::parse_double(level_cols[c]));
    out.polylines.resize(out.levels.size());
    for (std::size_t k = 2; k < lines.size(); ++k) {
        if (lines[k].empty()) continue;
        const std::vector<std::string> cols = io::split(lines[k], '\t');
        if (cols.size() != 2)
            throw Error(path.string() + ":" + std::to_string(k + 1) + ": malformed contour line");
        const double level = io::parse_double(cols[0]);
        const auto slot = std::find(out.levels.begin(), out.levels.end(), level);
        if (slot == out.levels.end())
            throw Error(path.string() + ":" + std::to_string(k + 1) + ": unknown level");
        Polyline line;
        for (const std::string& pair : io::split(cols[1], ' ')) {
            const std::size_t comma = pair.find(',');
            if (comma == std::string::npos)
                throw Error(path.string() + ":" + std::to_string(k + 1) + ": malformed point");
            line.push_back({io::parse_double(pair.substr(0, comma)),
                            io::parse_double(pair.substr(comma + 1))});
        }
        out.polylines[static_cast<std::size_t>(slot - out.levels.begin())].push_back(
            std::move(line));
    }
    return out;
}

} // namespace typomap
