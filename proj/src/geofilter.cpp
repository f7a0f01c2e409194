#include "typomap/geofilter.hpp"

#include "typomap/error.hpp"
#include "typomap/io.hpp"
#include "typomap/log.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace typomap {

namespace {

using nlohmann::json;

Ring parse_ring(const json& coords, const std::string& origin) {
    Ring ring;
    for (const auto& v : coords) {
        if (!v.is_array() || v.size() < 2)
            throw Error(origin + ": ring vertex is not a [lon, lat] pair");
        ring.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    std::set<std::pair<double, double>> distinct;
    for (const GeoPoint& p : ring) distinct.insert({p[0], p[1]});
    if (distinct.size() < 3) throw Error(origin + ": ring has fewer than 3 distinct vertices");
    if (ring.front() != ring.back()) {
        log::warn(origin + ": unclosed ring auto-closed");
        ring.push_back(ring.front());
    }
    return ring;
}

GeoPolygon parse_polygon(const json& coords, const std::string& origin) {
    if (!coords.is_array() || coords.empty())
        throw Error(origin + ": Polygon has no rings");
    GeoPolygon poly;
    poly.outer = parse_ring(coords[0], origin);
    for (std::size_t i = 1; i < coords.size(); ++i)
        poly.holes.push_back(parse_ring(coords[i], origin));
    return poly;
}

void collect_geometry(const json& node, Region& region, const std::string& origin) {
    if (!node.is_object() || !node.contains("type"))
        throw Error(origin + ": GeoJSON node without a type");
    const std::string type = node["type"].get<std::string>();
    if (type == "FeatureCollection") {
        for (const auto& f : node.at("features")) collect_geometry(f, region, origin);
    } else if (type == "Feature") {
        const auto& geom = node.at("geometry");
        if (geom.is_null()) return;
        collect_geometry(geom, region, origin);
    } else if (type == "GeometryCollection") {
        for (const auto& g : node.at("geometries")) collect_geometry(g, region, origin);
    } else if (type == "Polygon") {
        region.polygons.push_back(parse_polygon(node.at("coordinates"), origin));
    } else if (type == "MultiPolygon") {
        for (const auto& p : node.at("coordinates"))
            region.polygons.push_back(parse_polygon(p, origin));
    } else {
        throw Error(origin + ": unsupported geometry type '" + type + "'");
    }
}

bool on_segment(const GeoPoint& a, const GeoPoint& b, double x, double y) {
    const double cross = (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]);
    if (cross != 0.0) return false;
    return x >= std::min(a[0], b[0]) && x <= std::max(a[0], b[0]) && y >= std::min(a[1], b[1]) &&
           y <= std::max(a[1], b[1]);
}

// Even-odd crossing parity for one ring; the half-open vertex rule keeps
// vertices from double-counting.
bool ring_crossings_odd(const Ring& ring, double x, double y) {
    bool odd = false;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        const GeoPoint& a = ring[i];
        const GeoPoint& b = ring[i + 1];
        if ((a[1] > y) != (b[1] > y)) {
            const double xint = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if (x < xint) odd = !odd;
        }
    }
    return odd;
}

bool ring_has_point_on_edge(const Ring& ring, double x, double y) {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i)
        if (on_segment(ring[i], ring[i + 1], x, y)) return true;
    return false;
}

} // namespace

Region parse_region(const std::string& geojson_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(geojson_text);
    } catch (const json::exception& e) {
        throw Error(origin + ": invalid JSON: " + e.what());
    }
    Region region;
    collect_geometry(doc, region, origin);
    if (region.polygons.empty()) throw Error(origin + ": no Polygon/MultiPolygon geometry found");
    return region;
}

Region load_region(const std::filesystem::path& path) {
    return parse_region(io::read_file(path), path.string());
}

bool contains(const Region& region, double lon, double lat) {
    for (const GeoPolygon& poly : region.polygons) {
        if (ring_has_point_on_edge(poly.outer, lon, lat)) return true;
        bool inside = ring_crossings_odd(poly.outer, lon, lat);
        if (!inside) continue;
        bool in_hole = false;
        for (const Ring& hole : poly.holes) {
            if (ring_has_point_on_edge(hole, lon, lat)) return true; // hole boundary is inside
            if (ring_crossings_odd(hole, lon, lat)) {
                in_hole = true;
                break;
            }
        }
        if (!in_hole) return true;
    }
    return false;
}

std::vector<LanguageMeta> filter_languages(const std::vector<LanguageMeta>& metas,
                                           const Region& region) {
    std::vector<LanguageMeta> kept;
    for (const LanguageMeta& m : metas)
        if (contains(region, m.lon, m.lat)) kept.push_back(m);
    return kept;
}

} // namespace typomap
