#pragma once

#include "typomap/corpus.hpp"

#include <array>
#include <filesystem>
#include <vector>

namespace typomap {

using GeoPoint = std::array<double, 2>; // lon, lat

// Closed ring: first vertex equals last after loading.
using Ring = std::vector<GeoPoint>;

struct GeoPolygon {
    Ring outer;
    std::vector<Ring> holes;
};

struct Region {
    std::vector<GeoPolygon> polygons;
};

// Accepts a bare geometry, a Feature, a FeatureCollection, or a
// GeometryCollection, flattening every Polygon/MultiPolygon found. Any other
// geometry type is an error. Unclosed rings are auto-closed with a warning.
Region load_region(const std::filesystem::path& path);
Region parse_region(const std::string& geojson_text, const std::string& origin);

// Planar even-odd rule over all rings: a point inside a hole is outside,
// a point exactly on an edge is inside.
bool contains(const Region& region, double lon, double lat);

std::vector<LanguageMeta> filter_languages(const std::vector<LanguageMeta>& metas,
                                           const Region& region);

} // namespace typomap
