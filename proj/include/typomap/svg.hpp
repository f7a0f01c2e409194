#pragma once

#include "typomap/kriging.hpp"
#include "typomap/semmap.hpp"

#include <string>
#include <vector>

namespace typomap {

// Deterministic SVG for one language: one circle per usage point colored by
// label, contour polylines per label, and a legend. Identical inputs yield
// byte-identical output. Throws on an empty map.
std::string render_svg(const SemanticMap& map, const std::string& code,
                       const std::vector<ContourSet>& contours);

} // namespace typomap
