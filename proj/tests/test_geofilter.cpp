#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "typomap/error.hpp"
#include "typomap/geofilter.hpp"
#include "typomap/log.hpp"

#include <cmath>

using namespace typomap;

namespace {
struct Quiet {
    Quiet() { log::set_level(log::Level::Quiet); }
} quiet_logs;

const char* kUnitSquare = R"({
  "type": "Polygon",
  "coordinates": [[[0,0],[1,0],[1,1],[0,1],[0,0]]]
})";

const char* kTwoSquares = R"({
  "type": "MultiPolygon",
  "coordinates": [
    [[[0,0],[1,0],[1,1],[0,1],[0,0]]],
    [[[2,2],[3,2],[3,3],[2,3],[2,2]]]
  ]
})";

const char* kSquareWithHole = R"({
  "type": "Polygon",
  "coordinates": [
    [[0,0],[4,0],[4,4],[0,4],[0,0]],
    [[1,1],[3,1],[3,3],[1,3],[1,1]]
  ]
})";
} // namespace

TEST_CASE("load_region parses a unit square") {
    const Region r = parse_region(kUnitSquare, "test");
    REQUIRE(r.polygons.size() == 1);
    CHECK(r.polygons[0].holes.empty());
    CHECK(r.polygons[0].outer.size() == 5);
}

TEST_CASE("load_region flattens MultiPolygon") {
    const Region r = parse_region(kTwoSquares, "test");
    CHECK(r.polygons.size() == 2);
}

TEST_CASE("load_region rejects unsupported geometry") {
    CHECK_THROWS_AS(parse_region(R"({"type":"Point","coordinates":[0,0]})", "test"), Error);
    CHECK_THROWS_AS(
        parse_region(R"({"type":"LineString","coordinates":[[0,0],[1,1]]})", "test"), Error);
}

TEST_CASE("load_region auto-closes an open ring") {
    const Region r =
        parse_region(R"({"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1]]]})", "test");
    REQUIRE(r.polygons.size() == 1);
    CHECK(r.polygons[0].outer.size() == 5);
    CHECK(r.polygons[0].outer.front() == r.polygons[0].outer.back());
}

TEST_CASE("load_region accepts Feature and FeatureCollection") {
    const std::string feature = std::string(R"({"type":"Feature","properties":{},"geometry":)") +
                                kUnitSquare + "}";
    CHECK(parse_region(feature, "test").polygons.size() == 1);
    const std::string collection =
        std::string(R"({"type":"FeatureCollection","features":[)") + feature + "]}";
    CHECK(parse_region(collection, "test").polygons.size() == 1);
}

TEST_CASE("contains basics") {
    const Region r = parse_region(kUnitSquare, "test");
    CHECK(contains(r, 0.5, 0.5));
    CHECK_FALSE(contains(r, 1.5, 0.5));
    CHECK_FALSE(contains(r, -0.5, 0.5));
}

TEST_CASE("point on edge counts as inside") {
    const Region r = parse_region(kUnitSquare, "test");
    CHECK(contains(r, 0.0, 0.5));
    CHECK(contains(r, 1.0, 0.5));
    CHECK(contains(r, 0.5, 0.0));
    CHECK(contains(r, 0.0, 0.0)); // vertex
}

TEST_CASE("point inside a hole is outside") {
    const Region r = parse_region(kSquareWithHole, "test");
    CHECK(contains(r, 0.5, 0.5));        // between outer and hole
    CHECK_FALSE(contains(r, 2.0, 2.0));  // in the hole
    CHECK(contains(r, 1.0, 2.0));        // on the hole boundary
    CHECK(contains(r, 3.5, 2.0));        // past the hole, inside outer
}

TEST_CASE("contains is invariant under ring rotation") {
    // pentagon with an irrational flavor to avoid accidental symmetry
    Ring base;
    for (int k = 0; k < 5; ++k) {
        const double a = 2.0 * M_PI * k / 5.0 + 0.3;
        base.push_back({2.0 * std::cos(a), 2.0 * std::sin(a)});
    }
    const GeoPoint probes[] = {{0.1, 0.2}, {1.9, 0.0}, {-1.2, 1.4}, {0.0, -2.5}, {0.5, 0.5}};
    for (std::size_t rot = 0; rot < base.size(); ++rot) {
        Ring rotated;
        for (std::size_t k = 0; k < base.size(); ++k)
            rotated.push_back(base[(k + rot) % base.size()]);
        rotated.push_back(rotated.front());
        Region region;
        region.polygons.push_back({rotated, {}});
        Ring closed = base;
        closed.push_back(closed.front());
        Region reference;
        reference.polygons.push_back({closed, {}});
        for (const GeoPoint& p : probes)
            CHECK(contains(region, p[0], p[1]) == contains(reference, p[0], p[1]));
    }
}

TEST_CASE("convex polygon contains its centroid") {
    std::uint64_t state = 42;
    auto rnd = [&]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return static_cast<double>(state % 10007) / 10007.0;
    };
    for (int trial = 0; trial < 50; ++trial) {
        // random convex polygon: sorted angles on a random-radius circle
        const int n = 3 + static_cast<int>(rnd() * 8);
        std::vector<double> angles;
        for (int k = 0; k < n; ++k) angles.push_back(rnd() * 2.0 * M_PI);
        std::sort(angles.begin(), angles.end());
        const double radius = 0.5 + rnd() * 10.0;
        const double cx = (rnd() - 0.5) * 100.0, cy = (rnd() - 0.5) * 50.0;
        Ring ring;
        double gx = 0.0, gy = 0.0;
        for (double a : angles) {
            ring.push_back({cx + radius * std::cos(a), cy + radius * std::sin(a)});
            gx += ring.back()[0];
            gy += ring.back()[1];
        }
        gx /= n;
        gy /= n;
        ring.push_back(ring.front());
        // degenerate (nearly collinear) rings can put the vertex centroid
        // on the boundary; skip those
        bool distinct_angles = true;
        for (std::size_t k = 1; k < angles.size(); ++k)
            if (angles[k] - angles[k - 1] < 1e-3) distinct_angles = false;
        if (!distinct_angles) continue;
        Region region;
        region.polygons.push_back({ring, {}});
        CHECK(contains(region, gx, gy));
    }
}

TEST_CASE("filter_languages preserves order and partitions") {
    const Region r = parse_region(kUnitSquare, "test");
    const std::vector<LanguageMeta> metas = {
        {"a", "A", 0.5, 0.5}, {"b", "B", 2.0, 2.0}, {"c", "C", 0.1, 0.9}, {"d", "D", -1.0, 0.0}};
    const std::vector<LanguageMeta> kept = filter_languages(metas, r);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].code == "a");
    CHECK(kept[1].code == "c");
    // partition: kept + complement == original, order preserved
    std::vector<std::string> merged;
    std::size_t ki = 0;
    for (const LanguageMeta& m : metas) {
        if (ki < kept.size() && kept[ki].code == m.code) {
            merged.push_back(m.code);
            ++ki;
        } else {
            CHECK_FALSE(contains(r, m.lon, m.lat));
            merged.push_back(m.code);
        }
    }
    CHECK(merged == std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(filter_languages({}, r).empty());
}
