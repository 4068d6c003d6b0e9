#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "andcoop/coverage.hpp"

using namespace andcoop;

namespace {

// Wall-and-relays layout used by the bundled coverage scenario: AP in the
// middle, vertical wall to the right, three relays around the wall.
MapSpec wall_spec() {
    MapSpec spec;
    spec.grid_resolution = 60;
    spec.ap_position = {50.0, 50.0};
    spec.ap_antennas = 4;
    spec.relay_positions = {{80.0, 30.0}, {86.0, 52.0}, {80.0, 72.0}};
    spec.wall = Wall{{70.0, 15.0}, {70.0, 85.0}, 20.0};
    return spec;
}

} // namespace

TEST_CASE("segment intersection basics") {
    CHECK(segments_intersect({0, 0}, {10, 10}, {0, 10}, {10, 0}));
    CHECK_FALSE(segments_intersect({0, 0}, {1, 1}, {5, 5}, {6, 5}));
    CHECK(segments_intersect({0, 0}, {10, 0}, {5, -1}, {5, 1}));
    CHECK(segments_intersect({0, 0}, {10, 0}, {5, 0}, {5, 1}));  // touching endpoint
    CHECK_FALSE(segments_intersect({0, 0}, {10, 0}, {5, 0.1}, {5, 1}));
}

TEST_CASE("a tolerant outage target covers everything") {
    MapSpec spec = wall_spec();
    spec.target_outage = 1.0;
    const CoverageResult result = compute_coverage(spec);
    CHECK(result.coverage_fraction[0] == 1.0);
    CHECK(result.coverage_fraction[1] == 1.0);
    CHECK(result.coverage_fraction_combined == 1.0);
}

TEST_CASE("the AP's own cell is covered in single hop") {
    MapSpec spec = wall_spec();
    const CoverageResult result = compute_coverage(spec);
    const int res = spec.grid_resolution;
    const double cell = spec.floor_side_m / res;
    const int ix = static_cast<int>(spec.ap_position.x / cell);
    const int iy = static_cast<int>(spec.ap_position.y / cell);
    CHECK(result.covered[0][static_cast<std::size_t>(iy) * res + ix] == 1);
}

TEST_CASE("combined two-phase coverage meets the map invariant") {
    const CoverageResult result = compute_coverage(wall_spec());
    for (std::size_t i = 0; i < result.covered_combined.size(); ++i) {
        CHECK(result.covered_combined[i] ==
              static_cast<std::uint8_t>(result.covered[1][i] | result.covered[2][i]));
    }
    CHECK(result.coverage_fraction_combined >= result.coverage_fraction[1]);
    CHECK(result.coverage_fraction_combined >= result.coverage_fraction[2]);
}

TEST_CASE("removing the wall never shrinks single-hop coverage") {
    MapSpec blocked = wall_spec();
    MapSpec open = wall_spec();
    open.wall.reset();
    const double with_wall = compute_coverage(blocked).coverage_fraction[0];
    const double without = compute_coverage(open).coverage_fraction[0];
    CHECK(without >= with_wall);
}

TEST_CASE("coverage shrinks as the rate grows or the target tightens") {
    MapSpec spec = wall_spec();
    const double base = compute_coverage(spec).coverage_fraction[0];
    spec.rate_bpcu = 2.0;
    const double faster = compute_coverage(spec).coverage_fraction[0];
    CHECK(faster <= base);
    spec.rate_bpcu = 1.0;
    spec.target_outage = 1e-12;
    const double stricter = compute_coverage(spec).coverage_fraction[0];
    CHECK(stricter <= base);
}

TEST_CASE("relay coverage concentrates beyond the wall") {
    MapSpec spec = wall_spec();
    const CoverageResult result = compute_coverage(spec);
    const int res = spec.grid_resolution;
    const double cell = spec.floor_side_m / res;
    std::int64_t shadow_total = 0;
    std::int64_t shadow_relay_covered = 0;
    for (int iy = 0; iy < res; ++iy) {
        for (int ix = 0; ix < res; ++ix) {
            const Point2D point{(ix + 0.5) * cell, (iy + 0.5) * cell};
            if (!segments_intersect(spec.ap_position, point, spec.wall->a, spec.wall->b)) continue;
            ++shadow_total;
            shadow_relay_covered +=
                result.covered[2][static_cast<std::size_t>(iy) * res + ix];
        }
    }
    REQUIRE(shadow_total > 0);
    // Most of the shadow should be reachable from the relays placed around it.
    CHECK(static_cast<double>(shadow_relay_covered) > 0.5 * static_cast<double>(shadow_total));
}

TEST_CASE("an empty relay set leaves the relay phase uncovered") {
    MapSpec spec = wall_spec();
    spec.relay_positions.clear();
    const CoverageResult result = compute_coverage(spec);
    CHECK(result.coverage_fraction[2] == 0.0);
}

TEST_CASE("map-spec invariants") {
    MapSpec spec = wall_spec();
    spec.grid_resolution = 1;
    CHECK_THROWS_AS(compute_coverage(spec), std::invalid_argument);
    spec = wall_spec();
    spec.target_outage = 0.0;
    CHECK_THROWS_AS(compute_coverage(spec), std::invalid_argument);
    spec = wall_spec();
    spec.wall->penetration_loss_db = -1.0;
    CHECK_THROWS_AS(compute_coverage(spec), std::invalid_argument);
}
