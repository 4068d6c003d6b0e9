#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "andcoop/config.hpp"

namespace andcoop {

struct Wall {
    Point2D a;
    Point2D b;
    double penetration_loss_db = 20.0;
    bool operator==(const Wall&) const = default;
};

/// Inputs for the deterministic coverage-map experiment: one multi-antenna
/// AP, a set of relay devices assumed to have decoded, an optional straight
/// wall, and a per-phase outage target evaluated analytically per grid point.
struct MapSpec {
    int grid_resolution = 100;
    double floor_side_m = 100.0;
    Point2D ap_position{50.0, 50.0};
    int ap_antennas = 4;
    std::vector<Point2D> relay_positions;
    std::optional<Wall> wall;
    double target_outage = 1e-9;
    double rate_bpcu = 1.0; // single-hop rate over the full cycle; each half-cycle phase doubles it
    double bandwidth_hz = 20e6;
    double carrier_freq_hz = 3.5e9;
    double p_ap_dbm = 23.0;
    double p_dev_dbm = 23.0;
    double noise_psd_dbm_hz = -174.0;
    double ple_near = 2.0;
    double ple_los = 3.26;
    double ple_nlos = 3.93;
    double min_link_distance_m = 0.1;

    void validate() const;
    bool operator==(const MapSpec&) const = default;
};

enum class CoveragePhase : int {
    single_hop = 0, // AP alone over the full cycle
    broadcast = 1,  // AP alone over the first half cycle at doubled rate
    relay = 2,      // relay devices over the second half cycle at doubled rate
};

inline constexpr std::array<const char*, 3> kCoveragePhaseNames{"single_hop", "broadcast",
                                                                "relay"};

struct CoverageResult {
    int grid_resolution = 0;
    // Row-major [iy][ix] grids of cell centers, one entry per point.
    std::array<std::vector<double>, 3> snr_db;        // total received SNR per phase
    std::array<std::vector<std::uint8_t>, 3> covered; // outage target met per phase
    std::vector<std::uint8_t> covered_combined;       // broadcast OR relay
    std::array<double, 3> coverage_fraction{};
    double coverage_fraction_combined = 0.0;
};

/// True when segments p1-p2 and q1-q2 intersect (touching counts).
bool segments_intersect(Point2D p1, Point2D p2, Point2D q1, Point2D q2);

/// Evaluates every grid point against the per-phase outage target using the
/// m-branch Rayleigh failure probability; links crossing the wall switch to
/// the NLOS exponent and pay the penetration loss.
CoverageResult compute_coverage(const MapSpec& spec);

} // namespace andcoop
