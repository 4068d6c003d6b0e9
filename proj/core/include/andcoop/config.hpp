#pragma once

#include <cmath>
#include <vector>

namespace andcoop {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

struct Point2D {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point2D&) const = default;
};

/// Static scenario description: geometry, node counts, powers, payload,
/// timing and channel-model constants. Powers are kept in the dBm/bytes
/// units the config files use; the accessors below convert once.
struct NetworkConfig {
    double floor_side_m = 100.0;
    int n_devices = 50;
    int n_aps = 1;
    double payload_bytes = 50.0;
    double cycle_t_s = 1e-3;
    double bandwidth_hz = 20e6;
    double carrier_freq_hz = 3.5e9;
    double p_ap_dbm = 23.0;
    double p_dev_dbm = 23.0;
    double noise_psd_dbm_hz = -174.0;
    double ple_near = 2.0;
    double ple_los = 3.26;
    double ple_nlos = 3.93;
    double blockage_a = 0.25;
    double blockage_b_m = 15.0;
    double shadow_ap_los_db = 1.4;
    double shadow_ap_nlos_db = 4.6;
    double shadow_dev_los_db = 8.7;
    double shadow_dev_nlos_db = 15.2;
    double min_link_distance_m = 0.1;

    double payload_bits() const { return 8.0 * payload_bytes; }
    double p_ap_w() const { return dbm_to_watts(p_ap_dbm); }
    double p_dev_w() const { return dbm_to_watts(p_dev_dbm); }
    double noise_psd_w_per_hz() const { return dbm_to_watts(noise_psd_dbm_hz); }
    double noise_power_w() const { return bandwidth_hz * noise_psd_w_per_hz(); }
    double wavelength_m() const { return 299792458.0 / carrier_freq_hz; }
    double spectral_efficiency_bpcu() const {
        return n_devices * payload_bits() / (cycle_t_s * bandwidth_hz);
    }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    bool operator==(const NetworkConfig&) const = default;
};

struct Placement {
    std::vector<Point2D> ap_positions;
    std::vector<Point2D> dev_positions;
    bool operator==(const Placement&) const = default;
};

} // namespace andcoop
