#pragma once

#include <cstdint>
#include <vector>

#include "andcoop/config.hpp"

namespace andcoop {

enum class CsiMode { perfect, imperfect };

/// Probability that a link of length distance_m is line-of-sight:
/// a + 1{d <= b} * (1-a)/b^2 * (d-b)^2. Equals 1 at d = 0 and a for d >= b.
double los_probability(double distance_m, double a, double b_m);

/// Uniform i.i.d. node positions on the square floor. Deterministic in the seed.
Placement sample_placement(const NetworkConfig& cfg, std::uint64_t rng_seed);

/// Dual-slope distance gain in dB (negative): Friis-anchored exponent
/// ple_near up to the 10*lambda breakpoint, then ple_far, continuous at the
/// breakpoint. Distances below min_distance_m are clamped.
double path_gain_db(double distance_m, double wavelength_m, double ple_near,
                    double ple_far, double min_distance_m);

/// Per-link average SNRs and LOS flags for one placement. Large-scale only;
/// fading is drawn per cycle by sample_cycle.
struct LinkStatics {
    int n_aps = 0;
    int n_devices = 0;
    std::vector<double> avg_snr_ap_dev;        // [n_aps][n_devices], linear
    std::vector<double> avg_snr_dev_dev;       // [n_devices][n_devices], symmetric, zero diagonal
    std::vector<std::uint8_t> los_ap_dev;      // same layouts as the SNR matrices
    std::vector<std::uint8_t> los_dev_dev;

    double ap_dev(int ap, int dev) const { return avg_snr_ap_dev[static_cast<std::size_t>(ap) * n_devices + dev]; }
    double dev_dev(int from, int to) const { return avg_snr_dev_dev[static_cast<std::size_t>(from) * n_devices + to]; }
};

/// Samples LOS state and log-normal shadowing per link and combines them with
/// the dual-slope path gain into average received SNRs. The shadowing std is
/// picked by transmitter type (AP or device) and LOS state.
LinkStatics link_statics(const NetworkConfig& cfg, const Placement& placement,
                         std::uint64_t rng_seed);

/// All links share one nominal average SNR; removes large-scale effects for
/// outage-exponent and oracle cross-check runs.
LinkStatics iid_link_statics(int n_aps, int n_devices, double nominal_snr);

/// One cycle's instantaneous SNRs: true g = rho*|h|^2 per link and, for
/// AP-device links only, the estimate g_hat = rho*|h_hat|^2.
struct ChannelRealization {
    int n_aps = 0;
    int n_devices = 0;
    std::vector<double> g_ap_dev;
    std::vector<double> g_hat_ap_dev;
    std::vector<double> g_dev_dev;

    double ap_sum_true(int dev) const;
    double ap_sum_est(int dev) const;
    double dev_dev(int from, int to) const { return g_dev_dev[static_cast<std::size_t>(from) * n_devices + to]; }
};

/// MMSE channel-estimate error variance 1 / (1 + pilots * avg_snr).
double mmse_error_variance(int pilots, double avg_snr);

/// Draws unit-variance Rayleigh fades for every link. In imperfect mode the
/// estimate h_hat (variance 1 - sigma_e) and the error (variance sigma_e) are
/// drawn independently per AP-device link with h = h_hat + error;
/// device-device links carry no estimate. Perfect mode sets g_hat = g
/// bitwise. Imperfect mode with pilots = 0 is rejected.
ChannelRealization sample_cycle(const LinkStatics& statics, int pilots, CsiMode mode,
                                std::uint64_t rng_seed);

} // namespace andcoop
