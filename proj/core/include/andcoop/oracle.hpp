#pragma once

#include <span>
#include <utility>
#include <vector>

namespace andcoop {

/// Simplified network for closed-form evaluation: a single nominal average
/// SNR on every AP-device and device-device link with i.i.d. Rayleigh fading.
struct IidScenario {
    int n_devices = 1;
    int n_aps = 1;
    double nominal_snr = 1.0; // linear, per branch, at p_t_scale = 1
    double rate_b_bps = 0.0;  // broadcast-hop rate
    double rate_r_bps = 0.0;  // relay-hop rate
    double bandwidth_hz = 0.0;
};

/// Closed-form system outage of the all-two-hop scheme: sum over the number
/// of broadcast-decoding devices of the binomial split times the conditional
/// relay-hop failure, with per-branch failure probabilities from the Erlang
/// CDF. Accumulated in log space so deep tails stay representable.
/// p_t_scale sweeps transmit power by scaling the nominal per-branch SNR.
double p2h_closed_form(const IidScenario& scn, double p_t_scale = 1.0);

/// log of p2h_closed_form, for slope fits past double underflow.
double log_p2h_closed_form(const IidScenario& scn, double p_t_scale = 1.0);

struct OutageBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Outage bounds for the all-single-hop scheme over t_single_hop seconds:
/// the lower bound grants every device the whole window (rate B/t), the
/// upper bound splits it equally (rate N*B/t).
OutageBounds single_hop_bounds(int n_devices, int n_aps, double payload_bits,
                               double t_single_hop_s, double p_t_w, double bandwidth_hz,
                               double noise_psd_w_per_hz);

struct DmtCurve {
    std::vector<double> multiplexing;
    std::vector<double> diversity;
};

struct DmtBounds {
    DmtCurve lower;
    DmtCurve upper;
};

/// Single-hop diversity-multiplexing bounds: M(1-r) and M(1-r/N). Both equal
/// M at r = 0.
DmtBounds dmt_single_hop(int n_aps, int n_devices, std::span<const double> r_grid);

/// Two-hop diversity-multiplexing curve (M+N-1)(1 - r/(1-alpha)), clipped at
/// zero; equals M+N-1 at r = 0 and reaches zero at r = 1-alpha.
DmtCurve dmt_two_hop(int n_aps, int n_devices, double alpha, std::span<const double> r_grid);

/// Diversity order M(N-K+1) of the K-best scheduler at zero multiplexing.
int diversity_k_best(int n_aps, int n_devices, int k);

struct SlopePoint {
    double outage = 0.0;
    double slope = 0.0;
};

/// Centered finite-difference slope of -log(outage) against log(p_t) at each
/// interior point of a power/outage curve, reported against the outage level.
std::vector<SlopePoint>
empirical_outage_exponent(std::span<const std::pair<double, double>> curve);

} // namespace andcoop
