#pragma once

#include <span>
#include <vector>

#include "andcoop/channel.hpp"
#include "andcoop/config.hpp"

namespace andcoop {

enum class Scheme {
    andcoop,    // rate-adaptive single hop for strong devices, two-hop for the rest
    single_hop, // beta = 1: rate adaptation for everyone, overflow leftovers fail
    two_hop,    // beta = 0: broadcast + cooperative relaying for everyone
    k_best,     // serve only the K best-rated devices with scaled payloads
};

/// Designer knobs for one run: time split beta, broadcast share alpha, rate
/// back-off theta, pilot count, scheme and CSI assumption.
struct ProtocolParams {
    Scheme scheme = Scheme::andcoop;
    CsiMode csi = CsiMode::perfect;
    double beta = 0.5;
    double alpha = 0.5;
    double theta = 1.0;
    int pilots = 0;
    int k_best = 1;

    /// single_hop forces beta = 1, two_hop forces beta = 0.
    double effective_beta() const;
    void validate() const;
    bool operator==(const ProtocolParams&) const = default;
};

/// One cycle's transmission plan.
struct Schedule {
    std::vector<int> strong_set;      // transmission order
    std::vector<double> strong_rates; // bps, parallel to strong_set
    std::vector<int> weak_set;        // ascending device index
    double broadcast_rate_bps = 0.0;
    double relay_rate_bps = 0.0;
    double t_data_s = 0.0;
    double t_single_hop_s = 0.0;
    double t_two_hop_s = 0.0;
};

struct CycleOutcome {
    bool system_outage = false;
    bool overflow = false;
    int k_weak = 0;
    std::vector<int> relay_set;
    std::vector<int> failed_devices;
    std::vector<double> relay_energy_j; // per device, zero for non-relays

    double total_relay_energy_j() const;
    double mean_relay_energy_j() const;
};

/// Largest prefix of the rate-descending device order whose airtime
/// sum(payload / (theta * rate)) fits in tau seconds. The returned order is
/// the transmission order; zero-rate devices are never selected; ties in
/// rate break toward the lower device index.
std::vector<int> select_strong_set(std::span<const double> est_rates_bps, double tau_s,
                                   double theta, double payload_bits);

/// Splits the data time into the two phases, selects the strong set from
/// estimated rates, and fixes all transmission rates for the cycle. Throws
/// std::invalid_argument when pilot overhead leaves no data time.
Schedule build_schedule(const ChannelRealization& realization, const ProtocolParams& params,
                        const NetworkConfig& cfg);

/// Plays one cycle against the true SNRs: single-hop decodes, broadcast
/// decode (every device listens and successful ones become relays), relay
/// hop with AP + relay power summation, and relay energy accounting.
CycleOutcome run_cycle(const ChannelRealization& realization, const Schedule& schedule,
                       const ProtocolParams& params, const NetworkConfig& cfg);

/// Genie scheduler that serves only the k devices with the best true rates,
/// scaling the payload to n_devices*B/k; outage is a time overflow of the
/// full cycle.
CycleOutcome run_cycle_k_best(const ChannelRealization& realization, int k,
                              const NetworkConfig& cfg);

} // namespace andcoop
