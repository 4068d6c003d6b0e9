#include "andcoop/protocol.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "andcoop/link_math.hpp"

namespace andcoop {

double ProtocolParams::effective_beta() const {
    if (scheme == Scheme::single_hop) return 1.0;
    if (scheme == Scheme::two_hop) return 0.0;
    return beta;
}

void ProtocolParams::validate() const {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("protocol: beta must be in [0, 1]");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("protocol: alpha must be in (0, 1)");
    if (!(theta > 0.0) || theta > 1.0)
        throw std::invalid_argument("protocol: theta must be in (0, 1]");
    if (pilots < 0) throw std::invalid_argument("protocol: pilots must be >= 0");
    if (csi == CsiMode::perfect && (theta != 1.0 || pilots != 0))
        throw std::invalid_argument("protocol: perfect CSI forces theta = 1 and pilots = 0");
    if (csi == CsiMode::imperfect && pilots < 1)
        throw std::invalid_argument("protocol: imperfect CSI requires pilots >= 1");
    if (scheme == Scheme::k_best && k_best < 1)
        throw std::invalid_argument("protocol: k_best must be >= 1");
}

double CycleOutcome::total_relay_energy_j() const {
    return std::accumulate(relay_energy_j.begin(), relay_energy_j.end(), 0.0);
}

double CycleOutcome::mean_relay_energy_j() const {
    if (relay_energy_j.empty()) return 0.0;
    return total_relay_energy_j() / static_cast<double>(relay_energy_j.size());
}

std::vector<int> select_strong_set(std::span<const double> est_rates_bps, double tau_s,
                                   double theta, double payload_bits) {
    if (tau_s < 0.0) throw std::invalid_argument("select_strong_set: tau must be >= 0");
    std::vector<int> order(est_rates_bps.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return est_rates_bps[a] > est_rates_bps[b]; });

    std::vector<int> selected;
    double airtime = 0.0;
    // The budget comparison carries a relative slack of a few ulps so exact
    // boundary fits (airtime sum equal to tau) stay inside.
    const double budget = tau_s * (1.0 + 1e-12);
    for (int dev : order) {
        if (!(est_rates_bps[dev] > 0.0)) break;
        const double slot = payload_bits / (theta * est_rates_bps[dev]);
        if (airtime + slot > budget) break;
        airtime += slot;
        selected.push_back(dev);
    }
    return selected;
}

Schedule build_schedule(const ChannelRealization& realization, const ProtocolParams& params,
                        const NetworkConfig& cfg) {
    params.validate();
    const int n = realization.n_devices;
    if (n != cfg.n_devices || realization.n_aps != cfg.n_aps)
        throw std::invalid_argument("build_schedule: realization dimensions disagree with config");

    Schedule schedule;
    schedule.t_data_s = cfg.cycle_t_s;
    if (params.csi == CsiMode::imperfect) {
        schedule.t_data_s -= cfg.n_devices * params.pilots / cfg.bandwidth_hz;
        if (schedule.t_data_s <= 0.0)
            throw std::invalid_argument("build_schedule: pilot overhead exceeds the cycle");
    }
    const double beta = params.effective_beta();
    schedule.t_single_hop_s = beta * schedule.t_data_s;
    schedule.t_two_hop_s = (1.0 - beta) * schedule.t_data_s;

    std::vector<double> est_rates(n);
    for (int j = 0; j < n; ++j)
        est_rates[j] = achievable_rate(realization.ap_sum_est(j), cfg.bandwidth_hz);

    const double payload = cfg.payload_bits();
    schedule.strong_set =
        select_strong_set(est_rates, schedule.t_single_hop_s, params.theta, payload);
    schedule.strong_rates.reserve(schedule.strong_set.size());
    for (int dev : schedule.strong_set)
        schedule.strong_rates.push_back(params.theta * est_rates[dev]);

    std::vector<std::uint8_t> is_strong(n, 0);
    for (int dev : schedule.strong_set) is_strong[dev] = 1;
    for (int j = 0; j < n; ++j)
        if (!is_strong[j]) schedule.weak_set.push_back(j);

    const auto k_weak = static_cast<double>(schedule.weak_set.size());
    if (!schedule.weak_set.empty() && schedule.t_two_hop_s > 0.0) {
        schedule.broadcast_rate_bps = payload * k_weak / (params.alpha * schedule.t_two_hop_s);
        schedule.relay_rate_bps = payload * k_weak / ((1.0 - params.alpha) * schedule.t_two_hop_s);
    }

#ifndef NDEBUG
    double airtime = 0.0;
    for (std::size_t s = 0; s < schedule.strong_set.size(); ++s)
        airtime += payload / schedule.strong_rates[s];
    assert(airtime <= schedule.t_single_hop_s * (1.0 + 1e-12));
#endif
    return schedule;
}

CycleOutcome run_cycle(const ChannelRealization& realization, const Schedule& schedule,
                       const ProtocolParams& params, const NetworkConfig& cfg) {
    const int n = realization.n_devices;
    const double w = cfg.bandwidth_hz;

    CycleOutcome outcome;
    outcome.k_weak = static_cast<int>(schedule.weak_set.size());
    outcome.relay_energy_j.assign(n, 0.0);

    for (std::size_t s = 0; s < schedule.strong_set.size(); ++s) {
        const int dev = schedule.strong_set[s];
        if (!decode_succeeds(realization.ap_sum_true(dev), schedule.strong_rates[s], w))
            outcome.failed_devices.push_back(dev);
    }

    if (!schedule.weak_set.empty()) {
        if (schedule.t_two_hop_s <= 0.0) {
            // beta = 1 leftovers: no two-hop phase exists to carry them.
            outcome.overflow = true;
            outcome.failed_devices.insert(outcome.failed_devices.end(), schedule.weak_set.begin(),
                                          schedule.weak_set.end());
        } else {
            // Broadcast hop: every device listens; the successful ones relay.
            std::vector<std::uint8_t> is_relay(n, 0);
            for (int j = 0; j < n; ++j) {
                if (decode_succeeds(realization.ap_sum_true(j), schedule.broadcast_rate_bps, w)) {
                    is_relay[j] = 1;
                    outcome.relay_set.push_back(j);
                }
            }
            // Relay hop: APs transmit again, relays add in; receivers combine powers.
            for (int j : schedule.weak_set) {
                if (is_relay[j]) continue;
                double snr = realization.ap_sum_true(j);
                for (int k : outcome.relay_set) snr += realization.dev_dev(k, j);
                if (!decode_succeeds(snr, schedule.relay_rate_bps, w))
                    outcome.failed_devices.push_back(j);
            }
            const double relay_energy =
                cfg.p_dev_w() * (1.0 - params.alpha) * schedule.t_two_hop_s;
            for (int k : outcome.relay_set) outcome.relay_energy_j[k] = relay_energy;
        }
    }

    std::sort(outcome.failed_devices.begin(), outcome.failed_devices.end());
    outcome.system_outage = !outcome.failed_devices.empty() || outcome.overflow;
    return outcome;
}

CycleOutcome run_cycle_k_best(const ChannelRealization& realization, int k,
                              const NetworkConfig& cfg) {
    const int n = realization.n_devices;
    if (k < 1 || k > n) throw std::invalid_argument("run_cycle_k_best: k must be in [1, N]");

    std::vector<double> rates(n);
    for (int j = 0; j < n; ++j)
        rates[j] = achievable_rate(realization.ap_sum_true(j), cfg.bandwidth_hz);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rates[a] > rates[b]; });

    const double scaled_payload = cfg.n_devices * cfg.payload_bits() / static_cast<double>(k);
    double airtime = 0.0;
    for (int s = 0; s < k; ++s) airtime += scaled_payload / rates[order[s]];

    CycleOutcome outcome;
    outcome.relay_energy_j.assign(n, 0.0);
    outcome.overflow = !(airtime <= cfg.cycle_t_s);
    outcome.system_outage = outcome.overflow;
    return outcome;
}

} // namespace andcoop
