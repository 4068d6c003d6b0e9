#include "andcoop/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "andcoop/rng.hpp"

namespace andcoop {

namespace {

constexpr std::uint64_t kTagPlacement = 0x706c6163656d6e74ull;
constexpr std::uint64_t kTagStatics = 0x7374617469637300ull;
constexpr std::uint64_t kTagFading = 0x66616465646e6700ull;

double distance(Point2D a, Point2D b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace

void NetworkConfig::validate() const {
    if (!(floor_side_m > 0.0)) throw std::invalid_argument("network: floor_side_m must be positive");
    if (n_devices < 1) throw std::invalid_argument("network: n_devices must be >= 1");
    if (n_aps < 1) throw std::invalid_argument("network: n_aps must be >= 1");
    if (!(payload_bytes > 0.0) || !std::isfinite(payload_bytes))
        throw std::invalid_argument("network: payload_bytes must be positive and finite");
    if (!(cycle_t_s > 0.0)) throw std::invalid_argument("network: cycle_t_s must be positive");
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("network: bandwidth_hz must be positive");
    if (!(carrier_freq_hz > 0.0)) throw std::invalid_argument("network: carrier_freq_hz must be positive");
    if (!std::isfinite(p_ap_dbm) || !std::isfinite(p_dev_dbm))
        throw std::invalid_argument("network: transmit powers must be finite");
    if (!std::isfinite(noise_psd_dbm_hz)) throw std::invalid_argument("network: noise_psd_dbm_hz must be finite");
    if (blockage_a < 0.0 || blockage_a > 1.0)
        throw std::invalid_argument("network: blockage_a must be in [0, 1]");
    if (!(blockage_b_m > 0.0)) throw std::invalid_argument("network: blockage_b_m must be positive");
    if (shadow_ap_los_db < 0.0 || shadow_ap_nlos_db < 0.0 || shadow_dev_los_db < 0.0 ||
        shadow_dev_nlos_db < 0.0)
        throw std::invalid_argument("network: shadowing stds must be nonnegative");
    if (!(min_link_distance_m > 0.0))
        throw std::invalid_argument("network: min_link_distance_m must be positive");
}

double los_probability(double distance_m, double a, double b_m) {
    if (distance_m < 0.0) throw std::invalid_argument("los_probability: negative distance");
    if (distance_m > b_m) return a;
    const double excess = (distance_m - b_m) / b_m;
    return a + (1.0 - a) * excess * excess;
}

Placement sample_placement(const NetworkConfig& cfg, std::uint64_t rng_seed) {
    cfg.validate();
    Philox rng(derive_key(rng_seed, kTagPlacement), 0);
    Placement placement;
    placement.ap_positions.resize(cfg.n_aps);
    placement.dev_positions.resize(cfg.n_devices);
    for (auto& p : placement.ap_positions) {
        p.x = cfg.floor_side_m * rng.uniform();
        p.y = cfg.floor_side_m * rng.uniform();
    }
    for (auto& p : placement.dev_positions) {
        p.x = cfg.floor_side_m * rng.uniform();
        p.y = cfg.floor_side_m * rng.uniform();
    }
    return placement;
}

double path_gain_db(double distance_m, double wavelength_m, double ple_near,
                    double ple_far, double min_distance_m) {
    constexpr double four_pi = 12.566370614359172954;
    const double d = std::max(distance_m, min_distance_m);
    const double breakpoint = 10.0 * wavelength_m;
    // Friis intercept at 1 m: 20*log10(lambda / 4*pi).
    const double intercept_db = 20.0 * std::log10(wavelength_m / four_pi);
    if (d <= breakpoint) {
        return intercept_db - 10.0 * ple_near * std::log10(d);
    }
    return intercept_db - 10.0 * ple_near * std::log10(breakpoint) -
           10.0 * ple_far * std::log10(d / breakpoint);
}

LinkStatics link_statics(const NetworkConfig& cfg, const Placement& placement,
                         std::uint64_t rng_seed) {
    cfg.validate();
    const int m = cfg.n_aps;
    const int n = cfg.n_devices;
    if (static_cast<int>(placement.ap_positions.size()) != m ||
        static_cast<int>(placement.dev_positions.size()) != n)
        throw std::invalid_argument("link_statics: placement sizes disagree with config");

    Philox rng(derive_key(rng_seed, kTagStatics), 0);

    LinkStatics statics;
    statics.n_aps = m;
    statics.n_devices = n;
    statics.avg_snr_ap_dev.resize(static_cast<std::size_t>(m) * n);
    statics.los_ap_dev.resize(static_cast<std::size_t>(m) * n);
    statics.avg_snr_dev_dev.assign(static_cast<std::size_t>(n) * n, 0.0);
    statics.los_dev_dev.assign(static_cast<std::size_t>(n) * n, 0);

    const double lambda = cfg.wavelength_m();
    const double noise_floor_dbm = cfg.noise_psd_dbm_hz + 10.0 * std::log10(cfg.bandwidth_hz);

    auto link_snr = [&](Point2D tx, Point2D rx, double p_tx_dbm, double shadow_los_db,
                        double shadow_nlos_db, std::uint8_t& los_out) {
        const double d = distance(tx, rx);
        const bool los = rng.uniform() < los_probability(d, cfg.blockage_a, cfg.blockage_b_m);
        const double ple_far = los ? cfg.ple_los : cfg.ple_nlos;
        const double shadow_std = los ? shadow_los_db : shadow_nlos_db;
        const double gain_db = path_gain_db(d, lambda, cfg.ple_near, ple_far, cfg.min_link_distance_m) +
                               shadow_std * rng.normal();
        los_out = los ? 1 : 0;
        return db_to_linear(p_tx_dbm + gain_db - noise_floor_dbm);
    };

    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * n + j;
            statics.avg_snr_ap_dev[idx] =
                link_snr(placement.ap_positions[i], placement.dev_positions[j], cfg.p_ap_dbm,
                         cfg.shadow_ap_los_db, cfg.shadow_ap_nlos_db, statics.los_ap_dev[idx]);
        }
    }
    // Device-device large-scale state is reciprocal: one draw per unordered pair.
    for (int k = 0; k < n; ++k) {
        for (int j = k + 1; j < n; ++j) {
            std::uint8_t los = 0;
            const double snr = link_snr(placement.dev_positions[k], placement.dev_positions[j],
                                        cfg.p_dev_dbm, cfg.shadow_dev_los_db,
                                        cfg.shadow_dev_nlos_db, los);
            const std::size_t kj = static_cast<std::size_t>(k) * n + j;
            const std::size_t jk = static_cast<std::size_t>(j) * n + k;
            statics.avg_snr_dev_dev[kj] = statics.avg_snr_dev_dev[jk] = snr;
            statics.los_dev_dev[kj] = statics.los_dev_dev[jk] = los;
        }
    }
    return statics;
}

LinkStatics iid_link_statics(int n_aps, int n_devices, double nominal_snr) {
    if (n_aps < 1 || n_devices < 1)
        throw std::invalid_argument("iid_link_statics: counts must be >= 1");
    if (!(nominal_snr > 0.0)) throw std::invalid_argument("iid_link_statics: SNR must be positive");
    LinkStatics statics;
    statics.n_aps = n_aps;
    statics.n_devices = n_devices;
    statics.avg_snr_ap_dev.assign(static_cast<std::size_t>(n_aps) * n_devices, nominal_snr);
    statics.los_ap_dev.assign(statics.avg_snr_ap_dev.size(), 1);
    statics.avg_snr_dev_dev.assign(static_cast<std::size_t>(n_devices) * n_devices, nominal_snr);
    statics.los_dev_dev.assign(statics.avg_snr_dev_dev.size(), 1);
    for (int j = 0; j < n_devices; ++j) {
        statics.avg_snr_dev_dev[static_cast<std::size_t>(j) * n_devices + j] = 0.0;
        statics.los_dev_dev[static_cast<std::size_t>(j) * n_devices + j] = 0;
    }
    return statics;
}

double ChannelRealization::ap_sum_true(int dev) const {
    double sum = 0.0;
    for (int i = 0; i < n_aps; ++i) sum += g_ap_dev[static_cast<std::size_t>(i) * n_devices + dev];
    return sum;
}

double ChannelRealization::ap_sum_est(int dev) const {
    double sum = 0.0;
    for (int i = 0; i < n_aps; ++i) sum += g_hat_ap_dev[static_cast<std::size_t>(i) * n_devices + dev];
    return sum;
}

double mmse_error_variance(int pilots, double avg_snr) {
    if (pilots < 0) throw std::invalid_argument("mmse_error_variance: pilots must be >= 0");
    return 1.0 / (1.0 + pilots * avg_snr);
}

ChannelRealization sample_cycle(const LinkStatics& statics, int pilots, CsiMode mode,
                                std::uint64_t rng_seed) {
    if (mode == CsiMode::imperfect && pilots < 1)
        throw std::invalid_argument(
            "sample_cycle: imperfect CSI requires pilots >= 1 (the estimate is degenerate at L = 0)");

    const int m = statics.n_aps;
    const int n = statics.n_devices;
    Philox rng(derive_key(rng_seed, kTagFading), 0);

    ChannelRealization real;
    real.n_aps = m;
    real.n_devices = n;
    real.g_ap_dev.resize(static_cast<std::size_t>(m) * n);
    real.g_hat_ap_dev.resize(static_cast<std::size_t>(m) * n);
    real.g_dev_dev.assign(static_cast<std::size_t>(n) * n, 0.0);

    if (mode == CsiMode::perfect) {
        for (std::size_t idx = 0; idx < real.g_ap_dev.size(); ++idx) {
            const double g = statics.avg_snr_ap_dev[idx] * rng.exponential();
            real.g_ap_dev[idx] = g;
            real.g_hat_ap_dev[idx] = g;
        }
    } else {
        for (std::size_t idx = 0; idx < real.g_ap_dev.size(); ++idx) {
            const double rho = statics.avg_snr_ap_dev[idx];
            const double err_var = mmse_error_variance(pilots, rho);
            const double est_scale = std::sqrt((1.0 - err_var) / 2.0);
            const double err_scale = std::sqrt(err_var / 2.0);
            const double est_re = est_scale * rng.normal();
            const double est_im = est_scale * rng.normal();
            const double h_re = est_re + err_scale * rng.normal();
            const double h_im = est_im + err_scale * rng.normal();
            real.g_ap_dev[idx] = rho * (h_re * h_re + h_im * h_im);
            real.g_hat_ap_dev[idx] = rho * (est_re * est_re + est_im * est_im);
        }
    }

    for (int k = 0; k < n; ++k) {
        for (int j = k + 1; j < n; ++j) {
            const std::size_t kj = static_cast<std::size_t>(k) * n + j;
            const std::size_t jk = static_cast<std::size_t>(j) * n + k;
            const double g = statics.avg_snr_dev_dev[kj] * rng.exponential();
            real.g_dev_dev[kj] = real.g_dev_dev[jk] = g;
        }
    }
    return real;
}

} // namespace andcoop
