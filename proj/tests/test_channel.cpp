#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "andcoop/channel.hpp"
#include "andcoop/config.hpp"

using namespace andcoop;

namespace {

NetworkConfig table_defaults() { return NetworkConfig{}; }

} // namespace

TEST_CASE("LOS probability endpoints and interior value") {
    CHECK(los_probability(0.0, 0.25, 15.0) == doctest::Approx(1.0));
    CHECK(los_probability(15.0, 0.25, 15.0) == doctest::Approx(0.25));
    CHECK(los_probability(40.0, 0.25, 15.0) == doctest::Approx(0.25));
    CHECK(los_probability(7.5, 0.25, 15.0) == doctest::Approx(0.4375));
}

TEST_CASE("LOS probability stays in [a, 1] and is continuous at the cutoff") {
    const double a = 0.25;
    const double b = 15.0;
    for (double d = 0.0; d < 40.0; d += 0.01) {
        const double p = los_probability(d, a, b);
        CHECK(p >= a);
        CHECK(p <= 1.0);
    }
    CHECK(los_probability(b - 1e-9, a, b) == doctest::Approx(los_probability(b + 1e-9, a, b)));
}

TEST_CASE("placement stays on the floor and is seed-deterministic") {
    NetworkConfig cfg = table_defaults();
    cfg.n_devices = 200;
    cfg.n_aps = 3;
    const Placement p1 = sample_placement(cfg, 5);
    const Placement p2 = sample_placement(cfg, 5);
    const Placement p3 = sample_placement(cfg, 6);
    CHECK(p1 == p2);
    CHECK_FALSE(p1 == p3);
    for (const auto& p : p1.dev_positions) {
        CHECK(p.x >= 0.0);
        CHECK(p.x <= cfg.floor_side_m);
        CHECK(p.y >= 0.0);
        CHECK(p.y <= cfg.floor_side_m);
    }
}

TEST_CASE("placement coordinates average to the floor center") {
    NetworkConfig cfg = table_defaults();
    cfg.n_devices = 10000;
    const Placement placement = sample_placement(cfg, 123);
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& p : placement.dev_positions) {
        mean_x += p.x;
        mean_y += p.y;
    }
    mean_x /= cfg.n_devices;
    mean_y /= cfg.n_devices;
    CHECK(std::fabs(mean_x - 50.0) < 1.0);
    CHECK(std::fabs(mean_y - 50.0) < 1.0);
}

TEST_CASE("noise floor of the default bandwidth") {
    const NetworkConfig cfg = table_defaults();
    CHECK(watts_to_dbm(cfg.noise_power_w()) == doctest::Approx(-100.9897).epsilon(1e-4));
}

TEST_CASE("near-region slope gains 6.02 dB per halved distance") {
    const double lambda = table_defaults().wavelength_m();
    const double g1 = path_gain_db(0.8, lambda, 2.0, 3.26, 0.1);
    const double g2 = path_gain_db(0.4, lambda, 2.0, 3.26, 0.1);
    CHECK(g2 - g1 == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-9));
}

TEST_CASE("dual-slope gain is continuous at the breakpoint and clamps tiny distances") {
    const double lambda = table_defaults().wavelength_m();
    const double bp = 10.0 * lambda;
    CHECK(path_gain_db(bp - 1e-9, lambda, 2.0, 3.93, 0.1) ==
          doctest::Approx(path_gain_db(bp + 1e-9, lambda, 2.0, 3.93, 0.1)).epsilon(1e-6));
    CHECK(path_gain_db(0.0, lambda, 2.0, 3.93, 0.1) == path_gain_db(0.1, lambda, 2.0, 3.93, 0.1));
}

TEST_CASE("link statics are deterministic when nothing random is left") {
    NetworkConfig cfg = table_defaults();
    cfg.n_devices = 8;
    cfg.n_aps = 2;
    cfg.blockage_a = 1.0; // every link LOS
    cfg.shadow_ap_los_db = 0.0;
    cfg.shadow_ap_nlos_db = 0.0;
    cfg.shadow_dev_los_db = 0.0;
    cfg.shadow_dev_nlos_db = 0.0;
    const Placement placement = sample_placement(cfg, 1);
    const LinkStatics s1 = link_statics(cfg, placement, 10);
    const LinkStatics s2 = link_statics(cfg, placement, 99);
    CHECK(s1.avg_snr_ap_dev == s2.avg_snr_ap_dev);
    CHECK(s1.avg_snr_dev_dev == s2.avg_snr_dev_dev);
    CHECK(s1.los_ap_dev == s2.los_ap_dev);
}

TEST_CASE("link statics: positive SNRs, symmetric device matrix, empty diagonal") {
    NetworkConfig cfg = table_defaults();
    cfg.n_devices = 12;
    cfg.n_aps = 2;
    const Placement placement = sample_placement(cfg, 3);
    const LinkStatics statics = link_statics(cfg, placement, 4);
    for (double v : statics.avg_snr_ap_dev) CHECK(v > 0.0);
    for (int k = 0; k < cfg.n_devices; ++k) {
        CHECK(statics.dev_dev(k, k) == 0.0);
        for (int j = k + 1; j < cfg.n_devices; ++j) {
            CHECK(statics.dev_dev(k, j) == statics.dev_dev(j, k));
            CHECK(statics.dev_dev(k, j) > 0.0);
        }
    }
}

TEST_CASE("MMSE error variance follows 1/(1 + L rho) and shrinks with pilots") {
    CHECK(mmse_error_variance(10, 10.0) == doctest::Approx(1.0 / 101.0));
    CHECK(mmse_error_variance(0, 10.0) == 1.0);
    double prev = 1.0;
    for (int pilots = 1; pilots <= 64; pilots *= 2) {
        const double v = mmse_error_variance(pilots, 3.0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("perfect CSI reproduces the true SNRs bitwise") {
    const LinkStatics statics = iid_link_statics(3, 10, 5.0);
    const ChannelRealization real = sample_cycle(statics, 0, CsiMode::perfect, 42);
    CHECK(real.g_ap_dev == real.g_hat_ap_dev);
    for (double g : real.g_ap_dev) CHECK(g >= 0.0);
}

TEST_CASE("imperfect CSI with zero pilots is rejected") {
    const LinkStatics statics = iid_link_statics(1, 2, 1.0);
    CHECK_THROWS_AS(sample_cycle(statics, 0, CsiMode::imperfect, 1), std::invalid_argument);
}

TEST_CASE("identical seeds reproduce identical realizations") {
    const LinkStatics statics = iid_link_statics(2, 6, 2.0);
    const ChannelRealization a = sample_cycle(statics, 4, CsiMode::imperfect, 7);
    const ChannelRealization b = sample_cycle(statics, 4, CsiMode::imperfect, 7);
    const ChannelRealization c = sample_cycle(statics, 4, CsiMode::imperfect, 8);
    CHECK(a.g_ap_dev == b.g_ap_dev);
    CHECK(a.g_hat_ap_dev == b.g_hat_ap_dev);
    CHECK(a.g_dev_dev == b.g_dev_dev);
    CHECK_FALSE(a.g_ap_dev == c.g_ap_dev);
}

TEST_CASE("fades have unit mean power and the estimate splits it as 1 - sigma_e") {
    const double rho = 10.0;
    const int pilots = 10;
    const LinkStatics statics = iid_link_statics(10, 100, rho);
    double sum_true = 0.0;
    double sum_est = 0.0;
    std::int64_t count = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const ChannelRealization real = sample_cycle(statics, pilots, CsiMode::imperfect, seed);
        for (std::size_t i = 0; i < real.g_ap_dev.size(); ++i) {
            sum_true += real.g_ap_dev[i] / rho;
            sum_est += real.g_hat_ap_dev[i] / rho;
            ++count;
        }
    }
    const double mean_true = sum_true / static_cast<double>(count);
    const double mean_est = sum_est / static_cast<double>(count);
    CHECK(std::fabs(mean_true - 1.0) < 0.005);
    CHECK(std::fabs(mean_est + mmse_error_variance(pilots, rho) - 1.0) < 0.005);
}

TEST_CASE("device-device fades are reciprocal within a cycle") {
    const LinkStatics statics = iid_link_statics(1, 8, 1.0);
    const ChannelRealization real = sample_cycle(statics, 0, CsiMode::perfect, 3);
    for (int k = 0; k < 8; ++k)
        for (int j = k + 1; j < 8; ++j) CHECK(real.dev_dev(k, j) == real.dev_dev(j, k));
}

TEST_CASE("config invariants are enforced") {
    NetworkConfig cfg = table_defaults();
    cfg.n_devices = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = table_defaults();
    cfg.blockage_a = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = table_defaults();
    cfg.blockage_b_m = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_NOTHROW(table_defaults().validate());
}
