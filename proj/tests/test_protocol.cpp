#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "andcoop/link_math.hpp"
#include "andcoop/protocol.hpp"
#include "andcoop/rng.hpp"
#include "oracles.hpp"

using namespace andcoop;

namespace {

NetworkConfig small_cfg(int n_devices, int n_aps) {
    NetworkConfig cfg;
    cfg.n_devices = n_devices;
    cfg.n_aps = n_aps;
    return cfg;
}

ProtocolParams andcoop_params(double beta) {
    ProtocolParams p;
    p.beta = beta;
    return p;
}

} // namespace

TEST_CASE("strong-set selection: empty budget, prefix semantics") {
    const double payload = 100.0; // bits
    const std::vector<double> rates{1000.0, 500.0, 200.0};
    CHECK(select_strong_set(rates, 0.0, 1.0, payload).empty());
    // airtimes are 0.1, 0.2, 0.5 s: the 0.3 s budget fits exactly two.
    const auto picked = select_strong_set(rates, 0.3, 1.0, payload);
    REQUIRE(picked.size() == 2);
    CHECK(picked[0] == 0);
    CHECK(picked[1] == 1);
}

TEST_CASE("strong-set selection never picks zero-rate devices") {
    const std::vector<double> rates{0.0, 0.0};
    CHECK(select_strong_set(rates, 100.0, 1.0, 8.0).empty());
}

TEST_CASE("stable index order breaks rate ties") {
    const std::vector<double> rates{500.0, 500.0, 500.0};
    const auto picked = select_strong_set(rates, 0.5, 1.0, 100.0);
    REQUIRE(picked.size() == 2);
    CHECK(picked[0] == 0);
    CHECK(picked[1] == 1);
}

TEST_CASE("greedy prefix matches the exhaustive maximum-cardinality oracle") {
    Philox rng(21, 0);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 9.0);
        std::vector<double> rates(static_cast<std::size_t>(n));
        for (double& r : rates) r = rng.uniform() < 0.1 ? 0.0 : 200.0 + 2000.0 * rng.uniform();
        const double tau = rng.uniform();
        const double theta = 0.25 + 0.75 * rng.uniform();
        const auto picked = select_strong_set(rates, tau, theta, 100.0);
        const int oracle = testing::exhaustive_strong_cardinality(rates, tau, theta, 100.0);
        CHECK(static_cast<int>(picked.size()) == oracle);
        // every selected device rates at least as high as every excluded one
        double min_in = std::numeric_limits<double>::infinity();
        for (int dev : picked) min_in = std::min(min_in, rates[static_cast<std::size_t>(dev)]);
        std::vector<bool> in(static_cast<std::size_t>(n), false);
        for (int dev : picked) in[static_cast<std::size_t>(dev)] = true;
        for (int dev = 0; dev < n; ++dev)
            if (!in[static_cast<std::size_t>(dev)])
                CHECK(rates[static_cast<std::size_t>(dev)] <= min_in);
    }
}

TEST_CASE("beta = 0 degenerates to an all-weak schedule with the load rates") {
    const NetworkConfig cfg = small_cfg(50, 1);
    const LinkStatics statics = iid_link_statics(1, 50, 10.0);
    const ChannelRealization real = sample_cycle(statics, 0, CsiMode::perfect, 1);
    const Schedule schedule = build_schedule(real, andcoop_params(0.0), cfg);
    CHECK(schedule.strong_set.empty());
    CHECK(schedule.weak_set.size() == 50);
    // 50 devices * 400 bits over half of 1 ms: 40 Mbps on both hops
    CHECK(schedule.broadcast_rate_bps == doctest::Approx(40e6));
    CHECK(schedule.relay_rate_bps == doctest::Approx(40e6));
    CHECK(schedule.t_single_hop_s == 0.0);
    CHECK(schedule.t_two_hop_s == doctest::Approx(1e-3));
}

TEST_CASE("pilot overhead shrinks the data time and can exhaust the cycle") {
    NetworkConfig cfg = small_cfg(50, 1);
    ProtocolParams params = andcoop_params(0.5);
    params.csi = CsiMode::imperfect;
    params.theta = 0.8;
    params.pilots = 10;
    const LinkStatics statics = iid_link_statics(1, 50, 10.0);
    const ChannelRealization real = sample_cycle(statics, params.pilots, CsiMode::imperfect, 1);
    const Schedule schedule = build_schedule(real, params, cfg);
    CHECK(schedule.t_data_s == doctest::Approx(1e-3 - 50.0 * 10.0 / 20e6));

    params.pilots = 400; // 50 * 400 / 20 MHz = the whole 1 ms cycle
    const ChannelRealization real2 = sample_cycle(statics, params.pilots, CsiMode::imperfect, 1);
    CHECK_THROWS_AS(build_schedule(real2, params, cfg), std::invalid_argument);
}

TEST_CASE("partition and single-hop time budget hold on random cycles") {
    const NetworkConfig cfg = small_cfg(20, 2);
    const LinkStatics statics = iid_link_statics(2, 20, 8.0);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const ChannelRealization real = sample_cycle(statics, 0, CsiMode::perfect, seed);
        const Schedule schedule = build_schedule(real, andcoop_params(0.37), cfg);
        std::vector<int> all = schedule.strong_set;
        all.insert(all.end(), schedule.weak_set.begin(), schedule.weak_set.end());
        std::sort(all.begin(), all.end());
        for (int j = 0; j < cfg.n_devices; ++j) CHECK(all[static_cast<std::size_t>(j)] == j);

        double airtime = 0.0;
        for (std::size_t s = 0; s < schedule.strong_set.size(); ++s)
            airtime += cfg.payload_bits() / schedule.strong_rates[s];
        CHECK(airtime <= schedule.t_single_hop_s * (1.0 + 1e-12));
    }
}

TEST_CASE("infinite-SNR cycles have no outage and everyone relays") {
    const NetworkConfig cfg = small_cfg(10, 1);
    LinkStatics statics = iid_link_statics(1, 10, 1.0);
    ChannelRealization real = sample_cycle(statics, 0, CsiMode::perfect, 2);
    for (double& g : real.g_ap_dev) g = 1e300;
    for (double& g : real.g_hat_ap_dev) g = 1e300;
    const Schedule schedule = build_schedule(real, andcoop_params(0.5), cfg);
    const CycleOutcome outcome = run_cycle(real, schedule, andcoop_params(0.5), cfg);
    CHECK_FALSE(outcome.system_outage);
    if (!schedule.weak_set.empty()) CHECK(outcome.relay_set.size() == 10);
}

TEST_CASE("perfect CSI with beta < 1 never fails a strong device") {
    const NetworkConfig cfg = small_cfg(15, 2);
    const LinkStatics statics = iid_link_statics(2, 15, 4.0);
    const ProtocolParams params = andcoop_params(0.6);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const ChannelRealization real = sample_cycle(statics, 0, CsiMode::perfect, seed);
        const Schedule schedule = build_schedule(real, params, cfg);
        const CycleOutcome outcome = run_cycle(real, schedule, params, cfg);
        for (int failed : outcome.failed_devices)
            CHECK(std::find(schedule.strong_set.begin(), schedule.strong_set.end(), failed) ==
                  schedule.strong_set.end());
        CHECK_FALSE(outcome.overflow);
    }
}

TEST_CASE("estimation error puts strong devices at risk and backing off the rate helps") {
    NetworkConfig cfg = small_cfg(8, 1);
    const double rho = 6.0;
    const LinkStatics statics = iid_link_statics(1, 8, rho);

    auto strong_failure_rate = [&](double theta) {
        ProtocolParams params;
        params.csi = CsiMode::imperfect;
        params.pilots = 2; // deliberately coarse estimates
        params.theta = theta;
        params.beta = 0.6;
        std::int64_t failures = 0;
        std::int64_t scheduled = 0;
        for (std::uint64_t seed = 0; seed < 4000; ++seed) {
            const ChannelRealization real =
                sample_cycle(statics, params.pilots, CsiMode::imperfect, seed);
            const Schedule schedule = build_schedule(real, params, cfg);
            const CycleOutcome outcome = run_cycle(real, schedule, params, cfg);
            scheduled += static_cast<std::int64_t>(schedule.strong_set.size());
            for (int failed : outcome.failed_devices)
                if (std::find(schedule.strong_set.begin(), schedule.strong_set.end(), failed) !=
                    schedule.strong_set.end())
                    ++failures;
        }
        REQUIRE(scheduled > 0);
        return static_cast<double>(failures) / static_cast<double>(scheduled);
    };

    const double at_full_rate = strong_failure_rate(1.0);
    const double backed_off = strong_failure_rate(0.7);
    CHECK(at_full_rate > 0.1); // overshooting estimates fail about half the time
    CHECK(backed_off < at_full_rate);
}

TEST_CASE("single-hop leftovers overflow and fail under beta = 1") {
    NetworkConfig cfg = small_cfg(40, 1);
    cfg.payload_bytes = 5000.0; // deliberately unschedulable load
    ProtocolParams params;
    params.scheme = Scheme::single_hop;
    const LinkStatics statics = iid_link_statics(1, 40, 2.0);
    const ChannelRealization real = sample_cycle(statics, 0, CsiMode::perfect, 5);
    const Schedule schedule = build_schedule(real, params, cfg);
    REQUIRE_FALSE(schedule.weak_set.empty());
    const CycleOutcome outcome = run_cycle(real, schedule, params, cfg);
    CHECK(outcome.overflow);
    CHECK(outcome.system_outage);
    CHECK(outcome.failed_devices.size() >= schedule.weak_set.size());
    CHECK(outcome.total_relay_energy_j() == 0.0);
}

TEST_CASE("forcing extra relays never converts a weak success into failure") {
    const NetworkConfig cfg = small_cfg(12, 1);
    const LinkStatics statics = iid_link_statics(1, 12, 3.0);
    const ProtocolParams params = andcoop_params(0.3);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const ChannelRealization real = sample_cycle(statics, 0, CsiMode::perfect, seed);
        const Schedule schedule = build_schedule(real, params, cfg);
        if (schedule.weak_set.empty() || schedule.relay_rate_bps == 0.0) continue;
        const CycleOutcome outcome = run_cycle(real, schedule, params, cfg);

        for (int extra = 0; extra < cfg.n_devices; ++extra) {
            std::vector<int> enlarged = outcome.relay_set;
            if (std::find(enlarged.begin(), enlarged.end(), extra) != enlarged.end()) continue;
            enlarged.push_back(extra);
            for (int j : schedule.weak_set) {
                const bool failed_before =
                    std::find(outcome.failed_devices.begin(), outcome.failed_devices.end(), j) !=
                    outcome.failed_devices.end();
                if (failed_before) continue;
                if (std::find(enlarged.begin(), enlarged.end(), j) != enlarged.end()) continue;
                double snr = real.ap_sum_true(j);
                for (int k : enlarged)
                    if (k != j) snr += real.dev_dev(k, j);
                CHECK(decode_succeeds(snr, schedule.relay_rate_bps, cfg.bandwidth_hz));
            }
        }
    }
}

TEST_CASE("relay energy accounting is exact") {
    const NetworkConfig cfg = small_cfg(20, 1);
    const LinkStatics statics = iid_link_statics(1, 20, 2.0);
    const ProtocolParams params = andcoop_params(0.4);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const ChannelRealization real = sample_cycle(statics, 0, CsiMode::perfect, seed);
        const Schedule schedule = build_schedule(real, params, cfg);
        const CycleOutcome outcome = run_cycle(real, schedule, params, cfg);
        if (schedule.weak_set.empty()) {
            CHECK(outcome.total_relay_energy_j() == 0.0);
            continue;
        }
        const double expected = static_cast<double>(outcome.relay_set.size()) * cfg.p_dev_w() *
                                (1.0 - params.alpha) * schedule.t_two_hop_s;
        CHECK(outcome.total_relay_energy_j() == doctest::Approx(expected).epsilon(1e-12));
        for (int dev = 0; dev < cfg.n_devices; ++dev) {
            const bool is_relay = std::find(outcome.relay_set.begin(), outcome.relay_set.end(),
                                            dev) != outcome.relay_set.end();
            CHECK((outcome.relay_energy_j[static_cast<std::size_t>(dev)] > 0.0) == is_relay);
        }
    }
}

TEST_CASE("scheme selectors reproduce the matching beta extremes cycle-for-cycle") {
    const NetworkConfig cfg = small_cfg(10, 2);
    const LinkStatics statics = iid_link_statics(2, 10, 5.0);
    ProtocolParams adaptive0 = andcoop_params(0.0);
    ProtocolParams two_hop;
    two_hop.scheme = Scheme::two_hop;
    ProtocolParams adaptive1 = andcoop_params(1.0);
    ProtocolParams single_hop;
    single_hop.scheme = Scheme::single_hop;

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const ChannelRealization real = sample_cycle(statics, 0, CsiMode::perfect, seed);
        const CycleOutcome a = run_cycle(real, build_schedule(real, adaptive0, cfg), adaptive0, cfg);
        const CycleOutcome b = run_cycle(real, build_schedule(real, two_hop, cfg), two_hop, cfg);
        CHECK(a.system_outage == b.system_outage);
        CHECK(a.relay_set == b.relay_set);
        CHECK(a.failed_devices == b.failed_devices);
        CHECK(a.relay_energy_j == b.relay_energy_j);

        const CycleOutcome c = run_cycle(real, build_schedule(real, adaptive1, cfg), adaptive1, cfg);
        const CycleOutcome d =
            run_cycle(real, build_schedule(real, single_hop, cfg), single_hop, cfg);
        CHECK(c.system_outage == d.system_outage);
        CHECK(c.failed_devices == d.failed_devices);
        CHECK(c.overflow == d.overflow);
    }
}

TEST_CASE("k_best with K = N matches the adaptive single-hop outage event") {
    const NetworkConfig cfg = small_cfg(8, 1);
    const LinkStatics statics = iid_link_statics(1, 8, 1.5);
    ProtocolParams single_hop;
    single_hop.scheme = Scheme::single_hop;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const ChannelRealization real = sample_cycle(statics, 0, CsiMode::perfect, seed);
        const CycleOutcome via_k = run_cycle_k_best(real, cfg.n_devices, cfg);
        const CycleOutcome via_schedule =
            run_cycle(real, build_schedule(real, single_hop, cfg), single_hop, cfg);
        CHECK(via_k.system_outage == via_schedule.system_outage);
    }
}

TEST_CASE("k_best outage for K = 1 matches the max-of-N order-statistics oracle") {
    NetworkConfig cfg = small_cfg(3, 1);
    cfg.payload_bytes = 2000.0;
    const double rho = 10.0;
    const LinkStatics statics = iid_link_statics(1, 3, rho);

    std::int64_t outages = 0;
    const std::int64_t cycles = 200000;
    for (std::int64_t seed = 0; seed < cycles; ++seed) {
        const ChannelRealization real =
            sample_cycle(statics, 0, CsiMode::perfect, static_cast<std::uint64_t>(seed));
        outages += run_cycle_k_best(real, 1, cfg).system_outage ? 1 : 0;
    }
    const double mc = static_cast<double>(outages) / static_cast<double>(cycles);
    const double se = std::sqrt(mc * (1.0 - mc) / static_cast<double>(cycles));

    // Outage happens iff even the best device needs more than the cycle:
    // quadrature over the density of the max of 3 unit exponentials below
    // the rate threshold.
    const double rate_needed = 3.0 * cfg.payload_bits() / cfg.cycle_t_s;
    const double threshold = (std::pow(2.0, rate_needed / cfg.bandwidth_hz) - 1.0) / rho;
    const auto max_density = [](double x) {
        const double f = std::exp(-x);
        const double cdf = -std::expm1(-x);
        return 3.0 * cdf * cdf * f;
    };
    const double oracle = testing::integrate(max_density, 0.0, threshold, 1e-12);
    CHECK(std::fabs(mc - oracle) < 3.0 * se);
}

TEST_CASE("protocol parameter invariants") {
    ProtocolParams p;
    p.beta = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ProtocolParams{};
    p.csi = CsiMode::imperfect;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument); // needs pilots >= 1
    p.pilots = 10;
    p.theta = 0.8;
    CHECK_NOTHROW(p.validate());
    p = ProtocolParams{};
    p.theta = 0.9; // perfect CSI pins theta at 1
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_THROWS_AS(run_cycle_k_best(sample_cycle(iid_link_statics(1, 2, 1.0), 0,
                                                  CsiMode::perfect, 1),
                                     3, small_cfg(2, 1)),
                    std::invalid_argument);
}
