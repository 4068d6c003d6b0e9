#include "andcoop/engine.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "andcoop/rng.hpp"

namespace andcoop {

namespace {

constexpr std::uint64_t kTagPlacementSeed = 0x01;
constexpr std::uint64_t kTagStaticsSeed = 0x02;
constexpr std::uint64_t kTagFadingSeed = 0x03;
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 position i of the stream keyed by (master, tag): a bijection of
// i, so child seeds never collide.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index) {
    return mix64(derive_key(master, tag) + index * kGolden);
}

struct WorkerTotals {
    std::int64_t outage = 0;
    std::int64_t overflow = 0;
    std::vector<std::int64_t> k_weak_histogram;
};

} // namespace

void RunSpec::validate() const {
    cfg.validate();
    params.validate();
    if (n_cycles < 1) throw std::invalid_argument("run: n_cycles must be >= 1");
    if (block_size < 1) throw std::invalid_argument("run: block_size must be >= 1");
    if (placement_mode == PlacementMode::fixed && !fixed_placement && !iid_snr)
        throw std::invalid_argument("run: fixed placement mode needs a placement");
    if (iid_snr && !(*iid_snr > 0.0))
        throw std::invalid_argument("run: iid_snr must be positive");
    if (params.scheme == Scheme::k_best) {
        if (params.k_best > cfg.n_devices)
            throw std::invalid_argument("run: k_best exceeds the device count");
        if (params.csi != CsiMode::perfect)
            throw std::invalid_argument("run: the k_best scheduler is genie-aided (perfect CSI)");
    }
}

EstimateWithCI EstimateWithCI::from_counts(std::int64_t events, std::int64_t cycles) {
    EstimateWithCI est;
    est.n_events = events;
    est.n_cycles = cycles;
    est.estimate = static_cast<double>(events) / static_cast<double>(cycles);
    est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(cycles));
    return est;
}

double RunStats::mean_k_weak() const {
    std::int64_t cycles = 0;
    std::int64_t weighted = 0;
    for (std::size_t k = 0; k < k_weak_histogram.size(); ++k) {
        cycles += k_weak_histogram[k];
        weighted += static_cast<std::int64_t>(k) * k_weak_histogram[k];
    }
    return cycles == 0 ? 0.0 : static_cast<double>(weighted) / static_cast<double>(cycles);
}

double RunStats::mean_relay_energy_j() const {
    if (relay_energy_samples.empty()) return 0.0;
    double sum = 0.0;
    for (double e : relay_energy_samples) sum += e;
    return sum / static_cast<double>(relay_energy_samples.size());
}

RunStats run(const RunSpec& spec, int n_workers) {
    spec.validate();

    const std::int64_t n_cycles = spec.n_cycles;
    const std::int64_t block_size =
        spec.placement_mode == PlacementMode::resample_per_cycle ? 1 : spec.block_size;
    const std::int64_t n_blocks = (n_cycles + block_size - 1) / block_size;

    int workers = n_workers > 0 ? n_workers : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (workers > n_blocks) workers = static_cast<int>(n_blocks);

    RunStats stats;
    stats.k_weak_histogram.assign(static_cast<std::size_t>(spec.cfg.n_devices) + 1, 0);
    if (spec.collect_energy_samples)
        stats.relay_energy_samples.assign(static_cast<std::size_t>(n_cycles), 0.0);

    const bool iid = spec.iid_snr.has_value();
    const LinkStatics shared_statics =
        iid ? iid_link_statics(spec.cfg.n_aps, spec.cfg.n_devices, *spec.iid_snr) : LinkStatics{};

    auto statics_for_block = [&](std::int64_t block) -> LinkStatics {
        if (iid) return shared_statics;
        const std::uint64_t block_key =
            spec.placement_mode == PlacementMode::fixed ? 0 : static_cast<std::uint64_t>(block);
        Placement placement =
            spec.placement_mode == PlacementMode::fixed && spec.fixed_placement
                ? *spec.fixed_placement
                : sample_placement(spec.cfg, child_seed(spec.master_seed, kTagPlacementSeed, block_key));
        return link_statics(spec.cfg, placement,
                            child_seed(spec.master_seed, kTagStaticsSeed, block_key));
    };

    std::vector<WorkerTotals> totals(static_cast<std::size_t>(workers));
    std::vector<std::thread> threads;
    std::exception_ptr first_error;
    std::mutex error_mutex;

    const std::int64_t blocks_per_worker = (n_blocks + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t block_begin = static_cast<std::int64_t>(w) * blocks_per_worker;
        const std::int64_t block_end = std::min<std::int64_t>(n_blocks, block_begin + blocks_per_worker);
        if (block_begin >= block_end) break;
        threads.emplace_back([&, w, block_begin, block_end] {
            try {
                WorkerTotals& local = totals[static_cast<std::size_t>(w)];
                local.k_weak_histogram.assign(stats.k_weak_histogram.size(), 0);
                for (std::int64_t block = block_begin; block < block_end; ++block) {
                    const LinkStatics statics = statics_for_block(block);
                    const std::int64_t cycle_begin = block * block_size;
                    const std::int64_t cycle_end = std::min(n_cycles, cycle_begin + block_size);
                    for (std::int64_t cycle = cycle_begin; cycle < cycle_end; ++cycle) {
                        const CsiMode draw_mode =
                            spec.params.scheme == Scheme::k_best ? CsiMode::perfect : spec.params.csi;
                        const ChannelRealization realization =
                            sample_cycle(statics, spec.params.pilots, draw_mode,
                                         child_seed(spec.master_seed, kTagFadingSeed,
                                                    static_cast<std::uint64_t>(cycle)));
                        CycleOutcome outcome;
                        if (spec.params.scheme == Scheme::k_best) {
                            outcome = run_cycle_k_best(realization, spec.params.k_best, spec.cfg);
                        } else {
                            const Schedule schedule =
                                build_schedule(realization, spec.params, spec.cfg);
                            outcome = run_cycle(realization, schedule, spec.params, spec.cfg);
                        }
                        local.outage += outcome.system_outage ? 1 : 0;
                        local.overflow += outcome.overflow ? 1 : 0;
                        local.k_weak_histogram[static_cast<std::size_t>(outcome.k_weak)] += 1;
                        if (spec.collect_energy_samples)
                            stats.relay_energy_samples[static_cast<std::size_t>(cycle)] =
                                outcome.mean_relay_energy_j();
                    }
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);

    std::int64_t outage_events = 0;
    std::int64_t overflow_events = 0;
    for (const WorkerTotals& local : totals) {
        outage_events += local.outage;
        overflow_events += local.overflow;
        for (std::size_t k = 0; k < local.k_weak_histogram.size(); ++k)
            stats.k_weak_histogram[k] += local.k_weak_histogram[k];
    }
    stats.outage = EstimateWithCI::from_counts(outage_events, n_cycles);
    stats.n_overflow = overflow_events;
    stats.overflow_rate = static_cast<double>(overflow_events) / static_cast<double>(n_cycles);
    return stats;
}

std::vector<SweepRow> sweep(std::span<const RunSpec> specs, std::span<const double> axis_values,
                            int n_workers) {
    if (specs.empty()) throw std::invalid_argument("sweep: no specs given");
    if (!axis_values.empty() && axis_values.size() != specs.size())
        throw std::invalid_argument("sweep: axis length disagrees with spec count");

    std::vector<SweepRow> rows;
    rows.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        SweepRow row;
        row.axis_value = axis_values.empty() ? static_cast<double>(i) : axis_values[i];
        try {
            row.stats = run(specs[i], n_workers);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace andcoop
