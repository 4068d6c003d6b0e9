#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "andcoop/channel.hpp"
#include "andcoop/config.hpp"
#include "andcoop/protocol.hpp"

namespace andcoop {

enum class PlacementMode {
    fixed,              // caller-supplied geometry, one shadowing draw
    resample_per_cycle, // fresh geometry and shadowing every cycle
    resample_per_block, // fresh geometry and shadowing every block_size cycles
};

/// Everything one replication campaign needs. Each cycle's randomness is
/// derived from (master_seed, cycle index), so results are independent of
/// how cycles are assigned to workers.
struct RunSpec {
    NetworkConfig cfg;
    ProtocolParams params;
    std::int64_t n_cycles = 0;
    std::uint64_t master_seed = 0;
    PlacementMode placement_mode = PlacementMode::resample_per_block;
    int block_size = 100;
    std::optional<Placement> fixed_placement;
    /// Nominal linear SNR applied to every link; replaces geometry, path
    /// loss and shadowing with the i.i.d. simplification.
    std::optional<double> iid_snr;
    bool collect_energy_samples = true;

    void validate() const;
};

struct EstimateWithCI {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t n_cycles = 0;
    std::int64_t n_events = 0;

    static EstimateWithCI from_counts(std::int64_t events, std::int64_t cycles);
};

struct RunStats {
    EstimateWithCI outage;
    std::vector<std::int64_t> k_weak_histogram; // index = weak-set size, 0..N
    std::vector<double> relay_energy_samples;   // per-cycle mean device energy, J
    std::int64_t n_overflow = 0;
    double overflow_rate = 0.0;

    double mean_k_weak() const;
    double mean_relay_energy_j() const;
};

/// Runs spec.n_cycles independent cycles and aggregates. Bit-identical
/// results for equal specs regardless of n_workers (0 = hardware threads).
RunStats run(const RunSpec& spec, int n_workers = 0);

struct SweepRow {
    double axis_value = 0.0;
    RunStats stats;
    std::string error; // nonempty when this spec failed; other rows still run
};

/// One run per spec, in input order, with the caller's axis value attached.
std::vector<SweepRow> sweep(std::span<const RunSpec> specs, std::span<const double> axis_values,
                            int n_workers = 0);

} // namespace andcoop
