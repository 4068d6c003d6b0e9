#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "andcoop/config.hpp"
#include "andcoop/coverage.hpp"
#include "andcoop/engine.hpp"
#include "andcoop/protocol.hpp"

namespace andcoop {

/// Configuration-level failure: unknown key, bad value, missing section,
/// or an invariant violation. The message carries file and line when known.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
    single,
    power_sweep,
    rate_sweep,
    population_sweep,
    dmt,
    optimize,
    coverage,
    pilot_tradeoff,
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view name);

struct RunSection {
    std::int64_t cycles = 100000;
    std::uint64_t seed = 1;
    PlacementMode placement = PlacementMode::resample_per_block;
    int block_size = 100;
    std::optional<double> iid_snr_db;
    std::optional<Placement> fixed_placement;

    bool operator==(const RunSection&) const = default;
};

struct ExperimentSection {
    ExperimentKind kind = ExperimentKind::single;

    std::vector<double> power_grid_dbm;
    std::vector<double> payload_grid_bytes;
    std::vector<double> pilot_grid;
    std::vector<double> beta_grid;
    std::vector<double> theta_grid;
    std::vector<int> population_grid;
    int r_grid_points = 101;
    std::int64_t cycles_per_point = 0; // 0: inherit run.cycles
    bool analytic = false;

    // coverage-map inputs
    int grid_resolution = 100;
    Point2D ap_position{50.0, 50.0};
    int ap_antennas = 4;
    std::vector<Point2D> relay_positions;
    std::optional<Wall> wall;
    double target_outage = 1e-9;
    double rate_bpcu = 1.0;

    bool operator==(const ExperimentSection&) const = default;
};

struct ScenarioFile {
    NetworkConfig network;
    ProtocolParams protocol;
    RunSection run;
    ExperimentSection experiment;

    bool operator==(const ScenarioFile&) const = default;

    /// Cross-field checks beyond what parsing can see; throws ScenarioError.
    void validate() const;

    MapSpec coverage_spec() const;
    RunSpec run_spec() const;
};

/// Parses a scenario config file. Unknown keys, malformed values and missing
/// sections raise ScenarioError with a file:line reference. Values not
/// present keep their documented defaults.
ScenarioFile parse_scenario(const std::string& path);
ScenarioFile parse_scenario_text(std::string_view text, const std::string& origin);

/// Canonical full-form text such that parse(emit(s)) == s.
std::string emit_scenario(const ScenarioFile& scenario);

namespace detail {
/// Shortest round-trip decimal form of v (std::to_chars).
std::string format_double(double v);
}

} // namespace andcoop
