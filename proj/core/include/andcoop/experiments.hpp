#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "andcoop/scenario.hpp"

namespace andcoop {

inline constexpr std::string_view kVersion = "0.1.0";

/// Command-line overrides applied on top of the scenario file before the
/// effective configuration is frozen into the manifest.
struct ExecuteOverrides {
    std::optional<std::int64_t> cycles;
    std::optional<std::uint64_t> seed;
    int workers = 0; // 0: hardware concurrency; results are worker-independent
};

/// Runs the scenario's experiment and writes results.csv, manifest.txt and
/// the per-kind extras into out_dir (created if needed). The manifest embeds
/// the effective scenario, so any row can be regenerated bit-exactly from it.
/// Throws ScenarioError for configuration problems.
void execute(const ScenarioFile& scenario, const std::filesystem::path& out_dir,
             const ExecuteOverrides& overrides = {});

/// Recovers the effective scenario embedded in a manifest.
ScenarioFile scenario_from_manifest(const std::filesystem::path& manifest_path);

} // namespace andcoop
