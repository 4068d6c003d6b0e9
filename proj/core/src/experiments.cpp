#include "andcoop/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "andcoop/oracle.hpp"
#include "andcoop/optimizer.hpp"

namespace andcoop {

namespace {

using detail::format_double;

constexpr std::string_view kResultsHeader =
    "# andcoop results v1 (power dBm, rates bps, time s, energy J)\n"
    "axis,axis_value,beta,theta,pilots_l,eta_bpcu,outage,std_error,n_cycles,"
    "k2h_mean,overflow_rate,mean_relay_energy_j,source\n";

constexpr std::string_view kScenarioBegin = "--- scenario ---";
constexpr std::string_view kScenarioEnd = "--- end scenario ---";

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

struct ResultRow {
    std::string axis;
    double axis_value = 0.0;
    double beta = 0.0;
    double theta = 0.0;
    int pilots = 0;
    double eta_bpcu = 0.0;
    double outage = 0.0;
    double std_error = 0.0;
    std::int64_t n_cycles = 0;
    double k2h_mean = 0.0;
    double overflow_rate = 0.0;
    double mean_relay_energy_j = 0.0;
    std::string source; // "montecarlo" or "analytic"
};

void write_row(std::ostream& out, const ResultRow& row) {
    out << row.axis << ',' << format_double(row.axis_value) << ',' << format_double(row.beta)
        << ',' << format_double(row.theta) << ',' << row.pilots << ','
        << format_double(row.eta_bpcu) << ',' << format_double(row.outage) << ','
        << format_double(row.std_error) << ',' << row.n_cycles << ','
        << format_double(row.k2h_mean) << ',' << format_double(row.overflow_rate) << ','
        << format_double(row.mean_relay_energy_j) << ',' << row.source << '\n';
}

ResultRow row_from_stats(const RunSpec& spec, const RunStats& stats, std::string axis,
                         double axis_value) {
    ResultRow row;
    row.axis = std::move(axis);
    row.axis_value = axis_value;
    row.beta = spec.params.effective_beta();
    row.theta = spec.params.theta;
    row.pilots = spec.params.pilots;
    row.eta_bpcu = spec.cfg.spectral_efficiency_bpcu();
    row.outage = stats.outage.estimate;
    row.std_error = stats.outage.std_error;
    row.n_cycles = stats.outage.n_cycles;
    row.k2h_mean = stats.mean_k_weak();
    row.overflow_rate = stats.overflow_rate;
    row.mean_relay_energy_j = stats.mean_relay_energy_j();
    row.source = "montecarlo";
    return row;
}

// Two-hop phase rates with every device in the weak set, as the scheduler
// would fix them; used for the analytic rows.
IidScenario iid_scenario_for(const ScenarioFile& s, double snr_db) {
    IidScenario scn;
    scn.n_devices = s.network.n_devices;
    scn.n_aps = s.network.n_aps;
    scn.nominal_snr = db_to_linear(snr_db);
    scn.bandwidth_hz = s.network.bandwidth_hz;
    const double t_two_hop = s.network.cycle_t_s; // beta = 0, perfect CSI
    scn.rate_b_bps =
        s.network.payload_bits() * s.network.n_devices / (s.protocol.alpha * t_two_hop);
    scn.rate_r_bps =
        s.network.payload_bits() * s.network.n_devices / ((1.0 - s.protocol.alpha) * t_two_hop);
    return scn;
}

void write_histogram(const std::filesystem::path& path, const RunStats& stats) {
    auto out = open_output(path);
    out << "k_weak,count\n";
    for (std::size_t k = 0; k < stats.k_weak_histogram.size(); ++k)
        out << k << ',' << stats.k_weak_histogram[k] << '\n';
}

void write_energy_cdf(const std::filesystem::path& path, const RunStats& stats) {
    auto out = open_output(path);
    out << "mean_relay_energy_j,cdf\n";
    std::vector<double> samples = stats.relay_energy_samples;
    std::sort(samples.begin(), samples.end());
    const auto n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
        out << format_double(samples[i]) << ',' << format_double((i + 1) / n) << '\n';
    }
}

void run_single(const ScenarioFile& s, const std::filesystem::path& out_dir, int workers,
                std::ostream& results) {
    const RunSpec spec = s.run_spec();
    const RunStats stats = run(spec, workers);
    write_row(results, row_from_stats(spec, stats, "none", 0.0));
    write_histogram(out_dir / "k2h_histogram.csv", stats);
    write_energy_cdf(out_dir / "energy_cdf.csv", stats);
}

void run_power_sweep(const ScenarioFile& s, int workers, std::ostream& results) {
    std::vector<RunSpec> specs;
    for (double p : s.experiment.power_grid_dbm) {
        RunSpec spec = s.run_spec();
        if (spec.iid_snr) {
            // In nominal-SNR mode the power axis sets the per-link SNR in dB.
            spec.iid_snr = db_to_linear(p);
        } else {
            spec.cfg.p_ap_dbm = p;
            spec.cfg.p_dev_dbm = p;
        }
        specs.push_back(std::move(spec));
    }
    const auto rows = sweep(specs, s.experiment.power_grid_dbm, workers);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].error.empty()) {
            results << "# power_dbm=" << format_double(rows[i].axis_value)
                    << " failed: " << rows[i].error << '\n';
            continue;
        }
        write_row(results,
                  row_from_stats(specs[i], rows[i].stats, "power_dbm", rows[i].axis_value));
    }
    if (s.experiment.analytic) {
        for (double p : s.experiment.power_grid_dbm) {
            const IidScenario scn = iid_scenario_for(s, p);
            ResultRow row;
            row.axis = "power_dbm";
            row.axis_value = p;
            row.beta = 0.0;
            row.theta = s.protocol.theta;
            row.pilots = s.protocol.pilots;
            row.eta_bpcu = s.network.spectral_efficiency_bpcu();
            row.outage = p2h_closed_form(scn);
            row.source = "analytic";
            write_row(results, row);
        }
    }
}

void run_rate_sweep(const ScenarioFile& s, int workers, std::ostream& results) {
    std::vector<RunSpec> specs;
    for (double payload : s.experiment.payload_grid_bytes) {
        RunSpec spec = s.run_spec();
        spec.cfg.payload_bytes = payload;
        specs.push_back(std::move(spec));
    }
    const auto rows = sweep(specs, s.experiment.payload_grid_bytes, workers);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].error.empty()) {
            results << "# payload_bytes=" << format_double(rows[i].axis_value)
                    << " failed: " << rows[i].error << '\n';
            continue;
        }
        write_row(results,
                  row_from_stats(specs[i], rows[i].stats, "payload_bytes", rows[i].axis_value));
    }
}

void run_population_sweep(const ScenarioFile& s, int workers, std::ostream& results) {
    std::vector<RunSpec> specs;
    std::vector<double> axis;
    for (int n : s.experiment.population_grid) {
        RunSpec spec = s.run_spec();
        spec.cfg.n_devices = n;
        spec.fixed_placement.reset(); // sizes follow the population axis
        if (spec.placement_mode == PlacementMode::fixed && !spec.iid_snr)
            spec.placement_mode = PlacementMode::resample_per_block;
        specs.push_back(std::move(spec));
        axis.push_back(static_cast<double>(n));
    }
    const auto rows = sweep(specs, axis, workers);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].error.empty()) {
            results << "# n_devices=" << format_double(rows[i].axis_value)
                    << " failed: " << rows[i].error << '\n';
            continue;
        }
        write_row(results,
                  row_from_stats(specs[i], rows[i].stats, "n_devices", rows[i].axis_value));
    }
}

void run_dmt(const ScenarioFile& s, const std::filesystem::path& out_dir, std::ostream& results) {
    const int m = s.network.n_aps;
    const int n = s.network.n_devices;

    std::vector<double> r_grid(static_cast<std::size_t>(s.experiment.r_grid_points));
    for (std::size_t i = 0; i < r_grid.size(); ++i)
        r_grid[i] = static_cast<double>(i) / (r_grid.size() - 1);
    const DmtBounds single = dmt_single_hop(m, n, r_grid);
    const DmtCurve two_hop = dmt_two_hop(m, n, s.protocol.alpha, r_grid);

    {
        auto out = open_output(out_dir / "dmt_curves.csv");
        out << "r,single_hop_lower,single_hop_upper,two_hop\n";
        for (std::size_t i = 0; i < r_grid.size(); ++i)
            out << format_double(r_grid[i]) << ',' << format_double(single.lower.diversity[i])
                << ',' << format_double(single.upper.diversity[i]) << ','
                << format_double(two_hop.diversity[i]) << '\n';
    }
    {
        auto out = open_output(out_dir / "kbest_diversity.csv");
        out << "k,diversity_order\n";
        for (int k = 1; k <= n; ++k) out << k << ',' << diversity_k_best(m, n, k) << '\n';
    }

    // Deep-tail outage of the all-two-hop scheme on the nominal-SNR channel;
    // the power axis sets the per-link SNR in dB.
    std::vector<std::pair<double, double>> curve;
    for (double p : s.experiment.power_grid_dbm) {
        const double outage = p2h_closed_form(iid_scenario_for(s, p));
        if (!(outage > 0.0)) break;
        curve.emplace_back(db_to_linear(p), outage);

        ResultRow row;
        row.axis = "power_dbm";
        row.axis_value = p;
        row.theta = s.protocol.theta;
        row.eta_bpcu = s.network.spectral_efficiency_bpcu();
        row.outage = outage;
        row.source = "analytic";
        write_row(results, row);
    }
    if (curve.size() >= 3) {
        const auto slopes = empirical_outage_exponent(curve);
        auto out = open_output(out_dir / "outage_exponent.csv");
        out << "outage,slope\n";
        for (const SlopePoint& p : slopes)
            out << format_double(p.outage) << ',' << format_double(p.slope) << '\n';
    }
}

void run_optimize(const ScenarioFile& s, const std::filesystem::path& out_dir, int workers,
                  std::ostream& results) {
    OptSpec opt;
    opt.base = s.run_spec();
    opt.beta_grid = s.experiment.beta_grid;
    opt.theta_grid = s.experiment.theta_grid;
    opt.fixed_pilots = s.protocol.csi == CsiMode::imperfect ? s.protocol.pilots : 0;
    opt.cycles_per_point =
        s.experiment.cycles_per_point > 0 ? s.experiment.cycles_per_point : s.run.cycles;

    const OptResult result = optimize(opt, workers);

    {
        auto out = open_output(out_dir / "surface.csv");
        out << "beta,theta,outage,std_error\n";
        for (const OptPoint& p : result.surface) {
            if (!p.error.empty()) {
                out << "# beta=" << format_double(p.beta) << " theta=" << format_double(p.theta)
                    << " failed: " << p.error << '\n';
                continue;
            }
            out << format_double(p.beta) << ',' << format_double(p.theta) << ','
                << format_double(p.outage.estimate) << ',' << format_double(p.outage.std_error)
                << '\n';
        }
    }

    ResultRow row;
    row.axis = "optimum";
    row.axis_value = 0.0;
    row.beta = result.beta_hat;
    row.theta = result.theta_hat;
    row.pilots = opt.fixed_pilots;
    row.eta_bpcu = s.network.spectral_efficiency_bpcu();
    row.outage = result.outage_at_opt.estimate;
    row.std_error = result.outage_at_opt.std_error;
    row.n_cycles = result.outage_at_opt.n_cycles;
    row.source = "montecarlo";
    write_row(results, row);
}

void run_coverage(const ScenarioFile& s, const std::filesystem::path& out_dir,
                  std::ostream& results) {
    const CoverageResult cov = compute_coverage(s.coverage_spec());
    const int res = cov.grid_resolution;

    auto write_matrix = [&](const std::filesystem::path& path, auto&& value_at) {
        auto out = open_output(path);
        for (int iy = 0; iy < res; ++iy) {
            for (int ix = 0; ix < res; ++ix) {
                if (ix) out << ',';
                out << value_at(static_cast<std::size_t>(iy) * res + ix);
            }
            out << '\n';
        }
    };

    for (int phase = 0; phase < 3; ++phase) {
        const std::string name = kCoveragePhaseNames[static_cast<std::size_t>(phase)];
        write_matrix(out_dir / ("coverage_snr_" + name + ".csv"),
                     [&](std::size_t i) { return format_double(cov.snr_db[phase][i]); });
        write_matrix(out_dir / ("coverage_covered_" + name + ".csv"),
                     [&](std::size_t i) { return static_cast<int>(cov.covered[phase][i]); });
    }
    write_matrix(out_dir / "coverage_covered_combined.csv",
                 [&](std::size_t i) { return static_cast<int>(cov.covered_combined[i]); });

    {
        auto out = open_output(out_dir / "coverage_summary.csv");
        out << "phase,rate_bpcu,target_outage,coverage_fraction\n";
        const std::array<double, 4> rates{s.experiment.rate_bpcu, 2.0 * s.experiment.rate_bpcu,
                                          2.0 * s.experiment.rate_bpcu, 2.0 * s.experiment.rate_bpcu};
        for (int phase = 0; phase < 3; ++phase)
            out << kCoveragePhaseNames[static_cast<std::size_t>(phase)] << ','
                << format_double(rates[static_cast<std::size_t>(phase)]) << ','
                << format_double(s.experiment.target_outage) << ','
                << format_double(cov.coverage_fraction[static_cast<std::size_t>(phase)]) << '\n';
        out << "combined," << format_double(rates[3]) << ','
            << format_double(s.experiment.target_outage) << ','
            << format_double(cov.coverage_fraction_combined) << '\n';
    }

    // results.csv carries the area fraction missing the target as an
    // outage-like quantity per phase.
    const std::array<double, 4> fractions{cov.coverage_fraction[0], cov.coverage_fraction[1],
                                          cov.coverage_fraction[2], cov.coverage_fraction_combined};
    const std::array<const char*, 4> names{"single_hop", "broadcast", "relay", "combined"};
    for (std::size_t i = 0; i < 4; ++i) {
        ResultRow row;
        row.axis = names[i];
        row.axis_value = static_cast<double>(i);
        row.eta_bpcu = s.experiment.rate_bpcu;
        row.outage = 1.0 - fractions[i];
        row.source = "analytic";
        write_row(results, row);
    }
}

void run_pilot_tradeoff(const ScenarioFile& s, int workers, std::ostream& results) {
    const std::int64_t cycles =
        s.experiment.cycles_per_point > 0 ? s.experiment.cycles_per_point : s.run.cycles;
    for (double pilots : s.experiment.pilot_grid) {
        for (double theta : s.experiment.theta_grid) {
            RunSpec spec = s.run_spec();
            spec.params.pilots = static_cast<int>(std::llround(pilots));
            spec.params.theta = theta;
            spec.n_cycles = cycles;
            try {
                const RunStats stats = run(spec, workers);
                write_row(results, row_from_stats(spec, stats, "pilots_l", pilots));
            } catch (const std::exception& e) {
                results << "# pilots_l=" << format_double(pilots)
                        << " theta=" << format_double(theta) << " failed: " << e.what() << '\n';
            }
        }
    }
}

} // namespace

void execute(const ScenarioFile& scenario, const std::filesystem::path& out_dir,
             const ExecuteOverrides& overrides) {
    ScenarioFile effective = scenario;
    if (overrides.cycles) {
        effective.run.cycles = *overrides.cycles;
        if (effective.experiment.cycles_per_point != 0)
            effective.experiment.cycles_per_point = *overrides.cycles;
    }
    if (overrides.seed) effective.run.seed = *overrides.seed;
    effective.validate();

#ifndef ANDCOOP_GIT_DESCRIBE
#define ANDCOOP_GIT_DESCRIBE "unreleased"
#endif

    std::filesystem::create_directories(out_dir);
    {
        auto manifest = open_output(out_dir / "manifest.txt");
        manifest << "# andcoop run manifest\n";
        manifest << "version = " << kVersion << " (" << ANDCOOP_GIT_DESCRIBE << ")\n";
        manifest << kScenarioBegin << "\n";
        manifest << emit_scenario(effective);
        manifest << kScenarioEnd << "\n";
    }

    auto results = open_output(out_dir / "results.csv");
    results << kResultsHeader;

    switch (effective.experiment.kind) {
    case ExperimentKind::single:
        run_single(effective, out_dir, overrides.workers, results);
        break;
    case ExperimentKind::power_sweep:
        run_power_sweep(effective, overrides.workers, results);
        break;
    case ExperimentKind::rate_sweep:
        run_rate_sweep(effective, overrides.workers, results);
        break;
    case ExperimentKind::population_sweep:
        run_population_sweep(effective, overrides.workers, results);
        break;
    case ExperimentKind::dmt:
        run_dmt(effective, out_dir, results);
        break;
    case ExperimentKind::optimize:
        run_optimize(effective, out_dir, overrides.workers, results);
        break;
    case ExperimentKind::coverage:
        run_coverage(effective, out_dir, results);
        break;
    case ExperimentKind::pilot_tradeoff:
        run_pilot_tradeoff(effective, overrides.workers, results);
        break;
    }
}

ScenarioFile scenario_from_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw ScenarioError(manifest_path.string() + ": cannot open manifest");
    std::string line;
    std::string scenario_text;
    bool inside = false;
    bool found = false;
    while (std::getline(in, line)) {
        if (line == kScenarioBegin) {
            inside = true;
            found = true;
            continue;
        }
        if (line == kScenarioEnd) break;
        if (inside) scenario_text += line + "\n";
    }
    if (!found)
        throw ScenarioError(manifest_path.string() + ": no embedded scenario found");
    return parse_scenario_text(scenario_text, manifest_path.string() + "[scenario]");
}

} // namespace andcoop
