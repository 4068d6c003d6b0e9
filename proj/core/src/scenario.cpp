#include "andcoop/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace andcoop {

namespace detail {

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace detail

namespace {

struct ParseContext {
    const std::string* origin = nullptr;
    int line = 0;

    [[noreturn]] void fail(const std::string& message) const {
        throw ScenarioError(*origin + ":" + std::to_string(line) + ": " + message);
    }
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view token, const ParseContext& ctx) {
    token = trim(token);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        ctx.fail("expected a number, got '" + std::string(token) + "'");
    return value;
}

std::int64_t parse_int(std::string_view token, const ParseContext& ctx) {
    token = trim(token);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        ctx.fail("expected an integer, got '" + std::string(token) + "'");
    return value;
}

std::uint64_t parse_uint(std::string_view token, const ParseContext& ctx) {
    token = trim(token);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        ctx.fail("expected a nonnegative integer, got '" + std::string(token) + "'");
    return value;
}

bool parse_bool(std::string_view token, const ParseContext& ctx) {
    token = trim(token);
    if (token == "true" || token == "1" || token == "on") return true;
    if (token == "false" || token == "0" || token == "off") return false;
    ctx.fail("expected true/false, got '" + std::string(token) + "'");
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

// start + k*step carries a rounding residue (0.1*3 prints as 0.30000...04);
// snapping to 12 significant digits recovers the value the user would have
// typed while staying far above double noise for any hand-written step.
double snap_grid_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::strtod(buf, nullptr);
}

// A grid is either a comma list "a,b,c" or an inclusive range "start:step:stop".
std::vector<double> parse_grid(std::string_view token, const ParseContext& ctx) {
    token = trim(token);
    if (token.find(':') != std::string_view::npos) {
        const auto parts = split(token, ':');
        if (parts.size() != 3) ctx.fail("range grids use start:step:stop");
        const double start = parse_double(parts[0], ctx);
        const double step = parse_double(parts[1], ctx);
        const double stop = parse_double(parts[2], ctx);
        if (!(step > 0.0)) ctx.fail("grid step must be positive");
        if (stop < start) ctx.fail("grid stop must be >= start");
        std::vector<double> grid;
        const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        grid.reserve(static_cast<std::size_t>(count));
        for (std::int64_t k = 0; k < count; ++k)
            grid.push_back(snap_grid_value(start + static_cast<double>(k) * step));
        return grid;
    }
    std::vector<double> grid;
    for (std::string_view part : split(token, ',')) grid.push_back(parse_double(part, ctx));
    return grid;
}

std::vector<int> parse_int_grid(std::string_view token, const ParseContext& ctx) {
    std::vector<int> grid;
    for (double v : parse_grid(token, ctx)) {
        const auto i = static_cast<int>(std::llround(v));
        if (std::fabs(v - i) > 1e-9) ctx.fail("expected integer grid values");
        grid.push_back(i);
    }
    return grid;
}

// "x,y; x,y; ..." point lists.
std::vector<Point2D> parse_points(std::string_view token, const ParseContext& ctx) {
    std::vector<Point2D> points;
    for (std::string_view entry : split(token, ';')) {
        entry = trim(entry);
        if (entry.empty()) continue;
        const auto coords = split(entry, ',');
        if (coords.size() != 2) ctx.fail("points are written as x,y pairs separated by ';'");
        points.push_back({parse_double(coords[0], ctx), parse_double(coords[1], ctx)});
    }
    return points;
}

Scheme parse_scheme(std::string_view token, const ParseContext& ctx) {
    token = trim(token);
    if (token == "andcoop") return Scheme::andcoop;
    if (token == "single_hop") return Scheme::single_hop;
    if (token == "two_hop") return Scheme::two_hop;
    if (token == "k_best") return Scheme::k_best;
    ctx.fail("unknown scheme '" + std::string(token) + "'");
}

CsiMode parse_csi(std::string_view token, const ParseContext& ctx) {
    token = trim(token);
    if (token == "perfect") return CsiMode::perfect;
    if (token == "imperfect") return CsiMode::imperfect;
    ctx.fail("unknown csi mode '" + std::string(token) + "'");
}

PlacementMode parse_placement(std::string_view token, const ParseContext& ctx) {
    token = trim(token);
    if (token == "fixed") return PlacementMode::fixed;
    if (token == "resample_per_cycle") return PlacementMode::resample_per_cycle;
    if (token == "resample_per_block") return PlacementMode::resample_per_block;
    ctx.fail("unknown placement mode '" + std::string(token) + "'");
}

using detail::format_double;

std::string format_grid(const std::vector<double>& grid) {
    std::string out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) out += ",";
        out += format_double(grid[i]);
    }
    return out;
}

std::string format_int_grid(const std::vector<int>& grid) {
    std::string out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(grid[i]);
    }
    return out;
}

std::string format_points(const std::vector<Point2D>& points) {
    std::string out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i) out += "; ";
        out += format_double(points[i].x) + "," + format_double(points[i].y);
    }
    return out;
}

std::string_view scheme_name(Scheme s) {
    switch (s) {
    case Scheme::andcoop: return "andcoop";
    case Scheme::single_hop: return "single_hop";
    case Scheme::two_hop: return "two_hop";
    case Scheme::k_best: return "k_best";
    }
    return "andcoop";
}

std::string_view csi_name(CsiMode m) {
    return m == CsiMode::perfect ? "perfect" : "imperfect";
}

std::string_view placement_name(PlacementMode m) {
    switch (m) {
    case PlacementMode::fixed: return "fixed";
    case PlacementMode::resample_per_cycle: return "resample_per_cycle";
    case PlacementMode::resample_per_block: return "resample_per_block";
    }
    return "resample_per_block";
}

using KeyHandler = std::function<void(ScenarioFile&, std::string_view, const ParseContext&)>;

const std::map<std::string, KeyHandler>& network_keys() {
    static const std::map<std::string, KeyHandler> keys = {
        {"floor_side_m", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.floor_side_m = parse_double(v, c); }},
        {"n_devices", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.n_devices = static_cast<int>(parse_int(v, c)); }},
        {"n_aps", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.n_aps = static_cast<int>(parse_int(v, c)); }},
        {"payload_bytes", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.payload_bytes = parse_double(v, c); }},
        {"cycle_t_s", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.cycle_t_s = parse_double(v, c); }},
        {"bandwidth_hz", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.bandwidth_hz = parse_double(v, c); }},
        {"carrier_freq_hz", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.carrier_freq_hz = parse_double(v, c); }},
        {"p_ap_dbm", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.p_ap_dbm = parse_double(v, c); }},
        {"p_dev_dbm", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.p_dev_dbm = parse_double(v, c); }},
        {"noise_psd_dbm_hz", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.noise_psd_dbm_hz = parse_double(v, c); }},
        {"ple_near", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.ple_near = parse_double(v, c); }},
        {"ple_los", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.ple_los = parse_double(v, c); }},
        {"ple_nlos", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.ple_nlos = parse_double(v, c); }},
        {"blockage_a", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.blockage_a = parse_double(v, c); }},
        {"blockage_b_m", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.blockage_b_m = parse_double(v, c); }},
        {"shadow_ap_los_db", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.shadow_ap_los_db = parse_double(v, c); }},
        {"shadow_ap_nlos_db", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.shadow_ap_nlos_db = parse_double(v, c); }},
        {"shadow_dev_los_db", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.shadow_dev_los_db = parse_double(v, c); }},
        {"shadow_dev_nlos_db", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.shadow_dev_nlos_db = parse_double(v, c); }},
        {"min_link_distance_m", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.network.min_link_distance_m = parse_double(v, c); }},
    };
    return keys;
}

const std::map<std::string, KeyHandler>& protocol_keys() {
    static const std::map<std::string, KeyHandler> keys = {
        {"scheme", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.protocol.scheme = parse_scheme(v, c); }},
        {"csi", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.protocol.csi = parse_csi(v, c); }},
        {"beta", [](ScenarioFile& s, std::string_view v, const ParseContext& c) {
             s.protocol.beta = parse_double(v, c);
             if (s.protocol.beta < 0.0 || s.protocol.beta > 1.0) c.fail("beta must be in [0, 1]");
         }},
        {"alpha", [](ScenarioFile& s, std::string_view v, const ParseContext& c) {
             s.protocol.alpha = parse_double(v, c);
             if (!(s.protocol.alpha > 0.0) || !(s.protocol.alpha < 1.0)) c.fail("alpha must be in (0, 1)");
         }},
        {"theta", [](ScenarioFile& s, std::string_view v, const ParseContext& c) {
             s.protocol.theta = parse_double(v, c);
             if (!(s.protocol.theta > 0.0) || s.protocol.theta > 1.0) c.fail("theta must be in (0, 1]");
         }},
        {"pilots_l", [](ScenarioFile& s, std::string_view v, const ParseContext& c) {
             s.protocol.pilots = static_cast<int>(parse_int(v, c));
             if (s.protocol.pilots < 0) c.fail("pilots_l must be >= 0");
         }},
        {"k_best", [](ScenarioFile& s, std::string_view v, const ParseContext& c) {
             s.protocol.k_best = static_cast<int>(parse_int(v, c));
             if (s.protocol.k_best < 1) c.fail("k_best must be >= 1");
         }},
    };
    return keys;
}

const std::map<std::string, KeyHandler>& run_keys() {
    static const std::map<std::string, KeyHandler> keys = {
        {"cycles", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.run.cycles = parse_int(v, c); }},
        {"seed", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.run.seed = parse_uint(v, c); }},
        {"placement", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.run.placement = parse_placement(v, c); }},
        {"block_size", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.run.block_size = static_cast<int>(parse_int(v, c)); }},
        {"iid_snr_db", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.run.iid_snr_db = parse_double(v, c); }},
        {"ap_positions", [](ScenarioFile& s, std::string_view v, const ParseContext& c) {
             if (!s.run.fixed_placement) s.run.fixed_placement.emplace();
             s.run.fixed_placement->ap_positions = parse_points(v, c);
         }},
        {"dev_positions", [](ScenarioFile& s, std::string_view v, const ParseContext& c) {
             if (!s.run.fixed_placement) s.run.fixed_placement.emplace();
             s.run.fixed_placement->dev_positions = parse_points(v, c);
         }},
    };
    return keys;
}

const std::map<std::string, KeyHandler>& experiment_keys() {
    static const std::map<std::string, KeyHandler> keys = {
        {"kind", [](ScenarioFile& s, std::string_view v, const ParseContext& c) {
             try {
                 s.experiment.kind = experiment_kind_from_string(trim(v));
             } catch (const std::exception& e) {
                 c.fail(e.what());
             }
         }},
        {"power_grid_dbm", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.experiment.power_grid_dbm = parse_grid(v, c); }},
        {"payload_grid_bytes", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.experiment.payload_grid_bytes = parse_grid(v, c); }},
        {"pilot_grid", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.experiment.pilot_grid = parse_grid(v, c); }},
        {"beta_grid", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.experiment.beta_grid = parse_grid(v, c); }},
        {"theta_grid", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.experiment.theta_grid = parse_grid(v, c); }},
        {"population_grid", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.experiment.population_grid = parse_int_grid(v, c); }},
        {"r_grid_points", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.experiment.r_grid_points = static_cast<int>(parse_int(v, c)); }},
        {"cycles_per_point", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.experiment.cycles_per_point = parse_int(v, c); }},
        {"analytic", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.experiment.analytic = parse_bool(v, c); }},
        {"grid_resolution", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.experiment.grid_resolution = static_cast<int>(parse_int(v, c)); }},
        {"ap_position", [](ScenarioFile& s, std::string_view v, const ParseContext& c) {
             const auto points = parse_points(v, c);
             if (points.size() != 1) c.fail("ap_position takes a single x,y pair");
             s.experiment.ap_position = points.front();
         }},
        {"ap_antennas", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.experiment.ap_antennas = static_cast<int>(parse_int(v, c)); }},
        {"relay_positions", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.experiment.relay_positions = parse_points(v, c); }},
        {"wall", [](ScenarioFile& s, std::string_view v, const ParseContext& c) {
             const auto coords = split(trim(v), ',');
             if (coords.size() != 4) c.fail("wall is written as x1,y1,x2,y2");
             Wall wall;
             wall.a = {parse_double(coords[0], c), parse_double(coords[1], c)};
             wall.b = {parse_double(coords[2], c), parse_double(coords[3], c)};
             if (s.experiment.wall) wall.penetration_loss_db = s.experiment.wall->penetration_loss_db;
             s.experiment.wall = wall;
         }},
        {"wall_penetration_db", [](ScenarioFile& s, std::string_view v, const ParseContext& c) {
             if (!s.experiment.wall) c.fail("wall_penetration_db needs a wall line first");
             s.experiment.wall->penetration_loss_db = parse_double(v, c);
         }},
        {"target_outage", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.experiment.target_outage = parse_double(v, c); }},
        {"rate_bpcu", [](ScenarioFile& s, std::string_view v, const ParseContext& c) { s.experiment.rate_bpcu = parse_double(v, c); }},
    };
    return keys;
}

// Applies the documented default grids so the in-memory scenario (and
// emitted text) is always explicit about what a run will do.
void normalize(ScenarioFile& s) {
    auto make_grid = [](double start, double step, double stop) {
        // index form: accumulated += drifts the endpoint out of range
        std::vector<double> grid;
        const auto count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (int k = 0; k < count; ++k) grid.push_back(snap_grid_value(start + k * step));
        return grid;
    };
    if (s.experiment.kind == ExperimentKind::optimize ||
        s.experiment.kind == ExperimentKind::pilot_tradeoff) {
        if (s.experiment.theta_grid.empty()) {
            s.experiment.theta_grid = s.protocol.csi == CsiMode::perfect
                                          ? std::vector<double>{1.0}
                                          : make_grid(0.05, 0.05, 1.0);
        }
    }
    if (s.experiment.kind == ExperimentKind::optimize && s.experiment.beta_grid.empty())
        s.experiment.beta_grid = make_grid(0.0, 0.05, 1.0);
    if (s.experiment.kind == ExperimentKind::dmt && s.experiment.power_grid_dbm.empty())
        s.experiment.power_grid_dbm = make_grid(0.0, 2.0, 80.0);
    if (s.experiment.cycles_per_point == 0 &&
        (s.experiment.kind == ExperimentKind::optimize ||
         s.experiment.kind == ExperimentKind::pilot_tradeoff))
        s.experiment.cycles_per_point = s.run.cycles;
}

} // namespace

std::string_view to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::single: return "single";
    case ExperimentKind::power_sweep: return "power_sweep";
    case ExperimentKind::rate_sweep: return "rate_sweep";
    case ExperimentKind::population_sweep: return "population_sweep";
    case ExperimentKind::dmt: return "dmt";
    case ExperimentKind::optimize: return "optimize";
    case ExperimentKind::coverage: return "coverage";
    case ExperimentKind::pilot_tradeoff: return "pilot_tradeoff";
    }
    return "single";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
    for (ExperimentKind kind :
         {ExperimentKind::single, ExperimentKind::power_sweep, ExperimentKind::rate_sweep,
          ExperimentKind::population_sweep, ExperimentKind::dmt, ExperimentKind::optimize,
          ExperimentKind::coverage, ExperimentKind::pilot_tradeoff}) {
        if (to_string(kind) == name) return kind;
    }
    throw ScenarioError("unknown experiment kind '" + std::string(name) + "'");
}

ScenarioFile parse_scenario_text(std::string_view text, const std::string& origin) {
    ScenarioFile scenario;
    ParseContext ctx{&origin, 0};

    enum class Section { none, network, protocol, run, experiment };
    Section section = Section::none;
    bool seen[4] = {false, false, false, false};

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view raw = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++ctx.line;

        const std::size_t hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view line = trim(raw);
        if (line.empty()) {
            if (eol == text.size()) break;
            continue;
        }

        if (line.front() == '[') {
            if (line.back() != ']') ctx.fail("unterminated section header");
            const std::string_view name = trim(line.substr(1, line.size() - 2));
            if (name == "network") { section = Section::network; seen[0] = true; }
            else if (name == "protocol") { section = Section::protocol; seen[1] = true; }
            else if (name == "run") { section = Section::run; seen[2] = true; }
            else if (name == "experiment") { section = Section::experiment; seen[3] = true; }
            else ctx.fail("unknown section [" + std::string(name) + "]");
            if (eol == text.size()) break;
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) ctx.fail("expected key = value");
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));

        const std::map<std::string, KeyHandler>* table = nullptr;
        const char* section_name = "";
        switch (section) {
        case Section::none: ctx.fail("key outside of any section");
        case Section::network: table = &network_keys(); section_name = "network"; break;
        case Section::protocol: table = &protocol_keys(); section_name = "protocol"; break;
        case Section::run: table = &run_keys(); section_name = "run"; break;
        case Section::experiment: table = &experiment_keys(); section_name = "experiment"; break;
        }
        const auto it = table->find(key);
        if (it == table->end())
            ctx.fail("unknown key '" + key + "' in [" + section_name + "]");
        it->second(scenario, value, ctx);

        if (eol == text.size()) break;
    }

    std::string missing;
    const char* names[4] = {"network", "protocol", "run", "experiment"};
    for (int i = 0; i < 4; ++i) {
        if (!seen[i]) missing += missing.empty() ? std::string("[") + names[i] + "]"
                                                 : std::string(", [") + names[i] + "]";
    }
    if (!missing.empty())
        throw ScenarioError(origin + ": missing sections: " + missing);

    normalize(scenario);
    scenario.validate();
    return scenario;
}

ScenarioFile parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path + ": cannot open scenario file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str(), path);
}

void ScenarioFile::validate() const {
    try {
        network.validate();
        protocol.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(e.what());
    }

    if (run.cycles < 1) throw ScenarioError("run: cycles must be >= 1");
    if (run.block_size < 1) throw ScenarioError("run: block_size must be >= 1");
    if (run.placement == PlacementMode::fixed && !run.fixed_placement && !run.iid_snr_db)
        throw ScenarioError("run: fixed placement needs ap_positions and dev_positions");
    if (run.fixed_placement) {
        if (static_cast<int>(run.fixed_placement->ap_positions.size()) != network.n_aps ||
            static_cast<int>(run.fixed_placement->dev_positions.size()) != network.n_devices)
            throw ScenarioError("run: fixed placement sizes disagree with [network] counts");
    }

    const ExperimentSection& exp = experiment;
    switch (exp.kind) {
    case ExperimentKind::single:
        break;
    case ExperimentKind::power_sweep:
        if (exp.power_grid_dbm.empty())
            throw ScenarioError("experiment: power_sweep needs power_grid_dbm");
        if (exp.analytic && (!run.iid_snr_db || protocol.scheme != Scheme::two_hop))
            throw ScenarioError(
                "experiment: analytic power rows need iid_snr_db and the two_hop scheme");
        break;
    case ExperimentKind::rate_sweep:
        if (exp.payload_grid_bytes.empty())
            throw ScenarioError("experiment: rate_sweep needs payload_grid_bytes");
        for (double b : exp.payload_grid_bytes)
            if (!(b > 0.0)) throw ScenarioError("experiment: payloads must be positive");
        break;
    case ExperimentKind::population_sweep:
        if (exp.population_grid.empty())
            throw ScenarioError("experiment: population_sweep needs population_grid");
        for (int n : exp.population_grid)
            if (n < 1) throw ScenarioError("experiment: populations must be >= 1");
        break;
    case ExperimentKind::dmt:
        if (exp.r_grid_points < 2)
            throw ScenarioError("experiment: dmt needs r_grid_points >= 2");
        break;
    case ExperimentKind::optimize:
        if (exp.beta_grid.empty() || exp.theta_grid.empty())
            throw ScenarioError("experiment: optimize needs beta_grid and theta_grid");
        break;
    case ExperimentKind::coverage:
        if (exp.grid_resolution < 2)
            throw ScenarioError("experiment: coverage needs grid_resolution >= 2");
        if (!(exp.target_outage > 0.0) || exp.target_outage > 1.0)
            throw ScenarioError("experiment: target_outage must be in (0, 1]");
        break;
    case ExperimentKind::pilot_tradeoff:
        if (exp.pilot_grid.empty())
            throw ScenarioError("experiment: pilot_tradeoff needs pilot_grid");
        for (double l : exp.pilot_grid)
            if (l < 1.0 || std::fabs(l - std::llround(l)) > 1e-9)
                throw ScenarioError("experiment: pilot_grid values must be integers >= 1");
        if (protocol.csi != CsiMode::imperfect)
            throw ScenarioError("experiment: pilot_tradeoff needs csi = imperfect");
        break;
    }
}

MapSpec ScenarioFile::coverage_spec() const {
    MapSpec spec;
    spec.grid_resolution = experiment.grid_resolution;
    spec.floor_side_m = network.floor_side_m;
    spec.ap_position = experiment.ap_position;
    spec.ap_antennas = experiment.ap_antennas;
    spec.relay_positions = experiment.relay_positions;
    spec.wall = experiment.wall;
    spec.target_outage = experiment.target_outage;
    spec.rate_bpcu = experiment.rate_bpcu;
    spec.bandwidth_hz = network.bandwidth_hz;
    spec.carrier_freq_hz = network.carrier_freq_hz;
    spec.p_ap_dbm = network.p_ap_dbm;
    spec.p_dev_dbm = network.p_dev_dbm;
    spec.noise_psd_dbm_hz = network.noise_psd_dbm_hz;
    spec.ple_near = network.ple_near;
    spec.ple_los = network.ple_los;
    spec.ple_nlos = network.ple_nlos;
    spec.min_link_distance_m = network.min_link_distance_m;
    return spec;
}

RunSpec ScenarioFile::run_spec() const {
    RunSpec spec;
    spec.cfg = network;
    spec.params = protocol;
    spec.n_cycles = run.cycles;
    spec.master_seed = run.seed;
    spec.placement_mode = run.placement;
    spec.block_size = run.block_size;
    spec.fixed_placement = run.fixed_placement;
    if (run.iid_snr_db) spec.iid_snr = db_to_linear(*run.iid_snr_db);
    return spec;
}

std::string emit_scenario(const ScenarioFile& s) {
    std::ostringstream out;
    out << "[network]\n";
    out << "floor_side_m = " << format_double(s.network.floor_side_m) << "\n";
    out << "n_devices = " << s.network.n_devices << "\n";
    out << "n_aps = " << s.network.n_aps << "\n";
    out << "payload_bytes = " << format_double(s.network.payload_bytes) << "\n";
    out << "cycle_t_s = " << format_double(s.network.cycle_t_s) << "\n";
    out << "bandwidth_hz = " << format_double(s.network.bandwidth_hz) << "\n";
    out << "carrier_freq_hz = " << format_double(s.network.carrier_freq_hz) << "\n";
    out << "p_ap_dbm = " << format_double(s.network.p_ap_dbm) << "\n";
    out << "p_dev_dbm = " << format_double(s.network.p_dev_dbm) << "\n";
    out << "noise_psd_dbm_hz = " << format_double(s.network.noise_psd_dbm_hz) << "\n";
    out << "ple_near = " << format_double(s.network.ple_near) << "\n";
    out << "ple_los = " << format_double(s.network.ple_los) << "\n";
    out << "ple_nlos = " << format_double(s.network.ple_nlos) << "\n";
    out << "blockage_a = " << format_double(s.network.blockage_a) << "\n";
    out << "blockage_b_m = " << format_double(s.network.blockage_b_m) << "\n";
    out << "shadow_ap_los_db = " << format_double(s.network.shadow_ap_los_db) << "\n";
    out << "shadow_ap_nlos_db = " << format_double(s.network.shadow_ap_nlos_db) << "\n";
    out << "shadow_dev_los_db = " << format_double(s.network.shadow_dev_los_db) << "\n";
    out << "shadow_dev_nlos_db = " << format_double(s.network.shadow_dev_nlos_db) << "\n";
    out << "min_link_distance_m = " << format_double(s.network.min_link_distance_m) << "\n";
    out << "\n[protocol]\n";
    out << "scheme = " << scheme_name(s.protocol.scheme) << "\n";
    out << "csi = " << csi_name(s.protocol.csi) << "\n";
    out << "beta = " << format_double(s.protocol.beta) << "\n";
    out << "alpha = " << format_double(s.protocol.alpha) << "\n";
    out << "theta = " << format_double(s.protocol.theta) << "\n";
    out << "pilots_l = " << s.protocol.pilots << "\n";
    out << "k_best = " << s.protocol.k_best << "\n";
    out << "\n[run]\n";
    out << "cycles = " << s.run.cycles << "\n";
    out << "seed = " << s.run.seed << "\n";
    out << "placement = " << placement_name(s.run.placement) << "\n";
    out << "block_size = " << s.run.block_size << "\n";
    if (s.run.iid_snr_db) out << "iid_snr_db = " << format_double(*s.run.iid_snr_db) << "\n";
    if (s.run.fixed_placement) {
        out << "ap_positions = " << format_points(s.run.fixed_placement->ap_positions) << "\n";
        out << "dev_positions = " << format_points(s.run.fixed_placement->dev_positions) << "\n";
    }
    out << "\n[experiment]\n";
    out << "kind = " << to_string(s.experiment.kind) << "\n";
    if (!s.experiment.power_grid_dbm.empty())
        out << "power_grid_dbm = " << format_grid(s.experiment.power_grid_dbm) << "\n";
    if (!s.experiment.payload_grid_bytes.empty())
        out << "payload_grid_bytes = " << format_grid(s.experiment.payload_grid_bytes) << "\n";
    if (!s.experiment.pilot_grid.empty())
        out << "pilot_grid = " << format_grid(s.experiment.pilot_grid) << "\n";
    if (!s.experiment.beta_grid.empty())
        out << "beta_grid = " << format_grid(s.experiment.beta_grid) << "\n";
    if (!s.experiment.theta_grid.empty())
        out << "theta_grid = " << format_grid(s.experiment.theta_grid) << "\n";
    if (!s.experiment.population_grid.empty())
        out << "population_grid = " << format_int_grid(s.experiment.population_grid) << "\n";
    if (s.experiment.kind == ExperimentKind::dmt)
        out << "r_grid_points = " << s.experiment.r_grid_points << "\n";
    if (s.experiment.cycles_per_point != 0)
        out << "cycles_per_point = " << s.experiment.cycles_per_point << "\n";
    if (s.experiment.analytic) out << "analytic = true\n";
    if (s.experiment.kind == ExperimentKind::coverage) {
        out << "grid_resolution = " << s.experiment.grid_resolution << "\n";
        out << "ap_position = " << format_double(s.experiment.ap_position.x) << ","
            << format_double(s.experiment.ap_position.y) << "\n";
        out << "ap_antennas = " << s.experiment.ap_antennas << "\n";
        if (!s.experiment.relay_positions.empty())
            out << "relay_positions = " << format_points(s.experiment.relay_positions) << "\n";
        if (s.experiment.wall) {
            out << "wall = " << format_double(s.experiment.wall->a.x) << ","
                << format_double(s.experiment.wall->a.y) << ","
                << format_double(s.experiment.wall->b.x) << ","
                << format_double(s.experiment.wall->b.y) << "\n";
            out << "wall_penetration_db = " << format_double(s.experiment.wall->penetration_loss_db)
                << "\n";
        }
        out << "target_outage = " << format_double(s.experiment.target_outage) << "\n";
        out << "rate_bpcu = " << format_double(s.experiment.rate_bpcu) << "\n";
    }
    return out.str();
}

} // namespace andcoop
