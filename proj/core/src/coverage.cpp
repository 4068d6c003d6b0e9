#include "andcoop/coverage.hpp"

#include <cmath>
#include <stdexcept>

#include "andcoop/channel.hpp"
#include "andcoop/link_math.hpp"

namespace andcoop {

namespace {

double cross(Point2D o, Point2D a, Point2D b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(Point2D p, Point2D q, Point2D r) {
    return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
           std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
}

int orientation(Point2D p, Point2D q, Point2D r) {
    const double v = cross(p, q, r);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

} // namespace

bool segments_intersect(Point2D p1, Point2D p2, Point2D q1, Point2D q2) {
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, q1, p2)) return true;
    if (o2 == 0 && on_segment(p1, q2, p2)) return true;
    if (o3 == 0 && on_segment(q1, p1, q2)) return true;
    if (o4 == 0 && on_segment(q1, p2, q2)) return true;
    return false;
}

void MapSpec::validate() const {
    if (grid_resolution < 2) throw std::invalid_argument("coverage: grid_resolution must be >= 2");
    if (!(floor_side_m > 0.0)) throw std::invalid_argument("coverage: floor_side_m must be positive");
    if (ap_antennas < 1) throw std::invalid_argument("coverage: ap_antennas must be >= 1");
    if (wall && wall->penetration_loss_db < 0.0)
        throw std::invalid_argument("coverage: penetration loss must be nonnegative");
    if (!(target_outage > 0.0) || target_outage > 1.0)
        throw std::invalid_argument("coverage: target_outage must be in (0, 1]");
    if (!(rate_bpcu > 0.0)) throw std::invalid_argument("coverage: rate_bpcu must be positive");
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("coverage: bandwidth_hz must be positive");
    if (!(carrier_freq_hz > 0.0))
        throw std::invalid_argument("coverage: carrier_freq_hz must be positive");
    if (!(min_link_distance_m > 0.0))
        throw std::invalid_argument("coverage: min_link_distance_m must be positive");
}

CoverageResult compute_coverage(const MapSpec& spec) {
    spec.validate();

    const int res = spec.grid_resolution;
    const double cell = spec.floor_side_m / res;
    const double lambda = 299792458.0 / spec.carrier_freq_hz;
    const double noise_floor_dbm = spec.noise_psd_dbm_hz + 10.0 * std::log10(spec.bandwidth_hz);
    const double rate_full_bps = spec.rate_bpcu * spec.bandwidth_hz;
    const double rate_half_bps = 2.0 * rate_full_bps;

    CoverageResult result;
    result.grid_resolution = res;
    const std::size_t n_points = static_cast<std::size_t>(res) * res;
    for (auto& map : result.snr_db) map.assign(n_points, 0.0);
    for (auto& map : result.covered) map.assign(n_points, 0);
    result.covered_combined.assign(n_points, 0);

    // Deterministic mean branch SNR: dual-slope path gain; crossing the wall
    // switches to the NLOS exponent and adds the penetration loss.
    auto branch_snr = [&](Point2D tx, Point2D rx, double p_tx_dbm) {
        const double d = std::hypot(tx.x - rx.x, tx.y - rx.y);
        const bool blocked =
            spec.wall && segments_intersect(tx, rx, spec.wall->a, spec.wall->b);
        const double ple_far = blocked ? spec.ple_nlos : spec.ple_los;
        double gain_db =
            path_gain_db(d, lambda, spec.ple_near, ple_far, spec.min_link_distance_m);
        if (blocked) gain_db -= spec.wall->penetration_loss_db;
        return db_to_linear(p_tx_dbm + gain_db - noise_floor_dbm);
    };

    // Branches with unequal mean SNRs are folded into the equal-branch
    // m-transmitter failure model by matching the total received power.
    auto phase_outage = [&](double snr_total, int branches, double rate_bps) {
        if (branches < 1) return 1.0;
        const double per_branch = snr_total / branches;
        const double threshold =
            std::expm1(rate_bps / spec.bandwidth_hz * 0.6931471805599453094) / per_branch;
        return gamma_p(branches, threshold);
    };

    std::array<std::int64_t, 3> covered_count{};
    std::int64_t combined_count = 0;

    for (int iy = 0; iy < res; ++iy) {
        for (int ix = 0; ix < res; ++ix) {
            const std::size_t idx = static_cast<std::size_t>(iy) * res + ix;
            const Point2D point{(ix + 0.5) * cell, (iy + 0.5) * cell};

            const double ap_snr_total =
                spec.ap_antennas * branch_snr(spec.ap_position, point, spec.p_ap_dbm);
            double relay_snr_total = 0.0;
            for (const Point2D& relay : spec.relay_positions)
                relay_snr_total += branch_snr(relay, point, spec.p_dev_dbm);

            const std::array<double, 3> totals{ap_snr_total, ap_snr_total, relay_snr_total};
            const std::array<int, 3> branches{spec.ap_antennas, spec.ap_antennas,
                                              static_cast<int>(spec.relay_positions.size())};
            const std::array<double, 3> rates{rate_full_bps, rate_half_bps, rate_half_bps};

            for (int phase = 0; phase < 3; ++phase) {
                result.snr_db[phase][idx] = linear_to_db(totals[phase]);
                const bool ok =
                    phase_outage(totals[phase], branches[phase], rates[phase]) <= spec.target_outage;
                result.covered[phase][idx] = ok ? 1 : 0;
                covered_count[phase] += ok ? 1 : 0;
            }
            const bool combined = result.covered[1][idx] || result.covered[2][idx];
            result.covered_combined[idx] = combined ? 1 : 0;
            combined_count += combined ? 1 : 0;
        }
    }

    for (int phase = 0; phase < 3; ++phase)
        result.coverage_fraction[phase] =
            static_cast<double>(covered_count[phase]) / static_cast<double>(n_points);
    result.coverage_fraction_combined =
        static_cast<double>(combined_count) / static_cast<double>(n_points);
    return result;
}

} // namespace andcoop
