#include "andcoop/optimizer.hpp"

#include <stdexcept>

namespace andcoop {

void OptSpec::validate() const {
    if (beta_grid.empty() || theta_grid.empty())
        throw std::invalid_argument("optimize: grids must be nonempty");
    for (double b : beta_grid)
        if (b < 0.0 || b > 1.0) throw std::invalid_argument("optimize: beta grid value out of [0, 1]");
    for (double t : theta_grid)
        if (!(t > 0.0) || t > 1.0)
            throw std::invalid_argument("optimize: theta grid value out of (0, 1]");
    if (base.params.csi == CsiMode::perfect) {
        if (theta_grid.size() != 1 || theta_grid.front() != 1.0)
            throw std::invalid_argument("optimize: perfect CSI uses the singleton theta grid {1}");
        if (fixed_pilots != 0)
            throw std::invalid_argument("optimize: perfect CSI uses fixed_pilots = 0");
    } else if (fixed_pilots < 1) {
        throw std::invalid_argument("optimize: imperfect CSI requires fixed_pilots >= 1");
    }
    if (cycles_per_point < 1)
        throw std::invalid_argument("optimize: cycles_per_point must be >= 1");
}

OptResult optimize(const OptSpec& spec, int n_workers) {
    spec.validate();

    OptResult result;
    result.surface.reserve(spec.beta_grid.size() * spec.theta_grid.size());
    bool have_best = false;

    for (double beta : spec.beta_grid) {
        for (double theta : spec.theta_grid) {
            RunSpec point = spec.base;
            point.params.scheme = Scheme::andcoop;
            point.params.beta = beta;
            point.params.theta = theta;
            point.params.pilots = spec.fixed_pilots;
            point.n_cycles = spec.cycles_per_point;
            point.collect_energy_samples = false;

            OptPoint record{beta, theta, {}, {}};
            try {
                record.outage = run(point, n_workers).outage;
            } catch (const std::exception& e) {
                record.error = e.what();
            }
            if (record.error.empty()) {
                const bool better =
                    !have_best || record.outage.estimate < result.outage_at_opt.estimate ||
                    (record.outage.estimate == result.outage_at_opt.estimate &&
                     (beta > result.beta_hat ||
                      (beta == result.beta_hat && theta > result.theta_hat)));
                if (better) {
                    have_best = true;
                    result.beta_hat = beta;
                    result.theta_hat = theta;
                    result.outage_at_opt = record.outage;
                }
            }
            result.surface.push_back(std::move(record));
        }
    }
    if (!have_best)
        throw std::invalid_argument("optimize: every grid point failed; check the configuration");
    return result;
}

} // namespace andcoop
