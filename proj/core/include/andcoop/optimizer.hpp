#pragma once

#include <string>
#include <vector>

#include "andcoop/engine.hpp"

namespace andcoop {

/// Grid search over (beta, theta) at a fixed pilot count. Every grid point
/// reuses the base master seed, so all points see the same channel draws and
/// the argmin comparison is common-random-number stable.
struct OptSpec {
    RunSpec base;
    std::vector<double> beta_grid;
    std::vector<double> theta_grid; // {1} under perfect CSI
    int fixed_pilots = 0;
    std::int64_t cycles_per_point = 0;

    void validate() const;
};

struct OptPoint {
    double beta = 0.0;
    double theta = 0.0;
    EstimateWithCI outage;
    std::string error; // nonempty when this point failed to run
};

struct OptResult {
    double beta_hat = 0.0;
    double theta_hat = 0.0;
    EstimateWithCI outage_at_opt;
    std::vector<OptPoint> surface;
};

/// Evaluates the full surface and returns the argmin; ties break toward the
/// larger beta, then the larger theta. Throws when every point fails.
OptResult optimize(const OptSpec& spec, int n_workers = 0);

} // namespace andcoop
