#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they are used to check.

#include <cstdint>
#include <functional>
#include <vector>

namespace andcoop::testing {

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Brute-force Monte Carlo of Pr[sum of m unit exponentials < x].
McEstimate mc_erlang_cdf(int m, double x, std::int64_t n_samples, std::uint64_t seed);

/// Exhaustive maximum-cardinality subset under the airtime budget, restricted
/// to subsets that contain only top-rated devices (every excluded device rates
/// no higher than every included one). Returns the best cardinality.
int exhaustive_strong_cardinality(const std::vector<double>& rates_bps, double tau_s,
                                  double theta, double payload_bits);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

} // namespace andcoop::testing
