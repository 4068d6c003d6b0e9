#include "oracles.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "andcoop/rng.hpp"

namespace andcoop::testing {

McEstimate mc_erlang_cdf(int m, double x, std::int64_t n_samples, std::uint64_t seed) {
    Philox rng(mix64(seed), 0);
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < n_samples; ++i) {
        double sum = 0.0;
        for (int branch = 0; branch < m; ++branch) sum += rng.exponential();
        if (sum < x) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n_samples);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples))};
}

int exhaustive_strong_cardinality(const std::vector<double>& rates_bps, double tau_s,
                                  double theta, double payload_bits) {
    const int n = static_cast<int>(rates_bps.size());
    if (n > 20) throw std::invalid_argument("exhaustive oracle limited to n <= 20");
    int best = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double airtime = 0.0;
        bool feasible = true;
        double min_in = std::numeric_limits<double>::infinity();
        double max_out = 0.0;
        for (int j = 0; j < n; ++j) {
            if (mask & (1u << j)) {
                if (!(rates_bps[j] > 0.0)) {
                    feasible = false;
                    break;
                }
                airtime += payload_bits / (theta * rates_bps[j]);
                min_in = std::min(min_in, rates_bps[j]);
            } else {
                max_out = std::max(max_out, rates_bps[j]);
            }
        }
        if (!feasible || airtime > tau_s) continue;
        if (mask != 0 && max_out > min_in) continue; // must hold the top-rated devices
        best = std::max(best, static_cast<int>(std::popcount(mask)));
    }
    return best;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    return adaptive(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tol, 50);
}

} // namespace andcoop::testing
