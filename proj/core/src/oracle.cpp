#include "andcoop/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "andcoop/link_math.hpp"

namespace andcoop {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.6931471805599453094;

// log(1 - e^a) for a <= 0, stable near both ends.
double log1mexp(double a) {
    if (a >= 0.0) return kNegInf;
    if (a > -kLn2) return std::log(-std::expm1(a));
    return std::log1p(-std::exp(a));
}

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_sum_exp(const std::vector<double>& terms) {
    double peak = kNegInf;
    for (double t : terms) peak = std::max(peak, t);
    if (peak == kNegInf) return kNegInf;
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - peak);
    return peak + std::log(sum);
}

} // namespace

double log_p2h_closed_form(const IidScenario& scn, double p_t_scale) {
    if (scn.n_devices < 1 || scn.n_aps < 1)
        throw std::invalid_argument("p2h_closed_form: counts must be >= 1");
    if (!(scn.nominal_snr > 0.0) || !(p_t_scale > 0.0))
        throw std::invalid_argument("p2h_closed_form: SNR and power scale must be positive");
    if (!(scn.bandwidth_hz > 0.0))
        throw std::invalid_argument("p2h_closed_form: bandwidth must be positive");
    if (scn.rate_b_bps < 0.0 || scn.rate_r_bps < 0.0)
        throw std::invalid_argument("p2h_closed_form: rates must be nonnegative");

    const int n_dev = scn.n_devices;
    const int m = scn.n_aps;
    const double rho = scn.nominal_snr * p_t_scale;
    const double x_b = std::expm1(scn.rate_b_bps / scn.bandwidth_hz * kLn2) / rho;
    const double x_r = std::expm1(scn.rate_r_bps / scn.bandwidth_hz * kLn2) / rho;

    const double log_qb = log_gamma_p(m, x_b);
    if (log_qb == kNegInf) return kNegInf; // broadcast never fails
    const double log_1m_qb = log1mexp(log_qb);

    std::vector<double> log_terms;
    log_terms.reserve(n_dev);
    for (int n = 0; n < n_dev; ++n) {
        // Conditional relay-hop failure given a failed broadcast, with M APs
        // plus n relays transmitting; the ratio is clamped to 1.
        const double log_qr = std::min(0.0, log_gamma_p(m + n, x_r) - log_qb);
        const double log_all_relayed = (n_dev - n) * log1mexp(log_qr);
        const double log_fail_factor = log1mexp(log_all_relayed);
        if (log_fail_factor == kNegInf) continue;
        double log_term = log_binomial(n_dev, n) + (n_dev - n) * log_qb + log_fail_factor;
        if (n > 0) {
            if (log_1m_qb == kNegInf) continue;
            log_term += n * log_1m_qb;
        }
        log_terms.push_back(log_term);
    }
    return std::min(0.0, log_sum_exp(log_terms));
}

double p2h_closed_form(const IidScenario& scn, double p_t_scale) {
    return std::exp(log_p2h_closed_form(scn, p_t_scale));
}

OutageBounds single_hop_bounds(int n_devices, int n_aps, double payload_bits,
                               double t_single_hop_s, double p_t_w, double bandwidth_hz,
                               double noise_psd_w_per_hz) {
    if (n_devices < 1 || n_aps < 1)
        throw std::invalid_argument("single_hop_bounds: counts must be >= 1");
    if (!(t_single_hop_s > 0.0))
        throw std::invalid_argument("single_hop_bounds: window must be positive");

    const auto any_fails = [&](double rate_bps) {
        FailProbParams params{n_aps, rate_bps, bandwidth_hz, p_t_w, noise_psd_w_per_hz};
        // 1 - (1 - p)^N without cancellation for tiny p.
        return -std::expm1(n_devices * std::log1p(-fail_prob_m(params)));
    };
    return {any_fails(payload_bits / t_single_hop_s),
            any_fails(n_devices * payload_bits / t_single_hop_s)};
}

DmtBounds dmt_single_hop(int n_aps, int n_devices, std::span<const double> r_grid) {
    if (n_aps < 1 || n_devices < 1)
        throw std::invalid_argument("dmt_single_hop: counts must be >= 1");
    DmtBounds bounds;
    for (double r : r_grid) {
        bounds.lower.multiplexing.push_back(r);
        bounds.lower.diversity.push_back(std::max(0.0, n_aps * (1.0 - r)));
        bounds.upper.multiplexing.push_back(r);
        bounds.upper.diversity.push_back(std::max(0.0, n_aps * (1.0 - r / n_devices)));
    }
    return bounds;
}

DmtCurve dmt_two_hop(int n_aps, int n_devices, double alpha, std::span<const double> r_grid) {
    if (n_aps < 1 || n_devices < 1)
        throw std::invalid_argument("dmt_two_hop: counts must be >= 1");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("dmt_two_hop: alpha must be in (0, 1)");
    DmtCurve curve;
    const double order = n_aps + n_devices - 1.0;
    for (double r : r_grid) {
        curve.multiplexing.push_back(r);
        curve.diversity.push_back(std::max(0.0, order * (1.0 - r / (1.0 - alpha))));
    }
    return curve;
}

int diversity_k_best(int n_aps, int n_devices, int k) {
    if (n_aps < 1 || n_devices < 1 || k < 1 || k > n_devices)
        throw std::invalid_argument("diversity_k_best: need 1 <= K <= N and M >= 1");
    return n_aps * (n_devices - k + 1);
}

std::vector<SlopePoint>
empirical_outage_exponent(std::span<const std::pair<double, double>> curve) {
    if (curve.size() < 3)
        throw std::invalid_argument("empirical_outage_exponent: need at least 3 points");
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (!(curve[i].second > 0.0))
            throw std::invalid_argument("empirical_outage_exponent: outage values must be positive");
        if (i > 0 && !(curve[i].first > curve[i - 1].first))
            throw std::invalid_argument("empirical_outage_exponent: powers must be strictly increasing");
    }
    std::vector<SlopePoint> points;
    points.reserve(curve.size() - 2);
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        const double dlogp = std::log(curve[i + 1].second) - std::log(curve[i - 1].second);
        const double dlogt = std::log(curve[i + 1].first) - std::log(curve[i - 1].first);
        points.push_back({curve[i].second, -dlogp / dlogt});
    }
    return points;
}

} // namespace andcoop
