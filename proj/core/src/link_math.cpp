#include "andcoop/link_math.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace andcoop {

namespace {

constexpr double kTolerance = 1e-15;
constexpr int kMaxIterations = 10000;

// log of the dominant factor x^a e^{-x} / Gamma(a+1).
double log_dominant(double a, double x) {
    return a * std::log(x) - x - std::lgamma(a + 1.0);
}

// log of the series sum 1 + x/(a+1) + x^2/((a+1)(a+2)) + ...; converges
// for x < a + 1.
double log_series_sum(double a, double x) {
    double term = 1.0;
    double sum = 1.0;
    double denom = a;
    for (int n = 0; n < kMaxIterations; ++n) {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if (term < sum * kTolerance) return std::log(sum);
    }
    throw std::runtime_error("gamma_p: series failed to converge");
}

// log of Q(a, x) via the Lentz continued fraction; valid for x >= a + 1.
double log_gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kTolerance;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kTolerance) {
            return a * std::log(x) - x - std::lgamma(a) + std::log(h);
        }
    }
    throw std::runtime_error("gamma_p: continued fraction failed to converge");
}

} // namespace

double log_gamma_p(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("gamma_p: a must be positive");
    if (x < 0.0) throw std::invalid_argument("gamma_p: x must be nonnegative");
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (x < a + 1.0) return log_dominant(a, x) + log_series_sum(a, x);
    const double log_q = log_gamma_q_cf(a, x);
    // P = 1 - Q; Q < 1 is guaranteed on this branch since x >= a + 1 > mode.
    return std::log1p(-std::exp(log_q));
}

double gamma_p(double a, double x) {
    return std::exp(log_gamma_p(a, x));
}

bool decode_succeeds(double snr_sum, double rate_bps, double bandwidth_hz) {
    return achievable_rate(snr_sum, bandwidth_hz) >= rate_bps;
}

double achievable_rate(double snr_sum, double bandwidth_hz) {
    return bandwidth_hz * std::log2(1.0 + snr_sum);
}

double omega(double rate_bps, double bandwidth_hz, double noise_psd_w_per_hz) {
    constexpr double ln2 = 0.6931471805599453094;
    return bandwidth_hz * noise_psd_w_per_hz * std::expm1(rate_bps / bandwidth_hz * ln2);
}

namespace {

double failure_threshold(const FailProbParams& p) {
    if (p.m < 1) throw std::invalid_argument("fail_prob_m: m must be >= 1");
    if (!(p.bandwidth_hz > 0.0)) throw std::invalid_argument("fail_prob_m: bandwidth must be positive");
    if (!(p.p_t_w > 0.0)) throw std::invalid_argument("fail_prob_m: transmit power must be positive");
    if (!(p.noise_psd_w_per_hz > 0.0)) throw std::invalid_argument("fail_prob_m: noise PSD must be positive");
    if (p.rate_bps < 0.0) throw std::invalid_argument("fail_prob_m: rate must be nonnegative");
    return omega(p.rate_bps, p.bandwidth_hz, p.noise_psd_w_per_hz) / p.p_t_w;
}

} // namespace

double fail_prob_m(const FailProbParams& params) {
    return gamma_p(static_cast<double>(params.m), failure_threshold(params));
}

double log_fail_prob_m(const FailProbParams& params) {
    return log_gamma_p(static_cast<double>(params.m), failure_threshold(params));
}

} // namespace andcoop
