#pragma once

namespace andcoop {

/// Capacity test: true iff rate_bps is supported by the combined SNR, i.e.
/// W*log2(1 + snr_sum) >= rate_bps. The boundary counts as success.
bool decode_succeeds(double snr_sum, double rate_bps, double bandwidth_hz);

/// Shannon rate W*log2(1 + snr_sum) in bits per second.
double achievable_rate(double snr_sum, double bandwidth_hz);

/// Required received power W*noise_psd*(2^(R/W) - 1) for rate R, in watts.
double omega(double rate_bps, double bandwidth_hz, double noise_psd_w_per_hz);

/// Inputs for the m-transmitter decoding-failure probability: m cooperating
/// transmitters, each at power p_t_w, with i.i.d. unit-variance Rayleigh
/// fading on every branch and power summation at the receiver.
struct FailProbParams {
    int m = 1;
    double rate_bps = 0.0;
    double bandwidth_hz = 0.0;
    double p_t_w = 0.0;
    double noise_psd_w_per_hz = 0.0;
};

/// Probability that m cooperating transmitters fail to deliver rate R:
/// the Erlang-m CDF at omega/p_t, i.e. the regularized lower incomplete
/// gamma P(m, omega/p_t). Throws std::invalid_argument on invalid params.
double fail_prob_m(const FailProbParams& params);

/// log of fail_prob_m; usable far below double underflow of the linear value.
double log_fail_prob_m(const FailProbParams& params);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
/// Series expansion for x < a + 1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);

/// log of gamma_p, accurate for arbitrarily small P (deep outage tails).
double log_gamma_p(double a, double x);

} // namespace andcoop
