#pragma once

#include <cmath>
#include <cstddef>
#include <optional>

#include "pnchanest/estimators.hpp"

namespace pnchanest {

// Closed-form MSE of each estimator. Correlation and Method 1 average over
// N positions; Methods 2 and 3 over the L estimated taps. All take the noise
// variance sigma_w2 (SNR = 1/sigma_w2 for unit-power PN and channel).

/// sigma^2/N + (N-1)/N^3
double mse_correlation(std::size_t n, double sigma_w2);
/// 2 sigma^2/(N+1)
double mse_method1(std::size_t n, double sigma_w2);
/// (N-L+2) sigma^2 / (N^2 + 2N - NL - L + 1)
double mse_method2(std::size_t n, std::size_t l, double sigma_w2);
/// [N^3 + (L-1)(2-L-N)]/N^4 sigma^2 + (L-1)(L^2-3L+3)/(N^4 L)
double mse_method3(std::size_t n, std::size_t l, double sigma_w2);

/// Cramer-Rao bound for an N-tap estimate: sigma^2/(N+1).
double crb_full(std::size_t n, double sigma_w2);
/// Cramer-Rao bound when the channel length L is known.
double crb_truncated(std::size_t n, std::size_t l, double sigma_w2);

/// SNR above which the correlation estimator's floor dominates:
/// 10 log10(N^2/(N-1)).
double error_floor_snr_db(std::size_t n);

/// Prediction matching `method`; l is required for the truncated methods.
double predicted_mse(Method method, std::size_t n, std::optional<std::size_t> l, double sigma_w2);
/// CRB matching the estimate length of `method`.
double matching_crb(Method method, std::size_t n, std::optional<std::size_t> l, double sigma_w2);

inline double snr_db_to_sigma2(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

}  // namespace pnchanest
