#include "pnchanest/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pnchanest {

namespace {

void check(std::size_t n, double sigma_w2) {
    if (n < 2) throw std::invalid_argument("sequence length must be >= 2, got " + std::to_string(n));
    if (!(sigma_w2 >= 0.0) || !std::isfinite(sigma_w2)) {
        throw std::invalid_argument("noise variance must be finite and non-negative");
    }
}

void check(std::size_t n, std::size_t l, double sigma_w2) {
    check(n, sigma_w2);
    if (l < 1 || l > n) {
        throw std::invalid_argument("channel length " + std::to_string(l) + " outside [1, " +
                                    std::to_string(n) + "]");
    }
}

// N^2 + 2N - NL - L + 1 = (N+1)(N+1-L)
double truncated_denominator(double n, double l) { return (n + 1.0) * (n + 1.0 - l); }

std::size_t require_l(std::optional<std::size_t> l) {
    if (!l) throw std::invalid_argument("truncated estimators need a channel length");
    return *l;
}

}  // namespace

double mse_correlation(std::size_t n, double sigma_w2) {
    check(n, sigma_w2);
    const double nd = static_cast<double>(n);
    return sigma_w2 / nd + (nd - 1.0) / (nd * nd * nd);
}

double mse_method1(std::size_t n, double sigma_w2) {
    check(n, sigma_w2);
    return 2.0 * sigma_w2 / (static_cast<double>(n) + 1.0);
}

double mse_method2(std::size_t n, std::size_t l, double sigma_w2) {
    check(n, l, sigma_w2);
    const double nd = static_cast<double>(n);
    const double ld = static_cast<double>(l);
    return (nd - ld + 2.0) * sigma_w2 / truncated_denominator(nd, ld);
}

double mse_method3(std::size_t n, std::size_t l, double sigma_w2) {
    check(n, l, sigma_w2);
    const double nd = static_cast<double>(n);
    const double ld = static_cast<double>(l);
    const double n4 = nd * nd * nd * nd;
    const double noise = (nd * nd * nd + (ld - 1.0) * (2.0 - ld - nd)) / n4 * sigma_w2;
    const double floor = (ld - 1.0) * (ld * ld - 3.0 * ld + 3.0) / (n4 * ld);
    return noise + floor;
}

double crb_full(std::size_t n, double sigma_w2) {
    check(n, sigma_w2);
    return sigma_w2 / (static_cast<double>(n) + 1.0);
}

double crb_truncated(std::size_t n, std::size_t l, double sigma_w2) {
    check(n, l, sigma_w2);
    const double nd = static_cast<double>(n);
    const double ld = static_cast<double>(l);
    return (nd - ld + 2.0) * sigma_w2 / truncated_denominator(nd, ld);
}

double error_floor_snr_db(std::size_t n) {
    if (n < 2) throw std::invalid_argument("sequence length must be >= 2");
    const double nd = static_cast<double>(n);
    return 10.0 * std::log10(nd * nd / (nd - 1.0));
}

double predicted_mse(Method method, std::size_t n, std::optional<std::size_t> l, double sigma_w2) {
    switch (method) {
        case Method::Correlation: return mse_correlation(n, sigma_w2);
        case Method::InverseFull: return mse_method1(n, sigma_w2);
        case Method::InverseTruncated: return mse_method2(n, require_l(l), sigma_w2);
        case Method::SubtractInterference: return mse_method3(n, require_l(l), sigma_w2);
    }
    throw std::invalid_argument("unknown estimator");
}

double matching_crb(Method method, std::size_t n, std::optional<std::size_t> l, double sigma_w2) {
    return is_full_length(method) ? crb_full(n, sigma_w2) : crb_truncated(n, require_l(l), sigma_w2);
}

}  // namespace pnchanest
