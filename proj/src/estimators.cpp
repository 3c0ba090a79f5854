#include "pnchanest/estimators.hpp"

#include <stdexcept>
#include <string>

namespace pnchanest {

namespace {

void require_correlation(const CirEstimate& hbar) {
    if (hbar.method != Method::Correlation) {
        throw std::invalid_argument("refinement expects a correlation estimate, got " +
                                    std::string(method_name(hbar.method)));
    }
}

void require_length(const CirEstimate& hbar, std::size_t L) {
    if (L < 1 || L > hbar.taps.size()) {
        throw std::invalid_argument("assumed channel length " + std::to_string(L) + " outside [1, " +
                                    std::to_string(hbar.taps.size()) + "]");
    }
}

std::span<const cplx> truncate(const CirEstimate& hbar, std::size_t L) {
    return std::span<const cplx>(hbar.taps).first(L);
}

}  // namespace

std::string_view method_name(Method m) {
    switch (m) {
        case Method::Correlation: return "correlation";
        case Method::InverseFull: return "method1";
        case Method::InverseTruncated: return "method2";
        case Method::SubtractInterference: return "method3";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "correlation" || name == "corr") return Method::Correlation;
    if (name == "method1" || name == "m1") return Method::InverseFull;
    if (name == "method2" || name == "m2") return Method::InverseTruncated;
    if (name == "method3" || name == "m3") return Method::SubtractInterference;
    throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

CirEstimate estimate_correlation(std::span<const cplx> d, const MSequence& p, OpCount* ops) {
    const std::size_t n = p.length();
    if (d.size() != n) {
        throw std::invalid_argument("received length " + std::to_string(d.size()) +
                                    " does not match sequence length " + std::to_string(n));
    }
    const auto& sym = p.symbols();
    const double inv_n = 1.0 / static_cast<double>(n);

    CirEstimate est;
    est.method = Method::Correlation;
    est.taps.resize(n);
    // h_bar[i] = (1/N) sum_m p_m d[(m + i) mod N]; the wrap is split out of the
    // inner loop.
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc{};
        const std::size_t head = n - i;
        for (std::size_t m = 0; m < head; ++m) acc += sym[m] * d[m + i];
        for (std::size_t m = head; m < n; ++m) acc += sym[m] * d[m + i - n];
        est.taps[i] = acc * inv_n;
    }
    if (ops) {
        ops->mults += n * n + n;
        ops->adds += n * (n - 1);
    }
    return est;
}

CirEstimate estimate_correlation(const ReceivedPn& d, const MSequence& p, OpCount* ops) {
    return estimate_correlation(std::span<const cplx>(d.samples), p, ops);
}

CirEstimate estimate_method1(const CirEstimate& hbar, OpCount* ops) {
    require_correlation(hbar);
    const auto q_inv = StructuredCorrelationMatrix::q_inverse(hbar.taps.size());
    return {apply_structured(q_inv, hbar.taps, ops), Method::InverseFull, std::nullopt};
}

CirEstimate estimate_method2(const CirEstimate& hbar, std::size_t L, OpCount* ops) {
    require_correlation(hbar);
    require_length(hbar, L);
    const auto q_bar_inv = StructuredCorrelationMatrix::q_bar_inverse(hbar.taps.size(), L);
    return {apply_structured(q_bar_inv, truncate(hbar, L), ops), Method::InverseTruncated, L};
}

CirEstimate estimate_method3(const CirEstimate& hbar, std::size_t L, OpCount* ops) {
    require_correlation(hbar);
    require_length(hbar, L);
    // I - Delta_bar has diagonal 1 and off-diagonal +1/N.
    const double inv_n = 1.0 / static_cast<double>(hbar.taps.size());
    const StructuredCorrelationMatrix cancel{L, 1.0, inv_n};
    return {apply_structured(cancel, truncate(hbar, L), ops), Method::SubtractInterference, L};
}

namespace dense {

DenseMatrix correlation_matrix(const MSequence& p) {
    const std::size_t n = p.length();
    DenseMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) c(i, j) = p[(j + n - i) % n];
    }
    return c;
}

DenseMatrix convolution_matrix(const MSequence& p) {
    const std::size_t n = p.length();
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = p[(i + n - j) % n];
    }
    return m;
}

CirEstimate estimate_correlation(std::span<const cplx> d, const MSequence& p, OpCount* ops) {
    const std::size_t n = p.length();
    if (d.size() != n) throw std::invalid_argument("received length does not match sequence length");
    auto taps = correlation_matrix(p).multiply(d, ops);
    for (auto& t : taps) t /= static_cast<double>(n);
    if (ops) ops->mults += n;
    return {std::move(taps), Method::Correlation, std::nullopt};
}

CirEstimate estimate_method1(const CirEstimate& hbar, OpCount* ops) {
    require_correlation(hbar);
    return {dense_q_inverse(hbar.taps.size()).multiply(hbar.taps, ops), Method::InverseFull, std::nullopt};
}

CirEstimate estimate_method2(const CirEstimate& hbar, std::size_t L, OpCount* ops) {
    require_correlation(hbar);
    require_length(hbar, L);
    return {dense_q_bar_inverse(hbar.taps.size(), L).multiply(truncate(hbar, L), ops),
            Method::InverseTruncated, L};
}

CirEstimate estimate_method3(const CirEstimate& hbar, std::size_t L, OpCount* ops) {
    require_correlation(hbar);
    require_length(hbar, L);
    const std::size_t n = hbar.taps.size();
    // Delta_bar: off-diagonal part of the leading L x L block of Q.
    const DenseMatrix q = dense_q(n);
    DenseMatrix delta(L, L);
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t j = 0; j < L; ++j) delta(i, j) = i == j ? 0.0 : q(i, j);
    }
    const auto h_tilde = truncate(hbar, L);
    const CVec interference = delta.multiply(h_tilde, ops);
    CVec taps(L);
    for (std::size_t i = 0; i < L; ++i) taps[i] = h_tilde[i] - interference[i];
    if (ops) ops->adds += L;
    return {std::move(taps), Method::SubtractInterference, L};
}

}  // namespace dense

}  // namespace pnchanest
