#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "pnchanest/channel.hpp"
#include "pnchanest/mseq.hpp"
#include "pnchanest/structured.hpp"
#include "pnchanest/types.hpp"

namespace pnchanest {

enum class Method {
    Correlation,           // h_bar = (1/N) C d
    InverseFull,           // Q^-1 h_bar
    InverseTruncated,      // Q_bar^-1 T h_bar
    SubtractInterference,  // (I - Delta_bar) T h_bar
};

std::string_view method_name(Method m);
Method parse_method(std::string_view name);

/// Whether the estimate covers all N lags (true) or only the first L.
inline bool is_full_length(Method m) {
    return m == Method::Correlation || m == Method::InverseFull;
}

struct CirEstimate {
    CVec taps;
    Method method = Method::Correlation;
    std::optional<std::size_t> assumed_L;
};

/// Circular cross-correlation of the received PN with the local copy,
/// O(N^2) direct sum.
CirEstimate estimate_correlation(std::span<const cplx> d, const MSequence& p, OpCount* ops = nullptr);
CirEstimate estimate_correlation(const ReceivedPn& d, const MSequence& p, OpCount* ops = nullptr);

/// Q^-1 applied through its two values; O(N).
CirEstimate estimate_method1(const CirEstimate& hbar, OpCount* ops = nullptr);

/// Truncation to L taps followed by the structured Q_bar^-1; O(L).
CirEstimate estimate_method2(const CirEstimate& hbar, std::size_t L, OpCount* ops = nullptr);

/// Truncation to L taps, then each tap gains (sum - tap)/N back; O(L).
CirEstimate estimate_method3(const CirEstimate& hbar, std::size_t L, OpCount* ops = nullptr);

/// Dense reference implementations. Same results, Table-I complexity
/// (N^2 for the correlation and Method 1, L^2 for Methods 2 and 3).
namespace dense {

/// Circulant C = P^H with first row [p_1 ... p_N].
DenseMatrix correlation_matrix(const MSequence& p);
/// Circulant P with first row [p_1, p_N, ..., p_2].
DenseMatrix convolution_matrix(const MSequence& p);

CirEstimate estimate_correlation(std::span<const cplx> d, const MSequence& p, OpCount* ops = nullptr);
CirEstimate estimate_method1(const CirEstimate& hbar, OpCount* ops = nullptr);
CirEstimate estimate_method2(const CirEstimate& hbar, std::size_t L, OpCount* ops = nullptr);
CirEstimate estimate_method3(const CirEstimate& hbar, std::size_t L, OpCount* ops = nullptr);

}  // namespace dense

}  // namespace pnchanest
