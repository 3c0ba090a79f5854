#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pnchanest/types.hpp"

namespace pnchanest {

/// n x n matrix with a constant diagonal and a constant off-diagonal. Q, its
/// inverse and the inverse of its leading block all have this shape, so only
/// the two values are kept.
struct StructuredCorrelationMatrix {
    std::size_t n = 0;
    double diag = 0.0;
    double offdiag = 0.0;

    /// Q = (1/N) C P: diagonal 1, off-diagonal -1/N.
    static StructuredCorrelationMatrix q(std::size_t n);
    /// Q^-1: a = 2N/(N+1), b = N/(N+1).
    static StructuredCorrelationMatrix q_inverse(std::size_t n);
    /// Leading l x l block of Q for sequence length n.
    static StructuredCorrelationMatrix q_bar(std::size_t n, std::size_t l);
    /// Inverse of the leading l x l block:
    ///   a = 1 + (l-1)/D, b = n/D, D = n^2 + 2n - nl - l + 1.
    static StructuredCorrelationMatrix q_bar_inverse(std::size_t n, std::size_t l);

    double at(std::size_t i, std::size_t j) const { return i == j ? diag : offdiag; }
};

/// (diag - offdiag) v + offdiag (sum v) 1, in O(n).
CVec apply_structured(const StructuredCorrelationMatrix& m, std::span<const cplx> v,
                      OpCount* ops = nullptr);

/// Structured product of two matrices of the same shape (closed under
/// multiplication).
StructuredCorrelationMatrix multiply(const StructuredCorrelationMatrix& a,
                                     const StructuredCorrelationMatrix& b);

/// Row-major real matrix. Used for the O(n^2) reference paths.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    CVec multiply(std::span<const cplx> v, OpCount* ops = nullptr) const;
    DenseMatrix multiply(const DenseMatrix& rhs) const;

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix from(const StructuredCorrelationMatrix& m);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix dense_q(std::size_t n);
DenseMatrix dense_q_inverse(std::size_t n);
DenseMatrix dense_q_bar_inverse(std::size_t n, std::size_t l);

}  // namespace pnchanest
