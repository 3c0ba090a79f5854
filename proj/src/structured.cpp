#include "pnchanest/structured.hpp"

#include <stdexcept>
#include <string>

namespace pnchanest {

namespace {

void require_dimension(std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("correlation matrix dimension must be >= 2, got " + std::to_string(n));
    }
}

void require_block(std::size_t n, std::size_t l) {
    require_dimension(n);
    if (l < 1 || l > n) {
        throw std::invalid_argument("block size " + std::to_string(l) + " outside [1, " +
                                    std::to_string(n) + "]");
    }
}

}  // namespace

StructuredCorrelationMatrix StructuredCorrelationMatrix::q(std::size_t n) {
    require_dimension(n);
    return {n, 1.0, -1.0 / static_cast<double>(n)};
}

StructuredCorrelationMatrix StructuredCorrelationMatrix::q_inverse(std::size_t n) {
    require_dimension(n);
    const double nd = static_cast<double>(n);
    return {n, 2.0 * nd / (nd + 1.0), nd / (nd + 1.0)};
}

StructuredCorrelationMatrix StructuredCorrelationMatrix::q_bar(std::size_t n, std::size_t l) {
    require_block(n, l);
    return {l, 1.0, -1.0 / static_cast<double>(n)};
}

StructuredCorrelationMatrix StructuredCorrelationMatrix::q_bar_inverse(std::size_t n, std::size_t l) {
    require_block(n, l);
    const double nd = static_cast<double>(n);
    const double ld = static_cast<double>(l);
    // (N+1)(N+1-L); evaluated as a product to stay exact in integers.
    const double denom = (nd + 1.0) * (nd + 1.0 - ld);
    return {l, 1.0 + (ld - 1.0) / denom, nd / denom};
}

CVec apply_structured(const StructuredCorrelationMatrix& m, std::span<const cplx> v, OpCount* ops) {
    if (v.size() != m.n) {
        throw std::invalid_argument("vector length " + std::to_string(v.size()) +
                                    " does not match matrix dimension " + std::to_string(m.n));
    }
    cplx sum{};
    for (const auto& x : v) sum += x;

    const double scale = m.diag - m.offdiag;
    const cplx shift = m.offdiag * sum;
    CVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = scale * v[i] + shift;

    if (ops) {
        ops->adds += 2 * v.size();
        ops->mults += v.size() + 1;
    }
    return out;
}

StructuredCorrelationMatrix multiply(const StructuredCorrelationMatrix& a,
                                     const StructuredCorrelationMatrix& b) {
    if (a.n != b.n) throw std::invalid_argument("structured matrix dimensions differ");
    const double others = static_cast<double>(a.n) - 2.0;
    return {a.n, a.diag * b.diag + (others + 1.0) * a.offdiag * b.offdiag,
            a.diag * b.offdiag + a.offdiag * b.diag + others * a.offdiag * b.offdiag};
}

CVec DenseMatrix::multiply(std::span<const cplx> v, OpCount* ops) const {
    if (v.size() != cols_) {
        throw std::invalid_argument("vector length " + std::to_string(v.size()) +
                                    " does not match matrix columns " + std::to_string(cols_));
    }
    CVec out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        cplx acc{};
        const double* row = &data_[i * cols_];
        for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * v[j];
        out[i] = acc;
    }
    if (ops) {
        ops->mults += rows_ * cols_;
        ops->adds += rows_ * (cols_ - 1);
    }
    return out;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix dimensions do not conform");
    DenseMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    }
    return out;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

DenseMatrix DenseMatrix::from(const StructuredCorrelationMatrix& m) {
    DenseMatrix out(m.n, m.n, m.offdiag);
    for (std::size_t i = 0; i < m.n; ++i) out(i, i) = m.diag;
    return out;
}

DenseMatrix dense_q(std::size_t n) { return DenseMatrix::from(StructuredCorrelationMatrix::q(n)); }

DenseMatrix dense_q_inverse(std::size_t n) {
    return DenseMatrix::from(StructuredCorrelationMatrix::q_inverse(n));
}

DenseMatrix dense_q_bar_inverse(std::size_t n, std::size_t l) {
    return DenseMatrix::from(StructuredCorrelationMatrix::q_bar_inverse(n, l));
}

}  // namespace pnchanest
