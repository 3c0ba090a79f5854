#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace pnchanest {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Arithmetic operation tally. Passed optionally to the estimator and matrix
// routines so tests can check how much work each path performs.
struct OpCount {
    std::size_t mults = 0;
    std::size_t adds = 0;

    std::size_t total() const { return mults + adds; }
    void reset() { mults = adds = 0; }
};

}  // namespace pnchanest
