#include "pnchanest/mseq.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace pnchanest {

namespace {

std::uint32_t lfsr_step(std::uint32_t state, std::uint32_t taps, int degree) {
    const std::uint32_t feedback = std::popcount(state & taps) & 1u;
    return (state >> 1) | (feedback << (degree - 1));
}

void check_register(std::uint32_t polynomial, int degree, std::uint32_t seed_state) {
    if (degree < 2 || degree > 24) {
        throw std::invalid_argument("LFSR degree must be in [2, 24], got " + std::to_string(degree));
    }
    if ((polynomial >> degree) != 1u) {
        throw std::invalid_argument("polynomial mask does not have degree " + std::to_string(degree));
    }
    if (seed_state == 0) {
        throw std::invalid_argument("degenerate LFSR state");
    }
    if ((seed_state >> degree) != 0) {
        throw std::invalid_argument("seed state wider than the register");
    }
}

}  // namespace

MSequence generate_m_sequence(std::uint32_t polynomial, int degree, std::uint32_t seed_state) {
    check_register(polynomial, degree, seed_state);

    const std::uint32_t taps = polynomial & ((1u << degree) - 1u);
    const std::size_t n = (std::size_t{1} << degree) - 1;

    MSequence seq;
    seq.degree_ = degree;
    seq.polynomial_ = polynomial;
    seq.seed_state_ = seed_state;
    seq.symbols_.reserve(n);

    std::uint32_t state = seed_state;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && state == seed_state) {
            throw std::invalid_argument("non-primitive polynomial");
        }
        seq.symbols_.push_back((state & 1u) ? -1.0 : 1.0);
        state = lfsr_step(state, taps, degree);
    }
    if (state != seed_state) {
        throw std::invalid_argument("non-primitive polynomial");
    }
    return seq;
}

std::uint32_t default_polynomial(int degree) {
    switch (degree) {
        case 8: return kDefaultPoly8;
        case 9: return kDefaultPoly9;
        default:
            throw std::invalid_argument("no default polynomial for degree " + std::to_string(degree));
    }
}

double circular_autocorrelation(const MSequence& seq, std::size_t lag) {
    const std::size_t n = seq.length();
    if (lag >= n) {
        throw std::out_of_range("autocorrelation lag " + std::to_string(lag) + " outside [0, " +
                                std::to_string(n) + ")");
    }
    // Symbols are real, so the conjugate is the symbol itself.
    long long acc = 0;
    for (std::size_t m = 0; m < n; ++m) {
        acc += static_cast<long long>(seq[m]) * static_cast<long long>(seq[(m + lag) % n]);
    }
    return static_cast<double>(acc) / static_cast<double>(n);
}

MSequence circular_shift(const MSequence& seq, std::size_t shift) {
    const int degree = seq.degree();
    const std::uint32_t taps = seq.polynomial() & ((1u << degree) - 1u);
    std::uint32_t state = seq.seed_state();
    for (std::size_t i = 0; i < shift % seq.length(); ++i) {
        state = lfsr_step(state, taps, degree);
    }
    return generate_m_sequence(seq.polynomial(), degree, state);
}

GuardInterval::GuardInterval(MSequence body, std::size_t cp_length)
    : body_(std::move(body)), cp_length_(cp_length) {
    if (cp_length_ > body_.length()) {
        throw std::invalid_argument("cyclic prefix longer than the PN body");
    }
}

std::vector<double> GuardInterval::transmitted() const {
    const auto& p = body_.symbols();
    std::vector<double> out;
    out.reserve(total_length());
    out.insert(out.end(), p.end() - static_cast<std::ptrdiff_t>(cp_length_), p.end());
    out.insert(out.end(), p.begin(), p.end());
    return out;
}

GuardInterval dtmb420() { return GuardInterval(generate_m_sequence(kDefaultPoly8, 8, 1), 165); }

GuardInterval dtmb945() { return GuardInterval(generate_m_sequence(kDefaultPoly9, 9, 1), 434); }

}  // namespace pnchanest
