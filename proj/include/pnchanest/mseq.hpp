#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pnchanest {

/// Binary maximal-length sequence mapped to antipodal symbols (bit 0 -> +1,
/// bit 1 -> -1). Produced by generate_m_sequence; immutable afterwards.
class MSequence {
public:
    const std::vector<double>& symbols() const { return symbols_; }
    std::size_t length() const { return symbols_.size(); }
    int degree() const { return degree_; }
    std::uint32_t polynomial() const { return polynomial_; }
    std::uint32_t seed_state() const { return seed_state_; }

    double operator[](std::size_t i) const { return symbols_[i]; }

private:
    friend MSequence generate_m_sequence(std::uint32_t, int, std::uint32_t);

    std::vector<double> symbols_;
    int degree_ = 0;
    std::uint32_t polynomial_ = 0;
    std::uint32_t seed_state_ = 0;
};

// Non-normative default generator polynomials (bit i = coefficient of x^i).
inline constexpr std::uint32_t kDefaultPoly8 = 0x171;  // x^8 + x^6 + x^5 + x^4 + 1
inline constexpr std::uint32_t kDefaultPoly9 = 0x221;  // x^9 + x^5 + 1

/// Runs a Fibonacci LFSR with characteristic polynomial `polynomial` for one
/// full period starting from `seed_state`.
///
/// The register holds s[n..n+r-1] in bits 0..r-1 and obeys
/// s[n+r] = sum_i c_i s[n+i] (mod 2). Throws std::invalid_argument with
/// "degenerate LFSR state" for a zero seed and "non-primitive polynomial"
/// when the register does not return to the seed after exactly 2^r - 1 steps.
MSequence generate_m_sequence(std::uint32_t polynomial, int degree, std::uint32_t seed_state);

/// Default polynomial for degrees 8 and 9; throws for other degrees.
std::uint32_t default_polynomial(int degree);

/// (1/N) sum_m p_m p*_{(m+lag) mod N}, accumulated as an integer before the
/// division so the off-peak value is exactly -1/N.
double circular_autocorrelation(const MSequence& seq, std::size_t lag);

/// Same sequence started `shift` chips later. Still an m-sequence: its seed
/// state is the LFSR state reached after `shift` steps.
MSequence circular_shift(const MSequence& seq, std::size_t shift);

/// m-sequence body plus its cyclic prefix of `cp_length` symbols.
class GuardInterval {
public:
    GuardInterval(MSequence body, std::size_t cp_length);

    const MSequence& body() const { return body_; }
    std::size_t cp_length() const { return cp_length_; }
    std::size_t total_length() const { return body_.length() + cp_length_; }

    /// The transmitted samples: last cp_length body symbols, then the body.
    std::vector<double> transmitted() const;

private:
    MSequence body_;
    std::size_t cp_length_;
};

GuardInterval dtmb420();  // (420, 255, 165)
GuardInterval dtmb945();  // (945, 511, 434)

}  // namespace pnchanest
