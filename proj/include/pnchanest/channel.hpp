#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pnchanest/mseq.hpp"
#include "pnchanest/rng.hpp"
#include "pnchanest/types.hpp"

namespace pnchanest {

/// DTMB sampling rate in samples per microsecond.
inline constexpr double kDtmbSamplingRate = 7.56;

struct ProfileTap {
    double delay_us = 0.0;
    double power_db = 0.0;

    bool operator==(const ProfileTap&) const = default;
};

struct ChannelProfile {
    std::string name;
    std::vector<ProfileTap> taps;
    double sampling_rate = kDtmbSamplingRate;

    /// Throws std::invalid_argument unless taps are nonempty, delays start at
    /// >= 0 and strictly increase, and the sampling rate is positive.
    void validate() const;

    bool operator==(const ChannelProfile&) const = default;
};

ChannelProfile tu6_profile();
ChannelProfile ht_profile();

/// Reads rows of `name delay_us power_db` (whitespace or comma separated,
/// '#' starts a comment). All rows must share one name.
ChannelProfile load_profile(const std::filesystem::path& path);
ChannelProfile parse_profile(const std::string& text);

/// Profile on the sample grid.
struct QuantizedProfile {
    std::string name;
    std::vector<std::size_t> positions;
    std::vector<double> powers;  // linear, sums to 1
    std::size_t length = 0;      // L
};

/// Interior taps go to the nearest sample. The last tap goes to
/// round(max_delay * rate) - 1 so that L equals the delay spread in samples
/// (TU-6: 38, HT: 130 at 7.56 samples/us). Throws "colliding taps" when two
/// taps land on the same sample.
QuantizedProfile quantize_profile(const ChannelProfile& profile);

struct ChannelRealization {
    CVec taps;  // length L, zero off the profile positions
    std::string profile_name;
    std::uint64_t draw_index = 0;

    std::size_t length() const { return taps.size(); }
};

/// Independent complex Gaussian taps with E|h_l|^2 = alpha_l^2.
ChannelRealization realize_channel(const QuantizedProfile& profile, Rng& rng,
                                   std::uint64_t draw_index = 0);
ChannelRealization realize_channel(const ChannelProfile& profile, Rng& rng,
                                   std::uint64_t draw_index = 0);

struct ReceivedPn {
    CVec samples;  // length N
    double sigma_w2 = 0.0;
    ChannelRealization truth;
};

/// Adds complex AWGN of per-sample variance sigma_w2 in place. No draws are
/// made when sigma_w2 == 0.
void add_awgn(std::span<cplx> samples, double sigma_w2, Rng& rng);

/// d = P h + w: circular convolution of the sequence with the zero-padded CIR.
ReceivedPn receive_pn(const MSequence& seq, const ChannelRealization& h, double sigma_w2, Rng& rng);

/// Linear convolution of the transmitted guard interval with h, dropping the
/// first N_CP outputs. Requires L <= N_CP + 1; then identical to receive_pn
/// for the same random state.
ReceivedPn receive_via_gi(const GuardInterval& gi, const ChannelRealization& h, double sigma_w2,
                          Rng& rng);

}  // namespace pnchanest
