#include "pnchanest/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pnchanest {

void ChannelProfile::validate() const {
    if (taps.empty()) throw std::invalid_argument("channel profile '" + name + "' has no taps");
    if (!(sampling_rate > 0.0)) throw std::invalid_argument("sampling rate must be positive");
    if (taps.front().delay_us < 0.0) throw std::invalid_argument("first tap delay is negative");
    for (std::size_t i = 1; i < taps.size(); ++i) {
        if (!(taps[i].delay_us > taps[i - 1].delay_us)) {
            throw std::invalid_argument("tap delays of '" + name + "' are not strictly increasing");
        }
    }
    for (const auto& t : taps) {
        if (!std::isfinite(t.power_db) || !std::isfinite(t.delay_us)) {
            throw std::invalid_argument("non-finite tap in profile '" + name + "'");
        }
    }
}

// COST-207 power-delay profiles.
ChannelProfile tu6_profile() {
    return {"TU6", {{0.0, -3.0}, {0.2, 0.0}, {0.5, -5.0}, {1.6, -6.0}, {2.3, -8.0}, {5.0, -10.0}}};
}

ChannelProfile ht_profile() {
    return {"HT", {{0.0, 0.0}, {0.2, -2.0}, {0.4, -4.0}, {0.6, -7.0}, {15.0, -6.0}, {17.2, -12.0}}};
}

ChannelProfile parse_profile(const std::string& text) {
    ChannelProfile profile;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        std::string name;
        if (!(row >> name)) continue;
        ProfileTap tap;
        std::string extra;
        if (!(row >> tap.delay_us >> tap.power_db) || (row >> extra)) {
            throw std::invalid_argument("profile line " + std::to_string(line_no) +
                                        ": expected 'name delay_us power_db'");
        }
        if (profile.name.empty()) {
            profile.name = name;
        } else if (profile.name != name) {
            throw std::invalid_argument("profile line " + std::to_string(line_no) + ": name '" + name +
                                        "' differs from '" + profile.name + "'");
        }
        profile.taps.push_back(tap);
    }
    profile.validate();
    return profile;
}

ChannelProfile load_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open channel profile " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_profile(buf.str());
}

QuantizedProfile quantize_profile(const ChannelProfile& profile) {
    profile.validate();
    QuantizedProfile q;
    q.name = profile.name;

    const std::size_t count = profile.taps.size();
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& tap = profile.taps[i];
        long pos = std::lround(tap.delay_us * profile.sampling_rate);
        if (i + 1 == count) pos = std::max(pos - 1, 0L);
        if (!q.positions.empty() && static_cast<std::size_t>(pos) <= q.positions.back()) {
            throw std::invalid_argument("colliding taps in profile '" + profile.name + "'");
        }
        q.positions.push_back(static_cast<std::size_t>(pos));
        const double linear = std::pow(10.0, tap.power_db / 10.0);
        q.powers.push_back(linear);
        total += linear;
    }
    for (auto& p : q.powers) p /= total;
    q.length = q.positions.back() + 1;
    return q;
}

ChannelRealization realize_channel(const QuantizedProfile& profile, Rng& rng, std::uint64_t draw_index) {
    ChannelRealization h;
    h.taps.assign(profile.length, cplx{});
    h.profile_name = profile.name;
    h.draw_index = draw_index;
    for (std::size_t i = 0; i < profile.positions.size(); ++i) {
        h.taps[profile.positions[i]] = rng.complex_normal(profile.powers[i]);
    }
    return h;
}

ChannelRealization realize_channel(const ChannelProfile& profile, Rng& rng, std::uint64_t draw_index) {
    return realize_channel(quantize_profile(profile), rng, draw_index);
}

void add_awgn(std::span<cplx> samples, double sigma_w2, Rng& rng) {
    if (sigma_w2 < 0.0) throw std::invalid_argument("noise variance must be non-negative");
    if (sigma_w2 == 0.0) return;
    for (auto& s : samples) s += rng.complex_normal(sigma_w2);
}

ReceivedPn receive_pn(const MSequence& seq, const ChannelRealization& h, double sigma_w2, Rng& rng) {
    const std::size_t n = seq.length();
    const std::size_t l = h.length();
    if (l > n) throw std::invalid_argument("channel exceeds sequence length");

    ReceivedPn rx;
    rx.samples.assign(n, cplx{});
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc{};
        for (std::size_t k = 0; k < l; ++k) acc += h.taps[k] * seq[(i + n - k) % n];
        rx.samples[i] = acc;
    }
    add_awgn(rx.samples, sigma_w2, rng);
    rx.sigma_w2 = sigma_w2;
    rx.truth = h;
    return rx;
}

ReceivedPn receive_via_gi(const GuardInterval& gi, const ChannelRealization& h, double sigma_w2,
                          Rng& rng) {
    const std::size_t ncp = gi.cp_length();
    const std::size_t l = h.length();
    if (l > ncp + 1) throw std::invalid_argument("CP shorter than delay spread");

    const auto tx = gi.transmitted();
    // Full linear convolution, length nu + L - 1.
    std::vector<cplx> conv(tx.size() + l - 1);
    for (std::size_t j = 0; j < conv.size(); ++j) {
        cplx acc{};
        for (std::size_t k = 0; k < l; ++k) {
            if (k <= j && j - k < tx.size()) acc += h.taps[k] * tx[j - k];
        }
        conv[j] = acc;
    }

    ReceivedPn rx;
    const auto first = conv.begin() + static_cast<std::ptrdiff_t>(ncp);
    rx.samples.assign(first, first + static_cast<std::ptrdiff_t>(gi.body().length()));
    add_awgn(rx.samples, sigma_w2, rng);
    rx.sigma_w2 = sigma_w2;
    rx.truth = h;
    return rx;
}

}  // namespace pnchanest
