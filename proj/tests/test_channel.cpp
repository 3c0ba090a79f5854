#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "pnchanest/channel.hpp"
#include "pnchanest/estimators.hpp"

using namespace pnchanest;

TEST_CASE("TU-6 quantizes to L = 38") {
    const auto q = quantize_profile(tu6_profile());
    CHECK(q.positions == std::vector<std::size_t>{0, 2, 4, 12, 17, 37});
    CHECK(q.length == 38);
    CHECK(std::accumulate(q.powers.begin(), q.powers.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    // -3 dB tap vs 0 dB tap
    CHECK(q.powers[1] / q.powers[0] == doctest::Approx(std::pow(10.0, 0.3)));
}

TEST_CASE("HT quantizes to L = 130") {
    const auto q = quantize_profile(ht_profile());
    CHECK(q.positions == std::vector<std::size_t>{0, 2, 3, 5, 113, 129});
    CHECK(q.length == 130);
    CHECK(std::accumulate(q.powers.begin(), q.powers.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("single-tap profile") {
    const ChannelProfile flat{"flat", {{0.0, 0.0}}};
    const auto q = quantize_profile(flat);
    CHECK(q.positions == std::vector<std::size_t>{0});
    CHECK(q.powers == std::vector<double>{1.0});
    CHECK(q.length == 1);
}

TEST_CASE("profile validation and collisions") {
    CHECK_THROWS(quantize_profile(ChannelProfile{"empty", {}}));
    CHECK_THROWS(quantize_profile(ChannelProfile{"neg", {{-0.1, 0.0}, {1.0, 0.0}}}));
    CHECK_THROWS(quantize_profile(ChannelProfile{"order", {{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.0}}}));
    CHECK_THROWS_WITH(quantize_profile(ChannelProfile{"close", {{0.0, 0.0}, {0.05, 0.0}, {1.0, 0.0}}}),
                      doctest::Contains("colliding taps"));
}

TEST_CASE("profile file parsing") {
    const auto p = parse_profile("# COST-207 TU\nTU6 0 -3\nTU6, 0.2, 0\nTU6 0.5 -5  # tap 3\n\nTU6 1.6 -6\n"
                                 "TU6 2.3 -8\nTU6 5.0 -10\n");
    CHECK(p.name == "TU6");
    CHECK(p.taps.size() == 6);
    CHECK(quantize_profile(p).positions == quantize_profile(tu6_profile()).positions);

    CHECK_THROWS(parse_profile("A 0 0\nB 1 0\n"));
    CHECK_THROWS(parse_profile("A 0\n"));
    CHECK_THROWS(parse_profile("A 0 0 7\n"));
    CHECK_THROWS(parse_profile(""));

    const auto path = std::filesystem::temp_directory_path() / "pnchanest_profile_test.txt";
    {
        std::ofstream out(path);
        out << "two 0 0\ntwo 1 -3\n";
    }
    const auto loaded = load_profile(path);
    CHECK(loaded.taps.size() == 2);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_profile(path), std::runtime_error);
}

TEST_CASE("realizations are zero off the profile grid") {
    const auto q = quantize_profile(tu6_profile());
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const auto h = realize_channel(q, rng, static_cast<std::uint64_t>(i));
        REQUIRE(h.length() == 38);
        CHECK(h.draw_index == static_cast<std::uint64_t>(i));
        for (std::size_t k = 0; k < h.length(); ++k) {
            const bool on_grid = std::find(q.positions.begin(), q.positions.end(), k) != q.positions.end();
            if (!on_grid) REQUIRE(h.taps[k] == cplx{});
        }
    }
}

TEST_CASE("tap statistics over 1e5 draws") {
    const auto q = quantize_profile(tu6_profile());
    Rng rng(99);
    const int draws = 100000;
    double total = 0.0, p0 = 0.0, p2 = 0.0;
    cplx cross{};
    for (int i = 0; i < draws; ++i) {
        const auto h = realize_channel(q, rng);
        for (const auto& t : h.taps) total += std::norm(t);
        p0 += std::norm(h.taps[0]);
        p2 += std::norm(h.taps[2]);
        cross += h.taps[0] * std::conj(h.taps[2]);
    }
    CHECK(total / draws == doctest::Approx(1.0).epsilon(0.01));
    CHECK(p2 / p0 == doctest::Approx(std::pow(10.0, 0.3)).epsilon(0.05));
    CHECK(std::abs(cross) / draws <= 0.01);
}

TEST_CASE("identity and pure-delay channels") {
    const auto seq = generate_m_sequence(default_polynomial(8), 8, 1);
    Rng rng(1);
    ChannelRealization h;
    h.taps = {1.0};
    const auto d = receive_pn(seq, h, 0.0, rng);
    for (std::size_t i = 0; i < 255; ++i) REQUIRE(d.samples[i] == cplx(seq[i]));

    const std::size_t k = 9;
    h.taps.assign(k + 1, cplx{});
    h.taps[k] = 1.0;
    const auto delayed = receive_pn(seq, h, 0.0, rng);
    for (std::size_t i = 0; i < 255; ++i) REQUIRE(delayed.samples[i] == cplx(seq[(i + 255 - k) % 255]));
}

TEST_CASE("receive_pn equals the dense circulant product P h") {
    const auto seq = generate_m_sequence(default_polynomial(8), 8, 5);
    const auto P = dense::convolution_matrix(seq);
    const auto q = quantize_profile(ht_profile());
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto h = realize_channel(q, rng);
        CVec padded(h.taps);
        padded.resize(255);
        const auto expected = P.multiply(padded);
        const auto d = receive_pn(seq, h, 0.0, rng);
        for (std::size_t i = 0; i < 255; ++i) REQUIRE(std::abs(d.samples[i] - expected[i]) <= 1e-12);
    }
}

TEST_CASE("receive_pn rejects channels longer than the sequence") {
    const auto seq = generate_m_sequence(0b1011, 3, 1);
    ChannelRealization h;
    h.taps.assign(8, cplx{1.0});
    Rng rng(0);
    CHECK_THROWS_WITH(receive_pn(seq, h, 0.0, rng), "channel exceeds sequence length");
}

TEST_CASE("guard-interval path is bit-identical to the circular model") {
    struct Case {
        GuardInterval gi;
        ChannelProfile profile;
    };
    const Case cases[] = {{dtmb420(), tu6_profile()}, {dtmb420(), ht_profile()},
                          {dtmb945(), tu6_profile()}, {dtmb945(), ht_profile()}};
    for (const auto& c : cases) {
        Rng draw(17);
        const auto h = realize_channel(c.profile, draw);
        for (double sigma2 : {0.0, 0.01}) {
            Rng a(123), b(123);
            const auto via_gi = receive_via_gi(c.gi, h, sigma2, a);
            const auto direct = receive_pn(c.gi.body(), h, sigma2, b);
            CHECK(via_gi.samples == direct.samples);
        }
    }
}

TEST_CASE("guard-interval path needs L <= N_CP + 1") {
    const auto gi = dtmb420();
    Rng rng(0);
    ChannelRealization ok;
    ok.taps.assign(166, cplx{0.01});
    CHECK_NOTHROW(receive_via_gi(gi, ok, 0.0, rng));
    ChannelRealization too_long;
    too_long.taps.assign(167, cplx{0.01});
    CHECK_THROWS_WITH(receive_via_gi(gi, too_long, 0.0, rng), "CP shorter than delay spread");
}

TEST_CASE("received energy with unit-power channel averages to one") {
    const auto gi = dtmb420();
    const auto q = quantize_profile(tu6_profile());
    Rng rng(4);
    double acc = 0.0;
    const int draws = 4000;
    for (int i = 0; i < draws; ++i) {
        const auto h = realize_channel(q, rng);
        const auto d = receive_via_gi(gi, h, 0.0, rng);
        double e = 0.0;
        for (const auto& x : d.samples) e += std::norm(x);
        acc += e / 255.0;
    }
    CHECK(acc / draws == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("noise calibration on a zero input") {
    Rng rng(2718);
    CVec zeros(1000000, cplx{});
    add_awgn(zeros, 0.05, rng);
    double var = 0.0;
    for (const auto& x : zeros) var += std::norm(x);
    var /= static_cast<double>(zeros.size());
    CHECK(var == doctest::Approx(0.05).epsilon(0.02));
    CHECK_THROWS(add_awgn(zeros, -1.0, rng));
}
