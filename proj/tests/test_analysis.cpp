#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>

#include "pnchanest/analysis.hpp"
#include "pnchanest/mseq.hpp"

using namespace pnchanest;

namespace {

// Trace-of-covariance oracle built from the actual circulant matrices of a
// generated sequence, with numeric inverses.
struct TraceOracle {
    std::size_t n;
    Eigen::MatrixXd P;  // convolution circulant
    Eigen::MatrixXd C;  // P^T
    Eigen::MatrixXd Q;

    explicit TraceOracle(const MSequence& seq) : n(seq.length()), P(n, n) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) P(i, j) = seq[(i + n - j) % n];
        }
        C = P.transpose();
        Q = C * P / static_cast<double>(n);
    }

    // Equal tap powers over the first l positions.
    Eigen::MatrixXd lambda(std::size_t size, std::size_t l) const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
        for (std::size_t i = 0; i < l; ++i) m(i, i) = 1.0 / static_cast<double>(l);
        return m;
    }

    double correlation(std::size_t l, double s2) const {
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
        const double nd = static_cast<double>(n);
        const double interference = ((Q - I) * lambda(n, l) * (Q - I).transpose()).trace();
        const double noise = s2 / (nd * nd) * (C * C.transpose()).trace();
        return (interference + noise) / nd;
    }

    double method1(double s2) const {
        const double nd = static_cast<double>(n);
        const Eigen::MatrixXd A = Q.inverse() * C / nd;
        return s2 * (A * A.transpose()).trace() / nd;
    }

    Eigen::MatrixXd truncated_c(std::size_t l) const { return C.topRows(l); }

    double method2(std::size_t l, double s2) const {
        const double nd = static_cast<double>(n);
        const Eigen::MatrixXd Qb = Q.topLeftCorner(l, l);
        const Eigen::MatrixXd A = Qb.inverse() * truncated_c(l) / nd;
        return s2 * (A * A.transpose()).trace() / static_cast<double>(l);
    }

    double method3(std::size_t l, double s2) const {
        const double nd = static_cast<double>(n);
        const Eigen::MatrixXd Il = Eigen::MatrixXd::Identity(l, l);
        const Eigen::MatrixXd delta = Q.topLeftCorner(l, l) - Il;
        const Eigen::MatrixXd bias = (Il - delta) * (Il + delta) - Il;
        const Eigen::MatrixXd A = (Il - delta) * truncated_c(l) / nd;
        const double interference = (bias * lambda(l, l) * bias.transpose()).trace();
        return (interference + s2 * (A * A.transpose()).trace()) / static_cast<double>(l);
    }

    double crb_full(double s2) const {
        return s2 / static_cast<double>(n) * (P.transpose() * P).inverse().trace();
    }

    double crb_truncated(std::size_t l, double s2) const {
        const Eigen::MatrixXd Pb = P.leftCols(l);
        return s2 / static_cast<double>(l) * (Pb.transpose() * Pb).inverse().trace();
    }
};

}  // namespace

TEST_CASE("closed forms agree with the covariance-trace oracle") {
    for (int degree : {5, 7}) {
        const auto seq = generate_m_sequence(degree == 5 ? 0b100101u : 0b10001001u, degree, 1);
        const TraceOracle oracle(seq);
        const std::size_t n = seq.length();
        for (std::size_t l : {std::size_t{1}, std::size_t{2}, std::size_t{5}, n / 2, n}) {
            for (double s2 : {0.0, 1e-3, 0.1, 1.0}) {
                CAPTURE(n);
                CAPTURE(l);
                CAPTURE(s2);
                CHECK(mse_correlation(n, s2) == doctest::Approx(oracle.correlation(l, s2)).epsilon(1e-9));
                CHECK(mse_method1(n, s2) == doctest::Approx(oracle.method1(s2)).epsilon(1e-9).scale(1e-12));
                CHECK(mse_method2(n, l, s2) == doctest::Approx(oracle.method2(l, s2)).epsilon(1e-9).scale(1e-12));
                CHECK(mse_method3(n, l, s2) == doctest::Approx(oracle.method3(l, s2)).epsilon(1e-9).scale(1e-15));
                // The Fisher trace for an N-tap estimate is 2 sigma^2/(N+1), twice the
                // printed bound; Method 1 attains it.
                CHECK(2.0 * crb_full(n, s2) == doctest::Approx(oracle.crb_full(s2)).epsilon(1e-9).scale(1e-12));
                CHECK(mse_method1(n, s2) == doctest::Approx(oracle.crb_full(s2)).epsilon(1e-9).scale(1e-12));
                CHECK(crb_truncated(n, l, s2) ==
                      doctest::Approx(oracle.crb_truncated(l, s2)).epsilon(1e-9).scale(1e-12));
            }
        }
    }
}

// Frozen values below were evaluated in exact rational arithmetic.
TEST_CASE("correlation MSE") {
    CHECK(mse_correlation(255, 0.0) == doctest::Approx(1.5318391870396756e-05).epsilon(1e-14));
    CHECK(mse_correlation(255, 0.0) == doctest::Approx(254.0 / (255.0 * 255.0 * 255.0)).epsilon(1e-15));
    // noise-dominated: the floor adds (N-1)/(N sigma^2), under 1% once sigma^2 >= 0.4
    for (double s2 : {0.4, 0.5, 1.0}) CHECK(mse_correlation(255, s2) / (s2 / 255.0) <= 1.01);
    CHECK(mse_correlation(255, 0.1) / (0.1 / 255.0) == doctest::Approx(1.0 + 254.0 / 6502.5).epsilon(1e-12));
    CHECK(mse_correlation(1u << 20, 0.01) < 1e-7);
    CHECK_THROWS(mse_correlation(1, 0.1));
    CHECK_THROWS(mse_correlation(255, -0.1));
}

TEST_CASE("method 1 MSE") {
    CHECK(mse_method1(255, 0.0) == 0.0);
    CHECK(mse_method1(255, 0.01) == doctest::Approx(7.8125e-05).epsilon(1e-15));
    for (std::size_t n : {7u, 255u, 511u}) {
        for (double s2 : {1e-4, 0.01, 1.0}) CHECK(mse_method1(n, s2) / crb_full(n, s2) == doctest::Approx(2.0));
    }
}

TEST_CASE("method 2 MSE") {
    CHECK(mse_method2(255, 38, 0.01) == doctest::Approx(3.924168577981651e-05).epsilon(1e-14));
    for (std::size_t n : {7u, 255u, 511u}) {
        CHECK(mse_method2(n, n, 0.3) == doctest::Approx(mse_method1(n, 0.3)).epsilon(1e-15));
        for (std::size_t l : {std::size_t{1}, n / 2, n}) CHECK(mse_method2(n, l, 0.01) == crb_truncated(n, l, 0.01));
    }
    CHECK_THROWS(mse_method2(255, 0, 0.1));
    CHECK_THROWS(mse_method2(255, 256, 0.1));
}

TEST_CASE("method 3 MSE") {
    for (std::size_t n : {7u, 255u, 511u}) CHECK(mse_method3(n, 1, 0.2) == doctest::Approx(0.2 / n).epsilon(1e-15));
    CHECK(mse_method3(255, 38, 0.0) == doctest::Approx(3.0696407752120395e-07).epsilon(1e-14));
    const double ratio = mse_method3(255, 38, 0.0) / mse_correlation(255, 0.0);
    CHECK(ratio == doctest::Approx(0.020038923153181704).epsilon(1e-12));
    const double expected_ratio = (38.0 / 255.0) * (38.0 / 255.0);
    CHECK(ratio >= expected_ratio / 2.0);
    CHECK(ratio <= expected_ratio * 2.0);
    CHECK(mse_method3(511, 130, 0.0) == doctest::Approx(2.4031934871563483e-07).epsilon(1e-14));
}

TEST_CASE("Cramer-Rao bounds") {
    CHECK(crb_full(255, 0.01) == doctest::Approx(3.90625e-05).epsilon(1e-15));
    CHECK(crb_full(255, 0.0) == 0.0);
    CHECK(crb_truncated(511, 130, 0.01) == doctest::Approx(1.958237892670157e-05).epsilon(1e-14));
    CHECK(crb_truncated(255, 255, 0.4) == doctest::Approx(2.0 * 0.4 / 256.0).epsilon(1e-15));
}

TEST_CASE("error floor threshold") {
    CHECK(error_floor_snr_db(255) == doctest::Approx(24.1).epsilon(0.002));
    CHECK(error_floor_snr_db(511) == doctest::Approx(27.1).epsilon(0.002));
    CHECK(error_floor_snr_db(255) == doctest::Approx(24.082466442479724).epsilon(1e-13));
    CHECK(error_floor_snr_db(2) == doctest::Approx(6.020599913279624).epsilon(1e-13));
    CHECK_THROWS(error_floor_snr_db(1));
}

TEST_CASE("ordering, floors and monotonicity over the DTMB grid") {
    const std::size_t ns[] = {255, 511};
    const std::size_t ls[] = {2, 38, 130, 200};
    for (std::size_t n : ns) {
        for (std::size_t l : ls) {
            CHECK(mse_method1(n, 0.0) == 0.0);
            CHECK(mse_method2(n, l, 0.0) == 0.0);
            const double floor3 = mse_method3(n, l, 0.0);
            const double lr = static_cast<double>(l) / static_cast<double>(n);
            CHECK(floor3 > 0.0);
            CHECK(floor3 <= mse_correlation(n, 0.0) * lr * lr * 2.0);

            double prev[4] = {0, 0, 0, 0};
            for (int k = 0; k <= 60; ++k) {
                const double s2 = std::pow(10.0, -k / 10.0 + 1.0);
                CHECK(crb_truncated(n, l, s2) <= mse_method1(n, s2));
                CHECK(crb_full(n, s2) <= mse_method1(n, s2));
                CHECK(mse_method2(n, l, s2) == crb_truncated(n, l, s2));
                const double cur[4] = {mse_correlation(n, s2), mse_method1(n, s2), mse_method2(n, l, s2),
                                       mse_method3(n, l, s2)};
                if (k > 0) {
                    // s2 decreases with k
                    for (int i = 0; i < 4; ++i) CHECK(cur[i] <= prev[i]);
                }
                std::copy(cur, cur + 4, prev);
            }
        }
    }
}

TEST_CASE("predicted_mse dispatch") {
    CHECK(predicted_mse(Method::Correlation, 255, std::nullopt, 0.01) == mse_correlation(255, 0.01));
    CHECK(predicted_mse(Method::InverseTruncated, 255, 38, 0.01) == mse_method2(255, 38, 0.01));
    CHECK(matching_crb(Method::SubtractInterference, 255, 38, 0.01) == crb_truncated(255, 38, 0.01));
    CHECK(matching_crb(Method::InverseFull, 255, 38, 0.01) == crb_full(255, 0.01));
    CHECK_THROWS(predicted_mse(Method::SubtractInterference, 255, std::nullopt, 0.01));
}
