#include "pnchanest/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <mutex>
#include <thread>

#include "pnchanest/analysis.hpp"
#include "pnchanest/rng.hpp"

namespace pnchanest {

PnConfig PnConfig::dtmb420() { return {"dtmb420", 8, kDefaultPoly8, 1, 165}; }

PnConfig PnConfig::dtmb945() { return {"dtmb945", 9, kDefaultPoly9, 1, 434}; }

PnConfig PnConfig::from_name(const std::string& name) {
    if (name == "dtmb420") return dtmb420();
    if (name == "dtmb945") return dtmb945();
    throw ConfigError("unknown PN preset '" + name + "' (expected dtmb420 or dtmb945)");
}

GuardInterval PnConfig::build() const {
    try {
        return GuardInterval(generate_m_sequence(polynomial, degree, seed_state), cp_length);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::vector<double> default_snr_grid() {
    std::vector<double> grid;
    for (int snr = 0; snr <= 40; snr += 5) grid.push_back(snr);
    return grid;
}

std::size_t SweepConfig::effective_L() const {
    return assumed_L.value_or(quantize_profile(profile).length);
}

void SweepConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (snr_db.empty()) throw ConfigError("SNR list is empty");
    for (double s : snr_db) {
        if (!std::isfinite(s)) throw ConfigError("SNR values must be finite");
    }
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (pn.degree < 2 || pn.degree > 24) throw ConfigError("PN degree must be in [2, 24]");

    QuantizedProfile q;
    try {
        q = quantize_profile(profile);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const std::size_t n = pn.length();
    if (pn.cp_length > n) throw ConfigError("cyclic prefix longer than the PN body");
    if (q.length > pn.cp_length + 1) {
        throw ConfigError("CP shorter than delay spread: L = " + std::to_string(q.length) +
                          " exceeds N_CP + 1 = " + std::to_string(pn.cp_length + 1));
    }
    if (assumed_L && (*assumed_L < 1 || *assumed_L > n)) {
        throw ConfigError("assumed L = " + std::to_string(*assumed_L) + " outside [1, N = " +
                          std::to_string(n) + "]");
    }
}

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

double trial_error(const CirEstimate& est, const ChannelRealization& truth) {
    const std::size_t m = est.taps.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const cplx ref = i < truth.taps.size() ? truth.taps[i] : cplx{};
        acc += std::norm(est.taps[i] - ref);
    }
    return acc / static_cast<double>(m);
}

}  // namespace

MseReport run_sweep(const SweepConfig& config) {
    config.validate();

    const GuardInterval gi = config.pn.build();
    const MSequence& seq = gi.body();
    const std::size_t n = seq.length();
    const QuantizedProfile profile = quantize_profile(config.profile);
    const std::size_t L = config.assumed_L.value_or(profile.length);
    const bool mismatch = L < profile.length;
    const std::size_t n_est = config.estimators.size();
    const std::size_t trials = config.trials;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(config.workers, trials));

    MseReport report;
    report.metadata = {config, utc_timestamp()};
    if (n_est == 0) return report;

    // errors[s][e][t]
    std::vector<std::vector<std::vector<double>>> errors(
        config.snr_db.size(), std::vector<std::vector<double>>(n_est, std::vector<double>(trials)));

    for (std::size_t s = 0; s < config.snr_db.size(); ++s) {
        const double sigma_w2 = snr_db_to_sigma2(config.snr_db[s]);
        const std::uint64_t channel_key = config.common_random_numbers ? 0 : s + 1;
        auto& cell = errors[s];

        auto work = [&](unsigned worker) {
            for (std::size_t t = worker; t < trials; t += workers) {
                Rng channel_rng(derive_seed(config.master_seed, {channel_key, t, 0}));
                Rng noise_rng(derive_seed(config.master_seed, {s + 1, t, 1}));
                const auto h = realize_channel(profile, channel_rng, t);
                const auto rx = receive_via_gi(gi, h, sigma_w2, noise_rng);
                const auto hbar = estimate_correlation(rx, seq);
                for (std::size_t e = 0; e < n_est; ++e) {
                    switch (config.estimators[e]) {
                        case Method::Correlation: cell[e][t] = trial_error(hbar, h); break;
                        case Method::InverseFull: cell[e][t] = trial_error(estimate_method1(hbar), h); break;
                        case Method::InverseTruncated:
                            cell[e][t] = trial_error(estimate_method2(hbar, L), h);
                            break;
                        case Method::SubtractInterference:
                            cell[e][t] = trial_error(estimate_method3(hbar, L), h);
                            break;
                    }
                }
            }
        };

        if (workers == 1) {
            work(0);
        } else {
            std::exception_ptr failure;
            std::mutex failure_mutex;
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        work(w);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                });
            }
            pool.clear();
            if (failure) std::rethrow_exception(failure);
        }
    }

    for (std::size_t e = 0; e < n_est; ++e) {
        const Method method = config.estimators[e];
        const bool truncated = !is_full_length(method);
        for (std::size_t s = 0; s < config.snr_db.size(); ++s) {
            const auto& samples = errors[s][e];
            double sum = 0.0;
            for (double x : samples) sum += x;
            const double mean = sum / static_cast<double>(trials);
            double ss = 0.0;
            for (double x : samples) ss += (x - mean) * (x - mean);
            const double var = trials > 1 ? ss / static_cast<double>(trials - 1) : 0.0;

            const double sigma_w2 = snr_db_to_sigma2(config.snr_db[s]);
            MseRow row;
            row.estimator = method;
            row.snr_db = config.snr_db[s];
            row.empirical_mse = mean;
            row.predicted_mse = predicted_mse(method, n, L, sigma_w2);
            row.crb = matching_crb(method, n, L, sigma_w2);
            row.trials = trials;
            row.std_error = std::sqrt(var / static_cast<double>(trials));
            row.model_mismatch = truncated && mismatch;
            report.rows.push_back(row);
        }
    }
    return report;
}

}  // namespace pnchanest
