#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnchanest/channel.hpp"
#include "pnchanest/estimators.hpp"
#include "pnchanest/mseq.hpp"

namespace pnchanest {

/// Invalid experiment configuration (bad flag values, violated invariants).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PnConfig {
    std::string preset = "dtmb420";  // dtmb420, dtmb945 or custom
    int degree = 8;
    std::uint32_t polynomial = kDefaultPoly8;
    std::uint32_t seed_state = 1;
    std::size_t cp_length = 165;

    static PnConfig dtmb420();
    static PnConfig dtmb945();
    static PnConfig from_name(const std::string& name);

    std::size_t length() const { return (std::size_t{1} << degree) - 1; }
    GuardInterval build() const;

    bool operator==(const PnConfig&) const = default;
};

struct SweepConfig {
    PnConfig pn;
    ChannelProfile profile = tu6_profile();
    std::vector<double> snr_db;
    std::size_t trials = 1000;
    std::vector<Method> estimators = {Method::Correlation, Method::InverseFull, Method::InverseTruncated,
                                      Method::SubtractInterference};
    std::optional<std::size_t> assumed_L;  // defaults to the profile's L
    std::uint64_t master_seed = 1;
    unsigned workers = 1;
    bool common_random_numbers = false;  // reuse channel draws across SNR points

    /// Throws ConfigError on any violated invariant.
    void validate() const;
    /// Assumed channel length after applying the profile default.
    std::size_t effective_L() const;

    bool operator==(const SweepConfig&) const = default;
};

/// 0:40:5 in dB, the default grid.
std::vector<double> default_snr_grid();

struct MseRow {
    Method estimator = Method::Correlation;
    double snr_db = 0.0;
    double empirical_mse = 0.0;
    double predicted_mse = 0.0;
    double crb = 0.0;
    std::size_t trials = 0;
    double std_error = 0.0;
    bool model_mismatch = false;

    bool operator==(const MseRow&) const = default;
};

struct ReportMetadata {
    SweepConfig config;
    std::string timestamp;

    bool operator==(const ReportMetadata&) const = default;
};

struct MseReport {
    std::vector<MseRow> rows;
    ReportMetadata metadata;

    bool operator==(const MseReport&) const = default;
};

/// Monte Carlo sweep over SNR points. Each trial draws a fresh channel and
/// noise from substreams
///   channel: derive_seed(seed, {snr_key, trial, 0}), snr_key = crn ? 0 : s+1
///   noise:   derive_seed(seed, {s+1, trial, 1})
/// and per-trial errors are reduced in trial order, so the report does not
/// depend on the worker count.
///
/// Per-trial MSE is (1/M) sum |h_hat_i - h_i|^2 with M = N for the
/// full-length estimators (truth zero-padded) and M = L for the truncated
/// ones. Rows for truncated estimators are flagged model_mismatch when the
/// assumed L is shorter than the profile's.
MseReport run_sweep(const SweepConfig& config);

}  // namespace pnchanest
