#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "pnchanest/analysis.hpp"
#include "pnchanest/report.hpp"

namespace pnchanest::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    return parts;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
    return v;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("PNCHANEST_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used, 0);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("PNCHANEST_SEED is not an unsigned integer: '") + env + "'");
    }
    return 1;
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

ChannelProfile resolve_channel(const std::string& name) {
    if (name == "tu6") return tu6_profile();
    if (name == "ht") return ht_profile();
    if (name.rfind("file:", 0) == 0) {
        try {
            return load_profile(name.substr(5));
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
    throw ConfigError("unknown channel '" + name + "' (expected tu6, ht or file:PATH)");
}

std::vector<Method> parse_estimators(const std::string& list) {
    std::vector<Method> out;
    if (list.empty()) return out;
    for (const auto& name : split(list, ',')) {
        try {
            out.push_back(parse_method(name));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    return out;
}

struct OutputFlags {
    std::string out;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    unsigned workers = default_workers();
};

void add_output_flags(CLI::App& cmd, OutputFlags& f) {
    cmd.add_option("--out", f.out, "Report destination (default: stdout)");
    cmd.add_option("--format", f.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    cmd.add_option("--seed", f.seed, "Master seed (fallback: $PNCHANEST_SEED, then 1)");
    cmd.add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
}

int execute(SweepConfig config, const OutputFlags& flags, std::ostream& out, std::ostream& err) {
    ReportFormat format;
    try {
        config.master_seed = resolve_seed(flags.seed);
        config.workers = flags.workers;
        format = parse_format(flags.format);
        config.validate();
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        const auto report = run_sweep(config);
        if (flags.out.empty()) {
            emit_report(report, format, out);
        } else {
            emit_report(report, format, std::filesystem::path(flags.out));
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

struct SweepFlags {
    std::string pn = "dtmb420";
    std::optional<int> degree;
    std::string poly;
    std::optional<std::size_t> ncp;
    std::string channel = "tu6";
    std::string snr = "0:40:5";
    std::size_t trials = 1000;
    std::optional<std::size_t> assumed_l;
    std::string estimators = "correlation,method1,method2,method3";
    bool crn = false;
    OutputFlags output;
};

SweepConfig build_sweep(const SweepFlags& f) {
    SweepConfig c;
    if (f.degree) {
        c.pn.preset = "custom";
        c.pn.degree = *f.degree;
        if (f.poly.empty()) {
            try {
                c.pn.polynomial = default_polynomial(*f.degree);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string(e.what()) + "; pass --poly");
            }
        } else {
            std::size_t used = 0;
            try {
                c.pn.polynomial = static_cast<std::uint32_t>(std::stoul(f.poly, &used, 16));
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != f.poly.size()) throw ConfigError("--poly expects a hex mask, got '" + f.poly + "'");
        }
        if (!f.ncp) throw ConfigError("custom PN needs --ncp");
        c.pn.cp_length = *f.ncp;
    } else {
        c.pn = PnConfig::from_name(f.pn);
        if (f.ncp) c.pn.cp_length = *f.ncp;
    }
    c.profile = resolve_channel(f.channel);
    c.snr_db = parse_snr_spec(f.snr);
    c.trials = f.trials;
    c.assumed_L = f.assumed_l;
    c.estimators = parse_estimators(f.estimators);
    c.common_random_numbers = f.crn;
    return c;
}

struct FormulaFlags {
    std::string pn;
    std::size_t n = 255;
    std::optional<std::size_t> l;
    std::string snr = "0:40:5";
};

int print_formulas(const FormulaFlags& f, std::ostream& out) {
    const std::size_t n = f.pn.empty() ? f.n : PnConfig::from_name(f.pn).length();
    const auto grid = parse_snr_spec(f.snr);
    if (n < 2) throw ConfigError("N must be >= 2");
    if (f.l && (*f.l < 1 || *f.l > n)) throw ConfigError("L must lie in [1, N]");
    const double threshold = error_floor_snr_db(n);

    out << "# N = " << n;
    if (f.l) out << ", L = " << *f.l;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", threshold);
    out << ", error-floor threshold " << buf << " dB\n";

    auto cell = [&](double v) {
        std::snprintf(buf, sizeof buf, "%-16.6e", v);
        out << buf;
    };
    auto head = [&](const char* name) {
        std::snprintf(buf, sizeof buf, "%-16s", name);
        out << buf;
    };
    head("snr_db");
    head("sigma_w2");
    head("correlation");
    head("method1");
    head("crb_full");
    if (f.l) {
        head("method2");
        head("method3");
        head("crb_truncated");
    }
    out << "floor\n";
    for (double snr : grid) {
        const double s2 = snr_db_to_sigma2(snr);
        std::snprintf(buf, sizeof buf, "%-16g", snr);
        out << buf;
        cell(s2);
        cell(mse_correlation(n, s2));
        cell(mse_method1(n, s2));
        cell(crb_full(n, s2));
        if (f.l) {
            cell(mse_method2(n, *f.l, s2));
            cell(mse_method3(n, *f.l, s2));
            cell(crb_truncated(n, *f.l, s2));
        }
        out << (snr > threshold ? "active" : "-") << '\n';
    }
    return kExitOk;
}

// Quick internal consistency checks, a few seconds at most.
int selftest(std::ostream& out) {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        out << (ok ? "PASS " : "FAIL ") << name << '\n';
        if (!ok) ++failures;
    };

    for (int degree : {8, 9}) {
        const auto seq = generate_m_sequence(default_polynomial(degree), degree, 1);
        bool ok = circular_autocorrelation(seq, 0) == 1.0;
        for (std::size_t k = 1; k < seq.length(); ++k) {
            ok = ok && circular_autocorrelation(seq, k) == -1.0 / static_cast<double>(seq.length());
        }
        report("two-valued autocorrelation, degree " + std::to_string(degree), ok);
    }

    for (std::size_t n : {255u, 511u}) {
        const auto prod = multiply(StructuredCorrelationMatrix::q(n), StructuredCorrelationMatrix::q_inverse(n));
        report("Q Q^-1 = I, N = " + std::to_string(n),
               std::abs(prod.diag - 1.0) < 1e-12 && std::abs(prod.offdiag) < 1e-12);
    }

    for (const auto& gi : {dtmb420(), dtmb945()}) {
        const auto profile = quantize_profile(gi.body().length() == 255 ? tu6_profile() : ht_profile());
        Rng rng(7);
        const auto h = realize_channel(profile, rng);
        Rng a(11), b(11);
        const auto via_gi = receive_via_gi(gi, h, 0.01, a);
        const auto direct = receive_pn(gi.body(), h, 0.01, b);
        report("GI path equals circular model, nu = " + std::to_string(gi.total_length()),
               via_gi.samples == direct.samples);

        Rng c(13);
        const auto clean = receive_pn(gi.body(), h, 0.0, c);
        const auto hbar = estimate_correlation(clean, gi.body());
        const auto h1 = estimate_method1(hbar);
        const auto h2 = estimate_method2(hbar, profile.length);
        double worst = 0.0;
        for (std::size_t i = 0; i < h1.taps.size(); ++i) {
            const cplx ref = i < h.taps.size() ? h.taps[i] : cplx{};
            worst = std::max(worst, std::abs(h1.taps[i] - ref));
        }
        for (std::size_t i = 0; i < h2.taps.size(); ++i) worst = std::max(worst, std::abs(h2.taps[i] - h.taps[i]));
        report("noiseless exactness, N = " + std::to_string(gi.body().length()), worst <= 1e-10);
    }
    return failures == 0 ? kExitOk : kExitRuntime;
}

}  // namespace

std::vector<double> parse_snr_spec(const std::string& spec) {
    if (spec.empty()) throw ConfigError("empty SNR specification");
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3) throw ConfigError("SNR range must be start:stop:step, got '" + spec + "'");
        const double start = to_double(parts[0]);
        const double stop = to_double(parts[1]);
        const double step = to_double(parts[2]);
        if (!(step != 0.0) || (stop - start) / step < 0.0) {
            throw ConfigError("SNR step does not move from " + parts[0] + " toward " + parts[1]);
        }
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (count > 100000) throw ConfigError("SNR range too long");
        for (std::size_t k = 0; k < count; ++k) out.push_back(start + static_cast<double>(k) * step);
        return out;
    }
    for (const auto& part : split(spec, ',')) out.push_back(to_double(part));
    return out;
}

SweepConfig figure_config(const std::string& id) {
    SweepConfig c;
    if (id == "fig2") {
        c.pn = PnConfig::dtmb420();
        c.profile = tu6_profile();
    } else if (id == "fig3") {
        c.pn = PnConfig::dtmb945();
        c.profile = tu6_profile();
    } else if (id == "fig4") {
        c.pn = PnConfig::dtmb420();
        c.profile = ht_profile();
    } else if (id == "fig5") {
        c.pn = PnConfig::dtmb945();
        c.profile = ht_profile();
    } else {
        throw ConfigError("unknown figure '" + id + "' (expected fig2, fig3, fig4 or fig5)");
    }
    c.snr_db = default_snr_grid();
    c.trials = 1000;
    return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"PN-correlation channel estimation for TDS-OFDM: Monte Carlo MSE vs. closed forms",
                 "pnchanest"};
    app.require_subcommand(1);

    SweepFlags sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a Monte Carlo SNR sweep");
    sweep_cmd->add_option("--pn", sweep.pn, "PN preset")->check(CLI::IsMember({"dtmb420", "dtmb945"}));
    sweep_cmd->add_option("--degree", sweep.degree, "Custom LFSR degree (N = 2^degree - 1)");
    sweep_cmd->add_option("--poly", sweep.poly, "Custom generator polynomial, hex mask");
    sweep_cmd->add_option("--ncp", sweep.ncp, "Cyclic prefix length N_CP");
    sweep_cmd->add_option("--channel", sweep.channel, "tu6, ht or file:PATH");
    sweep_cmd->add_option("--snr", sweep.snr, "SNR grid in dB, start:stop:step");
    sweep_cmd->add_option("--trials", sweep.trials, "Trials per SNR point");
    sweep_cmd->add_option("--assumed-l", sweep.assumed_l, "Channel length assumed by methods 2 and 3");
    sweep_cmd->add_option("--estimators", sweep.estimators, "Comma list of correlation,method1,method2,method3");
    sweep_cmd->add_flag("--crn", sweep.crn, "Reuse channel draws across SNR points");
    add_output_flags(*sweep_cmd, sweep.output);

    std::string figure_id;
    std::size_t figure_trials = 1000;
    std::string figure_snr = "0:40:5";
    OutputFlags figure_out;
    auto* figure_cmd = app.add_subcommand("figure", "Reproduce a published MSE figure preset");
    figure_cmd->add_option("id", figure_id, "fig2, fig3, fig4 or fig5")->required();
    figure_cmd->add_option("--trials", figure_trials, "Trials per SNR point");
    figure_cmd->add_option("--snr", figure_snr, "SNR grid in dB, start:stop:step");
    add_output_flags(*figure_cmd, figure_out);

    FormulaFlags formulas;
    auto* formulas_cmd = app.add_subcommand("formulas", "Tabulate the closed-form MSEs and bounds");
    formulas_cmd->add_option("--n", formulas.n, "Sequence length N");
    formulas_cmd->add_option("--pn", formulas.pn, "Take N from a preset")
        ->check(CLI::IsMember({"dtmb420", "dtmb945"}));
    formulas_cmd->add_option("--l", formulas.l, "Channel length L (enables truncated formulas)");
    formulas_cmd->add_option("--snr", formulas.snr, "SNR grid in dB, start:stop:step or list");

    auto* selftest_cmd = app.add_subcommand("selftest", "Run internal consistency checks");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (*sweep_cmd) {
            SweepConfig config;
            try {
                config = build_sweep(sweep);
            } catch (const std::invalid_argument& e) {
                err << "error: " << e.what() << '\n';
                return kExitConfig;
            }
            return execute(std::move(config), sweep.output, out, err);
        }
        if (*figure_cmd) {
            SweepConfig config;
            try {
                config = figure_config(figure_id);
                config.trials = figure_trials;
                config.snr_db = parse_snr_spec(figure_snr);
            } catch (const std::invalid_argument& e) {
                err << "error: " << e.what() << '\n';
                return kExitConfig;
            }
            return execute(std::move(config), figure_out, out, err);
        }
        if (*formulas_cmd) {
            try {
                return print_formulas(formulas, out);
            } catch (const std::invalid_argument& e) {
                err << "error: " << e.what() << '\n';
                return kExitConfig;
            }
        }
        if (*selftest_cmd) return selftest(out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitConfig;
}

}  // namespace pnchanest::cli
