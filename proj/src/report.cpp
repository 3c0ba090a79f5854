#include "pnchanest/report.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pnchanest {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json profile_json(const ChannelProfile& p) {
    json taps = json::array();
    for (const auto& t : p.taps) taps.push_back({{"delay_us", t.delay_us}, {"power_db", t.power_db}});
    return {{"name", p.name}, {"sampling_rate", p.sampling_rate}, {"taps", taps}};
}

ChannelProfile profile_from(const json& j) {
    ChannelProfile p;
    p.name = j.at("name").get<std::string>();
    p.sampling_rate = j.at("sampling_rate").get<double>();
    for (const auto& t : j.at("taps")) {
        p.taps.push_back({t.at("delay_us").get<double>(), t.at("power_db").get<double>()});
    }
    return p;
}

json config_json(const SweepConfig& c) {
    json estimators = json::array();
    for (auto m : c.estimators) estimators.push_back(std::string(method_name(m)));
    json j = {
        {"pn",
         {{"preset", c.pn.preset},
          {"degree", c.pn.degree},
          {"polynomial", c.pn.polynomial},
          {"seed_state", c.pn.seed_state},
          {"cp_length", c.pn.cp_length}}},
        {"profile", profile_json(c.profile)},
        {"snr_db", c.snr_db},
        {"trials", c.trials},
        {"estimators", estimators},
        {"assumed_L", c.assumed_L ? json(*c.assumed_L) : json(nullptr)},
        {"master_seed", c.master_seed},
        {"workers", c.workers},
        {"common_random_numbers", c.common_random_numbers},
    };
    return j;
}

SweepConfig config_from(const json& j) {
    SweepConfig c;
    const auto& pn = j.at("pn");
    c.pn.preset = pn.at("preset").get<std::string>();
    c.pn.degree = pn.at("degree").get<int>();
    c.pn.polynomial = pn.at("polynomial").get<std::uint32_t>();
    c.pn.seed_state = pn.at("seed_state").get<std::uint32_t>();
    c.pn.cp_length = pn.at("cp_length").get<std::size_t>();
    c.profile = profile_from(j.at("profile"));
    c.snr_db = j.at("snr_db").get<std::vector<double>>();
    c.trials = j.at("trials").get<std::size_t>();
    c.estimators.clear();
    for (const auto& e : j.at("estimators")) c.estimators.push_back(parse_method(e.get<std::string>()));
    if (!j.at("assumed_L").is_null()) c.assumed_L = j.at("assumed_L").get<std::size_t>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.workers = j.at("workers").get<unsigned>();
    c.common_random_numbers = j.at("common_random_numbers").get<bool>();
    return c;
}

void write_csv(const MseReport& report, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : report.rows) {
        out << method_name(r.estimator) << ',' << fmt_double(r.snr_db) << ',' << fmt_double(r.empirical_mse)
            << ',' << fmt_double(r.predicted_mse) << ',' << fmt_double(r.crb) << ',' << r.trials << ','
            << fmt_double(r.std_error) << '\n';
    }
}

void write_json(const MseReport& report, std::ostream& out) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"estimator", std::string(method_name(r.estimator))},
                        {"snr_db", r.snr_db},
                        {"empirical_mse", r.empirical_mse},
                        {"predicted_mse", r.predicted_mse},
                        {"crb", r.crb},
                        {"trials", r.trials},
                        {"std_error", r.std_error},
                        {"model_mismatch", r.model_mismatch}});
    }
    const json doc = {
        {"metadata",
         {{"config", config_json(report.metadata.config)},
          {"seed", report.metadata.config.master_seed},
          {"timestamp", report.metadata.timestamp}}},
        {"rows", rows}};
    out << doc.dump(2) << '\n';
}

}  // namespace

ReportFormat parse_format(std::string_view name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw std::invalid_argument("unknown report format '" + std::string(name) + "'");
}

void emit_report(const MseReport& report, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::Csv) {
        write_csv(report, out);
    } else {
        write_json(report, out);
    }
}

void emit_report(const MseReport& report, ReportFormat format, const std::filesystem::path& destination) {
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write report to " + destination.string() + ": " +
                                 std::strerror(errno));
    }
    emit_report(report, format, out);
    out.flush();
    if (!out) {
        throw std::runtime_error("failed writing report to " + destination.string() + ": " +
                                 std::strerror(errno));
    }
}

MseReport parse_report_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::runtime_error("CSV report header mismatch");
    }
    MseReport report;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field[7];
        for (auto& f : field) {
            if (!std::getline(row, f, ',')) throw std::runtime_error("short CSV row: " + line);
        }
        MseRow r;
        r.estimator = parse_method(field[0]);
        r.snr_db = std::stod(field[1]);
        r.empirical_mse = std::stod(field[2]);
        r.predicted_mse = std::stod(field[3]);
        r.crb = std::stod(field[4]);
        r.trials = std::stoull(field[5]);
        r.std_error = std::stod(field[6]);
        report.rows.push_back(r);
    }
    return report;
}

MseReport parse_report_json(std::istream& in) {
    const json doc = json::parse(in);
    MseReport report;
    const auto& meta = doc.at("metadata");
    report.metadata.config = config_from(meta.at("config"));
    report.metadata.timestamp = meta.at("timestamp").get<std::string>();
    for (const auto& r : doc.at("rows")) {
        MseRow row;
        row.estimator = parse_method(r.at("estimator").get<std::string>());
        row.snr_db = r.at("snr_db").get<double>();
        row.empirical_mse = r.at("empirical_mse").get<double>();
        row.predicted_mse = r.at("predicted_mse").get<double>();
        row.crb = r.at("crb").get<double>();
        row.trials = r.at("trials").get<std::size_t>();
        row.std_error = r.at("std_error").get<double>();
        row.model_mismatch = r.at("model_mismatch").get<bool>();
        report.rows.push_back(row);
    }
    return report;
}

std::string config_to_json(const SweepConfig& config) { return config_json(config).dump(); }

SweepConfig config_from_json(const std::string& text) { return config_from(json::parse(text)); }

}  // namespace pnchanest
