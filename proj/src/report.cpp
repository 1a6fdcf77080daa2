#include "bosonlight/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bosonlight {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const std::string& config_text) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config_text)));
    return buf;
}

std::string report_csv_string(const BoundReport& report, const std::string& cfg_hash) {
    std::ostringstream out;
    out << "# bosonlight-csv schema=" << kCsvSchemaVersion << "\n";
    out << "# config_hash=" << cfg_hash << "\n";
    out << "experiment,param_name,param_value,lhs,rhs,satisfied,admissible,config_hash\n";
    for (const auto& p : report.points) {
        out << report.experiment << ',' << p.param_name << ','
            << format_double(p.param_value) << ',' << format_double(p.lhs) << ','
            << format_double(p.rhs) << ',' << (p.satisfied ? 1 : 0) << ','
            << (p.admissible ? 1 : 0) << ',' << cfg_hash << "\n";
    }
    return out.str();
}

void write_report_csv(const BoundReport& report, const std::string& path,
                      const std::string& cfg_hash) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << report_csv_string(report, cfg_hash);
}

void write_report_json(const BoundReport& report, const std::string& path,
                       const std::string& cfg_hash, const std::string& config_echo,
                       double elapsed_seconds) {
    nlohmann::json j;
    j["schema"] = kCsvSchemaVersion;
    j["experiment"] = report.experiment;
    j["config_hash"] = cfg_hash;
    j["config"] = config_echo;
    j["num_points"] = report.points.size();
    j["all_satisfied"] = report.all_satisfied();
    if (report.fit) {
        j["fit"] = {{"slope", report.fit->slope},
                    {"intercept", report.fit->intercept},
                    {"r2", report.fit->r2},
                    {"valid", report.fit->valid}};
    }
    j["elapsed_seconds"] = elapsed_seconds;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << j.dump(2) << "\n";
}

}  // namespace bosonlight
