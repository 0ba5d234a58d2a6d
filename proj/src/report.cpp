#include "lorot/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lorot {

namespace {

nlohmann::json encode_double(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double decode_double(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw std::invalid_argument("report: unparsable numeric field: " + s);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

nlohmann::json report_to_json(const VerificationReport& r) {
    nlohmann::json j;
    j["name"] = r.name;
    j["lhs"] = encode_double(r.lhs);
    j["rhs"] = encode_double(r.rhs);
    j["slack"] = encode_double(r.slack);
    j["tolerance"] = encode_double(r.tolerance);
    j["stderr"] = encode_double(r.stderr_);
    j["pass"] = r.pass;
    if (!r.metadata.empty()) j["metadata"] = r.metadata;
    return j;
}

VerificationReport report_from_json(const nlohmann::json& j) {
    VerificationReport r;
    r.name = j.at("name").get<std::string>();
    r.lhs = decode_double(j.at("lhs"));
    r.rhs = decode_double(j.at("rhs"));
    r.slack = decode_double(j.at("slack"));
    r.tolerance = decode_double(j.at("tolerance"));
    r.stderr_ = decode_double(j.at("stderr"));
    r.pass = j.at("pass").get<bool>();
    if (j.contains("metadata"))
        r.metadata = j["metadata"].get<std::map<std::string, std::string>>();
    return r;
}

nlohmann::json reports_to_json(const std::vector<VerificationReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    return arr;
}

std::vector<VerificationReport> reports_from_json(const nlohmann::json& j) {
    std::vector<VerificationReport> out;
    for (const auto& e : j) out.push_back(report_from_json(e));
    return out;
}

std::string reports_to_csv(const std::vector<VerificationReport>& reports) {
    std::ostringstream os;
    os << "name,lhs,rhs,slack,stderr,pass\n";
    for (const auto& r : reports) {
        os << r.name << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
           << format_double(r.slack) << ',' << format_double(r.stderr_) << ','
           << (r.pass ? "true" : "false") << '\n';
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open for writing: " + tmp);
        os << text;
        if (!os) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + path);
}

void write_reports_json(const std::string& path, const std::vector<VerificationReport>& reports) {
    write_text_file(path, reports_to_json(reports).dump(2) + "\n");
}

void write_reports_csv(const std::string& path, const std::vector<VerificationReport>& reports) {
    write_text_file(path, reports_to_csv(reports));
}

bool all_pass(const std::vector<VerificationReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

} // namespace lorot
