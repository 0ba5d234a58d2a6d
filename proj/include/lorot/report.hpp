#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lorot {

struct VerificationReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;     // signed margin; checks demand slack >= -tolerance
    double tolerance = 0.0;
    double stderr_ = 0.0;   // 0 for deterministic checks
    bool pass = false;
    std::map<std::string, std::string> metadata;

    void finalize() { pass = slack >= -tolerance; }
};

nlohmann::json report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);

nlohmann::json reports_to_json(const std::vector<VerificationReport>& reports);
std::vector<VerificationReport> reports_from_json(const nlohmann::json& j);

// Rows are `name,lhs,rhs,slack,stderr,pass` after a header line.
std::string reports_to_csv(const std::vector<VerificationReport>& reports);

// Both writers go through a temp file and rename into place.
void write_reports_json(const std::string& path, const std::vector<VerificationReport>& reports);
void write_reports_csv(const std::string& path, const std::vector<VerificationReport>& reports);
void write_text_file(const std::string& path, const std::string& text);

bool all_pass(const std::vector<VerificationReport>& reports);

} // namespace lorot
