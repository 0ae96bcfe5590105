#include "gop/report.hpp"

#include <algorithm>

namespace gop {

void Report::fail(const std::string& law, json witness) {
    ++violation_count;
    if (violations.size() < keep) violations.push_back({law, std::move(witness)});
}

void Report::merge(const Report& other) {
    instances += other.instances;
    violation_count += other.violation_count;
    for (const auto& v : other.violations)
        if (violations.size() < keep) violations.push_back(v);
    if (!other.suite.empty() && !other.details.empty()) details[other.suite] = other.details;
}

bool Report::has_law(const std::string& law) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.law == law; });
}

json Report::to_json() const {
    json j;
    j["suite"] = suite;
    j["ok"] = ok();
    j["instances"] = instances;
    j["violation_count"] = violation_count;
    json vs = json::array();
    for (const auto& v : violations) vs.push_back({{"law", v.law}, {"witness", v.witness}});
    j["violations"] = vs;
    if (!details.empty()) j["details"] = details;
    return j;
}

}  // namespace gop
