#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace gop {

using json = nlohmann::ordered_json;

struct Violation {
    std::string law;
    json witness;
};

// Result of a check suite.  Only the first `keep` violations are stored;
// `violation_count` counts all of them.
struct Report {
    std::string suite;
    long instances = 0;
    long violation_count = 0;
    std::vector<Violation> violations;
    json details = json::object();
    size_t keep = 50;

    explicit Report(std::string name = {}) : suite(std::move(name)) {}

    bool ok() const { return violation_count == 0; }
    int exit_code() const { return ok() ? 0 : 1; }
    void fail(const std::string& law, json witness);
    void merge(const Report& other);
    bool has_law(const std::string& law) const;
    json to_json() const;
};

}  // namespace gop
