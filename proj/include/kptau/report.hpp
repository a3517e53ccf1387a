#pragma once

#include <string>
#include <vector>

namespace kptau {

// One named residual with its pass criterion. Exact checks pass only on an
// exact zero; float checks compare against the tolerance.
struct Check {
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    bool exact = false;
    bool applicable = true;
    bool info = false;  // reported but never gating
    std::string note;

    bool pass() const {
        if (!applicable || info) return true;
        return exact ? value == 0.0 : value <= tol;
    }
    std::string status() const {
        if (info) return "INFO";
        if (!applicable) return "N/A";
        return pass() ? "PASS" : "FAIL";
    }
};

inline Check make_check(std::string name, double value, double tol, bool exact, std::string note = {}) {
    return Check{std::move(name), value, tol, exact, true, false, std::move(note)};
}

inline Check skipped_check(std::string name, std::string note) {
    return Check{std::move(name), 0.0, 0.0, false, false, false, std::move(note)};
}

inline Check info_check(std::string name, double value, std::string note = {}) {
    Check c{std::move(name), value, 0.0, false, true, true, std::move(note)};
    return c;
}

using Report = std::vector<Check>;

inline bool all_pass(const Report& r) {
    for (const auto& c : r)
        if (!c.pass()) return false;
    return true;
}

}  // namespace kptau
