#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "kptau/config.hpp"
#include "kptau/report.hpp"
#include "kptau/scalar.hpp"

namespace kptau {

enum ExitCode : int { exit_pass = 0, exit_property_failure = 1, exit_input_error = 2, exit_degenerate = 3 };

enum class Backend { float_complex, exact_rational, exact_gaussian };

// "exact" resolves to the real or Gaussian rationals depending on the data.
Backend resolve_backend(const FamilyConfig& cfg, const std::string& requested);
std::string backend_name(Backend b);

template <class F>
decltype(auto) dispatch_backend(Backend b, F&& f) {
    switch (b) {
        case Backend::exact_rational:
            return f(std::type_identity<Rational>{});
        case Backend::exact_gaussian:
            return f(std::type_identity<GaussianRational>{});
        default:
            return f(std::type_identity<Complex>{});
    }
}

struct VerifyOptions {
    int samples = 100;
    std::uint64_t seed = 1;
    bool corrupt = false;  // add 1e-3 to A(0,0)
    std::optional<double> tol;
};

// Default tolerance for each check family, overridden by the config and then by --tol.
double default_tolerance(const std::string& key);

Report verify_battery(const FamilyConfig& cfg, Backend backend, const VerifyOptions& opts);
std::string report_table(const Report& r);
nlohmann::json report_json(const Report& r);

struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    int steps = 1;
    double at(int i) const { return steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1); }
};

struct GridRequest {
    std::array<int, 3> flows{1, 2, 3};  // flow indices carried by x, y, time
    GridAxis x{-5.0, 5.0, 101};
    GridAxis y{0.0, 0.0, 1};
    GridAxis t{0.0, 0.0, 1};
    double h = 1e-4;
    double threshold = 1e-10;
    void validate() const;
};

struct GridRow {
    double x, y, t, u;
    bool flagged;
};

std::vector<GridRow> evaluate_grid(const FamilyConfig& cfg, Backend backend, const GridRequest& req);

// Full command-line entry; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kptau
