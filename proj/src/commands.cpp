#include "kptau/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "kptau/model.hpp"
#include "kptau/schur.hpp"

namespace kptau {

Backend resolve_backend(const FamilyConfig& cfg, const std::string& requested) {
    const std::string b = requested.empty() ? cfg.backend : requested;
    if (b == "float") return Backend::float_complex;
    if (b == "exact") return cfg.is_real() ? Backend::exact_rational : Backend::exact_gaussian;
    throw ConfigError("backend: expected \"float\" or \"exact\", got '" + b + "'");
}

std::string backend_name(Backend b) {
    return dispatch_backend(b, [](auto tag) { return std::string(ScalarOps<typename decltype(tag)::type>::name); });
}

void GridRequest::validate() const {
    for (int f : flows)
        if (f < 1) throw ConfigError("axes: flow indices start at 1");
    if (flows[0] == flows[1] || flows[0] == flows[2] || flows[1] == flows[2]) throw ConfigError("axes: must be distinct");
    for (const GridAxis* a : {&x, &y, &t})
        if (a->steps < 1) throw ConfigError("grid: step counts must be positive");
    if (!(h > 0.0)) throw ConfigError("grid: h must be positive");
}

namespace {

template <class T>
FlowVector<T> parse_flow(const std::vector<std::string>& raw, int k) {
    if (static_cast<int>(raw.size()) > k)
        throw ConfigError("t: " + std::to_string(raw.size()) + " values given but K = " + std::to_string(k));
    if (raw.empty()) return FlowVector<T>::zero(1);
    std::vector<T> v;
    for (const auto& s : raw) v.push_back(config_scalar<T>(parse_scalar_text(s)));
    return FlowVector<T>(std::move(v));
}

std::string shape_line(const FamilyConfig& cfg, std::size_t n, std::size_t big, std::size_t l, Backend b) {
    std::ostringstream os;
    os << "family " << cfg.family << ": n=" << n << " N=" << big << " l=" << l << " backend " << backend_name(b);
    return os.str();
}

template <class T>
int build(const FamilyConfig& cfg, Backend b, std::optional<double> tol, std::ostream& out) {
    const auto model = build_model<T>(cfg);
    const auto& s = model.sys;
    out << shape_line(cfg, s.n(), s.N(), s.l(), b) << "\n";
    const double t1 = tol ? *tol : cfg.tol("rank_one", default_tolerance("rank_one"));
    const double t2 = tol ? *tol : cfg.tol("lemma", default_tolerance("lemma"));
    Report rep = verify_rank_one(s, t1);
    const Check& head = rep.front();
    out << "rank-1 residual: " << (head.exact && head.value == 0.0 ? "0 (exact)" : format_double(head.value)) << "\n";
    const bool admissible = s.Bspec.is_nondegenerate() && s.Dspec.is_nondegenerate() &&
                            !s.Bspec.shares_eigenvalue_with(s.Dspec);
    if (admissible) {
        for (auto c : lemma_identities(s.Bspec, s.Dspec, t2)) {
            c.name = "lemma: " + c.name;
            rep.push_back(c);
        }
    } else {
        rep.push_back(skipped_check("lemma identities", "B and D spectra collide"));
    }
    out << report_table(rep);
    return all_pass(rep) ? exit_pass : exit_property_failure;
}

template <class T>
int tau_cmd(const FamilyConfig& cfg, const std::vector<std::string>& raw, bool all_forms, std::ostream& out) {
    const auto model = build_model<T>(cfg);
    const auto& s = model.sys;
    const auto t = parse_flow<T>(raw, cfg.K);
    const T value = tau_general(s, t);
    out << "tau = " << to_string(value) << "\n";
    if (!all_forms) return exit_pass;
    const bool own = s.l() == s.n() && s.Bspec.is_nondegenerate() && s.Dspec.is_nondegenerate() &&
                     !s.Bspec.shares_eigenvalue_with(s.Dspec);
    JordanSpec<T> d = s.Dspec;
    if (!own) {
        std::vector<T> eigs;
        for (int j = 1; eigs.size() < s.l(); ++j) {
            const T cand = integer_scalar<T>(j + 1);
            bool clash = false;
            for (const auto& blk : s.Bspec.blocks()) clash = clash || blk.eigenvalue == cand;
            if (!clash) eigs.push_back(cand);
        }
        d = JordanSpec<T>::diagonal(eigs);
        out << "auxiliary D = diag(";
        for (std::size_t i = 0; i < eigs.size(); ++i) out << (i ? ", " : "") << to_string(eigs[i]);
        out << ")\n";
    }
    const auto forms = tau_W_BCD(s.Bspec, s.C, d, t);
    out << "det(A(B,D) E C^T)       = " << to_string(forms[0]) << "\n";
    out << "det(A0 E r_D(B) C^T)    = " << to_string(forms[1]) << "\n";
    out << "det(A(B) E C^T) / kappa = " << to_string(forms[2]) << "\n";
    const double diff = std::max({relative_difference(forms[0], forms[1]), relative_difference(forms[0], forms[2]),
                                  relative_difference(forms[1], forms[2])});
    out << "max pairwise relative difference: " << format_double(diff) << "\n";
    return exit_pass;
}

template <class T>
int expand(const FamilyConfig& cfg, int max_weight, bool all, const std::string& format, std::ostream& out) {
    const auto model = build_model<T>(cfg);
    const int w = max_weight >= 0 ? max_weight : (cfg.family == "rational" ? cfg.n * cfg.k : 12);
    const auto terms = schur_expansion(model.sys, w);
    const char sep = format == "csv" ? ',' : '\t';
    auto cell = [&](const std::string& s) {
        if (sep == ',' && s.find(',') != std::string::npos) return "\"" + s + "\"";
        return s;
    };
    out << "lambda" << sep << "frobenius" << sep << "coefficient" << sep << "unnormalized\n";
    for (const auto& term : terms) {
        if (!all && term.coefficient == T(0)) continue;
        out << cell(term.lambda.str()) << sep << cell(term.frobenius.str()) << sep << cell(to_string(term.coefficient))
            << sep << cell(to_string(term.unnormalized)) << "\n";
    }
    if (cfg.family == "rational" && w >= cfg.n * cfg.k) out << "# EXACT (finite)\n";
    return exit_pass;
}

template <class T>
T second_log_derivative(const TauModel<T>& m, FlowVector<T> t, int axis, const T& h, T& tau0) {
    tau0 = tau_general(m.sys, t);
    const T center = t[static_cast<std::size_t>(axis)];
    t.at(static_cast<std::size_t>(axis)) = center + h;
    const T plus = tau_general(m.sys, t);
    t.at(static_cast<std::size_t>(axis)) = center - h;
    const T minus = tau_general(m.sys, t);
    const T d1 = (plus - minus) / (integer_scalar<T>(2) * h);
    const T d2 = (plus - integer_scalar<T>(2) * tau0 + minus) / (h * h);
    return integer_scalar<T>(2) * (d2 * tau0 - d1 * d1) / (tau0 * tau0);
}

template <class T>
std::vector<GridRow> grid(const FamilyConfig& cfg, const GridRequest& req) {
    req.validate();
    TauModel<T> model = build_model<T>(cfg);
    const std::size_t k = static_cast<std::size_t>(std::max({cfg.K, req.flows[0], req.flows[1], req.flows[2]}));
    const T h = config_scalar<T>(GaussianRational(rational_from_decimal(req.h)));
    std::vector<GridRow> rows;
    for (int it = 0; it < req.t.steps; ++it)
        for (int iy = 0; iy < req.y.steps; ++iy)
            for (int ix = 0; ix < req.x.steps; ++ix) {
                const double x = req.x.at(ix), y = req.y.at(iy), tt = req.t.at(it);
                FlowVector<T> t = FlowVector<T>::zero(k);
                t.at(static_cast<std::size_t>(req.flows[0])) = config_scalar<T>(GaussianRational(rational_from_decimal(x)));
                t.at(static_cast<std::size_t>(req.flows[1])) = config_scalar<T>(GaussianRational(rational_from_decimal(y)));
                t.at(static_cast<std::size_t>(req.flows[2])) = config_scalar<T>(GaussianRational(rational_from_decimal(tt)));
                T tau0;
                const T tau_here = tau_general(model.sys, t);
                if (magnitude(tau_here) < req.threshold) {
                    rows.push_back({x, y, tt, std::nan(""), true});
                    continue;
                }
                T u(0);
                bool flagged = false;
                try {
                    u = second_log_derivative(model, t, req.flows[0], h, tau0);
                } catch (const KpError&) {
                    flagged = true;
                }
                rows.push_back({x, y, tt, flagged ? std::nan("") : to_complex(u).real(), flagged});
            }
    return rows;
}

void write_grid(const std::vector<GridRow>& rows, std::ostream& out) {
    out << "x,y,t,u,flag\n";
    for (const auto& r : rows)
        out << format_double(r.x) << "," << format_double(r.y) << "," << format_double(r.t) << ","
            << (std::isnan(r.u) ? std::string("nan") : format_double(r.u)) << "," << (r.flagged ? 1 : 0) << "\n";
}

GridAxis parse_axis(const std::string& s, const std::string& name) {
    GridAxis a;
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    try {
        if (parts.size() == 1) {
            a.lo = a.hi = std::stod(parts[0]);
            a.steps = 1;
        } else if (parts.size() == 3) {
            a.lo = std::stod(parts[0]);
            a.hi = std::stod(parts[1]);
            a.steps = std::stoi(parts[2]);
        } else {
            throw ConfigError(name + ": expected lo:hi:steps or a single value");
        }
    } catch (const std::logic_error&) {
        throw ConfigError(name + ": expected lo:hi:steps or a single value, got '" + s + "'");
    }
    return a;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const SingularAtOrigin*>(&e) || dynamic_cast<const DegenerateK*>(&e) ||
        dynamic_cast<const ZeroTau*>(&e) || dynamic_cast<const DegenerateVandermonde*>(&e) ||
        dynamic_cast<const RankError*>(&e))
        return exit_degenerate;
    return exit_input_error;
}

// Writes to --out when given, otherwise to the command stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ConfigError("out: cannot open '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

private:
    std::ofstream file_;
    std::ostream& fallback_;
};

}  // namespace

std::vector<GridRow> evaluate_grid(const FamilyConfig& cfg, Backend backend, const GridRequest& req) {
    // exact evaluation only when every exponential is a polynomial
    if (backend != Backend::float_complex) {
        const bool exact_ok = dispatch_backend(backend, [&](auto tag) {
            using T = typename decltype(tag)::type;
            return exactly_evaluable(build_system<T>(cfg));
        });
        if (!exact_ok) backend = Backend::float_complex;
    }
    return dispatch_backend(backend, [&](auto tag) { return grid<typename decltype(tag)::type>(cfg, req); });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-dimensional KP tau functions: construction, expansion, verification"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string backend;
    std::optional<double> tol;
    std::string out_path;
    app.add_option("--backend", backend, "Arithmetic backend")->check(CLI::IsMember({"exact", "float"}));
    app.add_option("--tol", tol, "Override every floating-point tolerance")->check(CLI::NonNegativeNumber);
    app.add_option("--out", out_path, "Write the table / CSV / JSON summary to this file");

    std::string config_path;
    auto* build_cmd = app.add_subcommand("build", "Construct the family and check the rank-one identities");
    build_cmd->add_option("config", config_path, "Config file")->required();

    auto* tau_cmd_app = app.add_subcommand("tau", "Evaluate tau at a flow point");
    std::vector<std::string> t_values;
    bool all_forms = false;
    tau_cmd_app->add_option("config", config_path, "Config file")->required();
    tau_cmd_app->add_option("--t", t_values, "Flow times t1 t2 ...; complex as re,im")->allow_extra_args();
    tau_cmd_app->add_flag("--all-forms", all_forms, "Also print the three equivalent determinant forms");

    auto* expand_cmd = app.add_subcommand("expand", "Schur-function expansion coefficients");
    int max_weight = -1;
    bool all_rows = false;
    std::string format = "tsv";
    expand_cmd->add_option("config", config_path, "Config file")->required();
    expand_cmd->add_option("--max-weight", max_weight, "Largest partition weight (default n*k for rational, else 12)");
    expand_cmd->add_flag("--all", all_rows, "Include exactly-zero coefficients");
    expand_cmd->add_option("--format", format, "Table format")->check(CLI::IsMember({"tsv", "csv"}));

    auto* verify_cmd = app.add_subcommand("verify", "Run the property battery");
    VerifyOptions vopts;
    verify_cmd->add_option("config", config_path, "Config file")->required();
    verify_cmd->add_option("--samples", vopts.samples, "Random (z, t) samples for the Plücker checks")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", vopts.seed, "Sampler seed");
    verify_cmd->add_flag("--corrupt", vopts.corrupt, "Perturb A(0,0) by 1e-3 (negative control)");

    auto* grid_cmd = app.add_subcommand("grid", "Emit u = 2 d^2/dx^2 log tau on a grid as CSV");
    GridRequest req;
    std::string gx = "-5:5:101", gy = "0", gt = "0";
    std::vector<int> axes;
    grid_cmd->add_option("config", config_path, "Config file")->required();
    grid_cmd->add_option("--x", gx, "lo:hi:steps for the x axis");
    grid_cmd->add_option("--y", gy, "lo:hi:steps (or one value) for the y axis");
    grid_cmd->add_option("--time", gt, "lo:hi:steps (or one value) for the time axis");
    grid_cmd->add_option("--axes", axes, "Flow indices for x, y, time (default 1 2 3)")->expected(3);
    grid_cmd->add_option("--step", req.h, "Finite-difference step h (default 1e-4)")->check(CLI::PositiveNumber);
    grid_cmd->add_option("--threshold", req.threshold, "Flag rows with |tau| below this");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_pass;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_pass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    }

    try {
        const FamilyConfig cfg = load_config(config_path);
        const Backend b = resolve_backend(cfg, backend);
        Sink sink(out_path, out);
        if (*build_cmd) {
            return dispatch_backend(b, [&](auto tag) {
                return build<typename decltype(tag)::type>(cfg, b, tol, sink.stream());
            });
        }
        if (*tau_cmd_app) {
            return dispatch_backend(b, [&](auto tag) {
                return tau_cmd<typename decltype(tag)::type>(cfg, t_values, all_forms, sink.stream());
            });
        }
        if (*expand_cmd) {
            return dispatch_backend(b, [&](auto tag) {
                return expand<typename decltype(tag)::type>(cfg, max_weight, all_rows, format, sink.stream());
            });
        }
        if (*verify_cmd) {
            vopts.tol = tol;
            const Report rep = verify_battery(cfg, b, vopts);
            nlohmann::json summary = report_json(rep);
            summary["family"] = cfg.family;
            summary["backend"] = backend_name(b);
            summary["samples"] = vopts.samples;
            summary["seed"] = vopts.seed;
            out << "family " << cfg.family << ", backend " << backend_name(b) << ", " << vopts.samples
                << " samples, seed " << vopts.seed << "\n";
            out << report_table(rep);
            out << (all_pass(rep) ? "ALL PASS" : "FAILURES PRESENT") << "\n";
            if (!out_path.empty()) sink.stream() << summary.dump(2) << "\n";
            out << summary.dump() << "\n";
            return all_pass(rep) ? exit_pass : exit_property_failure;
        }
        if (!axes.empty()) req.flows = {axes[0], axes[1], axes[2]};
        req.x = parse_axis(gx, "x");
        req.y = parse_axis(gy, "y");
        req.t = parse_axis(gt, "time");
        write_grid(evaluate_grid(cfg, b, req), sink.stream());
        return exit_pass;
    } catch (const BackendUnsupported& e) {
        err << "error: " << e.what() << " (exact evaluation needs nilpotent B and D or t = 0; try --backend float)\n";
        return exit_input_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace kptau
