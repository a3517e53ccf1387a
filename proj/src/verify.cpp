#include <algorithm>
#include <iomanip>
#include <sstream>

#include "kptau/commands.hpp"
#include "kptau/hirota.hpp"
#include "kptau/model.hpp"
#include "kptau/sampling.hpp"
#include "kptau/schur.hpp"

namespace kptau {

namespace {

constexpr int tau_samples = 5;

struct Tolerances {
    const FamilyConfig& cfg;
    std::optional<double> global;
    double operator()(const std::string& key) const {
        return global ? *global : cfg.tol(key, default_tolerance(key));
    }
};

template <class T>
bool admissible(const JordanSpec<T>& b, const JordanSpec<T>& d) {
    return b.is_nondegenerate() && d.is_nondegenerate() && !b.shares_eigenvalue_with(d);
}

// Diagonal spec of the given size whose eigenvalues (+-(2j+1)/2 + shift) avoid spec(B).
template <class T>
JordanSpec<T> auxiliary_d(std::size_t dim, const JordanSpec<T>& b, const Rational& shift) {
    std::vector<T> eigs;
    for (int j = 1; eigs.size() < dim; ++j) {
        for (int sign : {1, -1}) {
            if (eigs.size() == dim) break;
            const T cand = scalar_cast<T>(Rational(Rational(sign * (2 * j + 1), 2) + shift));
            bool clash = false;
            for (const auto& blk : b.blocks()) clash = clash || blk.eigenvalue == cand;
            if (!clash) eigs.push_back(cand);
        }
    }
    return JordanSpec<T>::diagonal(eigs);
}

template <class T>
FlowVector<T> sample_flow(Sampler& s, std::size_t k, bool evaluable, double scale) {
    if (!evaluable) return FlowVector<T>::zero(k);
    if constexpr (is_exact_v<T>) {
        FlowVector<T> t = s.flow<T>(k, scale);
        for (std::size_t i = 1; i <= k; ++i) t.at(i) = t[i] / integer_scalar<T>(4);
        return t;
    } else {
        return s.flow<T>(k, scale);
    }
}

template <class T>
std::array<T, 4> sample_points(Sampler& s, const RankOneSystem<T>& sys) {
    std::array<T, 4> z;
    for (std::size_t i = 0; i < 4; ++i) {
        for (;;) {
            T cand;
            if constexpr (is_exact_v<T>) {
                cand = s.scalar<T>() * integer_scalar<T>(3);
            } else {
                const double r = std::max(sys.Bspec.spectral_radius(), sys.Dspec.spectral_radius()) + 1.0;
                cand = std::polar(s.uniform(1.2 * r, 2.5 * r), s.uniform(0.0, 6.283185307179586));
            }
            bool ok = cand != T(0);
            for (const auto& blk : sys.Dspec.blocks()) ok = ok && blk.eigenvalue != cand;
            for (std::size_t j = 0; j < i; ++j) ok = ok && z[j] != cand;
            if (ok) {
                z[i] = cand;
                break;
            }
        }
    }
    return z;
}

void append(Report& r, const Report& more, const std::string& prefix) {
    for (Check c : more) {
        c.name = prefix + c.name;
        r.push_back(std::move(c));
    }
}

template <class T>
double max_pairwise(const std::array<T, 3>& v) {
    return std::max({relative_difference(v[0], v[1]), relative_difference(v[0], v[2]), relative_difference(v[1], v[2])});
}

// Largest Jordan-coordinate weight that can carry a nonzero coefficient when B and D are nilpotent.
int finite_weight_bound(std::size_t big, std::size_t small) {
    int w = 0;
    const auto r = std::min(big, small);
    for (std::size_t i = 0; i < r; ++i) w += static_cast<int>(big - 1 - i) + static_cast<int>(small - 1 - i) + 1;
    return w;
}

template <class T>
Report battery(const FamilyConfig& cfg, const VerifyOptions& opts) {
    const Tolerances tol{cfg, opts.tol};
    const bool exact = is_exact_v<T>;
    TauModel<T> model = build_model<T>(cfg);
    auto& sys = model.sys;
    if (opts.corrupt) sys.A(0, 0) += scalar_cast<T>(Rational(1, 1000));
    const bool evaluable = exactly_evaluable(sys);
    const std::size_t k = static_cast<std::size_t>(std::max(cfg.K, 1));
    Sampler rng(opts.seed);
    Report rep;

    append(rep, verify_rank_one(sys, tol("rank_one")), "rank-1: ");

    const auto aux1 = auxiliary_d(sys.l(), sys.Bspec, Rational(0));
    const auto aux2 = auxiliary_d(sys.l(), sys.Bspec, Rational(1, 4));
    const bool own_d = admissible(sys.Bspec, sys.Dspec);
    append(rep, lemma_identities(sys.Bspec, own_d ? sys.Dspec : aux1, tol("lemma")),
           own_d ? "lemma: " : "lemma (auxiliary D): ");

    std::vector<FlowVector<T>> times;
    for (int i = 0; i < tau_samples; ++i) times.push_back(sample_flow<T>(rng, k, evaluable, 0.5));

    {
        const bool use_own = own_d && sys.l() == sys.n();
        const auto& d = use_own ? sys.Dspec : aux1;
        double worst = 0.0;
        for (const auto& t : times) worst = std::max(worst, max_pairwise(tau_W_BCD(sys.Bspec, sys.C, d, t)));
        rep.push_back(make_check(std::string("three-form agreement") + (use_own ? "" : " (auxiliary D)"), worst,
                                 tol("three_form"), exact, std::to_string(times.size()) + " times"));
    }
    {
        std::vector<T> ratios;
        for (const auto& t : times) {
            const T den = tau_W_BCD(sys.Bspec, sys.C, aux2, t)[0];
            if (den != T(0)) ratios.push_back(T(tau_W_BCD(sys.Bspec, sys.C, aux1, t)[0] / den));
        }
        if (ratios.empty()) {
            rep.push_back(skipped_check("D-independence", "tau vanishes at every sampled time"));
        } else {
            double worst = relative_difference(ratios[0], T(kappa(aux2) / kappa(aux1)));
            for (const auto& r : ratios) worst = std::max(worst, relative_difference(r, ratios[0]));
            rep.push_back(make_check("D-independence", worst, tol("d_independence"), exact,
                                     std::to_string(ratios.size()) + " ratios"));
        }
    }
    if (sys.l() == sys.n()) {
        double worst = 0.0;
        const T det_f = det(sys.F);
        for (const auto& t : times) {
            const T lhs = tau_general(sys, t);
            const T rhs = det_f * exp_scalar(T(-trace_flow(sys.Dspec, t))) * tau_gk(sys.A, sys.Bspec, sys.C, t);
            worst = std::max(worst, relative_difference(lhs, rhs));
        }
        rep.push_back(make_check("general form = det F e^{-sum t tr D^i} GK form", worst, tol("three_form"), exact));
    } else {
        rep.push_back(skipped_check("general form = det F e^{-sum t tr D^i} GK form", "l < n"));
    }

    const T d0 = det(Matrix<T>(sys.F * sys.A * sys.C.transpose()));
    const bool big_cell = d0 != T(0);

    if (own_d && big_cell) {
        const Matrix<T> m = big_cell_point(sys);
        double worst = 0.0;
        for (const auto& t : times) {
            const T lhs = tau_general(sys, t);
            const T rhs = d0 * tau_geometric(sys.f, sys.g, sys.Bspec, sys.Dspec, m, t).small;
            worst = std::max(worst, relative_difference(lhs, rhs));
        }
        rep.push_back(make_check("geometric form", worst, tol("geometric"), exact));
        if (sys.l() == sys.n() && det(Matrix<T>(sys.A * sys.C.transpose())) != T(0)) {
            double g = 0.0;
            for (const auto& t : times) g = std::max(g, gk_gauge_relation(sys, t));
            rep.push_back(make_check("gauge relation", g, tol("geometric"), exact));
        } else {
            rep.push_back(skipped_check("gauge relation", "needs l = n and det(A C^T) != 0"));
        }
    } else {
        const std::string why = own_d ? "det(F A C^T) = 0" : "B and D spectra collide";
        rep.push_back(skipped_check("geometric form", why));
        rep.push_back(skipped_check("gauge relation", why));
    }

    if (big_cell) {
        const Matrix<T> m = big_cell_point(sys);
        rep.push_back(make_check("min-poly annihilation",
                                 min_poly_annihilation(sys.f, sys.g, sys.Bspec, sys.Dspec, m, 2 * static_cast<int>(sys.N())),
                                 tol("annihilation"), exact));
        const bool nilpotent = sys.Bspec.is_nilpotent() && sys.Dspec.is_nilpotent();
        if (nilpotent) {
            const int w = cfg.family == "rational" ? cfg.n * cfg.k : finite_weight_bound(sys.N(), sys.n());
            const auto terms = schur_expansion(sys, w);
            double worst = 0.0;
            for (const auto& t : times) worst = std::max(worst, relative_difference(expansion_value(terms, t, true), tau_general(sys, t)));
            rep.push_back(make_check("Schur expansion (finite)", worst, tol("schur"), exact,
                                     "max weight " + std::to_string(w)));
        } else if (!exact && std::max(sys.Bspec.spectral_radius(), sys.Dspec.spectral_radius()) <= 0.6) {
            const auto terms = schur_expansion(sys, 12);
            double worst = 0.0;
            for (int i = 0; i < tau_samples; ++i) {
                FlowVector<T> t = FlowVector<T>::zero(3);
                for (std::size_t j = 1; j <= 3; ++j) t.at(j) = scalar_cast<T>(rational_from_double(rng.uniform(-0.1, 0.1)));
                worst = std::max(worst, relative_difference(expansion_value(terms, t, true), tau_general(sys, t)));
            }
            rep.push_back(make_check("Schur expansion (weight 12, |t| <= 0.1)", worst, tol("schur"), false));
        } else {
            rep.push_back(skipped_check("Schur expansion", exact ? "exact backend needs nilpotent B and D"
                                                                 : "spectral radius above 0.6"));
        }
        const int w = std::min<int>(6, finite_weight_bound(sys.N(), sys.n()) + 1);
        const auto a = schur_expansion(sys, w, SchurConvention::standard);
        const auto b = schur_expansion(sys, w, SchurConvention::as_printed);
        double diff = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, magnitude(T(a[i].coefficient - b[i].coefficient)));
        rep.push_back(info_check("Schur sign convention discrepancy", diff, "weight <= " + std::to_string(w)));
    } else {
        rep.push_back(skipped_check("min-poly annihilation", "det(F A C^T) = 0"));
        rep.push_back(skipped_check("Schur expansion", "det(F A C^T) = 0"));
    }

    {
        double plucker = 0.0, hg = 0.0;
        int used = 0, hg_used = 0;
        for (int i = 0; i < opts.samples; ++i) {
            const auto t = sample_flow<T>(rng, k, evaluable, 0.5);
            const auto z = sample_points(rng, sys);
            plucker = std::max(plucker, plucker_relation_residual(xi_matrix(model, z, t)));
            ++used;
            try {
                hg = std::max(hg, xi_rank2_check(model, z, t));
                ++hg_used;
            } catch (const ZeroTau&) {
            }
        }
        rep.push_back(make_check("Plücker relation", plucker, tol("plucker"), exact, std::to_string(used) + " samples"));
        if (hg_used)
            rep.push_back(make_check("H,G factorization", hg, tol("hg"), exact, std::to_string(hg_used) + " samples"));
        else
            rep.push_back(skipped_check("H,G factorization", "tau vanishes at every sample"));
    }

    {
        // Signed residual at h = 1e-3 / 2^halvings; exact arithmetic whenever tau is a polynomial.
        const double fd_tol = tol("fd");
        const bool direct = cfg.family == "rational" || cfg.family == "soliton";
        auto run = [&](auto&& fd) {
            const auto r1 = fd(0);
            const auto r2 = fd(1);
            const double m1 = magnitude(r1), m2 = magnitude(r2);
            const std::string raw = "raw residual at h = 1e-3: " + format_double(m1);
            if (direct)
                rep.push_back(make_check("KP bilinear residual (h = 1e-3)", m1, fd_tol, false, "base point t = 0"));
            else
                rep.push_back(make_check("KP bilinear residual (Richardson, h = 1e-3, 5e-4)",
                                         kp_bilinear_extrapolated(r1, r2), fd_tol, false, raw));
            if (m1 < 1e-16) {
                rep.push_back(skipped_check("KP O(h^2) convergence ratio", "residual vanishes to working precision"));
            } else {
                const double ratio = m1 / m2;
                rep.push_back(make_check("KP O(h^2) convergence ratio", std::abs(ratio - 4.0), 0.5, false,
                                         "ratio " + format_double(ratio) + ", window [3.5, 4.5]"));
            }
        };
        try {
            bool done = false;
            if constexpr (is_exact_v<T>) {
                if (evaluable) {
                    run([&](int halvings) {
                        return kp_bilinear_fd(model, FlowVector<T>::zero(3), scalar_cast<T>(Rational(1, 1000 << halvings)));
                    });
                    done = true;
                }
            }
            if (!done) {
                const auto fm = model_cast<Complex>(model);
                run([&](int halvings) { return kp_bilinear_fd(fm, FlowVector<Complex>::zero(3), 1e-3 / (1 << halvings)); });
            }
        } catch (const ZeroTau&) {
            rep.push_back(skipped_check("KP bilinear residual", "tau vanishes at t = 0"));
        }
    }
    return rep;
}

std::string display_value(const Check& c) {
    if (c.exact && c.applicable && !c.info) return c.value == 0.0 ? "EXACT ZERO" : format_double(c.value) + " (exact backend)";
    std::ostringstream os;
    os << std::setprecision(3) << std::scientific << c.value;
    return os.str();
}

}  // namespace

double default_tolerance(const std::string& key) {
    if (key == "lemma" || key == "annihilation") return 1e-12;
    if (key == "d_independence" || key == "plucker" || key == "hg") return 1e-9;
    if (key == "schur") return 1e-8;
    if (key == "fd") return 1e-5;
    return 1e-10;
}

Report verify_battery(const FamilyConfig& cfg, Backend backend, const VerifyOptions& opts) {
    return dispatch_backend(backend, [&](auto tag) { return battery<typename decltype(tag)::type>(cfg, opts); });
}

std::string report_table(const Report& r) {
    std::ostringstream os;
    for (const auto& c : r) {
        os << std::left << std::setw(5) << c.status() << " " << c.name;
        if (c.applicable) {
            os << ": " << display_value(c);
            if (!c.exact && !c.info) {
                std::ostringstream t;
                t << std::setprecision(1) << std::scientific << c.tol;
                os << "  (tol " << t.str() << ")";
            }
        }
        if (!c.note.empty()) os << "  [" << c.note << "]";
        os << "\n";
    }
    return os.str();
}

nlohmann::json report_json(const Report& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r)
        checks.push_back({{"name", c.name},
                          {"status", c.status()},
                          {"value", c.value},
                          {"tol", c.tol},
                          {"exact", c.exact},
                          {"note", c.note}});
    return {{"pass", all_pass(r)}, {"checks", checks}};
}

}  // namespace kptau
