#pragma once

#include <string>
#include <vector>

#include "kptau/config.hpp"
#include "kptau/families.hpp"
#include "kptau/tau.hpp"

namespace kptau {

template <class T>
T config_scalar(const GaussianRational& x) {
    return ScalarOps<T>::from_gaussian(x);
}

template <class T>
std::vector<T> config_list(const std::vector<GaussianRational>& v) {
    std::vector<T> out;
    for (const auto& x : v) out.push_back(config_scalar<T>(x));
    return out;
}

template <class T>
Matrix<T> config_matrix(const std::vector<std::vector<GaussianRational>>& rows) {
    if (rows.empty()) return {};
    Matrix<T> m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = config_scalar<T>(rows[i][j]);
    return m;
}

template <class T>
JordanSpec<T> config_spec(const std::vector<ConfigBlock>& blocks) {
    std::vector<JordanBlock<T>> out;
    for (const auto& b : blocks) out.push_back({config_scalar<T>(b.eigenvalue), b.size});
    return JordanSpec<T>(std::move(out));
}

template <class T>
RankOneSystem<T> build_system(const FamilyConfig& c) {
    if (c.family == "rational") return rational_family<T>(c.n, c.k, config_matrix<T>(c.C));
    if (c.family == "soliton") return soliton_family<T>(config_list<T>(c.betas), config_matrix<T>(c.C)).sys;
    if (c.family == "cauchy")
        return cauchy_family<T>(config_list<T>(c.betas), config_list<T>(c.deltas), config_matrix<T>(c.C));
    if (c.family == "calogero-moser")
        return calogero_moser_family<T>(config_list<T>(c.betas), config_list<T>(c.xis)).sys;
    if (c.family == "generic-jordan") {
        const auto d = config_spec<T>(c.D);
        const Matrix<T> f = c.F.empty() ? Matrix<T>::identity(d.dim()) : config_matrix<T>(c.F);
        return generic_jordan_family<T>(config_spec<T>(c.B), d, config_matrix<T>(c.C), f);
    }
    throw ConfigError("family: unknown family '" + c.family + "'");
}

template <class T>
TauModel<T> build_model(const FamilyConfig& c) {
    TauModel<T> m{build_system<T>(c)};
    m.sys.validate_shapes();
    return m;
}

// t_i -> exp is only defined exactly when every block of B and D is nilpotent.
template <class T>
bool exactly_evaluable(const RankOneSystem<T>& s) {
    return !is_exact_v<T> || (s.Bspec.is_nilpotent() && s.Dspec.is_nilpotent());
}

}  // namespace kptau
