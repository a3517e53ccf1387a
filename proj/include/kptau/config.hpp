#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "kptau/scalar.hpp"

namespace kptau {

struct ConfigBlock {
    GaussianRational eigenvalue;
    int size = 1;
    friend bool operator==(const ConfigBlock&, const ConfigBlock&) = default;
};

// Parsed family description. Every scalar is held exactly; decimal literals
// are read as the decimal they spell.
struct FamilyConfig {
    std::string family;  // rational | soliton | cauchy | calogero-moser | generic-jordan
    std::string backend = "float";
    int K = 3;
    int n = 0;
    int k = 0;
    std::vector<std::vector<GaussianRational>> C;
    std::vector<std::vector<GaussianRational>> F;
    std::vector<GaussianRational> betas;
    std::vector<GaussianRational> deltas;
    std::vector<GaussianRational> xis;
    std::vector<ConfigBlock> B;
    std::vector<ConfigBlock> D;
    std::map<std::string, double> tolerances;

    bool is_real() const;
    double tol(const std::string& key, double fallback) const;
    friend bool operator==(const FamilyConfig&, const FamilyConfig&) = default;
};

const std::vector<std::string>& family_kinds();
const std::vector<std::string>& tolerance_keys();

FamilyConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const FamilyConfig& c);
FamilyConfig parse_config(const std::string& text);
FamilyConfig load_config(const std::string& path);
std::string dump_config(const FamilyConfig& c);

// number, "p/q" / decimal string, or [re, im]
GaussianRational scalar_from_json(const nlohmann::json& j, const std::string& field);
nlohmann::json scalar_to_json(const GaussianRational& x);
GaussianRational parse_scalar_text(const std::string& s);

}  // namespace kptau
