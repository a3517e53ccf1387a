#include "kptau/config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "kptau/errors.hpp"

namespace kptau {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) { throw ConfigError(field + ": " + msg); }

Rational real_part(const json& j, const std::string& field) {
    try {
        if (j.is_number_integer()) {
            return j.is_number_unsigned() ? Rational(mpz_class(std::to_string(j.get<std::uint64_t>())))
                                          : Rational(mpz_class(std::to_string(j.get<std::int64_t>())));
        }
        if (j.is_number_float()) return rational_from_decimal(j.get<double>());
        if (j.is_string()) return parse_rational(j.get<std::string>());
    } catch (const ConfigError& e) {
        fail(field, e.what());
    }
    fail(field, "expected a number or a \"p/q\" string");
}

json rational_to_json(const Rational& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return json(q.get_num().get_si());
    const double d = rational_to_double(q);
    if (std::isfinite(d) && d != 0.0 && rational_from_decimal(d) == q) return json(d);
    return json(q.get_str());
}

int int_field(const json& j, const std::string& field, int lo) {
    if (!j.is_number_integer()) fail(field, "expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < lo || v > 1000000) fail(field, "out of range");
    return static_cast<int>(v);
}

std::vector<GaussianRational> scalar_list(const json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array");
    std::vector<GaussianRational> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(scalar_from_json(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::vector<GaussianRational>> matrix_field(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of rows");
    std::vector<std::vector<GaussianRational>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string row = field + "[" + std::to_string(i) + "]";
        out.push_back(scalar_list(j[i], row));
        if (out.back().empty()) fail(row, "empty row");
        if (out.back().size() != out.front().size()) fail(row, "ragged matrix");
    }
    return out;
}

std::vector<ConfigBlock> spec_field(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) fail(field, "expected a non-empty list of [eigenvalue, size]");
    std::vector<ConfigBlock> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string entry = field + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != 2) fail(entry, "expected [eigenvalue, size]");
        out.push_back({scalar_from_json(j[i][0], entry + "[0]"), int_field(j[i][1], entry + "[1]", 1)});
    }
    return out;
}

json matrix_to_json(const std::vector<std::vector<GaussianRational>>& m) {
    json out = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& x : row) r.push_back(scalar_to_json(x));
        out.push_back(r);
    }
    return out;
}

json list_to_json(const std::vector<GaussianRational>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(scalar_to_json(x));
    return out;
}

json spec_to_json(const std::vector<ConfigBlock>& s) {
    json out = json::array();
    for (const auto& b : s) out.push_back(json::array({scalar_to_json(b.eigenvalue), b.size}));
    return out;
}

void require(bool ok, const std::string& field, const std::string& msg) {
    if (!ok) fail(field, msg);
}

void require_distinct(const std::vector<GaussianRational>& v, const std::string& field) {
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[i] == v[j]) throw EigenvalueCollision(field + ": repeated value at indices " + std::to_string(i) + " and " + std::to_string(j));
}

std::size_t spec_dim(const std::vector<ConfigBlock>& s) {
    std::size_t d = 0;
    for (const auto& b : s) d += static_cast<std::size_t>(b.size);
    return d;
}

void validate(const FamilyConfig& c) {
    const auto& kinds = family_kinds();
    require(std::find(kinds.begin(), kinds.end(), c.family) != kinds.end(), "family", "unknown family '" + c.family + "'");
    require(c.backend == "float" || c.backend == "exact", "backend", "expected \"float\" or \"exact\"");
    for (const auto& [key, v] : c.tolerances) {
        const auto& keys = tolerance_keys();
        require(std::find(keys.begin(), keys.end(), key) != keys.end(), "tolerances." + key, "unknown tolerance key");
        require(v >= 0.0 && std::isfinite(v), "tolerances." + key, "must be a finite nonnegative number");
    }
    const std::size_t l = c.C.size();
    const std::size_t cols = l ? c.C.front().size() : 0;
    if (c.family == "rational") {
        require(c.n >= 1, "n", "rational family needs n >= 1");
        require(c.k >= 0, "k", "rational family needs k >= 0");
        require(l == static_cast<std::size_t>(c.n), "C", "must have n rows");
        require(cols == static_cast<std::size_t>(c.n + c.k), "C", "must have n + k columns");
    } else if (c.family == "soliton") {
        require(!c.betas.empty(), "betas", "required");
        require(l >= 1 && cols == c.betas.size(), "C", "must be n x N with N = len(betas)");
        require_distinct(c.betas, "betas");
    } else if (c.family == "cauchy") {
        require(!c.betas.empty(), "betas", "required");
        require(!c.deltas.empty(), "deltas", "required");
        require(l == c.deltas.size() && cols == c.betas.size(), "C", "must be len(deltas) x len(betas)");
        require_distinct(c.betas, "betas");
        require_distinct(c.deltas, "deltas");
        for (const auto& b : c.betas)
            for (const auto& d : c.deltas)
                if (b == d) throw EigenvalueCollision("betas/deltas: shared value");
    } else if (c.family == "calogero-moser") {
        require(!c.betas.empty(), "betas", "required");
        require(c.xis.size() == c.betas.size(), "xis", "must have the same length as betas");
        require_distinct(c.betas, "betas");
    } else {
        require(!c.B.empty(), "B", "required");
        require(!c.D.empty(), "D", "required");
        require(cols == spec_dim(c.B), "C", "must have dim(B) columns");
        require(l >= 1 && l <= spec_dim(c.D), "C", "needs 1 <= rows <= dim(D)");
        if (!c.F.empty()) {
            require(c.F.size() == l && c.F.front().size() == spec_dim(c.D), "F", "must be rows(C) x dim(D)");
        } else {
            require(l == spec_dim(c.D), "F", "required unless rows(C) = dim(D)");
        }
        std::vector<GaussianRational> eb, ed;
        for (const auto& b : c.B) eb.push_back(b.eigenvalue);
        for (const auto& d : c.D) ed.push_back(d.eigenvalue);
        require_distinct(eb, "B");
        require_distinct(ed, "D");
        for (const auto& b : eb)
            for (const auto& d : ed)
                if (b == d) throw EigenvalueCollision("B/D: shared eigenvalue");
    }
}

}  // namespace

bool FamilyConfig::is_real() const {
    auto real = [](const GaussianRational& x) { return x.imag() == 0; };
    auto all_real = [&](const std::vector<GaussianRational>& v) { return std::all_of(v.begin(), v.end(), real); };
    auto rows_real = [&](const std::vector<std::vector<GaussianRational>>& m) {
        return std::all_of(m.begin(), m.end(), all_real);
    };
    auto spec_real = [&](const std::vector<ConfigBlock>& s) {
        return std::all_of(s.begin(), s.end(), [&](const ConfigBlock& b) { return real(b.eigenvalue); });
    };
    return rows_real(C) && rows_real(F) && all_real(betas) && all_real(deltas) && all_real(xis) && spec_real(B) &&
           spec_real(D);
}

double FamilyConfig::tol(const std::string& key, double fallback) const {
    const auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
}

const std::vector<std::string>& family_kinds() {
    static const std::vector<std::string> k{"rational", "soliton", "cauchy", "calogero-moser", "generic-jordan"};
    return k;
}

const std::vector<std::string>& tolerance_keys() {
    static const std::vector<std::string> k{"rank_one", "lemma",      "three_form", "d_independence", "plucker",
                                            "hg",       "geometric",  "annihilation", "schur",        "fd"};
    return k;
}

GaussianRational scalar_from_json(const json& j, const std::string& field) {
    if (j.is_array()) {
        if (j.size() != 2) fail(field, "complex values are [re, im]");
        return {real_part(j[0], field + "[0]"), real_part(j[1], field + "[1]")};
    }
    return GaussianRational(real_part(j, field));
}

json scalar_to_json(const GaussianRational& x) {
    if (x.imag() == 0) return rational_to_json(x.real());
    return json::array({rational_to_json(x.real()), rational_to_json(x.imag())});
}

GaussianRational parse_scalar_text(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) return GaussianRational(parse_rational(s));
    return {parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
}

FamilyConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("<root>: expected an object");
    static const std::set<std::string> known{"family", "backend", "K", "n", "k", "C", "F", "betas",
                                             "deltas", "xis", "B", "D", "tolerances"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) fail(key, "unknown field");
    FamilyConfig c;
    if (!j.contains("family") || !j["family"].is_string()) fail("family", "required string");
    c.family = j["family"].get<std::string>();
    if (j.contains("backend")) {
        if (!j["backend"].is_string()) fail("backend", "expected a string");
        c.backend = j["backend"].get<std::string>();
    }
    if (j.contains("K")) c.K = int_field(j["K"], "K", 1);
    if (j.contains("n")) c.n = int_field(j["n"], "n", 0);
    if (j.contains("k")) c.k = int_field(j["k"], "k", 0);
    if (j.contains("C")) c.C = matrix_field(j["C"], "C");
    if (j.contains("F")) c.F = matrix_field(j["F"], "F");
    if (j.contains("betas")) c.betas = scalar_list(j["betas"], "betas");
    if (j.contains("deltas")) c.deltas = scalar_list(j["deltas"], "deltas");
    if (j.contains("xis")) c.xis = scalar_list(j["xis"], "xis");
    if (j.contains("B")) c.B = spec_field(j["B"], "B");
    if (j.contains("D")) c.D = spec_field(j["D"], "D");
    if (j.contains("tolerances")) {
        if (!j["tolerances"].is_object()) fail("tolerances", "expected an object");
        for (const auto& [key, value] : j["tolerances"].items()) {
            if (!value.is_number()) fail("tolerances." + key, "expected a number");
            c.tolerances[key] = value.get<double>();
        }
    }
    const auto& kinds = family_kinds();
    if (std::find(kinds.begin(), kinds.end(), c.family) == kinds.end()) fail("family", "unknown family '" + c.family + "'");
    if (c.family != "calogero-moser" && c.C.empty()) fail("C", "required");
    validate(c);
    return c;
}

json config_to_json(const FamilyConfig& c) {
    json j;
    j["family"] = c.family;
    j["backend"] = c.backend;
    j["K"] = c.K;
    if (c.family == "rational") {
        j["n"] = c.n;
        j["k"] = c.k;
    }
    if (!c.C.empty()) j["C"] = matrix_to_json(c.C);
    if (!c.F.empty()) j["F"] = matrix_to_json(c.F);
    if (!c.betas.empty()) j["betas"] = list_to_json(c.betas);
    if (!c.deltas.empty()) j["deltas"] = list_to_json(c.deltas);
    if (!c.xis.empty()) j["xis"] = list_to_json(c.xis);
    if (!c.B.empty()) j["B"] = spec_to_json(c.B);
    if (!c.D.empty()) j["D"] = spec_to_json(c.D);
    if (!c.tolerances.empty()) j["tolerances"] = c.tolerances;
    return j;
}

FamilyConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("parse error: ") + e.what());
    }
    return config_from_json(j);
}

FamilyConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string dump_config(const FamilyConfig& c) { return config_to_json(c).dump(2); }

}  // namespace kptau
