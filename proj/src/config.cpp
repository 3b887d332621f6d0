#include "gpscat/config.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "gpscat/analysis.hpp"
#include "gpscat/field_io.hpp"

namespace gps {

using nlohmann::json;

const std::vector<std::string>& run_kinds() {
    static const std::vector<std::string> k = {"propagate-linear", "simulate",        "boussinesq",
                                               "decay-fit",        "normalform-check", "normalform-invert",
                                               "resonance-scan",   "sbil-harness",     "scatter-extract"};
    return k;
}

json kind_param_defaults(const std::string& kind) {
    if (kind == "propagate-linear")
        return {{"observables", {"v_L2", "v_L6", "v_Linf"}}, {"save_final", true}, {"l2_tol", 1e-10}};
    if (kind == "simulate")
        return {{"observables", {"u1_Linf", "u2_Linf", "E1"}}, {"save_final", true}, {"drift_tol", 1e-5}};
    if (kind == "boussinesq") return {{"observables", {"v_H1", "v_Linf"}}, {"save_final", true}};
    if (kind == "decay-fit")
        return {{"observable", "u1_Linf"}, {"predicted", nullptr}, {"upper_bound", true}, {"slack", 0.15},
                {"threshold", nullptr},    {"tol", 0.1},           {"t0", 1.0},          {"t1", 0.0},
                {"min_per_decade", 8.0}};
    if (kind == "normalform-check") return {{"K", kEquivalenceK}};
    if (kind == "normalform-invert") return {{"tol", 1e-10}, {"max_iter", 200}, {"kappa", 0.1}, {"residual_tol", 1e-9}};
    if (kind == "resonance-scan")
        return {{"claims", {"all"}}, {"samples", 100000}, {"log2_min", -7.0}, {"log2_max", 7.0}};
    if (kind == "sbil-harness")
        return {{"symbol", "B3"}, {"s", 0.25},     {"q1", 8.0 / 3}, {"q2", 8.0 / 3},
                {"trials", 8},    {"bumps", 3},    {"width", 0.8},  {"ratio_limit", 10.0}};
    if (kind == "scatter-extract")
        return {{"spacing", "geometric"}, {"t0", 1.0},         {"samples", 9},
                {"tail", 0},              {"threshold", -0.4}, {"save_profile", true}};
    throw ConfigError("unknown experiment kind '" + kind + "'");
}

//----------------------------------------------------------------------------
// Strict parsing
//----------------------------------------------------------------------------
namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError("key '" + std::string(key) + "' in " + where + " has the wrong type");
    }
}

void read_vec(const json& obj, const char* key, Vec3& out, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_array() || it->size() > 3) throw ConfigError("key '" + std::string(key) + "' in " + where + " must be an array of up to 3 numbers");
    out = {0, 0, 0};
    for (std::size_t i = 0; i < it->size(); ++i) {
        if (!(*it)[i].is_number()) throw ConfigError("key '" + std::string(key) + "' in " + where + " must hold numbers");
        out[i] = (*it)[i].get<double>();
    }
}

bool same_type(const json& a, const json& b) {
    if (a.is_null() || b.is_null()) return true;  // null defaults accept any value and vice versa
    if (a.is_number() && b.is_number()) return !(a.is_number_integer() && b.is_number_float());
    return a.type() == b.type();
}

}  // namespace

RunConfig parse_config(const json& j) {
    check_keys(j, {"kind", "grid", "data", "time", "output", "seed", "params"}, "config");
    RunConfig c;
    if (!j.contains("kind")) throw ConfigError("missing key 'kind' in config");
    read(j, "kind", c.kind, "config");
    json params = kind_param_defaults(c.kind);
    read(j, "output", c.output, "config");
    read(j, "seed", c.seed, "config");

    if (j.contains("grid")) {
        const json& g = j["grid"];
        check_keys(g, {"d", "n", "L"}, "grid");
        read(g, "d", c.grid.d, "grid");
        read(g, "n", c.grid.n, "grid");
        read(g, "L", c.grid.L, "grid");
    }
    try {
        make_grid(c.grid);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }

    if (j.contains("data")) {
        const json& d = j["data"];
        check_keys(d, {"family", "eps", "width", "phase", "center", "k0", "kscale", "seed", "path"}, "data");
        read(d, "family", c.data.family, "data");
        read(d, "eps", c.data.eps, "data");
        read(d, "width", c.data.width, "data");
        read(d, "phase", c.data.phase, "data");
        read_vec(d, "center", c.data.center, "data");
        read_vec(d, "k0", c.data.k0, "data");
        read(d, "kscale", c.data.kscale, "data");
        read(d, "seed", c.data.seed, "data");
        read(d, "path", c.data.path, "data");
    }
    static const std::set<std::string> families = {"gaussian", "random", "zero", "file"};
    if (!families.count(c.data.family)) throw ConfigError("data: unknown family '" + c.data.family + "'");
    if (c.data.family == "file" && c.data.path.empty()) throw ConfigError("data: family 'file' needs 'path'");
    if (!(c.data.width > 0.0)) throw ConfigError("data: width must be positive");

    if (j.contains("time")) {
        const json& t = j["time"];
        check_keys(t, {"scheme", "dt", "T", "cadence", "dealias", "nonlinear", "horizon", "enforce_horizon"}, "time");
        std::string scheme = to_string(c.time.scheme);
        read(t, "scheme", scheme, "time");
        try {
            c.time.scheme = scheme_from_string(scheme);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("time: ") + e.what());
        }
        read(t, "dt", c.time.dt, "time");
        read(t, "T", c.time.T, "time");
        read(t, "cadence", c.time.cadence, "time");
        read(t, "dealias", c.time.dealias, "time");
        read(t, "nonlinear", c.time.nonlinear, "time");
        read(t, "horizon", c.time.horizon, "time");
        read(t, "enforce_horizon", c.time.enforce_horizon, "time");
    }
    try {
        evolution_config(c.time).validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("time: ") + e.what());
    }
    if (c.time.cadence < 1) throw ConfigError("time: cadence must be at least 1");

    if (j.contains("params")) {
        const json& p = j["params"];
        std::set<std::string> allowed;
        for (auto it = params.begin(); it != params.end(); ++it) allowed.insert(it.key());
        check_keys(p, allowed, "params of " + c.kind);
        for (auto it = p.begin(); it != p.end(); ++it) {
            if (!same_type(params[it.key()], it.value()))
                throw ConfigError("key '" + it.key() + "' in params of " + c.kind + " has the wrong type");
            params[it.key()] = it.value();
        }
    }
    c.params = params;
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& c) {
    auto vec = [](const Vec3& v) { return json::array({v[0], v[1], v[2]}); };
    return {{"kind", c.kind},
            {"grid", {{"d", c.grid.d}, {"n", c.grid.n}, {"L", c.grid.L}}},
            {"data",
             {{"family", c.data.family}, {"eps", c.data.eps}, {"width", c.data.width}, {"phase", c.data.phase},
              {"center", vec(c.data.center)}, {"k0", vec(c.data.k0)}, {"kscale", c.data.kscale},
              {"seed", c.data.seed}, {"path", c.data.path}}},
            {"time",
             {{"scheme", to_string(c.time.scheme)}, {"dt", c.time.dt}, {"T", c.time.T}, {"cadence", c.time.cadence},
              {"dealias", c.time.dealias}, {"nonlinear", c.time.nonlinear}, {"horizon", c.time.horizon},
              {"enforce_horizon", c.time.enforce_horizon}}},
            {"output", c.output},
            {"seed", c.seed},
            {"params", c.params}};
}

//----------------------------------------------------------------------------
// Hashing and paths
//----------------------------------------------------------------------------
std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

std::string config_hash(const RunConfig& c) { return sha256_hex(to_json(c).dump()); }

std::string resolve_output_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    if (p.is_absolute()) return p.string();
    const char* root = std::getenv("GPSCAT_OUTPUT_ROOT");
    return (root && *root ? std::filesystem::path(root) / p : p).string();
}

//----------------------------------------------------------------------------
// Grid, time and data
//----------------------------------------------------------------------------
Grid make_grid(const GridSpec& g) { return make_grid(g.d, g.n, g.L); }

EvolutionConfig evolution_config(const TimeSpec& t) {
    EvolutionConfig e;
    e.dt = t.dt;
    e.T = t.T;
    e.scheme = t.scheme;
    e.dealias = t.dealias;
    e.nonlinear = t.nonlinear;
    e.cadence = t.cadence;
    e.horizon = t.horizon;
    e.enforce_horizon = t.enforce_horizon;
    return e;
}

StateU initial_state(const RunConfig& c) {
    const Grid g = make_grid(c.grid);
    const DataSpec& d = c.data;
    if (d.family == "zero") return zero_state(g);
    if (d.family == "random")
        return make_state(random_smooth_field(g, d.kscale, d.seed, d.eps), random_smooth_field(g, d.kscale, d.seed + 1, d.eps));
    if (d.family == "file") {
        Field u = load_field(d.path);
        if (!(u.grid() == g)) throw ConfigError("data: field in " + d.path + " does not match the config grid");
        return make_state(real_part(u).as_real(), imag_part(u).as_real());
    }
    const cplx amp = d.eps * std::exp(cplx(0.0, d.phase));
    Field u = Field::from_function(g, [&](const Vec3& x) {
        Vec3 y = x - d.center;
        return amp * std::exp(-norm2(y) / (d.width * d.width)) * std::exp(cplx(0.0, dot(d.k0, y)));
    });
    return make_state(real_part(u).as_real(), imag_part(u).as_real());
}

//----------------------------------------------------------------------------
// Manifest
//----------------------------------------------------------------------------
bool RunManifest::pass() const {
    for (const auto& v : verdicts)
        if (!v.pass) return false;
    return true;
}

json RunManifest::to_json() const {
    json arts = json::array(), ver = json::array();
    for (const auto& [name, hash] : artifacts) arts.push_back({{"file", name}, {"sha256", hash}});
    for (const auto& v : verdicts) ver.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
    return {{"kind", kind},
            {"config_hash", config_hash},
            {"code_version", code_version},
            {"wall_time_s", wall_time_s},
            {"threads", threads},
            {"output_dir", output_dir},
            {"artifacts", arts},
            {"verdicts", ver},
            {"pass", pass()}};
}

}  // namespace gps
