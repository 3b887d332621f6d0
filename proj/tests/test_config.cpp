#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gpscat/config.hpp"

using namespace gps;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / "gpscat_test" / name;
    fs::remove_all(p);
    return p.string();
}

json small(const std::string& kind, const std::string& out) {
    return {{"kind", kind},
            {"grid", {{"d", 1}, {"n", 64}, {"L", 32.0}}},
            {"data", {{"family", "gaussian"}, {"eps", 0.01}, {"width", 1.5}}},
            {"time", {{"dt", 0.05}, {"T", 1.0}, {"cadence", 2}, {"enforce_horizon", false}}},
            {"output", scratch(out)}};
}

std::string error_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config schema") {
    json base = small("simulate", "schema");
    CHECK(error_of(base).empty());

    json j = base;
    j["colour"] = 1;
    CHECK(error_of(j).find("'colour'") != std::string::npos);
    j = base;
    j["data"]["amplitude"] = 1;
    CHECK(error_of(j).find("'amplitude' in data") != std::string::npos);
    j = base;
    j["params"] = {{"drift_tol", 1e-6}, {"cadense", 3}};
    CHECK(error_of(j).find("'cadense'") != std::string::npos);
    j = base;
    j["grid"]["n"] = "64";
    CHECK(error_of(j).find("'n'") != std::string::npos);
    j = base;
    j["kind"] = "teleport";
    CHECK(error_of(j).find("teleport") != std::string::npos);
    j = base;
    j["grid"]["n"] = 48;
    CHECK_FALSE(error_of(j).empty());
    j = base;
    j["time"]["dt"] = -1.0;
    CHECK_FALSE(error_of(j).empty());
    j = base;
    j.erase("kind");
    CHECK(error_of(j).find("'kind'") != std::string::npos);

    for (const auto& k : run_kinds()) CHECK_NOTHROW(kind_param_defaults(k));
}

TEST_CASE("resolved config round trip and hash") {
    RunConfig c = parse_config(small("decay-fit", "rt"));
    CHECK(c.params["slack"].get<double>() == 0.15);
    json resolved = to_json(c);
    RunConfig d = parse_config(resolved);
    CHECK(to_json(d) == resolved);
    CHECK(config_hash(c) == config_hash(d));
    d.data.eps = 0.02;
    CHECK(config_hash(c) != config_hash(d));
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("output root") {
    const char* old = std::getenv("GPSCAT_OUTPUT_ROOT");
    std::string saved = old ? old : "";
    setenv("GPSCAT_OUTPUT_ROOT", "/tmp/root_x", 1);
    CHECK(resolve_output_dir("a/b") == "/tmp/root_x/a/b");
    CHECK(resolve_output_dir("/abs") == "/abs");
    if (old)
        setenv("GPSCAT_OUTPUT_ROOT", saved.c_str(), 1);
    else
        unsetenv("GPSCAT_OUTPUT_ROOT");
}

TEST_CASE("runs") {
    SUBCASE("zero data gives zero series") {
        json j = small("simulate", "zero");
        j["data"]["family"] = "zero";
        RunManifest m = run(parse_config(j));
        CHECK(m.pass());
        std::istringstream csv(slurp(m.output_dir + "/series.csv"));
        std::string line;
        std::getline(csv, line);
        CHECK(line == "t,u1_Linf,u2_Linf,E1");
        int rows = 0;
        while (std::getline(csv, line)) {
            ++rows;
            CHECK(line.substr(line.find(',')) == ",0,0,0");
        }
        CHECK(rows == 11);
        CHECK(fs::exists(m.output_dir + "/config.json"));
        CHECK(fs::exists(m.output_dir + "/manifest.json"));
    }
    SUBCASE("identical configs reproduce their manifests") {
        json j = small("scatter-extract", "det");
        j["params"] = {{"t0", 0.1}};
        RunConfig c = parse_config(j);
        json a = run(c).to_json(), b = run(c).to_json();
        a.erase("wall_time_s");
        b.erase("wall_time_s");
        CHECK(a == b);
        CHECK(a["artifacts"].size() >= 5);
    }
    SUBCASE("every kind runs") {
        json lin = small("propagate-linear", "k_lin");
        CHECK(run(parse_config(lin)).pass());

        json bq = small("boussinesq", "k_bq");
        CHECK(run(parse_config(bq)).pass());

        json df = small("decay-fit", "k_df");
        df["time"] = {{"dt", 0.05}, {"T", 4.0}, {"cadence", 1}, {"nonlinear", false}, {"horizon", 5.0}};
        df["data"]["k0"] = {2.0};
        df["data"]["width"] = 1.0;
        df["grid"] = {{"d", 1}, {"n", 512}, {"L", 200.0}};
        df["params"] = {{"observable", "v_L6"}, {"predicted", -1.0 / 3}, {"upper_bound", false}, {"t0", 0.5}};
        RunManifest m = run(parse_config(df));
        CHECK(m.pass());

        json nf = small("normalform-check", "k_nf");
        CHECK(run(parse_config(nf)).pass());

        json inv = small("normalform-invert", "k_inv");
        CHECK(run(parse_config(inv)).pass());

        json rs = small("resonance-scan", "k_rs");
        rs["params"] = {{"claims", {"i", "vii"}}, {"samples", 20000}};
        RunManifest r = run(parse_config(rs));
        CHECK(r.pass());
        CHECK(r.verdicts.size() == 2);

        json sb = small("sbil-harness", "k_sb");
        sb["params"] = {{"trials", 2}};
        sb["grid"] = {{"d", 1}, {"n", 16}, {"L", 16.0}};
        CHECK(run(parse_config(sb)).verdicts.size() == 1);
    }
    SUBCASE("scatter-extract spacing") {
        json j = small("scatter-extract", "k_sc");
        j["params"] = {{"t0", 0.2}, {"samples", 5}};
        RunManifest g = run(parse_config(j));
        std::istringstream csv(slurp(g.output_dir + "/cauchy.csv"));
        std::string line;
        int rows = -1;
        while (std::getline(csv, line)) ++rows;
        CHECK(rows == 4);
        j["params"] = {{"spacing", "uniform"}};
        CHECK(run(parse_config(j)).verdicts.size() == 2);
        j["params"] = {{"spacing", "log"}};
        CHECK_THROWS_AS(run(parse_config(j)), ConfigError);
        j["params"] = {{"t0", 2.0}};
        CHECK_THROWS_AS(run(parse_config(j)), ConfigError);
    }
    SUBCASE("module errors carry the kind") {
        json df = small("decay-fit", "k_err");
        df["params"] = {{"observable", "v_L6"}};
        CHECK_THROWS_AS(run(parse_config(df)), ConfigError);
        df["params"] = {{"observable", "u1_Linf"}, {"t1", 100.0}};
        try {
            run(parse_config(df));
            CHECK(false);
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("decay-fit") != std::string::npos);
        }
    }
}
