#pragma once
// Run configuration, manifests and the experiment front end.
//
// A config is a JSON object with the top-level keys
//   kind    one of run_kinds()
//   grid    {"d", "n", "L"}
//   data    {"family": "gaussian" | "random" | "zero" | "file", "eps", "width",
//            "phase", "center", "k0", "kscale", "seed", "path"}
//   time    {"scheme", "dt", "T", "cadence", "dealias", "nonlinear",
//            "horizon", "enforce_horizon"}
//   output  directory (relative paths resolve against GPSCAT_OUTPUT_ROOT)
//   seed    integer
//   params  kind-specific keys, see kind_param_defaults()
// Unknown keys anywhere are rejected with ConfigError naming the key.
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gpscat/dynamics.hpp"

namespace gps {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct GridSpec {
    int d = 1;
    int n = 64;
    double L = 32.0;
};

struct DataSpec {
    std::string family = "gaussian";
    double eps = 0.01;
    double width = 1.0;
    double phase = 0.0;
    Vec3 center{0, 0, 0};
    Vec3 k0{0, 0, 0};         // modulation e^{i k0.x} of the Gaussian profile
    double kscale = 2.0;      // spectral width of the random family
    std::uint64_t seed = 1;
    std::string path;         // family "file": a field (u1 + i u2) in binary format
};

struct TimeSpec {
    Scheme scheme = Scheme::strang;
    double dt = 0.01;
    double T = 1.0;
    int cadence = 10;
    bool dealias = true;
    bool nonlinear = true;
    double horizon = 0.0;     // 0: lattice wraparound horizon
    bool enforce_horizon = true;
};

struct RunConfig {
    std::string kind;
    GridSpec grid;
    DataSpec data;
    TimeSpec time;
    std::string output = "run";
    std::uint64_t seed = 1;
    nlohmann::json params = nlohmann::json::object();
};

const std::vector<std::string>& run_kinds();
// Every accepted params key of a kind with its default value.
nlohmann::json kind_param_defaults(const std::string& kind);

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
// Fully resolved config: every default made explicit, params included.
nlohmann::json to_json(const RunConfig& c);

// Hex SHA-256 of a byte string, and of the canonical dump of a JSON value.
std::string sha256_hex(const std::string& bytes);
std::string config_hash(const RunConfig& c);

// GPSCAT_OUTPUT_ROOT joined with a relative directory.
std::string resolve_output_dir(const std::string& dir);

Grid make_grid(const GridSpec& g);
EvolutionConfig evolution_config(const TimeSpec& t);
// Initial perturbation (u1, u2) of the data family.
StateU initial_state(const RunConfig& c);

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunManifest {
    std::string kind;
    std::string config_hash;
    std::string code_version;
    double wall_time_s = 0;
    int threads = 1;
    std::string output_dir;
    std::vector<std::pair<std::string, std::string>> artifacts;  // (file name, sha256)
    std::vector<Verdict> verdicts;
    bool pass() const;
    nlohmann::json to_json() const;
};

// Dispatches on c.kind, writes config.json, the artifacts, verdicts.json and
// manifest.json into the output directory and returns the manifest.
RunManifest run(const RunConfig& c);

}  // namespace gps
