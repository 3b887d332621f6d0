// Experiment kinds behind run(config).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gpscat/analysis.hpp"
#include "gpscat/config.hpp"
#include "gpscat/field_io.hpp"
#include "gpscat/gp_symbols.hpp"
#include "gpscat/mixed_norm.hpp"
#include "gpscat/normalform.hpp"
#include "gpscat/norms.hpp"
#include "gpscat/parallel.hpp"
#include "gpscat/resonance.hpp"
#include "gpscat/symbols.hpp"
#include "gpscat/transforms.hpp"

#ifndef GPSCAT_VERSION
#define GPSCAT_VERSION "unknown"
#endif

namespace gps {

using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Writer {
public:
    explicit Writer(std::string dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    void text(const std::string& name, const std::string& body) {
        std::ofstream out(path(name), std::ios::binary);
        out << body;
        if (!out) throw std::runtime_error("cannot write " + path(name));
        artifacts_.emplace_back(name, sha256_hex(body));
    }
    void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }
    void csv(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<double>>& rows) {
        std::ostringstream os;
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
        os << "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << num(r[i]);
            os << "\n";
        }
        text(name, os.str());
    }
    void field(const std::string& name, const Field& f) {
        std::ostringstream os;
        write_field_binary(os, f);
        text(name, os.str());
    }
    std::string path(const std::string& name) const { return (std::filesystem::path(dir_) / name).string(); }
    const std::string& dir() const { return dir_; }
    std::vector<std::pair<std::string, std::string>> artifacts_;

private:
    std::string dir_;
};

using Verdicts = std::vector<Verdict>;

//----------------------------------------------------------------------------
// Observables
//----------------------------------------------------------------------------
double field_observable(const std::string& name, const Field& v, double t) {
    if (name == "v_L2") return lp_norm(v, 2.0);
    if (name == "v_L4") return lp_norm(v, 4.0);
    if (name == "v_L6") return lp_norm(v, 6.0);
    if (name == "v_Linf") return lp_norm(v, INFINITY);
    if (name == "v_H1") return sobolev_norm(v, 1.0);
    if (name == "v_X") return norm_X(v.to_spectral().as_complex(), t);
    // The torus mean is outside the range of U; U^{-1} acts on the mean-free part.
    if (name == "Uinv_v_L6") return lp_norm(apply_symbol1(sym::U_pow(-1.0), project_mean_free(v)), 6.0);
    throw ConfigError("unknown observable '" + name + "'");
}

double state_observable(const std::string& name, const StateU& s) {
    if (name == "u1_Linf") return lp_norm(s.u1, INFINITY);
    if (name == "u2_Linf") return lp_norm(s.u2, INFINITY);
    if (name == "E1") return energy_E1(s);
    if (name == "b_H1") return sobolev_norm(symbol_b(s.u1, s.u2), 1.0);
    if (name == "Jb_H1") return J_h1_norm(symbol_b(s.u1, s.u2).to_spectral().as_complex(), s.t);
    if (name == "Z_H1") return sobolev_norm(transform_Z(s.u1, s.u2), 1.0);
    if (name.rfind("v_", 0) == 0 || name.rfind("Uinv_v", 0) == 0)
        return field_observable(name, make_v(s.u1, s.u2), s.t);
    throw ConfigError("unknown observable '" + name + "'");
}

// Rates stated for the nonlinear flow; other observables need params.predicted.
const std::map<std::string, double>& stated_rates() {
    static const std::map<std::string, double> r = {{"u1_Linf", -1.0},  {"u2_Linf", -0.9}, {"Uinv_v_L6", -0.6},
                                                    {"b_H1", -0.9},     {"Jb_H1", -1.0 / 6}};
    return r;
}

std::vector<std::string> names(const json& arr) {
    std::vector<std::string> out;
    for (const auto& x : arr) out.push_back(x.get<std::string>());
    return out;
}

double horizon_of(const RunConfig& c) {
    return c.time.horizon > 0.0 ? c.time.horizon : wraparound_horizon(make_grid(c.grid));
}

// Evolves the config's data and calls `visit` on every sampled state.
StateU simulate(const RunConfig& c, const StateObserver& visit, EnergyLedger* ledger = nullptr) {
    EvolveResult r = evolve(initial_state(c), evolution_config(c.time), visit, ledger != nullptr);
    if (ledger) *ledger = r.ledger;
    return r.final;
}

//----------------------------------------------------------------------------
// Kinds
//----------------------------------------------------------------------------
void propagate_linear(const RunConfig& c, Writer& w, Verdicts& out) {
    auto obs = names(c.params["observables"]);
    StateU s0 = initial_state(c);
    EvolutionConfig e = evolution_config(c.time);
    const long steps = e.steps();
    std::vector<std::vector<double>> rows;
    double l2_0 = lp_norm(make_v(s0.u1, s0.u2), 2.0), worst = 0.0;
    StateU last = s0;
    for (long k = 0; k <= steps; k += c.time.cadence) {
        double t = k * e.dt;
        StateU s = linear_step(s0, t);
        s.t = t;
        std::vector<double> row{t};
        for (const auto& o : obs) row.push_back(state_observable(o, s));
        rows.push_back(row);
        worst = std::max(worst, std::abs(lp_norm(make_v(s.u1, s.u2), 2.0) - l2_0));
        last = s;
    }
    std::vector<std::string> header{"t"};
    header.insert(header.end(), obs.begin(), obs.end());
    w.csv("series.csv", header, rows);
    if (c.params["save_final"].get<bool>()) w.field("final_u.bin", perturbation(last));
    double rel = l2_0 > 0 ? worst / l2_0 : worst;
    out.push_back({"v_L2_conserved", rel <= c.params["l2_tol"].get<double>(), "relative drift " + num(rel)});
}

void simulate_kind(const RunConfig& c, Writer& w, Verdicts& out) {
    auto obs = names(c.params["observables"]);
    std::vector<std::vector<double>> rows;
    EnergyLedger ledger;
    StateU fin = simulate(c, [&](const StateU& s) {
        std::vector<double> row{s.t};
        for (const auto& o : obs) row.push_back(state_observable(o, s));
        rows.push_back(row);
    }, &ledger);
    std::vector<std::string> header{"t"};
    header.insert(header.end(), obs.begin(), obs.end());
    w.csv("series.csv", header, rows);
    std::vector<std::vector<double>> lrows;
    for (const auto& r : ledger.rows) lrows.push_back({r.t, r.E1, r.H1z, r.Uu2sq});
    w.csv("energy.csv", {"t", "E1", "H1_z", "U_modsq_sq"}, lrows);
    if (c.params["save_final"].get<bool>()) w.field("final_u.bin", perturbation(fin));
    double drift = ledger.max_relative_drift();
    out.push_back({"energy_drift", drift <= c.params["drift_tol"].get<double>(), "max relative drift " + num(drift)});
}

void boussinesq_kind(const RunConfig& c, Writer& w, Verdicts& out) {
    auto obs = names(c.params["observables"]);
    StateU s0 = initial_state(c);
    std::vector<std::vector<double>> rows;
    bool finite = true;
    Field fin = evolve_boussinesq(make_v(s0.u1, s0.u2), evolution_config(c.time), [&](double t, const Field& v) {
        std::vector<double> row{t};
        for (const auto& o : obs) {
            row.push_back(field_observable(o, v, t));
            finite = finite && std::isfinite(row.back());
        }
        rows.push_back(row);
    });
    std::vector<std::string> header{"t"};
    header.insert(header.end(), obs.begin(), obs.end());
    w.csv("series.csv", header, rows);
    if (c.params["save_final"].get<bool>()) w.field("final_v.bin", fin);
    out.push_back({"finite", finite, "all sampled observables finite"});
}

void decay_fit_kind(const RunConfig& c, Writer& w, Verdicts& out) {
    const json& p = c.params;
    const std::string obs = p["observable"].get<std::string>();
    double predicted;
    if (!p["predicted"].is_null())
        predicted = p["predicted"].get<double>();
    else if (stated_rates().count(obs))
        predicted = stated_rates().at(obs);
    else
        throw ConfigError("params of decay-fit: observable '" + obs + "' has no stated rate; set 'predicted'");
    std::vector<double> t, v;
    simulate(c, [&](const StateU& s) {
        t.push_back(s.t);
        v.push_back(state_observable(obs, s));
    });
    DecayFitOptions opt;
    opt.t0 = p["t0"].get<double>();
    opt.t1 = p["t1"].get<double>();
    opt.horizon = horizon_of(c);
    opt.upper_bound = p["upper_bound"].get<bool>();
    opt.slack = p["slack"].get<double>();
    opt.tol = p["tol"].get<double>();
    opt.min_per_decade = p["min_per_decade"].get<double>();
    if (!p["threshold"].is_null()) opt.threshold = p["threshold"].get<double>();
    DecayReport r = decay_fit(obs, t, v, predicted, opt);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < t.size(); ++i) rows.push_back({t[i], v[i]});
    w.csv("series.csv", {"t", obs}, rows);
    w.json_file("fit.json", {{"observable", obs},
                             {"window", {r.window_lo, r.window_hi}},
                             {"samples_in_window", r.samples_in_window},
                             {"fitted", r.fitted},
                             {"residual", r.residual},
                             {"predicted", r.predicted},
                             {"upper_bound", r.upper_bound},
                             {"threshold", r.threshold},
                             {"tol", r.tol},
                             {"horizon", opt.horizon},
                             {"pass", r.pass}});
    out.push_back({"decay_" + obs, r.pass, "fitted " + num(r.fitted) + ", predicted " + num(predicted)});
}

void normalform_check(const RunConfig& c, Writer& w, Verdicts& out) {
    std::vector<StateU> traj;
    simulate(c, [&](const StateU& s) { traj.push_back(s); });
    EquivalenceReport r = normalform_equivalence(traj, c.params["K"].get<double>());
    std::vector<std::vector<double>> rows;
    for (const auto& row : r.rows) rows.push_back({row.t, row.v_X, row.z_minus_v, row.Z_minus_v});
    w.csv("equivalence.csv", {"t", "v_X", "z_minus_v_X", "Z_minus_v_X"}, rows);
    out.push_back({"envelope", r.pass, "K " + num(r.K) + " <= " + num(r.K_limit)});
}

void normalform_invert(const RunConfig& c, Writer& w, Verdicts& out) {
    StateU s = initial_state(c);
    Field f = transform_M(s.u1, s.u2);
    InverseOptions opt;
    opt.tol = c.params["tol"].get<double>();
    opt.max_iter = c.params["max_iter"].get<int>();
    opt.kappa = c.params["kappa"].get<double>();
    auto [g, rep] = inverse_R(f, opt);
    double back = sobolev_norm(transform_M(g.re(), g.im()).to_spectral() - f.to_spectral(), 1.0);
    double err_u = sobolev_norm(g.f.to_spectral() - perturbation(s).to_spectral(), 1.0);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < rep.history.size(); ++k) rows.push_back({double(k + 1), rep.history[k]});
    w.csv("iterations.csv", {"iteration", "update"}, rows);
    w.json_file("inverse.json", {{"iterations", rep.iterations},
                                 {"residual", rep.residual},
                                 {"converged", rep.converged},
                                 {"contraction", rep.contraction},
                                 {"l6_norm", rep.l6_norm},
                                 {"small", rep.small},
                                 {"roundtrip_H1", back},
                                 {"distance_to_data_H1", err_u}});
    out.push_back({"converged", rep.converged, num(rep.iterations) + " iterations"});
    out.push_back({"roundtrip", back <= c.params["residual_tol"].get<double>(), "||M(R f) - f||_H1 = " + num(back)});
}

void resonance_scan(const RunConfig& c, Writer& w, Verdicts& out) {
    std::vector<res::Claim> claims;
    for (const auto& n : names(c.params["claims"])) {
        if (n == "all") {
            claims = res::all_claims();
            break;
        }
        try {
            claims.push_back(res::claim_from_string(n));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("params of resonance-scan: ") + e.what());
        }
    }
    res::SampleOptions opt;
    opt.samples = c.params["samples"].get<long>();
    opt.log2_min = int(c.params["log2_min"].get<double>());
    opt.log2_max = int(c.params["log2_max"].get<double>());
    opt.seed = c.seed;
    std::ostringstream cells, checks;
    cells << "claim,log2_a,log2_b,log2_c,tested,constant\n";
    checks << "claim,check,side,tested,min_ratio,max_ratio,constant,ceiling,pass\n";
    json summary = json::array();
    for (res::Claim cl : claims) {
        res::BoundReport r = res::sampled_bound_suite(cl, opt);
        for (const auto& cs : r.cells)
            cells << res::to_string(cl) << "," << cs.log2_a << "," << cs.log2_b << "," << cs.log2_c << "," << cs.tested
                  << "," << num(cs.constant) << "\n";
        for (const auto& k : r.checks) {
            const char* side = k.side == res::Side::lower ? "lower" : k.side == res::Side::upper ? "upper" : "two-sided";
            checks << res::to_string(cl) << "," << k.name << "," << side << "," << k.tested << "," << num(k.min_ratio)
                   << "," << num(k.max_ratio) << "," << num(k.constant()) << "," << num(k.ceiling) << ","
                   << (k.pass() ? 1 : 0) << "\n";
        }
        summary.push_back({{"claim", res::to_string(cl)},
                           {"constant", r.constant},
                           {"exact_residual", r.exact_residual},
                           {"counterexamples", r.counterexample_count},
                           {"pass", r.pass}});
        out.push_back({std::string("claim_") + res::to_string(cl), r.pass,
                       "constant " + num(r.constant) + ", counterexamples " + std::to_string(r.counterexample_count)});
    }
    w.text("cells.csv", cells.str());
    w.text("checks.csv", checks.str());
    w.json_file("claims.json", summary);
}

void sbil_kind(const RunConfig& c, Writer& w, Verdicts& out) {
    const json& p = c.params;
    SymbolBi B;
    try {
        B = gp::bilinear_by_name(p["symbol"].get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(std::string("params of sbil-harness: ") + e.what());
    }
    SbilOptions opt;
    opt.trials = p["trials"].get<int>();
    opt.bumps = p["bumps"].get<int>();
    opt.width = p["width"].get<double>();
    opt.seed = c.seed;
    SbilReport r = sbil_inequality_harness(B, make_grid(c.grid), p["s"].get<double>(), p["q1"].get<double>(),
                                           p["q2"].get<double>(), opt);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < r.ratios.size(); ++k) rows.push_back({double(k), r.ratios[k]});
    w.csv("ratios.csv", {"trial", "ratio"}, rows);
    w.json_file("sbil.json", {{"symbol_norm", r.symbol_norm}, {"max_ratio", r.max_ratio}});
    double lim = p["ratio_limit"].get<double>();
    out.push_back({"ratio_bounded", r.max_ratio <= lim, "max ratio " + num(r.max_ratio) + " <= " + num(lim)});
}

// States at exact checkpoint times, each reached with the largest step <= dt.
std::vector<StateU> states_at(const RunConfig& c, const std::vector<double>& times) {
    EvolutionConfig e = evolution_config(c.time);
    e.validate();
    e.cadence = 0;
    StateU s = initial_state(c);
    if (e.enforce_horizon && !times.empty()) {
        const double hz = e.horizon > 0.0 ? e.horizon : wraparound_horizon(s.u1.grid());
        if (times.back() > hz + 1e-12)
            throw HorizonError("T = " + std::to_string(times.back()) + " exceeds the horizon " + std::to_string(hz));
    }
    std::vector<StateU> out;
    for (double tk : times) {
        const long m = long(std::ceil((tk - s.t) / c.time.dt - 1e-9));
        if (m > 0) {
            e.dt = (tk - s.t) / double(m);
            e.T = e.dt * double(m);
            e.enforce_horizon = false;
            s = evolve(s, e, {}, false).final;
        }
        s.t = tk;
        out.push_back(s);
    }
    return out;
}

void scatter_extract(const RunConfig& c, Writer& w, Verdicts& out) {
    std::vector<Snapshot> traj;
    std::vector<double> E;
    auto keep = [&](const StateU& s) {
        traj.push_back({s.t, transform_Z(s.u1, s.u2).to_spectral().as_complex()});
        E.push_back(energy_E1(s));
    };
    const std::string spacing = c.params["spacing"].get<std::string>();
    if (spacing == "uniform") {
        simulate(c, keep);
    } else if (spacing == "geometric") {
        // Pairs with a fixed ratio t_{k+1}/t_k see the rate of the profile itself.
        const double t0 = c.params["t0"].get<double>(), T = c.time.T;
        const int n = c.params["samples"].get<int>();
        if (!(t0 > 0.0 && t0 < T) || n < 3) throw ConfigError("scatter-extract: geometric spacing needs 0 < t0 < T and samples >= 3");
        std::vector<double> times;
        for (int k = 0; k < n; ++k) times.push_back(k == n - 1 ? T : t0 * std::pow(T / t0, double(k) / (n - 1)));
        for (const auto& s : states_at(c, times)) keep(s);
    } else {
        throw ConfigError("scatter-extract: spacing must be 'geometric' or 'uniform'");
    }
    std::size_t tail = c.params["tail"].get<std::size_t>();
    ScatterProfile p = extract_profile(traj, tail, c.params["threshold"].get<double>());
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < p.times.size(); ++k) rows.push_back({p.times[k], p.cauchy[k]});
    w.csv("cauchy.csv", {"t", "cauchy_H1"}, rows);
    // Energy gap |<grad> e^{itH} Z|^2 - E1 relative to E1 along the tail.
    const std::size_t first = traj.size() - (tail ? tail : traj.size());
    std::vector<std::vector<double>> gaps;
    bool monotone = true;
    double prev = INFINITY;
    for (std::size_t k = first; k < traj.size(); ++k) {
        double h = sobolev_norm(traj[k].Z, 1.0);
        double gap = E[k] > 0 ? std::abs(h * h - E[k]) / E[k] : 0.0;
        gaps.push_back({traj[k].t, gap});
        monotone = monotone && gap <= prev;
        prev = gap;
    }
    w.csv("energy_gap.csv", {"t", "relative_gap"}, gaps);
    if (c.params["save_profile"].get<bool>()) w.field("v_plus.bin", p.v_plus);
    out.push_back({"cauchy_decay", p.pass, p.vanishing ? std::string("vanishing") : "fitted " + num(p.fitted)});
    out.push_back({"energy_gap_decreasing", monotone, "relative gap on the tail"});
}

}  // namespace

RunManifest run(const RunConfig& c) {
    static const std::map<std::string, std::function<void(const RunConfig&, Writer&, Verdicts&)>> kinds = {
        {"propagate-linear", propagate_linear}, {"simulate", simulate_kind},
        {"boussinesq", boussinesq_kind},        {"decay-fit", decay_fit_kind},
        {"normalform-check", normalform_check}, {"normalform-invert", normalform_invert},
        {"resonance-scan", resonance_scan},     {"sbil-harness", sbil_kind},
        {"scatter-extract", scatter_extract}};
    auto it = kinds.find(c.kind);
    if (it == kinds.end()) throw ConfigError("unknown experiment kind '" + c.kind + "'");
    auto start = std::chrono::steady_clock::now();
    Writer w(resolve_output_dir(c.output));
    w.json_file("config.json", to_json(c));
    RunManifest m;
    m.kind = c.kind;
    m.config_hash = config_hash(c);
    m.code_version = GPSCAT_VERSION;
    m.threads = worker_count();
    m.output_dir = w.dir();
    try {
        it->second(c, w, m.verdicts);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw std::runtime_error(c.kind + " run failed: " + e.what());
    }
    json ver = json::array();
    for (const auto& v : m.verdicts) ver.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
    w.json_file("verdicts.json", ver);
    m.artifacts = w.artifacts_;
    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream(w.path("manifest.json")) << m.to_json().dump(2) << "\n";
    return m;
}

}  // namespace gps
