#include "gpscat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gpscat/multilinear.hpp"
#include "gpscat/norms.hpp"
#include "gpscat/parallel.hpp"
#include "gpscat/symbols.hpp"
#include "gpscat/transforms.hpp"

namespace gps {

double central_mass_fraction(const Field& f) {
    Field g = f.to_physical();
    const Grid& G = g.grid();
    double in = 0.0, all = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double m = std::norm(g[i]);
        all += m;
        Vec3 x = G.x(i);
        bool central = true;
        for (int a = 0; a < G.d; ++a) central = central && std::abs(x[a]) <= 0.25 * G.L;
        if (central) in += m;
    }
    return all > 0.0 ? in / all : 1.0;
}

JResult apply_J(const Field& f, double t) {
    JResult r;
    Field g = apply_symbol1(sym::propagator(-t), f, Repr::physical);
    r.localized = central_mass_fraction(g) >= kLocalizationThreshold;
    const Grid& G = g.grid();
    r.components.resize(G.d);
    parallel_for(G.d, [&](std::size_t b, std::size_t e) {
        for (std::size_t j = b; j < e; ++j) {
            Field h = g;
            for (std::size_t i = 0; i < h.size(); ++i) h[i] *= G.x(i)[j];
            r.components[j] = apply_symbol1(sym::propagator(t), h, Repr::spectral);
        }
    }, 1);
    return r;
}

double J_h1_norm(const Field& f, double t) {
    double acc = 0.0;
    for (const Field& c : apply_J(f, t).components) {
        double v = sobolev_norm(c, 1.0);
        acc += v * v;
    }
    return std::sqrt(acc);
}

double norm_X(const Field& Z, double t) { return sobolev_norm(Z, 1.0) + J_h1_norm(Z, t); }

double norm_S(const std::vector<Snapshot>& traj, const ZeroModePolicy& pol) {
    if (traj.empty()) return 0.0;
    for (std::size_t k = 1; k < traj.size(); ++k)
        if (!(traj[k].t > traj[k - 1].t)) throw std::invalid_argument("norm_S: snapshot times must increase");
    std::vector<double> h1(traj.size()), strich(traj.size());
    const Symbol1 w = sym::U_pow(-1.0 / 6.0), br = sym::bracket_pow(1.0);
    parallel_for(traj.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            h1[k] = sobolev_norm(traj[k].Z, 1.0);
            Field g = apply_symbol1(br, apply_symbol1(w, traj[k].Z, Repr::spectral, pol), Repr::physical);
            double v = lp_norm(g, 6.0);
            strich[k] = v * v;
        }
    }, 1);
    double sup = *std::max_element(h1.begin(), h1.end());
    double integral = 0.0;
    for (std::size_t k = 1; k < traj.size(); ++k)
        integral += 0.5 * (traj[k].t - traj[k - 1].t) * (strich[k] + strich[k - 1]);
    return sup + std::sqrt(integral);
}

//----------------------------------------------------------------------------
// Decay fits
//----------------------------------------------------------------------------
std::pair<double, double> loglog_slope(const std::vector<double>& t, const std::vector<double>& v) {
    const std::size_t n = t.size();
    if (n < 2 || v.size() != n) throw std::invalid_argument("loglog_slope: need two or more paired samples");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(t[i]);
        my += std::log(v[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = std::log(t[i]) - mx;
        sxy += dx * (std::log(v[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw std::invalid_argument("loglog_slope: times coincide");
    double slope = sxy / sxx, rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = std::log(v[i]) - my - slope * (std::log(t[i]) - mx);
        rss += r * r;
    }
    return {slope, std::sqrt(rss / n)};
}

double dispersive_horizon(const Field& f, double tol) {
    Field g = f.to_spectral();
    const Grid& G = g.grid();
    std::vector<std::pair<double, double>> sm(g.size());
    double total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        sm[i] = {group_speed(norm(G.xi(i))), std::norm(g[i])};
        total += sm[i].second;
    }
    const double floor_h = wraparound_horizon(G);
    if (total == 0.0) return std::numeric_limits<double>::infinity();
    std::sort(sm.begin(), sm.end(), [](auto& a, auto& b) { return a.first > b.first; });
    double tail = 0.0, v = sm.back().first;
    for (const auto& [speed, m] : sm) {
        if (tail + m > tol * total) {
            v = speed;
            break;
        }
        tail += m;
    }
    return std::max(floor_h, G.L / (2.0 * v));
}

DecayReport decay_fit(const std::string& observable, const std::vector<double>& t, const std::vector<double>& v,
                      double predicted, const DecayFitOptions& opt) {
    if (t.size() != v.size()) throw std::invalid_argument("decay_fit: times and values differ in length");
    if (!(opt.horizon > 0.0)) throw std::invalid_argument("decay_fit: a positive horizon is required");
    if (!(opt.t0 > 0.0)) throw std::invalid_argument("decay_fit: t0 must be positive");
    const double t_last = t.empty() ? 0.0 : *std::max_element(t.begin(), t.end());
    double hi = opt.t1 > 0.0 ? opt.t1 : std::min(t_last, opt.horizon);
    if (hi > opt.horizon) {
        std::ostringstream os;
        os << "decay_fit(" << observable << "): window end " << hi << " exceeds the horizon " << opt.horizon;
        throw HorizonError(os.str());
    }
    DecayReport r;
    r.observable = observable;
    r.times = t;
    r.values = v;
    r.predicted = predicted;
    r.upper_bound = opt.upper_bound;
    r.tol = opt.tol;
    r.threshold = opt.threshold ? *opt.threshold : predicted + opt.slack;
    std::vector<double> wt, wv;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= opt.t0 && t[i] <= hi) {
            if (!(v[i] > 0.0)) throw std::invalid_argument("decay_fit(" + observable + "): non-positive value in window");
            wt.push_back(t[i]);
            wv.push_back(v[i]);
        }
    r.samples_in_window = int(wt.size());
    if (wt.size() < 3) throw std::invalid_argument("decay_fit(" + observable + "): fewer than 3 samples in window");
    r.window_lo = *std::min_element(wt.begin(), wt.end());
    r.window_hi = *std::max_element(wt.begin(), wt.end());
    double decades = std::log10(r.window_hi / r.window_lo);
    if (!(decades > 0.0) || wt.size() / decades < opt.min_per_decade) {
        std::ostringstream os;
        os << "decay_fit(" << observable << "): " << wt.size() << " samples over " << decades
           << " decades, need " << opt.min_per_decade << " per decade";
        throw std::invalid_argument(os.str());
    }
    std::tie(r.fitted, r.residual) = loglog_slope(wt, wv);
    r.pass = opt.upper_bound ? r.fitted <= r.threshold : std::abs(r.fitted - predicted) <= opt.tol;
    return r;
}

//----------------------------------------------------------------------------
// Scattering profile
//----------------------------------------------------------------------------
ScatterProfile extract_profile(const std::vector<Snapshot>& traj, std::size_t tail, double threshold) {
    if (tail == 0) tail = traj.size();
    if (tail < 3 || traj.size() < tail) throw std::invalid_argument("extract_profile: tail needs at least 3 samples");
    const std::size_t first = traj.size() - tail;
    for (std::size_t k = first + 1; k < traj.size(); ++k)
        if (!(traj[k].t > traj[k - 1].t)) throw std::invalid_argument("extract_profile: times must increase");
    std::vector<Field> P(tail);
    parallel_for(tail, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k)
            P[k] = apply_symbol1(sym::propagator(-traj[first + k].t), traj[first + k].Z, Repr::spectral);
    }, 1);
    ScatterProfile sp;
    sp.v_plus = P.back();
    for (std::size_t k = 1; k < tail; ++k) {
        sp.times.push_back(traj[first + k].t);
        sp.cauchy.push_back(sobolev_norm(P[k] - P[k - 1], 1.0));
    }
    double scale = std::max(sobolev_norm(sp.v_plus, 1.0), 1e-300);
    sp.vanishing = std::all_of(sp.cauchy.begin(), sp.cauchy.end(), [&](double c) { return c <= 1e-13 * scale; });
    for (std::size_t k = 1; k < sp.cauchy.size(); ++k)
        if (sp.cauchy[k - 1] > 0.0) sp.max_increase = std::max(sp.max_increase, sp.cauchy[k] / sp.cauchy[k - 1] - 1.0);
    if (!sp.vanishing) {
        std::vector<double> tt, cc;
        for (std::size_t k = 0; k < sp.cauchy.size(); ++k)
            if (sp.cauchy[k] > 0.0) {
                tt.push_back(sp.times[k]);
                cc.push_back(sp.cauchy[k]);
            }
        if (tt.size() >= 2) sp.fitted = loglog_slope(tt, cc).first;
    }
    sp.pass = sp.vanishing || sp.fitted <= threshold;
    return sp;
}

//----------------------------------------------------------------------------
// Normal-form comparison
//----------------------------------------------------------------------------
EquivalenceReport normalform_equivalence(const std::vector<StateU>& traj, double K_limit) {
    EquivalenceReport rep;
    rep.K_limit = K_limit;
    rep.rows.resize(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const StateU& s = traj[k];
        Field v = make_v(s.u1, s.u2).to_spectral().as_complex();
        Field z = transform_M(s.u1, s.u2).to_spectral().as_complex();
        Field Z = transform_Z(s.u1, s.u2).to_spectral().as_complex();
        EquivalenceRow& row = rep.rows[k];
        row.t = s.t;
        row.v_X = norm_X(v, s.t);
        row.z_minus_v = norm_X(z - v, s.t);
        row.Z_minus_v = norm_X(Z - v, s.t);
        rep.sup_v_X = std::max(rep.sup_v_X, row.v_X);
    }
    if (rep.sup_v_X > 0.0)
        for (const auto& row : rep.rows) {
            double env = std::pow(bracket(row.t * row.t), -1.0 / 6.0) * rep.sup_v_X * rep.sup_v_X;
            rep.K = std::max({rep.K, row.z_minus_v / env, row.Z_minus_v / env});
        }
    rep.pass = rep.K <= K_limit;
    return rep;
}

//----------------------------------------------------------------------------
// 2D correction integrand
//----------------------------------------------------------------------------
Field correction_profile_2d(const Field& z, const ZeroModePolicy& pol) {
    const Grid& G = z.grid();
    if (G.d != 2) throw std::invalid_argument("correction_profile_2d: needs a d = 2 grid");
    const Symbol1 U = sym::U_pow(1.0);
    const Symbol1 Hinv{"H^-1", [](const Vec3& x) { return cplx(1.0 / symH(x)); }, true, true};
    Field Uz = apply_symbol1(U, z, Repr::physical).as_complex();
    Field first = dealiased_product(Uz, conj(Uz)).to_physical();
    Field Uzbar = apply_symbol1(U, conj(z), Repr::physical).as_complex();
    Field div(G, Repr::spectral, ValueKind::complex);
    for (int j = 0; j < 2; ++j) {
        Field gj = apply_symbol1(sym::derivative(j), z, Repr::physical).as_complex();
        div += apply_symbol1(sym::derivative(j), dealiased_product(Uzbar, gj), Repr::spectral).as_complex();
    }
    Field w = apply_symbol1(Hinv, div, Repr::physical, pol);
    Field out = first.as_complex();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += cplx(0.0, 2.0 * w[i].imag());
    return out;
}

Field trapezoid(const std::vector<double>& t, const std::vector<Field>& f) {
    if (t.empty() || t.size() != f.size()) throw std::invalid_argument("trapezoid: need matching non-empty samples");
    Field acc = f[0].to_physical().as_complex();
    for (auto& v : acc.mutable_data()) v = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) {
        double h = 0.5 * (t[k] - t[k - 1]);
        acc.axpy(h, f[k].to_physical());
        acc.axpy(h, f[k - 1].to_physical());
    }
    return acc;
}

}  // namespace gps
