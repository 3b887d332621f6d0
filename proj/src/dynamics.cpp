#include "gpscat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gpscat/fft.hpp"
#include "gpscat/multilinear.hpp"
#include "gpscat/parallel.hpp"
#include "gpscat/spectral.hpp"
#include "gpscat/symbols.hpp"

namespace gps {

namespace {

constexpr std::size_t kBlock = 4096;

// Storage index of -k for every storage index k (Nyquist maps to itself).
std::vector<std::size_t> negated_index(const Grid& G) {
    std::vector<std::size_t> out(G.size());
    for (std::size_t i = 0; i < G.size(); ++i) {
        Index3 m = G.unflatten(i);
        for (int a = 0; a < G.d; ++a) m[a] = (G.n - m[a]) % G.n;
        out[i] = G.flatten(m);
    }
    return out;
}

std::vector<char> two_thirds_mask(const Grid& G) {
    std::vector<char> keep(G.size(), 1);
    for (std::size_t i = 0; i < G.size(); ++i) {
        Index3 k = G.wave_index(i);
        for (int a = 0; a < G.d; ++a)
            if (3 * std::abs(k[a]) > G.n) keep[i] = 0;
    }
    return keep;
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Per-mode entries of the 2x2 propagator
//   u1 <- c u1 + s1 u2,  u2 <- s2 u1 + c u2.
struct LinearCoeffs {
    std::vector<double> c, s1, s2;
};

LinearCoeffs linear_coeffs(const Grid& G, double t) {
    LinearCoeffs L;
    const std::size_t N = G.size();
    L.c.resize(N);
    L.s1.resize(N);
    L.s2.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        double r2 = norm2(G.xi(i));
        double r = std::sqrt(r2), b2 = 2.0 + r2;
        double H = r * std::sqrt(b2);
        L.c[i] = std::cos(t * H);
        L.s1[i] = r / std::sqrt(b2) * std::sin(t * H);
        L.s2[i] = -t * b2 * sinc(t * H);
    }
    return L;
}

// W holds the spectrum of w = u1 + i u2. Both components are recovered from
// the conjugate pair (k, -k), propagated, and recombined.
void apply_linear_packed(std::vector<cplx>& W, const LinearCoeffs& L, const std::vector<std::size_t>& neg) {
    std::vector<cplx> out(W.size());
    parallel_for(W.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            cplx wk = W[i], wm = std::conj(W[neg[i]]);
            cplx a = 0.5 * (wk + wm);
            cplx c = cplx(0.0, -0.5) * (wk - wm);
            cplx a2 = L.c[i] * a + L.s1[i] * c;
            cplx c2 = L.s2[i] * a + L.c[i] * c;
            out[i] = a2 + cplx(0.0, 1.0) * c2;
        }
    }, kBlock);
    W.swap(out);
}

std::vector<cplx> pack(const StateU& s) {
    std::vector<cplx> W(s.u1.size());
    const auto& a = s.u1.data();
    const auto& b = s.u2.data();
    for (std::size_t i = 0; i < W.size(); ++i) W[i] = a[i] + cplx(0.0, 1.0) * b[i];
    return W;
}

StateU unpack(const Grid& G, const std::vector<cplx>& W, const std::vector<std::size_t>& neg, double t) {
    std::vector<cplx> a(W.size()), b(W.size());
    for (std::size_t i = 0; i < W.size(); ++i) {
        cplx wm = std::conj(W[neg[i]]);
        a[i] = 0.5 * (W[i] + wm);
        b[i] = cplx(0.0, -0.5) * (W[i] - wm);
    }
    StateU s;
    s.t = t;
    s.u1 = Field(G, Repr::spectral, ValueKind::real, std::move(a));
    s.u2 = Field(G, Repr::spectral, ValueKind::real, std::move(b));
    return s;
}

inline cplx gp_rhs(cplx w) {
    double u1 = w.real(), u2 = w.imag();
    double q = u1 * u1 + u2 * u2;
    return {(2.0 * u1 + q) * u2, -3.0 * u1 * u1 - u2 * u2 - q * u1};
}

double max_modulus(const std::vector<cplx>& w) {
    double m = 0.0;
    for (const cplx& v : w) m = std::max(m, std::norm(v));
    return std::sqrt(m);
}

void guard(const std::vector<cplx>& w, double bound, double t) {
    double m = max_modulus(w);
    if (!(m <= bound))
        throw BlowUpError("max |u| = " + std::to_string(m) + " exceeds " + std::to_string(bound) +
                          " at t = " + std::to_string(t));
}

// Physical w advanced by pointwise RK4.
void rk4_pointwise(std::vector<cplx>& w, double dt) {
    parallel_for(w.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            cplx y = w[i];
            cplx k1 = gp_rhs(y);
            cplx k2 = gp_rhs(y + 0.5 * dt * k1);
            cplx k3 = gp_rhs(y + 0.5 * dt * k2);
            cplx k4 = gp_rhs(y + dt * k3);
            w[i] = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }, kBlock);
}

void apply_mask(std::vector<cplx>& W, const std::vector<char>& keep) {
    for (std::size_t i = 0; i < W.size(); ++i)
        if (!keep[i]) W[i] = 0.0;
}

// Spectrum of the pointwise nonlinearity at spectral W.
std::vector<cplx> nonlinear_rhs(const Grid& G, const std::vector<cplx>& W, const std::vector<char>* keep,
                                double bound, double t) {
    std::vector<cplx> w = W;
    fft::inverse(G, w);
    guard(w, bound, t);
    parallel_for(w.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) w[i] = gp_rhs(w[i]);
    }, kBlock);
    fft::forward(G, w);
    if (keep) apply_mask(w, *keep);
    return w;
}

void axpy(std::vector<cplx>& y, double a, const std::vector<cplx>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

std::vector<cplx> propagated(std::vector<cplx> W, const LinearCoeffs& L, const std::vector<std::size_t>& neg) {
    apply_linear_packed(W, L, neg);
    return W;
}

}  // namespace

//----------------------------------------------------------------------------
// States
//----------------------------------------------------------------------------
StateU make_state(const Field& u1, const Field& u2, double t) {
    if (u1.grid() != u2.grid()) throw GridError("make_state: grid mismatch");
    StateU s;
    s.t = t;
    s.u1 = (u1.is_real() ? u1 : real_part(u1)).to_spectral();
    s.u2 = (u2.is_real() ? u2 : real_part(u2)).to_spectral();
    return s;
}

StateU zero_state(const Grid& g) {
    Field z(g, Repr::spectral, ValueKind::real);
    return make_state(z, z);
}

Field perturbation(const StateU& s) { return make_complex(s.u1, s.u2); }

const char* to_string(Scheme s) { return s == Scheme::strang ? "strang" : "lawson-rk4"; }

Scheme scheme_from_string(const std::string& s) {
    if (s == "strang" || s == "strang-split") return Scheme::strang;
    if (s == "lawson-rk4" || s == "rk4-interaction-picture") return Scheme::lawson_rk4;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

void EvolutionConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(T >= 0.0)) throw std::invalid_argument("T must be non-negative");
    if (cadence < 0) throw std::invalid_argument("cadence must be non-negative");
    double r = T / dt;
    if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r))
        throw std::invalid_argument("T must be an integer multiple of dt");
}

long EvolutionConfig::steps() const { return std::lround(T / dt); }

double EnergyLedger::max_relative_drift() const {
    if (rows.empty()) return 0.0;
    double e0 = rows.front().E1, worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, std::abs(r.E1 - e0));
    return e0 > 0.0 ? worst / e0 : worst;
}

//----------------------------------------------------------------------------
// Energy
//----------------------------------------------------------------------------
EnergyParts energy_parts(const StateU& s) {
    const Grid& G = s.grid();
    const Grid P = G.resampled(2 * G.n);
    Field a = interpolate_real(s.u1, P), b = interpolate_real(s.u2, P);
    const std::size_t N = P.size();
    const double inv_vol = 1.0 / P.volume();
    const double hd = std::pow(P.h(), P.d);

    std::vector<double> grad(N);
    std::vector<cplx> w(N);
    for (std::size_t i = 0; i < N; ++i) {
        grad[i] = norm2(P.xi(i)) * (std::norm(a[i]) + std::norm(b[i]));
        w[i] = a[i] + cplx(0.0, 1.0) * b[i];
    }
    fft::inverse(P, w);
    std::vector<double> pot(N), pot_psi(N);
    std::vector<cplx> m(N);
    for (std::size_t i = 0; i < N; ++i) {
        double u1 = w[i].real(), u2 = w[i].imag();
        double q = u1 * u1 + u2 * u2;
        pot[i] = 0.5 * (2.0 * u1 + q) * (2.0 * u1 + q);
        double rho = std::norm(cplx(1.0 + u1, u2)) - 1.0;
        pot_psi[i] = 0.5 * rho * rho;
        m[i] = q;
    }
    double g = pairwise_sum(grad.data(), N) * inv_vol;
    EnergyParts e;
    e.E1 = g + pairwise_sum(pot.data(), N) * hd;
    e.E1_psi = g + pairwise_sum(pot_psi.data(), N) * hd;

    fft::forward(P, m);
    std::vector<double> h1z(N), uq(N);
    for (std::size_t i = 0; i < N; ++i) {
        double r2 = norm2(P.xi(i)), b2 = 2.0 + r2;
        cplx z = a[i] + m[i] / b2 + cplx(0.0, 1.0) * std::sqrt(r2 / b2) * b[i];
        h1z[i] = b2 * std::norm(z);
        uq[i] = r2 / b2 * std::norm(m[i]);
    }
    e.H1z = pairwise_sum(h1z.data(), N) * inv_vol;
    e.Uu2sq = pairwise_sum(uq.data(), N) * inv_vol;
    return e;
}

double energy_E1(const StateU& s) { return energy_parts(s).E1; }

double wraparound_horizon(const Grid& g) {
    double rmax = g.dk() * (g.n / 2) * std::sqrt(double(g.d));
    return g.L / (2.0 * group_speed(rmax));
}

//----------------------------------------------------------------------------
// Steps
//----------------------------------------------------------------------------
StateU linear_step(const StateU& s, double dt) {
    const Grid& G = s.grid();
    auto neg = negated_index(G);
    std::vector<cplx> W = pack(s);
    apply_linear_packed(W, linear_coeffs(G, dt), neg);
    return unpack(G, W, neg, s.t + dt);
}

void two_thirds_filter(Field& f) {
    if (f.repr() != Repr::spectral) throw std::invalid_argument("two_thirds_filter: spectral field expected");
    apply_mask(f.mutable_data(), two_thirds_mask(f.grid()));
}

StateU nonlinear_step(const StateU& s, double dt, bool dealias) {
    const Grid& G = s.grid();
    auto neg = negated_index(G);
    std::vector<cplx> W = pack(s);
    fft::inverse(G, W);
    rk4_pointwise(W, dt);
    fft::forward(G, W);
    if (dealias) apply_mask(W, two_thirds_mask(G));
    return unpack(G, W, neg, s.t + dt);
}

//----------------------------------------------------------------------------
// evolve
//----------------------------------------------------------------------------
EvolveResult evolve(const StateU& s0, const EvolutionConfig& cfg, const StateObserver& observer, bool record_energy) {
    cfg.validate();
    const Grid& G = s0.grid();
    if (cfg.enforce_horizon) {
        double hz = cfg.horizon > 0.0 ? cfg.horizon : wraparound_horizon(G);
        if (cfg.T > hz * (1.0 + 1e-12))
            throw HorizonError("T = " + std::to_string(cfg.T) + " exceeds the horizon " + std::to_string(hz));
    }
    const long N = cfg.steps();
    const double dt = cfg.dt;
    auto neg = negated_index(G);
    auto keep = two_thirds_mask(G);
    const std::vector<char>* mask = cfg.dealias ? &keep : nullptr;
    LinearCoeffs half = linear_coeffs(G, 0.5 * dt), full = linear_coeffs(G, dt);

    EvolveResult res;
    auto emit = [&](const StateU& s) {
        if (record_energy) {
            EnergyParts e = energy_parts(s);
            res.ledger.rows.push_back({s.t, e.E1, e.H1z, e.Uu2sq});
        }
        if (observer) observer(s);
    };
    auto is_sample = [&](long step) { return step == N || (cfg.cadence > 0 && step % cfg.cadence == 0); };

    std::vector<cplx> W = pack(s0);
    emit(s0);
    auto time_at = [&](long step) { return s0.t + double(step) * dt; };

    if (!cfg.nonlinear) {
        for (long k = 1; k <= N; ++k) {
            apply_linear_packed(W, full, neg);
            if (is_sample(k)) emit(unpack(G, W, neg, time_at(k)));
        }
    } else if (cfg.scheme == Scheme::strang) {
        bool synced = true;
        for (long k = 1; k <= N; ++k) {
            if (synced) apply_linear_packed(W, half, neg);
            fft::inverse(G, W);
            guard(W, cfg.blowup_bound, time_at(k - 1));
            rk4_pointwise(W, dt);
            fft::forward(G, W);
            if (mask) apply_mask(W, *mask);
            if (is_sample(k)) {
                apply_linear_packed(W, half, neg);
                synced = true;
                emit(unpack(G, W, neg, time_at(k)));
            } else {
                apply_linear_packed(W, full, neg);
                synced = false;
            }
        }
    } else {
        // Lawson RK4: RK4 for a = E(-t) w with E the exact linear flow.
        for (long k = 1; k <= N; ++k) {
            double t = time_at(k - 1);
            auto k1 = nonlinear_rhs(G, W, mask, cfg.blowup_bound, t);
            auto y = W;
            axpy(y, 0.5 * dt, k1);
            apply_linear_packed(y, half, neg);
            auto k2 = nonlinear_rhs(G, y, mask, cfg.blowup_bound, t);
            auto Wh = propagated(W, half, neg);
            y = Wh;
            axpy(y, 0.5 * dt, k2);
            auto k3 = nonlinear_rhs(G, y, mask, cfg.blowup_bound, t);
            auto Wf = propagated(W, full, neg);
            auto k3h = propagated(k3, half, neg);
            y = Wf;
            axpy(y, dt, k3h);
            auto k4 = nonlinear_rhs(G, y, mask, cfg.blowup_bound, t);
            // W <- E(dt) W + dt/6 [E(dt) k1 + 2 E(dt/2)(k2 + k3) + k4]
            axpy(k2, 1.0, k3);
            auto k23 = propagated(k2, half, neg);
            auto k1f = propagated(k1, full, neg);
            W = Wf;
            axpy(W, dt / 6.0, k1f);
            axpy(W, dt / 3.0, k23);
            axpy(W, dt / 6.0, k4);
            if (is_sample(k)) emit(unpack(G, W, neg, time_at(k)));
        }
    }
    res.final = unpack(G, W, neg, time_at(N));
    return res;
}

//----------------------------------------------------------------------------
// Initial data
//----------------------------------------------------------------------------
StateU gaussian_data(const Grid& g, const GaussianData& p) {
    if (!(p.width > 0.0)) throw std::invalid_argument("gaussian_data: width must be positive");
    auto env = [&](const Vec3& x) {
        Vec3 y = x - p.center;
        return p.eps * std::exp(-norm2(y) / (p.width * p.width));
    };
    double c = std::cos(p.phase), s = std::sin(p.phase);
    Field u1 = Field::from_real_function(g, [&](const Vec3& x) { return c * env(x); });
    Field u2 = Field::from_real_function(g, [&](const Vec3& x) { return s * env(x); });
    return make_state(u1, u2);
}

Field random_smooth_field(const Grid& g, double kscale, std::uint64_t seed, double amp, bool mean_free) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    const std::size_t N = g.size();
    std::vector<cplx> z(N);
    for (std::size_t i = 0; i < N; ++i) {
        double re = nd(rng), im = nd(rng);
        z[i] = cplx(re, im) * std::exp(-norm2(g.xi(i)) / (2.0 * kscale * kscale));
    }
    auto neg = negated_index(g);
    std::vector<cplx> f(N);
    for (std::size_t i = 0; i < N; ++i) f[i] = 0.5 * (z[i] + std::conj(z[neg[i]]));
    Field F(g, Repr::spectral, ValueKind::real, std::move(f));
    drop_nyquist(F);
    if (mean_free) F[0] = 0.0;
    double m = max_abs(F.to_physical());
    if (m > 0.0) F *= amp / m;
    return F;
}

double weighted_smallness(const StateU& s) {
    const Grid& G = s.grid();
    Field a = s.u1.to_physical();
    std::vector<double> acc(G.size());
    for (std::size_t i = 0; i < G.size(); ++i) acc[i] = std::norm(a[i]);
    for (int j = 0; j < G.d; ++j) {
        Field d1 = apply_symbol1(sym::derivative(j), s.u1, Repr::physical);
        Field d2 = apply_symbol1(sym::derivative(j), s.u2, Repr::physical);
        for (std::size_t i = 0; i < G.size(); ++i) acc[i] += std::norm(d1[i]) + std::norm(d2[i]);
    }
    for (std::size_t i = 0; i < G.size(); ++i) acc[i] *= 2.0 + norm2(G.x(i));
    return pairwise_sum(acc.data(), acc.size()) * std::pow(G.h(), G.d);
}

//----------------------------------------------------------------------------
// Boussinesq
//----------------------------------------------------------------------------
Field boussinesq_rhs(const Field& v) {
    Field re = real_part(v);
    Field sq = dealiased_product(re, re);
    Field out = apply_symbol1(sym::U_pow(1.0), sq).as_complex();
    out *= cplx(0.0, -1.0);
    return out;
}

Field evolve_boussinesq(const Field& v0, const EvolutionConfig& cfg, const FieldObserver& observer) {
    cfg.validate();
    const Grid& G = v0.grid();
    if (cfg.enforce_horizon) {
        double hz = cfg.horizon > 0.0 ? cfg.horizon : wraparound_horizon(G);
        if (cfg.T > hz * (1.0 + 1e-12))
            throw HorizonError("T = " + std::to_string(cfg.T) + " exceeds the horizon " + std::to_string(hz));
    }
    const long N = cfg.steps();
    const double dt = cfg.dt;
    Symbol1 Eh = sym::propagator(-0.5 * dt), Ef = sym::propagator(-dt);  // e^{+i tau H}
    Field v = v0.as_complex().to_spectral();
    if (observer) observer(0.0, v);
    for (long k = 1; k <= N; ++k) {
        double t = double(k - 1) * dt;
        if (max_abs(v.to_physical()) > cfg.blowup_bound)
            throw BlowUpError("boussinesq: bound exceeded at t = " + std::to_string(t));
        if (!cfg.nonlinear) {
            v = apply_symbol1(Ef, v);
        } else {
            Field k1 = boussinesq_rhs(v);
            Field y = v;
            y.axpy(0.5 * dt, k1);
            Field vh = apply_symbol1(Eh, y);
            Field k2 = boussinesq_rhs(vh);
            Field next = apply_symbol1(Ef, v);
            next.axpy(dt, apply_symbol1(Eh, k2));
            v = next;
        }
        if (observer && (k == N || (cfg.cadence > 0 && k % cfg.cadence == 0))) observer(double(k) * dt, v);
    }
    return v;
}

//----------------------------------------------------------------------------
// Plane waves
//----------------------------------------------------------------------------
Grid plane_wave_grid(const Grid& ug, const PlaneWave& pw) {
    if (!(pw.a > 0.0)) throw std::invalid_argument("plane wave amplitude must be positive");
    Grid P{ug.d, ug.n, ug.L / pw.a};
    for (int j = 0; j < 3; ++j) {
        if (j >= P.d) {
            if (pw.b[j] != 0.0) throw GridError("plane wave drift has components beyond the grid dimension");
            continue;
        }
        double m = pw.b[j] / P.dk();
        double r = std::round(m);
        if (std::abs(m - r) > 1e-9 * std::max(1.0, std::abs(m)) || !P.in_lattice(int(r)))
            throw GridError("plane wave drift b is off the frequency lattice");
    }
    return P;
}

namespace {

// u(a^2 t, a(x - 2bt)) sampled on the plane-wave grid, t = s.t / a^2.
std::vector<cplx> comoving_perturbation(const StateU& s, const PlaneWave& pw) {
    const Grid& G = s.grid();
    const double t = s.t / (pw.a * pw.a);
    const Vec3 shift = (2.0 * pw.a * t) * pw.b;
    std::vector<cplx> W = pack(s);
    for (std::size_t i = 0; i < W.size(); ++i) W[i] *= std::exp(cplx(0.0, -dot(G.xi(i), shift)));
    fft::inverse(G, W);
    return W;
}

std::vector<cplx> carrier(const Grid& P, const PlaneWave& pw, double t) {
    double omega = pw.a * pw.a + norm2(pw.b);
    std::vector<cplx> c(P.size());
    for (std::size_t i = 0; i < P.size(); ++i)
        c[i] = pw.a * std::exp(cplx(0.0, -omega * t + dot(pw.b, P.x(i)) + pw.c));
    return c;
}

}  // namespace

Field plane_wave_field(const StateU& s, const PlaneWave& pw) {
    Grid P = plane_wave_grid(s.grid(), pw);
    auto w = comoving_perturbation(s, pw);
    auto c = carrier(P, pw, s.t / (pw.a * pw.a));
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = c[i] * (1.0 + w[i]);
    return Field(P, Repr::physical, ValueKind::complex, std::move(w));
}

NlsResidual plane_wave_residual(const StateU& prev, const StateU& mid, const StateU& next, const PlaneWave& pw) {
    double ds1 = mid.t - prev.t, ds2 = next.t - mid.t;
    if (!(ds1 > 0.0) || std::abs(ds1 - ds2) > 1e-9 * ds1)
        throw std::invalid_argument("plane_wave_residual: states must be equally spaced in time");
    if (prev.grid() != mid.grid() || mid.grid() != next.grid())
        throw GridError("plane_wave_residual: grid mismatch");
    const double a2 = pw.a * pw.a;
    const double delta = 0.5 * (ds1 + ds2) / a2;
    const double t = mid.t / a2;
    const double omega = a2 + norm2(pw.b);
    Grid P = plane_wave_grid(mid.grid(), pw);

    auto wp = comoving_perturbation(prev, pw);
    auto wm = comoving_perturbation(mid, pw);
    auto wn = comoving_perturbation(next, pw);
    auto c = carrier(P, pw, t);

    Field phi(P, Repr::physical, ValueKind::complex);
    for (std::size_t i = 0; i < P.size(); ++i) phi[i] = c[i] * (1.0 + wm[i]);
    Field lap = apply_symbol1(sym::laplacian(), phi, Repr::physical);

    std::vector<double> sq(P.size());
    NlsResidual r;
    r.t = t;
    for (std::size_t i = 0; i < P.size(); ++i) {
        cplx wt = (wn[i] - wp[i]) / (2.0 * delta);
        cplx i_phi_t = c[i] * (omega * (1.0 + wm[i]) + cplx(0.0, 1.0) * wt);
        cplx res = i_phi_t + lap[i] - std::norm(phi[i]) * phi[i];
        r.linf = std::max(r.linf, std::abs(res));
        sq[i] = std::norm(res);
    }
    r.l2 = std::sqrt(pairwise_sum(sq.data(), sq.size()) * std::pow(P.h(), P.d));
    r.relative = r.linf / (pw.a * omega);
    return r;
}

}  // namespace gps
