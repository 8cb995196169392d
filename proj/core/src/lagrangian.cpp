#include "epb/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "epb/errors.hpp"
#include "epb/interp.hpp"
#include "epb/spectral.hpp"

namespace epb {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

CharacteristicEnsemble make_ensemble(const Field& rho0, const Field& u0, const Grid& g,
                                     int particle_count) {
    require_on_grid(rho0, g, "make_ensemble rho0");
    require_on_grid(u0, g, "make_ensemble u0");
    if (!is_power_of_two(particle_count) || particle_count < g.n)
        throw ConfigError("make_ensemble: particle count must be a power of two >= grid n");

    const int m = particle_count;
    CharacteristicEnsemble ens;
    ens.alpha.resize(m);
    for (int i = 0; i < m; ++i) ens.alpha[i] = -0.5 * g.length + i * g.length / m;

    const PeriodicCubicSpline rho_s(rho0, g), u_s(u0, g);
    const Field u0x = spectral_derivative(u0, g, 1);
    const PeriodicCubicSpline ux_s(u0x, g);

    ens.x = ens.alpha;
    ens.u.resize(m);
    ens.w.assign(m, 1.0);
    ens.wdot.resize(m);
    ens.rho0.resize(m);
    for (int i = 0; i < m; ++i) {
        ens.u[i] = u_s(ens.alpha[i]);
        ens.wdot[i] = ux_s(ens.alpha[i]);
        ens.rho0[i] = rho_s(ens.alpha[i]);
    }
    return ens;
}

namespace {

// Knots sorted by wrapped position, verifying cyclic monotonicity in alpha.
struct SortedKnots {
    std::vector<double> x;
    std::vector<double> y;
};

SortedKnots sorted_scatter(const CharacteristicEnsemble& ens, const Grid& g,
                           const std::vector<double>& values) {
    const int m = ens.size();
    std::vector<double> wrapped(m);
    for (int i = 0; i < m; ++i) wrapped[i] = g.wrap(ens.x[i]);

    // In alpha order the wrapped positions must increase with exactly one
    // wrap-around descent; more descents mean particles crossed.
    int descent = -1;
    for (int i = 0; i < m; ++i) {
        const int ip = (i + 1) % m;
        if (wrapped[ip] <= wrapped[i]) {
            if (descent >= 0) throw CrossingError("particles crossed (positions not monotone)");
            descent = i;
        }
    }
    const int start = (descent + 1) % m;

    SortedKnots knots;
    knots.x.resize(m);
    knots.y.resize(m);
    for (int i = 0; i < m; ++i) {
        const int src = (start + i) % m;
        knots.x[i] = wrapped[src];
        knots.y[i] = values[src];
    }
    return knots;
}

}  // namespace

Field reconstruct_density(const CharacteristicEnsemble& ens, const Grid& g) {
    const int m = ens.size();
    std::vector<double> rho_particle(m);
    for (int i = 0; i < m; ++i) {
        if (!(ens.w[i] > 0.0)) throw CrossingError("particle Jacobian w is not positive");
        rho_particle[i] = ens.rho0[i] / ens.w[i];
    }
    SortedKnots knots = sorted_scatter(ens, g, rho_particle);
    MonotonePeriodicCubic interp(std::move(knots.x), std::move(knots.y), g.length);
    Field rho(g.n);
    for (int j = 0; j < g.n; ++j) rho[j] = interp(g.nodes[j]);
    return rho;
}

namespace {

struct StageDerivative {
    std::vector<double> dx, du, dw, dv;
};

class StageEvaluator {
public:
    StageEvaluator(const Grid& g, double poisson_tol) : g_(g), tol_(poisson_tol) {}

    StageDerivative operator()(const CharacteristicEnsemble& ens) {
        Field rho = reconstruct_density(ens, g_);
        PoissonSolution ps =
            solve_poisson(rho, g_, tol_, phi_warm_.empty() ? nullptr : &phi_warm_);
        phi_warm_ = ps.phi;
        const Field phix = spectral_derivative(ps.phi, g_, 1);
        const PeriodicCubicSpline phi_s(ps.phi, g_), phix_s(phix, g_);

        const int m = ens.size();
        StageDerivative d;
        d.dx.resize(m);
        d.du.resize(m);
        d.dw.resize(m);
        d.dv.resize(m);
        for (int i = 0; i < m; ++i) {
            const double xw = g_.wrap(ens.x[i]);
            d.dx[i] = ens.u[i];
            d.du[i] = -phix_s(xw);
            d.dw[i] = ens.wdot[i];
            d.dv[i] = ens.rho0[i] - std::exp(phi_s(xw)) * ens.w[i];
        }
        return d;
    }

private:
    const Grid& g_;
    double tol_;
    Field phi_warm_;
};

CharacteristicEnsemble shifted(const CharacteristicEnsemble& base, const StageDerivative& d,
                               double h) {
    CharacteristicEnsemble out = base;
    const int m = base.size();
    for (int i = 0; i < m; ++i) {
        out.x[i] += h * d.dx[i];
        out.u[i] += h * d.du[i];
        out.w[i] += h * d.dw[i];
        out.wdot[i] += h * d.dv[i];
    }
    return out;
}

}  // namespace

CharacteristicEnsemble step_lagrangian(const CharacteristicEnsemble& ens, double dt,
                                       const Grid& g, double poisson_tol) {
    if (!(dt > 0.0)) throw ConfigError("step_lagrangian: dt must be positive");
    StageEvaluator eval(g, poisson_tol);

    const StageDerivative k1 = eval(ens);
    const StageDerivative k2 = eval(shifted(ens, k1, 0.5 * dt));
    const StageDerivative k3 = eval(shifted(ens, k2, 0.5 * dt));
    const StageDerivative k4 = eval(shifted(ens, k3, dt));

    CharacteristicEnsemble out = ens;
    const int m = ens.size();
    const double h6 = dt / 6.0;
    for (int i = 0; i < m; ++i) {
        out.x[i] += h6 * (k1.dx[i] + 2.0 * k2.dx[i] + 2.0 * k3.dx[i] + k4.dx[i]);
        out.u[i] += h6 * (k1.du[i] + 2.0 * k2.du[i] + 2.0 * k3.du[i] + k4.du[i]);
        out.w[i] += h6 * (k1.dw[i] + 2.0 * k2.dw[i] + 2.0 * k3.dw[i] + k4.dw[i]);
        out.wdot[i] += h6 * (k1.dv[i] + 2.0 * k2.dv[i] + 2.0 * k3.dv[i] + k4.dv[i]);
    }
    out.time = ens.time + dt;
    return out;
}

std::optional<WVanishing> detect_w_vanishing(std::span<const MinWSample> history) {
    if (history.size() < 5) return std::nullopt;
    const size_t tail = 5;
    const size_t first = history.size() - tail;
    for (size_t i = first; i < history.size(); ++i) {
        if (!(history[i].min_w > 0.0)) return std::nullopt;
        if (i > first && !(history[i].min_w < history[i - 1].min_w)) return std::nullopt;
    }

    WVanishing result;
    const bool tangency = std::abs(history.back().wdot) < 1e-3;
    result.sign = tangency ? WVanishing::Sign::Zero : WVanishing::Sign::Negative;

    // Least squares y = a t + b on the tail; y = w (negative branch) or sqrt(w).
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (size_t i = first; i < history.size(); ++i) {
        const double t = history[i].t;
        const double y = tangency ? std::sqrt(history[i].min_w) : history[i].min_w;
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double n = static_cast<double>(tail);
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    if (!(slope < 0.0)) return std::nullopt;
    const double intercept = (sy - slope * st) / n;
    result.T_star = -intercept / slope;
    return result;
}

RateCheckReport check_blowup_rate(std::span<const MinWSample> history, double T_star,
                                  WVanishing::Sign sign, double dt) {
    RateCheckReport rep;
    if (sign == WVanishing::Sign::Negative) {
        rep.bracket_lo = 0.5;
        rep.bracket_hi = 2.0;
    } else {
        rep.bracket_lo = 1.0;
        rep.bracket_hi = 8.0;
    }
    for (const MinWSample& s : history) {
        const double gap = T_star - s.t;
        if (gap < 2.0 * dt || gap > 0.1) continue;
        if (!(s.min_w > 0.0)) continue;
        rep.products.push_back((s.t - T_star) * (s.wdot / s.min_w));
        ++rep.samples_used;
    }
    if (rep.samples_used == 0)
        throw SolverFailure("check_blowup_rate: no samples in the rate window", 0.0);
    rep.all_inside = std::all_of(rep.products.begin(), rep.products.end(), [&](double p) {
        return p > rep.bracket_lo && p < rep.bracket_hi;
    });
    return rep;
}

LagrangianRunResult run_characteristics(const Field& rho0, const Field& u0, const Grid& g,
                                        const LagrangianOptions& options) {
    LagrangianRunResult result;
    CharacteristicEnsemble ens = make_ensemble(rho0, u0, g, options.particle_count);

    const int n_steps = static_cast<int>(std::llround(options.t_end / options.dt));
    for (int i = 0; i < n_steps; ++i) {
        try {
            ens = step_lagrangian(ens, options.dt, g, options.poisson_tol);
        } catch (const CrossingError&) {
            result.crossed = true;
            break;
        }
        const auto it = std::min_element(ens.w.begin(), ens.w.end());
        const size_t idx = it - ens.w.begin();
        result.history.push_back({ens.time, *it, ens.wdot[idx]});
        if (*it < options.w_stop) break;
    }
    result.vanishing = detect_w_vanishing(result.history);
    result.final_ensemble = std::move(ens);
    return result;
}

}  // namespace epb
