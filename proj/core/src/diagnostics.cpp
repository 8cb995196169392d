#include "epb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "epb/criteria.hpp"
#include "epb/errors.hpp"
#include "epb/spectral.hpp"

namespace epb {

double energy(const FluidState& state, double K, const Grid& g) {
    require_on_grid(state.rho, g, "energy rho");
    require_on_grid(state.u, g, "energy u");
    require_on_grid(state.phi, g, "energy phi");
    if (!(*std::min_element(state.rho.begin(), state.rho.end()) > 0.0))
        throw ConfigError("energy: density must be positive");

    const Field phix = spectral_derivative(state.phi, g, 1);
    Field integrand(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double rho = state.rho[j];
        const double pressure = (K > 0.0) ? K * (rho * std::log(rho) - rho + 1.0) : 0.0;
        integrand[j] = 0.5 * rho * state.u[j] * state.u[j] + pressure +
                       0.5 * phix[j] * phix[j] +
                       ((state.phi[j] - 1.0) * std::exp(state.phi[j]) + 1.0);
    }
    return quadrature(integrand, g);
}

RiemannFields riemann_fields(const FluidState& state, double K, const Grid& g) {
    if (!(K > 0.0)) throw ConfigError("riemann_fields: isothermal only (K > 0)");
    require_on_grid(state.rho, g, "riemann_fields rho");
    require_on_grid(state.u, g, "riemann_fields u");
    if (!(*std::min_element(state.rho.begin(), state.rho.end()) > 0.0))
        throw ConfigError("riemann_fields: density must be positive");

    const double sqrtK = std::sqrt(K);
    RiemannFields rf;
    rf.r.resize(g.n);
    rf.s.resize(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double lr = sqrtK * std::log(state.rho[j]);
        rf.r[j] = state.u[j] + lr;
        rf.s[j] = state.u[j] - lr;
    }
    rf.W = spectral_derivative(rf.r, g, 1);
    rf.Z = spectral_derivative(rf.s, g, 1);
    rf.f.resize(g.n);
    rf.g_fn.resize(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double inv_sqrt_rho = 1.0 / std::sqrt(state.rho[j]);
        rf.f[j] = -inv_sqrt_rho * rf.W[j];
        rf.g_fn[j] = -inv_sqrt_rho * rf.Z[j];
    }
    return rf;
}

PhiBoundsReport check_phi_bounds(const FluidState& state, double H0) {
    if (!(H0 >= 0.0)) throw ConfigError("check_phi_bounds: H0 must be nonnegative");
    PhiBoundsReport rep;
    rep.lower = v_minus_inverse(H0);
    rep.upper = v_plus_inverse(H0);
    rep.pass = true;
    for (double p : state.phi) {
        if (p < rep.lower - 1e-6 || p > rep.upper + 1e-6) {
            rep.pass = false;
            break;
        }
    }
    return rep;
}

PhiXChainReport check_phi_x_chain(const FluidState& state, const Grid& g) {
    const Field phix = spectral_derivative(state.phi, g, 1);
    Field phix2(g.n), drho2(g.n);
    double max_phix2 = 0.0, max_gap = 0.0;
    for (int j = 0; j < g.n; ++j) {
        phix2[j] = phix[j] * phix[j];
        const double d = state.rho[j] - 1.0;
        drho2[j] = d * d;
        max_phix2 = std::max(max_phix2, phix2[j]);
        max_gap = std::max(max_gap, std::exp(state.phi[j]) - state.phi[j] - 1.0);
    }
    PhiXChainReport rep;
    rep.lhs = 0.5 * max_phix2;
    rep.rhs = 0.5 * quadrature(drho2, g) + 0.5 * quadrature(phix2, g) + max_gap;
    rep.pass = rep.lhs <= rep.rhs + 1e-12;
    return rep;
}

DiagnosticsRecord compute_record(const FluidState& state, double K, const Grid& g, double H0) {
    DiagnosticsRecord rec;
    rec.time = state.time;
    rec.H = energy(state, K, g);

    const Field ux = spectral_derivative(state.u, g, 1);
    const Field rhox = spectral_derivative(state.rho, g, 1);
    const Field phix = spectral_derivative(state.phi, g, 1);

    rec.max_rho = *std::max_element(state.rho.begin(), state.rho.end());
    rec.min_rho = *std::min_element(state.rho.begin(), state.rho.end());
    rec.min_ux = *std::min_element(ux.begin(), ux.end());
    for (int j = 0; j < g.n; ++j) {
        rec.max_abs_u = std::max(rec.max_abs_u, std::abs(state.u[j]));
        rec.max_abs_ux = std::max(rec.max_abs_ux, std::abs(ux[j]));
        rec.max_abs_rhox = std::max(rec.max_abs_rhox, std::abs(rhox[j]));
        rec.max_abs_phi = std::max(rec.max_abs_phi, std::abs(state.phi[j]));
        rec.max_abs_phix = std::max(rec.max_abs_phix, std::abs(phix[j]));
    }

    if (K > 0.0) {
        const RiemannFields rf = riemann_fields(state, K, g);
        for (int j = 0; j < g.n; ++j) {
            rec.R = std::max(rec.R, std::abs(rf.r[j]));
            rec.S = std::max(rec.S, std::abs(rf.s[j]));
        }
        rec.F_plus = *std::max_element(rf.f.begin(), rf.f.end());
        rec.G_plus = *std::max_element(rf.g_fn.begin(), rf.g_fn.end());
    } else {
        // K -> 0 limits: r = s = u, f = g = -rho^{-1/2} u_x.
        rec.R = rec.S = rec.max_abs_u;
        double fmax = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < g.n; ++j)
            fmax = std::max(fmax, -ux[j] / std::sqrt(state.rho[j]));
        rec.F_plus = rec.G_plus = fmax;
    }

    rec.phi_bounds_pass = check_phi_bounds(state, H0).pass;
    const double ephi_slack = 10.0 * kDefaultPoissonTol;
    rec.max_principle_pass = true;
    for (double p : state.phi) {
        const double e = std::exp(p);
        if (e < rec.min_rho - ephi_slack || e > rec.max_rho + ephi_slack) {
            rec.max_principle_pass = false;
            break;
        }
    }
    return rec;
}

BlowupFit fit_blowup_rate(std::span<const std::pair<double, double>> samples, double gate) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [t, mux] : samples)
        if (mux <= gate) pts.emplace_back(t, mux);
    if (pts.size() < 5)
        throw SolverFailure("fit_blowup_rate: need at least 5 samples below gate",
                            static_cast<double>(pts.size()));
    // Non-monotone tail guard: the deepest sample must be the last one.
    double deepest = 0.0;
    for (const auto& [t, mux] : pts) deepest = std::min(deepest, mux);
    if (pts.back().second != deepest)
        throw SolverFailure("fit_blowup_rate: non-monotone tail", pts.back().second);

    // 1/min u_x = (t - T*)/c : ordinary least squares in (t, 1/min u_x).
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const double m = static_cast<double>(pts.size());
    for (const auto& [t, mux] : pts) {
        const double y = 1.0 / mux;
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double slope = (m * sty - st * sy) / (m * stt - st * st);
    const double intercept = (sy - slope * st) / m;
    if (!(slope > 0.0))
        throw SolverFailure("fit_blowup_rate: tail not steepening", slope);
    return {-intercept / slope, 1.0 / slope};
}

}  // namespace epb
