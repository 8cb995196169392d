#include "epb/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "epb/diagnostics.hpp"
#include "epb/errors.hpp"
#include "epb/poisson.hpp"
#include "epb/spectral.hpp"
#include "epb/state.hpp"

namespace epb {

double potential_well(double tau) { return (tau - 1.0) * std::exp(tau) + 1.0; }

namespace {

double sqrt2U(double tau) { return std::sqrt(2.0 * potential_well(tau)); }

// Adaptive Simpson with interval bisection.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

constexpr double kVQuadTol = 1e-10;
// Below this point sqrt(2U) is sqrt(2) to ~1e-12; integrate the asymptote.
constexpr double kAsymptote = -30.0;

double max_abs(const Field& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

double v_minus(double z) {
    if (!(z <= 0.0)) throw ConfigError("v_minus: argument must be <= 0");
    if (z < kAsymptote)
        return v_minus(kAsymptote) + std::sqrt(2.0) * (kAsymptote - z);
    return integrate(sqrt2U, z, 0.0, kVQuadTol);
}

double v_plus(double z) {
    if (!(z >= 0.0)) throw ConfigError("v_plus: argument must be >= 0");
    return integrate(sqrt2U, 0.0, z, kVQuadTol);
}

namespace {

// Shared bracketing + bisection/secant for both inverses.
double invert_monotone(const std::function<double(double)>& v, double h, double direction) {
    if (!(h >= 0.0)) throw ConfigError("V inverse: argument must be >= 0");
    if (h == 0.0) return 0.0;
    double far = direction;
    while (v(far) < h) far *= 2.0;
    double lo = 0.0, hi = far;  // |lo| < |hi|, v(lo) < h <= v(hi)
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double vm = v(mid);
        if (std::abs(vm - h) <= 1e-10) return mid;
        (vm < h ? lo : hi) = mid;
        if (std::abs(hi - lo) < 1e-15 * (1.0 + std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double v_minus_inverse(double h) {
    return invert_monotone([](double z) { return v_minus(z); }, h, -1.0);
}

double v_plus_inverse(double h) {
    return invert_monotone([](double z) { return v_plus(z); }, h, 1.0);
}

PressurelessCriterionReport check_pressureless(const Field& rho0, const Field& u0, const Grid& g) {
    require_on_grid(rho0, g, "check_pressureless rho0");
    require_on_grid(u0, g, "check_pressureless u0");

    PoissonSolution ps = solve_poisson(rho0, g);
    FluidState state{0.0, rho0, u0, ps.phi};
    PressurelessCriterionReport rep;
    rep.H0 = energy(state, 0.0, g);
    rep.v_minus_inv_H0 = v_minus_inverse(rep.H0);
    rep.lhs = std::exp(rep.v_minus_inv_H0);

    const auto it = std::min_element(rho0.begin(), rho0.end());
    rep.witness_alpha = g.nodes[it - rho0.begin()];
    rep.rhs = 2.0 * (*it);
    rep.margin = rep.lhs - rep.rhs;
    rep.holds = rep.margin > 0.0;
    return rep;
}

LiuCriterionReport check_liu(const Field& rho0, const Field& u0, const Grid& g) {
    require_on_grid(rho0, g, "check_liu rho0");
    require_on_grid(u0, g, "check_liu u0");
    if (!(*std::min_element(rho0.begin(), rho0.end()) > 0.0))
        throw ConfigError("check_liu: density must be positive");

    const Field u0x = spectral_derivative(u0, g, 1);
    LiuCriterionReport rep;
    rep.min_value = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.n; ++j) {
        const double val = u0x[j] + std::sqrt(2.0 * rho0[j]);
        if (val < rep.min_value) {
            rep.min_value = val;
            rep.witness_x = g.nodes[j];
        }
    }
    rep.holds = rep.min_value <= 0.0;
    return rep;
}

EnergyBoundReport energy_upper_bound(const Field& rho0, const Field& u0, const Grid& g, double K) {
    require_on_grid(rho0, g, "energy_upper_bound rho0");
    require_on_grid(u0, g, "energy_upper_bound u0");
    const double rmin = *std::min_element(rho0.begin(), rho0.end());
    const double rmax = *std::max_element(rho0.begin(), rho0.end());
    if (!(rmin > 0.0)) throw ConfigError("energy_upper_bound: density must be positive");

    EnergyBoundReport rep;
    rep.kappa0 = (rmin < 1.0) ? (1.0 - rmin) / (-std::log(rmin)) : 1.0;

    Field u2(g.n), drho2(g.n);
    for (int j = 0; j < g.n; ++j) {
        u2[j] = u0[j] * u0[j];
        const double d = rho0[j] - 1.0;
        drho2[j] = d * d;
    }
    rep.bound = 0.5 * rmax * quadrature(u2, g) + quadrature(drho2, g) / rep.kappa0;

    PoissonSolution ps = solve_poisson(rho0, g);
    FluidState state{0.0, rho0, u0, ps.phi};
    rep.H0 = energy(state, K, g);
    rep.pass = rep.H0 <= rep.bound + 1e-12;
    return rep;
}

IsothermalCriterionReport isothermal_report(const Field& rho0, const Field& u0, const Grid& g,
                                            double K, double T0, double eps, double delta0) {
    if (!(K > 0.0)) throw ConfigError("isothermal_report: K must be positive");
    if (!(eps > 0.0 && eps < 0.25)) throw ConfigError("isothermal_report: eps must be in (0, 1/4)");
    if (!(delta0 > 0.0 && delta0 < eps))
        throw ConfigError("isothermal_report: delta0 must be in (0, eps)");
    if (!(T0 > 0.0)) throw ConfigError("isothermal_report: T0 must be positive");
    require_on_grid(rho0, g, "isothermal_report rho0");
    require_on_grid(u0, g, "isothermal_report u0");

    IsothermalCriterionReport rep;
    rep.T0 = T0;
    rep.eps = eps;
    rep.delta0 = delta0;
    rep.alpha = 0.5 * std::sqrt(1.0 - eps);
    rep.beta = 0.5 * std::sqrt(1.0 + eps);
    rep.C2 = std::max(std::exp(v_plus_inverse(delta0)) - 1.0,
                      1.0 - std::exp(v_minus_inverse(delta0)));
    rep.gamma = (rep.C2 + 2.0 * eps) / (2.0 * rep.beta);
    rep.M_required = rep.gamma * T0 + 1.0 / (rep.alpha * T0);

    PoissonSolution ps = solve_poisson(rho0, g);
    FluidState state{0.0, rho0, u0, ps.phi};
    const double H0 = energy(state, K, g);
    Field drho(g.n);
    for (int j = 0; j < g.n; ++j) drho[j] = rho0[j] - 1.0;
    rep.delta_eff = std::max({max_abs(drho), max_abs(u0), H0});

    const RiemannFields rf = riemann_fields(state, K, g);
    double steep = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.n; ++j) steep = std::max({steep, rf.f[j], rf.g_fn[j]});
    rep.steepness = steep;
    rep.satisfied = rep.steepness >= rep.M_required && rep.delta_eff <= rep.delta0;

    const double root = std::sqrt(rep.gamma / rep.beta);
    const double tm_f = 1.0 / (rep.beta * (max_abs(rf.f) + root));
    const double tm_g = 1.0 / (rep.beta * (max_abs(rf.g_fn) + root));
    rep.Tm_lower = std::min(tm_f, tm_g);
    return rep;
}

}  // namespace epb
