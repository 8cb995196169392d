#pragma once

#include <span>
#include <utility>

#include "epb/grid.hpp"
#include "epb/state.hpp"

namespace epb {

/// Conserved energy: int 1/2 rho u^2 + K(rho ln rho - rho + 1)
///                       + 1/2 |phi_x|^2 + (phi - 1) e^phi + 1 dx.
double energy(const FluidState& state, double K, const Grid& g);

/// Riemann functions and their gradient functionals (isothermal only).
///   r = u + sqrt(K) ln rho,  s = u - sqrt(K) ln rho,
///   W = r_x, Z = s_x, f = -rho^{-1/2} W, g = -rho^{-1/2} Z.
struct RiemannFields {
    Field r, s, W, Z, f, g_fn;
};
RiemannFields riemann_fields(const FluidState& state, double K, const Grid& g);

struct PhiBoundsReport {
    double lower = 0.0;  // V_-^{-1}(H0)
    double upper = 0.0;  // V_+^{-1}(H0)
    bool pass = false;   // bounds hold pointwise within 1e-6 slack
};
PhiBoundsReport check_phi_bounds(const FluidState& state, double H0);

/// Pointwise potential-gradient chain bound, fully computable per state:
///   max phi_x^2 / 2 <= 1/2 int |rho-1|^2 + 1/2 int |phi_x|^2 + max(e^phi - phi - 1).
struct PhiXChainReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};
PhiXChainReport check_phi_x_chain(const FluidState& state, const Grid& g);

/// Per-step scalar diagnostics; serializes to one CSV row.
/// For K = 0 the Riemann columns carry the K -> 0 limits (r = s = u,
/// f = g = -rho^{-1/2} u_x); riemann_fields itself rejects K = 0.
struct DiagnosticsRecord {
    double time = 0.0;
    double H = 0.0;
    double max_rho = 0.0, min_rho = 0.0;
    double max_abs_u = 0.0, max_abs_ux = 0.0, max_abs_rhox = 0.0;
    double max_abs_phi = 0.0, max_abs_phix = 0.0;
    double R = 0.0, S = 0.0;            // max |r|, max |s|
    double F_plus = 0.0, G_plus = 0.0;  // max f, max g
    bool phi_bounds_pass = false;
    bool max_principle_pass = false;
    double min_ux = 0.0;  // blow-up fit signal (not a CSV column)
};
DiagnosticsRecord compute_record(const FluidState& state, double K, const Grid& g, double H0);

/// Least-squares fit of min u_x = c / (t - T*) on samples (t, min u_x),
/// linear in 1/min u_x. Uses samples with min u_x <= gate; needs at least 5.
/// Throws SolverFailure on insufficient samples or a non-monotone tail.
struct BlowupFit {
    double T_star = 0.0;
    double c = 0.0;
};
BlowupFit fit_blowup_rate(std::span<const std::pair<double, double>> samples,
                          double gate = -10.0);

}  // namespace epb
