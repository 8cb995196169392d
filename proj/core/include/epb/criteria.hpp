#pragma once

#include "epb/grid.hpp"

namespace epb {

/// U(tau) = (tau - 1) e^tau + 1. Nonnegative, U(0) = 0, U ~ tau^2/2 near 0.
double potential_well(double tau);

/// V_-(z) = int_z^0 sqrt(2 U), z <= 0. Strictly decreasing in z.
double v_minus(double z);
/// V_+(z) = int_0^z sqrt(2 U), z >= 0. Strictly increasing in z.
double v_plus(double z);

/// Inverses on [0, inf), to |V(z) - h| <= 1e-10.
double v_minus_inverse(double h);
double v_plus_inverse(double h);

/// Pressureless blow-up criterion exp(V_-^{-1}(H(0))) > 2 rho_0(alpha),
/// evaluated at the global minimizer of rho_0 (the optimal witness).
struct PressurelessCriterionReport {
    double H0 = 0.0;
    double v_minus_inv_H0 = 0.0;
    double lhs = 0.0;            // exp(V_-^{-1}(H(0)))
    double witness_alpha = 0.0;  // position of min rho_0
    double rhs = 0.0;            // 2 rho_0(witness)
    bool holds = false;
    double margin = 0.0;  // lhs - rhs
};
PressurelessCriterionReport check_pressureless(const Field& rho0, const Field& u0, const Grid& g);

/// Classical gradient criterion: dx u_0 <= -sqrt(2 rho_0) at some point.
struct LiuCriterionReport {
    bool holds = false;
    double witness_x = 0.0;
    double min_value = 0.0;  // min over nodes of (dx u_0 + sqrt(2 rho_0))
};
LiuCriterionReport check_liu(const Field& rho0, const Field& u0, const Grid& g);

/// H(0) <= (sup rho_0)/2 int |u_0|^2 + (1/kappa0) int |rho_0 - 1|^2.
/// For K > 0 the additional C*delta term is existential and not checkable;
/// the K = 0 bound is the one asserted.
struct EnergyBoundReport {
    double H0 = 0.0;
    double bound = 0.0;
    double kappa0 = 0.0;
    bool pass = false;
};
EnergyBoundReport energy_upper_bound(const Field& rho0, const Field& u0, const Grid& g, double K);

/// Isothermal blow-up report: the explicit constants behind the
/// steep-Riemann-gradient criterion and the existence-time lower bound.
struct IsothermalCriterionReport {
    double T0 = 0.0, eps = 0.0, delta0 = 0.0;
    double delta_eff = 0.0;   // max(sup|rho0-1|, sup|u0|, H(0))
    double steepness = 0.0;   // max_x max(-rho0^{-1/2} dx r0, -rho0^{-1/2} dx s0)
    double alpha = 0.0;       // sqrt(1-eps)/2
    double beta = 0.0;        // sqrt(1+eps)/2
    double C2 = 0.0;          // max(e^{V+^{-1}(delta0)}-1, 1-e^{V-^{-1}(delta0)})
    double gamma = 0.0;       // (C2 + 2 eps) / (2 beta)
    double M_required = 0.0;  // gamma T0 + 1/(alpha T0)
    bool satisfied = false;   // steepness >= M_required and delta_eff <= delta0
    double Tm_lower = 0.0;    // min over f0,g0 of [beta(max|.| + sqrt(gamma/beta))]^{-1}
};
IsothermalCriterionReport isothermal_report(const Field& rho0, const Field& u0, const Grid& g,
                                            double K, double T0, double eps, double delta0);

}  // namespace epb
