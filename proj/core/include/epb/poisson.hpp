#pragma once

#include <optional>

#include "epb/grid.hpp"

namespace epb {

/// Default max-norm residual tolerance for the Poisson-Boltzmann solve.
/// The spectral Laplacian's double-precision roundoff floor is about
/// eps * xi_max^2 * |phi|, i.e. a few 1e-12 at n=1024, L=10, so the
/// tolerance sits a decade above it.
inline constexpr double kDefaultPoissonTol = 5e-11;
inline constexpr int kMaxNewtonIterations = 50;

struct PoissonSolution {
    Field phi;
    double residual_norm = 0.0;  // max-norm of -phi_xx + e^phi - rho
    int newton_iterations = 0;
};

/// Solve -phi_xx = rho - e^phi on the periodic grid by Newton iteration,
/// J = -d_xx + diag(e^phi), with CG linear solves preconditioned by
/// (-d_xx + mean(e^phi))^{-1}. Requires min rho > 0.
///
/// Throws ConfigError on non-positive density, SolverFailure (carrying the
/// last residual) if Newton stalls or diverges before reaching tol.
PoissonSolution solve_poisson(const Field& rho, const Grid& g,
                              double tol = kDefaultPoissonTol,
                              const Field* initial_guess = nullptr);

/// Lemma-grade elliptic a-priori checks for a density/potential pair:
///   int |phi_x|^2 + (kappa0/2)|phi|^2  <=  1/(2 kappa0) int |rho-1|^2
///   int |phi_x|^2 + (phi-1)e^phi + 1   <=  1/kappa0     int |rho-1|^2
/// with kappa0 = (1-kappa_-)/(-log kappa_-) for kappa_- < 1, else 1.
struct EllipticEstimates {
    double kappa_minus = 0.0;
    double kappa0 = 0.0;
    double lhs_h1 = 0.0;
    double rhs_h1 = 0.0;
    double lhs_energy = 0.0;
    double rhs_energy = 0.0;
    bool h1_pass = false;
    bool energy_pass = false;
};

EllipticEstimates check_elliptic_estimates(const Field& rho, const Field& phi, const Grid& g);

}  // namespace epb
