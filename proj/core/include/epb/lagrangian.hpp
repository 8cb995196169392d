#pragma once

#include <optional>
#include <span>
#include <vector>

#include "epb/grid.hpp"
#include "epb/poisson.hpp"

namespace epb {

/// Pressureless characteristic ensemble. Per particle i:
///   alpha: launch position (uniform over the period)
///   x:     current position, dx/dt = u
///   u:     velocity along the characteristic, du/dt = -phi_x(x, t)
///   w:     Jacobian dx/dalpha; w(.,0) = 1
///   wdot:  dw/dt; wdot(.,0) = d_alpha u0; ddw/dt = rho0(alpha) - e^phi w
///   rho0:  frozen initial density samples (rho(x(t), t) w(t) = rho0)
struct CharacteristicEnsemble {
    std::vector<double> alpha, x, u, w, wdot, rho0;
    double time = 0.0;

    int size() const { return static_cast<int>(alpha.size()); }
};

/// Launch particle_count characteristics from uniform alpha positions.
/// particle_count must be a power of two (spectral d_alpha for wdot(.,0)).
CharacteristicEnsemble make_ensemble(const Field& rho0, const Field& u0, const Grid& g,
                                     int particle_count = 2048);

/// Density on the grid from the rho*w = rho0 invariant: shape-preserving
/// periodic interpolation of the scattered pairs (x_i, rho0_i / w_i).
/// Throws CrossingError if particles crossed or w is not positive.
Field reconstruct_density(const CharacteristicEnsemble& ens, const Grid& g);

/// One RK4 step of the coupled system; each stage reconstructs the density,
/// solves Poisson, and samples phi, phi_x at the particles.
CharacteristicEnsemble step_lagrangian(const CharacteristicEnsemble& ens, double dt,
                                       const Grid& g, double poisson_tol = kDefaultPoissonTol);

/// Per-step extremal-Jacobian sample: the minimizing particle's w and wdot.
struct MinWSample {
    double t = 0.0;
    double min_w = 0.0;
    double wdot = 0.0;  // at the minimizing particle
};

struct WVanishing {
    enum class Sign { Negative, Zero };  // sign of wdot at T*
    double T_star = 0.0;
    Sign sign = Sign::Negative;
};

/// Extrapolate the first zero of w from the tail of the min-w history.
/// Linear fit of w for the negative-slope branch, sqrt(w) fit for tangency.
/// Returns nullopt when the history shows no vanishing trend.
std::optional<WVanishing> detect_w_vanishing(std::span<const MinWSample> history);

/// Lemma-rate compliance: (t - T*) u_x along the blow-up characteristic,
/// u_x = wdot / w, over samples with T* - t in [2 dt, 0.1]. The admissible
/// bracket is (1/2, 2) for the negative branch and (1, 8) for tangency.
struct RateCheckReport {
    double bracket_lo = 0.0, bracket_hi = 0.0;
    std::vector<double> products;
    int samples_used = 0;
    bool all_inside = false;
};
RateCheckReport check_blowup_rate(std::span<const MinWSample> history, double T_star,
                                  WVanishing::Sign sign, double dt);

struct LagrangianOptions {
    int particle_count = 2048;
    double dt = 0.01;
    double t_end = 4.0;
    double poisson_tol = kDefaultPoissonTol;
    double w_stop = 5e-3;  // stop once min w drops below this
};

struct LagrangianRunResult {
    CharacteristicEnsemble final_ensemble;
    std::vector<MinWSample> history;
    std::optional<WVanishing> vanishing;
    bool crossed = false;  // particle crossing ended the run
};

/// March characteristics until t_end, min-w exhaustion, or crossing;
/// then extrapolate T*.
LagrangianRunResult run_characteristics(const Field& rho0, const Field& u0, const Grid& g,
                                        const LagrangianOptions& options = {});

}  // namespace epb
