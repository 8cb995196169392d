#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "epb/diagnostics.hpp"
#include "epb/grid.hpp"
#include "epb/state.hpp"

namespace epb {

/// Initial-data presets. Density and velocity profiles are combined freely.
enum class RhoPreset { OneMinusASechBx, OnePlusSech, Constant, CosineMode, CustomTable };
enum class UPreset { Zero, Sech, CosineMode, CustomTable };

struct InitialData {
    RhoPreset rho_preset = RhoPreset::OneMinusASechBx;
    double a = 0.7;  // sech amplitude
    double b = 3.0;  // sech width factor
    UPreset u_preset = UPreset::Zero;
    double u_amp = 1.0;
    double cosine_amp = 1e-4;  // CosineMode: rho = 1 + amp cos(2 pi mode x / L)
    int cosine_mode = 2;
    // CustomTable: (x, value) pairs, linearly interpolated, periodic wrap.
    std::vector<std::pair<double, double>> rho_table;
    std::vector<std::pair<double, double>> u_table;
};

/// Full run configuration.
struct Scenario {
    double K = 0.0;  // temperature ratio T_i/T_e
    int n = 1024;
    double length = 10.0;
    double dt = 0.01;
    double t_end = 4.0;
    int output_stride = 1;    // diagnostics record every this many steps
    int snapshot_stride = 0;  // 0 = no snapshots (final state always emitted)
    InitialData init;
    double poisson_tol = 5e-11;
    double picard_tol = 1e-10;
    int picard_max_iterations = 100;
    double blowup_threshold = 1e3;  // on max(|u_x|, |rho_x|)
    bool dealias = false;           // 2/3-rule filter on advective products

    void validate() const;  // throws ConfigError
};

/// Sample the preset initial data on the grid (rho0, u0).
std::pair<Field, Field> sample_initial_data(const InitialData& init, const Grid& g);

/// Construct the t = 0 state: sample the preset, solve Poisson.
FluidState initialize(const Scenario& scenario);

enum class Termination { Completed, BlowupDetected, SolverFailure };

struct BlowupEstimate {
    double T_star = 0.0;
    double rate_constant = 0.0;
    bool fit_ok = false;  // false: fit failed, T_star is the detection time
};

struct RunResult {
    FluidState final_state;
    Termination termination = Termination::Completed;
    std::optional<BlowupEstimate> blowup;  // present iff BlowupDetected
    std::vector<DiagnosticsRecord> series;
    double H0 = 0.0;
    std::string failure_message;  // set for SolverFailure
};

struct RunCallbacks {
    std::function<void(const DiagnosticsRecord&)> on_record;
    std::function<void(const FluidState&)> on_snapshot;
};

/// One Crank-Nicolson step closed by damped fixed-point iteration.
///
/// rho and u advance with midpoint averages; phi at the half step solves
/// the Poisson equation for the averaged density. The fixed-point sweep is
/// under-relaxed adaptively: the damping halves whenever the increment
/// grows, which keeps the high-wavenumber modes of the advective terms
/// contractive without changing the fixed point.
FluidState step(const FluidState& state, const Scenario& scenario);

/// March to t_end or blow-up. Records diagnostics every output_stride steps,
/// fits T* from the resolved-window min u_x samples on detection.
RunResult run(const Scenario& scenario, const RunCallbacks& callbacks = {});

/// Stepper with per-run warm starts (previous phi, damping factor).
/// A single instance is not safe for concurrent calls; distinct instances
/// share nothing.
class CrankNicolsonStepper {
public:
    CrankNicolsonStepper(const Scenario& scenario, const Grid& g);
    FluidState advance(const FluidState& state);

private:
    const Scenario& scenario_;
    const Grid& grid_;
    Field phi_half_;  // warm start for the midpoint Poisson solve
    double theta_ = 1.0;
};

}  // namespace epb
