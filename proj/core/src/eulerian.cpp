#include "epb/eulerian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "epb/errors.hpp"
#include "epb/poisson.hpp"
#include "epb/spectral.hpp"

namespace epb {

void Scenario::validate() const {
    if (!(K >= 0.0)) throw ConfigError("scenario: K must be >= 0");
    if (!(dt > 0.0)) throw ConfigError("scenario: dt must be positive");
    if (!(t_end > 0.0)) throw ConfigError("scenario: t_end must be positive");
    if (output_stride < 1) throw ConfigError("scenario: output_stride must be >= 1");
    if (snapshot_stride < 0) throw ConfigError("scenario: snapshot_stride must be >= 0");
    if (!(poisson_tol > 0.0)) throw ConfigError("scenario: poisson_tol must be positive");
    if (!(picard_tol > 0.0)) throw ConfigError("scenario: picard_tol must be positive");
    if (picard_max_iterations < 1) throw ConfigError("scenario: picard_max_iterations must be >= 1");
    if (!(blowup_threshold > 0.0)) throw ConfigError("scenario: blowup_threshold must be positive");
    if (init.rho_preset == RhoPreset::OneMinusASechBx && !(init.a < 1.0))
        throw ConfigError("scenario: init.a must be < 1 to keep the density positive");
}

namespace {

double table_lookup(const std::vector<std::pair<double, double>>& table, double x, double length) {
    if (table.size() < 2) throw ConfigError("custom table needs at least 2 points");
    const double x0 = table.front().first;
    double t = std::fmod(x - x0, length);
    if (t < 0) t += length;
    t += x0;
    for (size_t i = 0; i + 1 < table.size(); ++i) {
        if (t <= table[i + 1].first) {
            const double s = (t - table[i].first) / (table[i + 1].first - table[i].first);
            return table[i].second + s * (table[i + 1].second - table[i].second);
        }
    }
    // wrap segment back to the first point
    const auto& last = table.back();
    const double seg = x0 + length - last.first;
    const double s = (t - last.first) / seg;
    return last.second + s * (table.front().second - last.second);
}

}  // namespace

std::pair<Field, Field> sample_initial_data(const InitialData& init, const Grid& g) {
    Field rho0(g.n), u0(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double x = g.nodes[j];
        switch (init.rho_preset) {
            case RhoPreset::OneMinusASechBx: rho0[j] = 1.0 - init.a / std::cosh(init.b * x); break;
            case RhoPreset::OnePlusSech: rho0[j] = 1.0 + 1.0 / std::cosh(x); break;
            case RhoPreset::Constant: rho0[j] = 1.0; break;
            case RhoPreset::CosineMode:
                rho0[j] = 1.0 + init.cosine_amp *
                                    std::cos(2.0 * M_PI * init.cosine_mode * x / g.length);
                break;
            case RhoPreset::CustomTable: rho0[j] = table_lookup(init.rho_table, x, g.length); break;
        }
        switch (init.u_preset) {
            case UPreset::Zero: u0[j] = 0.0; break;
            case UPreset::Sech: u0[j] = init.u_amp / std::cosh(x); break;
            case UPreset::CosineMode:
                u0[j] = init.u_amp * std::cos(2.0 * M_PI * init.cosine_mode * x / g.length);
                break;
            case UPreset::CustomTable: u0[j] = table_lookup(init.u_table, x, g.length); break;
        }
    }
    return {std::move(rho0), std::move(u0)};
}

FluidState initialize(const Scenario& scenario) {
    scenario.validate();
    const Grid g = make_grid(scenario.n, scenario.length);
    auto [rho0, u0] = sample_initial_data(scenario.init, g);
    if (!(*std::min_element(rho0.begin(), rho0.end()) > 0.0))
        throw ConfigError("initialize: preset parameters give non-positive density");
    PoissonSolution ps = solve_poisson(rho0, g, scenario.poisson_tol);
    return {0.0, std::move(rho0), std::move(u0), std::move(ps.phi)};
}

CrankNicolsonStepper::CrankNicolsonStepper(const Scenario& scenario, const Grid& g)
    : scenario_(scenario), grid_(g) {}

FluidState CrankNicolsonStepper::advance(const FluidState& state) {
    const int n = grid_.n;
    const double dt = scenario_.dt;
    const double K = scenario_.K;

    Field rho_new = state.rho;
    Field u_new = state.u;
    if (phi_half_.empty()) phi_half_ = state.phi;

    Field rho_m(n), u_m(n), flux(n), adv(n), rho_next(n), u_next(n);
    double prev_delta = std::numeric_limits<double>::infinity();

    for (int it = 0; it < scenario_.picard_max_iterations; ++it) {
        for (int j = 0; j < n; ++j) {
            rho_m[j] = 0.5 * (state.rho[j] + rho_new[j]);
            u_m[j] = 0.5 * (state.u[j] + u_new[j]);
        }
        if (!(*std::min_element(rho_m.begin(), rho_m.end()) > 0.0))
            throw SolverFailure("step: density positivity lost", 0.0);

        PoissonSolution ps = solve_poisson(rho_m, grid_, scenario_.poisson_tol, &phi_half_);
        phi_half_ = std::move(ps.phi);

        for (int j = 0; j < n; ++j) flux[j] = rho_m[j] * u_m[j];
        if (scenario_.dealias) flux = dealias_two_thirds(flux, grid_);
        const Field dflux = spectral_derivative(flux, grid_, 1);
        const Field dum = spectral_derivative(u_m, grid_, 1);
        const Field drho_m = spectral_derivative(rho_m, grid_, 1);
        const Field dphi = spectral_derivative(phi_half_, grid_, 1);

        for (int j = 0; j < n; ++j) adv[j] = u_m[j] * dum[j];
        if (scenario_.dealias) adv = dealias_two_thirds(adv, grid_);

        double residual = 0.0;
        for (int j = 0; j < n; ++j) {
            rho_next[j] = state.rho[j] - dt * dflux[j];
            double du = adv[j] + dphi[j];
            if (K > 0.0) du += K * drho_m[j] / rho_m[j];
            u_next[j] = state.u[j] - dt * du;
            residual = std::max({residual, std::abs(rho_next[j] - rho_new[j]),
                                 std::abs(u_next[j] - u_new[j])});
        }
        if (!std::isfinite(residual)) throw SolverFailure("step: non-finite iterate", residual);

        if (residual <= scenario_.picard_tol) {
            PoissonSolution final_ps =
                solve_poisson(rho_next, grid_, scenario_.poisson_tol, &phi_half_);
            return {state.time + dt, std::move(rho_next), std::move(u_next),
                    std::move(final_ps.phi)};
        }

        // Damped update: same fixed point, contractive at high wavenumbers.
        // Near the Poisson-noise floor the increments fluctuate; only treat
        // growth well above the tolerance as divergence.
        if (residual > prev_delta && residual > 50.0 * scenario_.picard_tol)
            theta_ = std::max(0.5 * theta_, 0.05);
        prev_delta = residual;
        for (int j = 0; j < n; ++j) {
            rho_new[j] += theta_ * (rho_next[j] - rho_new[j]);
            u_new[j] += theta_ * (u_next[j] - u_new[j]);
        }
    }
    throw SolverFailure("step: fixed-point iteration did not converge in " +
                            std::to_string(scenario_.picard_max_iterations) + " sweeps",
                        prev_delta);
}

FluidState step(const FluidState& state, const Scenario& scenario) {
    const Grid g = make_grid(scenario.n, scenario.length);
    CrankNicolsonStepper stepper(scenario, g);
    return stepper.advance(state);
}

RunResult run(const Scenario& scenario, const RunCallbacks& callbacks) {
    scenario.validate();
    const Grid g = make_grid(scenario.n, scenario.length);

    RunResult result;
    FluidState state = initialize(scenario);
    result.H0 = energy(state, scenario.K, g);

    CrankNicolsonStepper stepper(scenario, g);
    const int n_steps = static_cast<int>(std::llround(scenario.t_end / scenario.dt));

    // (t, min u_x) samples from the resolved regime, for the T* fit.
    std::vector<std::pair<double, double>> fit_samples;
    const double resolved_gradient = 100.0;
    const double fit_gate = -3.0;

    auto emit_record = [&](const FluidState& s) {
        DiagnosticsRecord rec = compute_record(s, scenario.K, g, result.H0);
        result.series.push_back(rec);
        if (callbacks.on_record) callbacks.on_record(rec);
        return rec;
    };
    emit_record(state);
    if (callbacks.on_snapshot) callbacks.on_snapshot(state);

    double last_resolved_gradient = 0.0;
    for (int i = 1; i <= n_steps; ++i) {
        FluidState next;
        try {
            next = stepper.advance(state);
        } catch (const SolverFailure& failure) {
            // Steep-gradient step failure is the discrete face of blow-up;
            // anything else is reported as a plain solver failure.
            if (last_resolved_gradient > 100.0) {
                result.termination = Termination::BlowupDetected;
            } else {
                result.termination = Termination::SolverFailure;
                result.failure_message = failure.what();
            }
            break;
        }
        state = std::move(next);

        const Field ux = spectral_derivative(state.u, g, 1);
        const Field rhox = spectral_derivative(state.rho, g, 1);
        double max_ux = 0.0, max_rhox = 0.0, min_ux = 0.0;
        for (int j = 0; j < g.n; ++j) {
            max_ux = std::max(max_ux, std::abs(ux[j]));
            max_rhox = std::max(max_rhox, std::abs(rhox[j]));
            min_ux = std::min(min_ux, ux[j]);
        }
        const double gmax = std::max(max_ux, max_rhox);
        last_resolved_gradient = gmax;
        if (gmax <= resolved_gradient && min_ux <= fit_gate)
            fit_samples.emplace_back(state.time, min_ux);

        if (i % scenario.output_stride == 0 || i == n_steps) emit_record(state);
        if (callbacks.on_snapshot && scenario.snapshot_stride > 0 &&
            (i % scenario.snapshot_stride == 0 || i == n_steps))
            callbacks.on_snapshot(state);

        if (gmax > scenario.blowup_threshold) {
            result.termination = Termination::BlowupDetected;
            if (result.series.empty() || result.series.back().time != state.time)
                emit_record(state);
            if (callbacks.on_snapshot && scenario.snapshot_stride > 0)
                callbacks.on_snapshot(state);
            break;
        }
    }

    if (result.termination == Termination::BlowupDetected) {
        BlowupEstimate est;
        try {
            const BlowupFit fit = fit_blowup_rate(fit_samples, fit_gate);
            est.T_star = fit.T_star;
            est.rate_constant = fit.c;
            est.fit_ok = true;
        } catch (const SolverFailure&) {
            est.T_star = state.time;  // fall back to the detection time
            est.rate_constant = 0.0;
            est.fit_ok = false;
        }
        result.blowup = est;
    }
    result.final_state = std::move(state);
    return result;
}

}  // namespace epb
