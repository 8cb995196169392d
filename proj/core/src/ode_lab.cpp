#include "epb/ode_lab.hpp"

#include <cmath>
#include <limits>

#include "epb/errors.hpp"

namespace epb {

namespace {

void require_valid(const LinearOscillatorProblem& p) {
    if (!(p.a > 0.0)) throw ConfigError("oscillator: a must be positive");
}

}  // namespace

ClosedFormZeroReport has_zero_closed_form(const LinearOscillatorProblem& p) {
    require_valid(p);
    ClosedFormZeroReport rep;
    rep.condition_value = 0.5 * p.a * p.w0 * p.w0 - p.w0 * p.b + 0.5 * p.wdot0 * p.wdot0;
    rep.has_zero = rep.condition_value >= 0.0;
    if (!rep.has_zero) return rep;

    const double sa = std::sqrt(p.a);
    const double cx = p.w0 - p.b / p.a;  // cosine coefficient
    const double sx = p.wdot0 / sa;      // sine coefficient
    const double amp = std::hypot(cx, sx);
    if (amp < 1e-300) {
        // w is identically b/a; has_zero implies b = 0, so w is already zero.
        rep.first_zero = 0.0;
        return rep;
    }
    // A cos(theta - psi) = -b/a, theta = sqrt(a) t.
    const double psi = std::atan2(sx, cx);
    double c0 = -p.b / (p.a * amp);
    c0 = std::min(1.0, std::max(-1.0, c0));
    const double base = std::acos(c0);
    const double two_pi = 2.0 * M_PI;

    double best = std::numeric_limits<double>::infinity();
    for (const double branch : {psi + base, psi - base}) {
        double theta = std::fmod(branch, two_pi);
        if (theta < -1e-12) theta += two_pi;
        if (theta < 0.0) theta = 0.0;
        best = std::min(best, theta);
    }
    rep.first_zero = best / sa;
    return rep;
}

HypothesesReport check_lemma_hypotheses(const LinearOscillatorProblem& p) {
    HypothesesReport rep;
    rep.a_half_gt_b = 0.5 * p.a > p.b;
    rep.condition_strict =
        0.5 * p.a * p.w0 * p.w0 - p.w0 * p.b + 0.5 * p.wdot0 * p.wdot0 > 0.0;
    rep.applicable = rep.a_half_gt_b && rep.condition_strict && p.w0 >= 1.0;
    return rep;
}

namespace {

struct OscState {
    double w, v;
};

// One RK4 step of w' = v, v' = rhs(t) - a w.
OscState rk4_step(const OscState& s, double t, double h, double a,
                  const std::function<double(double)>& rhs) {
    auto f = [&](double tt, const OscState& q) {
        return OscState{q.v, rhs(tt) - a * q.w};
    };
    const OscState k1 = f(t, s);
    const OscState k2 = f(t + 0.5 * h, {s.w + 0.5 * h * k1.w, s.v + 0.5 * h * k1.v});
    const OscState k3 = f(t + 0.5 * h, {s.w + 0.5 * h * k2.w, s.v + 0.5 * h * k2.v});
    const OscState k4 = f(t + h, {s.w + h * k3.w, s.v + h * k3.v});
    return {s.w + h / 6.0 * (k1.w + 2 * k2.w + 2 * k3.w + k4.w),
            s.v + h / 6.0 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
}

}  // namespace

TrajectoryResult integrate_inequality_trajectory(const LinearOscillatorProblem& p,
                                                 const std::function<double(double)>& rhs,
                                                 double t_end, double dt) {
    require_valid(p);
    if (!(t_end > 0.0)) throw ConfigError("oscillator: t_end must be positive");
    if (dt <= 0.0) dt = 1e-3 * 2.0 * M_PI / std::sqrt(p.a);

    TrajectoryResult out;
    OscState s{p.w0, p.wdot0};
    double t = 0.0;
    out.samples.push_back({t, s.w, s.v});
    out.min_w = s.w;
    if (s.w <= 0.0) out.first_zero = 0.0;

    const long n_steps = std::lround(std::ceil(t_end / dt));
    for (long i = 0; i < n_steps; ++i) {
        const double h = std::min(dt, t_end - t);
        if (h <= 0.0) break;
        const OscState prev = s;
        s = rk4_step(s, t, h, p.a, rhs);
        if (!std::isfinite(s.w) || !std::isfinite(s.v))
            throw NumericError("oscillator: non-finite trajectory (bad forcing?)");

        if (!out.first_zero && prev.w > 0.0 && s.w <= 0.0) {
            // Bisect on the step offset, re-integrating from the step start.
            double lo = 0.0, hi = h;
            for (int k = 0; k < 80 && hi - lo > 1e-10 * std::max(1.0, h); ++k) {
                const double mid = 0.5 * (lo + hi);
                const double wm = rk4_step(prev, t, mid, p.a, rhs).w;
                (wm > 0.0 ? lo : hi) = mid;
            }
            out.first_zero = t + 0.5 * (lo + hi);
        }
        t += h;
        out.samples.push_back({t, s.w, s.v});
        out.min_w = std::min(out.min_w, s.w);
    }
    return out;
}

}  // namespace epb
