#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace epb {

/// w'' + a w (= or <=) b with initial data (w0, wdot0).
struct LinearOscillatorProblem {
    double a = 1.0;  // stiffness, must be positive
    double b = 0.0;  // constant forcing bound
    double w0 = 1.0;
    double wdot0 = 0.0;
};

/// Zero-existence for the exact equation w'' + a w = b via the closed form
///   w(t) = (w0 - b/a) cos(sqrt(a) t) + (wdot0/sqrt(a)) sin(sqrt(a) t) + b/a.
/// A zero on [0, inf) exists iff a w0^2/2 - w0 b + wdot0^2/2 >= 0.
struct ClosedFormZeroReport {
    bool has_zero = false;
    std::optional<double> first_zero;
    double condition_value = 0.0;  // a w0^2/2 - w0 b + wdot0^2/2
};
ClosedFormZeroReport has_zero_closed_form(const LinearOscillatorProblem& p);

/// Gates for the differential-inequality zero lemma: a/2 > b, strict
/// positivity of the condition value, and w0 >= 1.
struct HypothesesReport {
    bool a_half_gt_b = false;
    bool condition_strict = false;
    bool applicable = false;
};
HypothesesReport check_lemma_hypotheses(const LinearOscillatorProblem& p);

struct TrajectorySample {
    double t = 0.0;
    double w = 0.0;
    double wdot = 0.0;
};

struct TrajectoryResult {
    std::vector<TrajectorySample> samples;  // one per step, including t = 0
    double min_w = 0.0;
    std::optional<double> first_zero;  // refined to ~1e-10
};

/// RK4 trajectory of w'' + a w = rhs(t) from (w0, wdot0) on [0, t_end].
/// dt <= 0 selects the default 1e-3 * 2 pi / sqrt(a). The first zero is
/// located by sign change plus bisection on re-integrated partial steps.
TrajectoryResult integrate_inequality_trajectory(const LinearOscillatorProblem& p,
                                                 const std::function<double(double)>& rhs,
                                                 double t_end, double dt = 0.0);

}  // namespace epb
