#pragma once

#include <span>
#include <vector>

#include "epb/grid.hpp"

namespace epb {

/// Solve a cyclic tridiagonal system. sub[i] multiplies x[i-1] (sub[0] wraps
/// to x[n-1]); sup[i] multiplies x[i+1] (sup[n-1] wraps to x[0]).
std::vector<double> solve_cyclic_tridiagonal(std::span<const double> sub,
                                             std::span<const double> diag,
                                             std::span<const double> sup,
                                             std::span<const double> rhs);

/// C2 periodic cubic spline through grid samples; O(1) evaluation.
class PeriodicCubicSpline {
public:
    PeriodicCubicSpline(const Field& f, const Grid& g);
    double operator()(double x) const;

private:
    double x0_;
    double h_;
    double length_;
    std::vector<double> y_;
    std::vector<double> d2_;  // spline second derivatives at nodes
};

/// Values of the periodic cubic spline interpolant of f at arbitrary points.
/// Exact at grid nodes. Points are wrapped into the period.
std::vector<double> interpolate_periodic(const Field& f, const Grid& g,
                                         std::span<const double> points);

/// Shape-preserving (Fritsch-Carlson) periodic cubic through scattered
/// strictly-increasing abscissae spanning one period. Monotone data give a
/// monotone interpolant; positive data stay positive between knots.
class MonotonePeriodicCubic {
public:
    MonotonePeriodicCubic(std::vector<double> xs, std::vector<double> ys, double length);
    double operator()(double x) const;

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<double> slope_;
    double length_;
};

}  // namespace epb
