#pragma once

#include <span>

#include "epb/grid.hpp"

namespace epb {

/// Exact derivative of the trigonometric interpolant of f. order is 1 or 2.
/// Odd orders zero the Nyquist mode so the result stays real-symmetric.
Field spectral_derivative(const Field& f, const Grid& g, int order);

/// Periodic trapezoid rule, L/n * sum f_j (spectrally accurate for smooth f).
double quadrature(const Field& f, const Grid& g);

/// Solve (-d_xx + c) u = rhs with c > 0, diagonal in Fourier space.
Field solve_helmholtz(const Field& rhs, const Grid& g, double c);

/// Zero all modes with |k| > n/3 (2/3-rule anti-aliasing filter).
Field dealias_two_thirds(const Field& f, const Grid& g);

}  // namespace epb
