#pragma once

#include <span>
#include <vector>

namespace epb {

/// Real samples aligned with the nodes of a Grid.
using Field = std::vector<double>;

/// Uniform periodic grid on [-L/2, L/2) with power-of-two node count.
///
/// Node j sits at x_j = -L/2 + j L/n. The wavenumber table follows the
/// usual FFT ordering for real transforms: xi_k = 2 pi k / L, k = 0..n/2.
struct Grid {
    int n = 0;
    double length = 0.0;
    std::vector<double> nodes;
    std::vector<double> wavenumbers;  // size n/2+1 (real-transform halfspectrum)

    double dx() const { return length / n; }
    /// Wrap an arbitrary coordinate into [-L/2, L/2).
    double wrap(double x) const;
};

/// Build a periodic grid. n must be a power of two with n >= 8, length > 0.
Grid make_grid(int n, double length);

/// True if every entry is finite.
bool all_finite(std::span<const double> v);

/// Throws NumericError unless all entries of f are finite and f matches g.
void require_on_grid(const Field& f, const Grid& g, const char* what);

}  // namespace epb
