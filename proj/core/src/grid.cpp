#include "epb/grid.hpp"

#include <cmath>
#include <string>

#include "epb/errors.hpp"

namespace epb {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

double Grid::wrap(double x) const {
    double y = std::fmod(x + 0.5 * length, length);
    if (y < 0) y += length;
    return y - 0.5 * length;
}

Grid make_grid(int n, double length) {
    if (!is_power_of_two(n) || n < 8)
        throw ConfigError("grid n must be a power of two >= 8, got " + std::to_string(n));
    if (!(length > 0.0) || !std::isfinite(length))
        throw ConfigError("grid length must be positive, got " + std::to_string(length));

    Grid g;
    g.n = n;
    g.length = length;
    g.nodes.resize(n);
    const double dx = length / n;
    for (int j = 0; j < n; ++j) g.nodes[j] = -0.5 * length + j * dx;
    g.wavenumbers.resize(n / 2 + 1);
    const double k0 = 2.0 * M_PI / length;
    for (int k = 0; k <= n / 2; ++k) g.wavenumbers[k] = k0 * k;
    return g;
}

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

void require_on_grid(const Field& f, const Grid& g, const char* what) {
    if (static_cast<int>(f.size()) != g.n)
        throw NumericError(std::string(what) + ": field size " + std::to_string(f.size()) +
                           " does not match grid n=" + std::to_string(g.n));
    if (!all_finite(f)) throw NumericError(std::string(what) + ": non-finite values");
}

}  // namespace epb
