#include "epb/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "epb/errors.hpp"

namespace epb {

std::vector<double> solve_cyclic_tridiagonal(std::span<const double> sub,
                                             std::span<const double> diag,
                                             std::span<const double> sup,
                                             std::span<const double> rhs) {
    const size_t n = diag.size();
    if (sub.size() != n || sup.size() != n || rhs.size() != n)
        throw std::invalid_argument("solve_cyclic_tridiagonal: size mismatch");
    if (n < 3) throw std::invalid_argument("solve_cyclic_tridiagonal: n >= 3 required");

    // Sherman-Morrison: strip the corner entries into a rank-one update.
    const double alpha = sub[0];     // couples x[0] to x[n-1]
    const double beta = sup[n - 1];  // couples x[n-1] to x[0]
    const double gamma = -diag[0];

    std::vector<double> b(diag.begin(), diag.end());
    b[0] -= gamma;
    b[n - 1] -= alpha * beta / gamma;

    auto thomas = [&](std::vector<double> d) {
        std::vector<double> c(n, 0.0), x(n);
        double m = b[0];
        x[0] = d[0] / m;
        for (size_t i = 1; i < n; ++i) {
            c[i] = sup[i - 1] / m;
            m = b[i] - sub[i] * c[i];
            x[i] = (d[i] - sub[i] * x[i - 1]) / m;
        }
        for (size_t i = n - 1; i-- > 0;) x[i] -= c[i + 1] * x[i + 1];
        return x;
    };

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = beta;

    std::vector<double> y = thomas(std::vector<double>(rhs.begin(), rhs.end()));
    std::vector<double> z = thomas(std::move(u));

    const double fact = (y[0] + alpha * y[n - 1] / gamma) /
                        (1.0 + z[0] + alpha * z[n - 1] / gamma);
    for (size_t i = 0; i < n; ++i) y[i] -= fact * z[i];
    return y;
}

PeriodicCubicSpline::PeriodicCubicSpline(const Field& f, const Grid& g)
    : x0_(g.nodes[0]), h_(g.dx()), length_(g.length), y_(f) {
    require_on_grid(f, g, "PeriodicCubicSpline");
    const int n = g.n;
    // M_{j-1} + 4 M_j + M_{j+1} = 6 (y_{j-1} - 2 y_j + y_{j+1}) / h^2, cyclic.
    std::vector<double> sub(n, 1.0), diag(n, 4.0), sup(n, 1.0), rhs(n);
    const double s = 6.0 / (h_ * h_);
    for (int j = 0; j < n; ++j) {
        const double ym = y_[(j + n - 1) % n];
        const double yp = y_[(j + 1) % n];
        rhs[j] = s * (ym - 2.0 * y_[j] + yp);
    }
    d2_ = solve_cyclic_tridiagonal(sub, diag, sup, rhs);
}

double PeriodicCubicSpline::operator()(double x) const {
    const int n = static_cast<int>(y_.size());
    double t = std::fmod(x - x0_, length_);
    if (t < 0) t += length_;
    int j = static_cast<int>(t / h_);
    if (j >= n) j = n - 1;
    const int jp = (j + 1) % n;
    const double a = t - j * h_;       // distance above left node
    const double b = h_ - a;           // distance below right node
    return (d2_[j] * b * b * b + d2_[jp] * a * a * a) / (6.0 * h_) +
           (y_[j] / h_ - d2_[j] * h_ / 6.0) * b +
           (y_[jp] / h_ - d2_[jp] * h_ / 6.0) * a;
}

std::vector<double> interpolate_periodic(const Field& f, const Grid& g,
                                         std::span<const double> points) {
    if (!all_finite(points)) throw NumericError("interpolate_periodic: non-finite query point");
    PeriodicCubicSpline spline(f, g);
    std::vector<double> out(points.size());
    for (size_t i = 0; i < points.size(); ++i) out[i] = spline(points[i]);
    return out;
}

MonotonePeriodicCubic::MonotonePeriodicCubic(std::vector<double> xs, std::vector<double> ys,
                                             double length)
    : xs_(std::move(xs)), ys_(std::move(ys)), length_(length) {
    const size_t m = xs_.size();
    if (m < 4 || ys_.size() != m)
        throw std::invalid_argument("MonotonePeriodicCubic: need >= 4 matching knots");
    for (size_t i = 1; i < m; ++i)
        if (!(xs_[i] > xs_[i - 1]))
            throw std::invalid_argument("MonotonePeriodicCubic: abscissae must increase");
    if (!(xs_[m - 1] - xs_[0] < length))
        throw std::invalid_argument("MonotonePeriodicCubic: knots exceed one period");

    // Secant slopes, with the wrap segment closing the period.
    std::vector<double> h(m), delta(m);
    for (size_t i = 0; i + 1 < m; ++i) {
        h[i] = xs_[i + 1] - xs_[i];
        delta[i] = (ys_[i + 1] - ys_[i]) / h[i];
    }
    h[m - 1] = xs_[0] + length - xs_[m - 1];
    delta[m - 1] = (ys_[0] - ys_[m - 1]) / h[m - 1];

    // Fritsch-Carlson limited slopes (periodic indexing).
    slope_.resize(m);
    for (size_t i = 0; i < m; ++i) {
        const size_t im = (i + m - 1) % m;
        const double d0 = delta[im], d1 = delta[i];
        if (d0 * d1 <= 0.0) {
            slope_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[im];
            const double w2 = h[i] + 2.0 * h[im];
            slope_[i] = (w1 + w2) / (w1 / d0 + w2 / d1);
        }
    }
}

double MonotonePeriodicCubic::operator()(double x) const {
    const size_t m = xs_.size();
    double t = std::fmod(x - xs_[0], length_);
    if (t < 0) t += length_;
    t += xs_[0];  // t in [xs[0], xs[0]+L)

    // Find segment: last knot <= t (wrap segment when t >= xs[m-1]).
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), t);
    const size_t i = (it == xs_.begin()) ? m - 1 : static_cast<size_t>(it - xs_.begin() - 1);
    const size_t ip = (i + 1) % m;
    const double hseg = (i == m - 1) ? xs_[0] + length_ - xs_[m - 1] : xs_[ip] - xs_[i];
    const double s = (t - xs_[i]) / hseg;

    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * ys_[i] + h10 * hseg * slope_[i] + h01 * ys_[ip] + h11 * hseg * slope_[ip];
}

}  // namespace epb
