#ifndef WORMSZEGO_TEST_ORACLES_HPP
#define WORMSZEGO_TEST_ORACLES_HPP

// Independent reference implementations used only by the tests. They share
// no code with the library's integration or summation paths: fixed-step
// trapezoid sums and direct contour sampling only.

#include <cmath>
#include <complex>

#include "wormszego/domain.hpp"

namespace oracles {

using wormszego::cplx;
using wormszego::pi;

/// Fixed-step trapezoid sum of f over [a, b]. For analytic integrands that
/// decay at the ends this converges spectrally in 1/step, so a fixed fine
/// step is a trustworthy independent reference.
template <class F>
cplx trapezoid(F&& f, double a, double b, double step) {
    const long n = std::lround((b - a) / step);
    cplx s = 0.5 * (f(a) + f(b));
    for (long i = 1; i < n; ++i) s += f(a + i * (b - a) / n);
    return s * ((b - a) / n);
}

/// Mode-integral reference: trapezoid with step 1/32 on a range padded well
/// past the integrand's support. Good to ~1e-12 for moderate tau.
inline cplx mode_integral_ref(double beta, int j, cplx tau, double step = 1.0 / 32) {
    auto f = [&](double xi) {
        return std::exp(cplx(0, 1) * tau * xi) /
               (std::cosh(pi * xi) * std::cosh((2 * beta - pi) * (xi - 0.5 * j)));
    };
    const double lo = std::min(0.0, 0.5 * j) - 30.0;
    const double hi = std::max(0.0, 0.5 * j) + 30.0;
    return trapezoid(f, lo, hi, step);
}

/// Residue reference: (1/2 pi i) times the contour integral of g over a small
/// circle around the pole, sampled by trapezoid in the angle (spectrally
/// accurate for periodic integrands).
template <class G>
cplx circle_residue(G&& g, cplx center, double radius, int n = 4096) {
    cplx s{0, 0};
    for (int k = 0; k < n; ++k) {
        const double th = 2 * pi * k / n;
        const cplx z = center + radius * std::exp(cplx(0, th));
        s += g(z) * (z - center);
    }
    return s / double(n);
}

/// Central finite difference of a complex-valued function of one complex
/// coordinate, stepped along the real axis.
template <class F>
cplx central_diff(F&& f, double step = 1e-5) {
    return (f(step) - f(-step)) / (2 * step);
}

} // namespace oracles

#endif
