#ifndef WORMSZEGO_REPRODUCING_HPP
#define WORMSZEGO_REPRODUCING_HPP

#include <array>
#include <cmath>
#include <complex>

#include "wormszego/domain.hpp"
#include "wormszego/errors.hpp"
#include "wormszego/kernel_terms.hpp"
#include "wormszego/quadrature.hpp"

// Numerical verification of the reproducing property
//   <F, K(., z)> = F(z)
// with the inner product taken over the four distinguished-boundary faces
// with measure dtheta dx. Test functions are single z2 modes with a Gaussian
// profile in z1, so the theta integral reduces exactly to one mode and only
// four 1-d x integrals remain.

namespace wormszego {

/// F(z1, z2) = exp(-width (z1 - center)^2) * z2^mode.
///
/// width controls the growth e^{width Im(z1)^2} of the profile on horizontal
/// lines. On the outer faces Im z1 = +-beta a width of 1 would inflate the
/// integrand by e^{beta^2} (about 1e17 at beta = 2pi) and sink the pairing in
/// roundoff, so the factory scales width to keep that factor near e.
/// Negative modes are accepted but experimental; whether they belong to the
/// Hardy space depends on the annulus structure in z2.
struct TestFunction {
    int mode = 0;
    double center = 0;
    double width = 1;
    cplx amplitude{1, 0};

    cplx profile(cplx zeta) const {
        const cplx d = zeta - center;
        return amplitude * std::exp(-width * d * d);
    }
    cplx eval(const Point& pt) const { return profile(pt.z1) * std::pow(pt.z2, mode); }
};

inline TestFunction make_test_function(const DomainParams& p, int mode, double center = 0) {
    return {mode, center, 1.0 / (p.beta * p.beta), cplx(1, 0)};
}

struct PairingResult {
    cplx value{0, 0};
    std::array<cplx, 4> per_face{};   // E1..E4 contributions; they sum to value
    double err_est = 0;
};

namespace detail {

struct FaceGeom {
    double im;       // Im z1 on the face
    double log_sq;   // log|z2|^2 on the face
};

inline FaceGeom face_geom(const DomainParams& p, int face_idx, double delta) {
    const double top = p.beta - pi / 2;
    switch (face_idx) {
        case 0: return {p.beta - 2 * delta, top - delta};        // E1
        case 1: return {p.beta - pi, top - delta};               // E2
        case 2: return {-p.beta + 2 * delta, -top + delta};      // E3
        default: return {-(p.beta - pi), -top + delta};          // E4
    }
}

/// One face's x integral with the kernel evaluated at inward offset delta:
///   r_face^m r_delta^m z2^m / (8 pi) *
///       int g(x + i c_face) conj(I_m(x + i c_delta - conj z1)) dx.
inline std::pair<cplx, double> face_integral(const DomainParams& p, const TestFunction& tf,
                                             const Point& z, int face_idx, double delta) {
    const FaceGeom on = face_geom(p, face_idx, 0.0);
    const FaceGeom off = face_geom(p, face_idx, delta);
    const int m = tf.mode;

    DomainParams inner = p;
    inner.tol_quad = std::max(p.tol_quad, 1e-11);

    Integrand f;
    f.eval = [&, m](double x) {
        const cplx tau = cplx(x, off.im) - std::conj(z.z1);
        return tf.profile(cplx(x, on.im)) * std::conj(mode_integral(inner, m, tau));
    };
    // Gaussian truncation: |g(x + i c)| = e^{width (c^2 - (x - center)^2)}
    const double reach = std::sqrt(on.im * on.im + std::log(1e12) / tf.width);
    const double a = tf.center - reach, b = tf.center + reach;
    f.osc_freq = 2 * tf.width * std::abs(on.im);

    double scale = 0;
    for (int i = 0; i <= 8; ++i) scale = std::max(scale, std::abs(f.eval(a + (b - a) * i / 8.0)));
    const double tol_x = std::max(1e-9 * scale * (b - a), 1e-13);
    const QuadResult q = integrate_segment(f, a, b, tol_x);

    const cplx weight = std::exp(0.5 * m * (on.log_sq + off.log_sq)) * std::pow(z.z2, m) / (8 * pi);
    return {weight * q.value, std::abs(weight) * q.err_est};
}

} // namespace detail

/// Boundary pairing <F, K(., z)> over the four distinguished faces. Kernel
/// boundary values are taken as interior values at offsets delta_b and
/// delta_b/2 from each face, linearly extrapolated to the face.
inline PairingResult boundary_pairing(const DomainParams& p, const TestFunction& tf, const Point& z,
                                      double delta_b = 1e-4) {
    const std::string why = containment_violation(p, z);
    if (!why.empty()) throw OutsideDomain("boundary_pairing: z outside domain: " + why);
    if (!(delta_b > 0)) throw Error("boundary_pairing: delta_b must be positive");

    PairingResult out;
    for (int face = 0; face < 4; ++face) {
        const auto [v1, e1] = detail::face_integral(p, tf, z, face, delta_b);
        const auto [v2, e2] = detail::face_integral(p, tf, z, face, delta_b / 2);
        const cplx extrap = 2.0 * v2 - v1;   // linear extrapolation to delta = 0
        out.per_face[face] = extrap;
        out.value += extrap;
        out.err_est += 0.5 * std::abs(v1 - v2) + e1 + 2 * e2;
    }
    return out;
}

/// Relative residual |<F, K(., z)> - F(z)| / |F(z)|.
inline double reproduce_check(const DomainParams& p, const TestFunction& tf, const Point& z,
                              double delta_b = 1e-4) {
    const cplx fz = tf.eval(z);
    if (!(std::abs(fz) > 1e-8))
        throw TestPointDegenerate("reproduce_check: |F(z)| too small for a relative residual");
    const PairingResult pr = boundary_pairing(p, tf, z, delta_b);
    return std::abs(pr.value - fz) / std::abs(fz);
}

} // namespace wormszego

#endif
