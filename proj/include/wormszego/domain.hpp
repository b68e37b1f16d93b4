#ifndef WORMSZEGO_DOMAIN_HPP
#define WORMSZEGO_DOMAIN_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "wormszego/errors.hpp"

namespace wormszego {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

/// Parameters of the non-smooth worm domain
///   D'_beta = { (z1,z2) : |Im z1 - log|z2|^2| < pi/2, |log|z2|^2| < beta - pi/2 }
/// together with the derived decay rate nu = pi/(2 beta - pi), the contour
/// height h used for the shifted line integrals, and evaluation tolerances.
struct DomainParams {
    double beta;
    double nu;          // pi / (2 beta - pi)
    double h;           // nu/2 < h < min(1/2, 3 nu/2)
    double tol_quad = 1e-12;
    double tol_series = 1e-11;
};

inline double h_upper_limit(double nu) { return std::min(0.5, 1.5 * nu); }

inline DomainParams make_params(double beta, std::optional<double> h_opt = std::nullopt,
                                double tol_quad = 1e-12, double tol_series = 1e-11) {
    if (!(beta > pi)) {
        std::ostringstream os;
        os << "beta = " << beta << " must exceed pi";
        throw BetaOutOfRange(os.str());
    }
    if (!(tol_quad > 0) || !(tol_series > 0)) throw Error("tolerances must be positive");
    DomainParams p;
    p.beta = beta;
    p.nu = pi / (2 * beta - pi);
    const double lo = p.nu / 2, hi = h_upper_limit(p.nu);
    p.h = h_opt ? *h_opt : 0.5 * (lo + hi);   // midpoint keeps clearance from both pole rows
    if (!(p.h > lo && p.h < hi)) {
        std::ostringstream os;
        os << "h = " << p.h << " outside (" << lo << ", " << hi << ")";
        throw HOutOfRange(os.str());
    }
    p.tol_quad = tol_quad;
    p.tol_series = tol_series;
    return p;
}

/// A point of C^2.
struct Point {
    cplx z1{0.0, 0.0};
    cplx z2{1.0, 0.0};
};

/// An argument pair (w, z) for kernel evaluation, stored flat.
struct PointPair {
    cplx w1, w2, z1, z2;
    Point w() const { return {w1, w2}; }
    Point z() const { return {z1, z2}; }
};

/// Strip and annulus margins of a point: (pi/2 - |Im z1 - log|z2|^2|,
/// beta - pi/2 - |log|z2|^2|). Both positive iff the point is interior.
inline std::pair<double, double> interior_margins(const DomainParams& p, const Point& pt) {
    if (pt.z2 == cplx(0.0, 0.0)) return {-1.0, -1.0};
    const double lg = std::log(std::norm(pt.z2));   // log|z2|^2
    return {pi / 2 - std::abs(pt.z1.imag() - lg), p.beta - pi / 2 - std::abs(lg)};
}

inline bool contains(const DomainParams& p, const Point& pt) {
    const auto [ms, ma] = interior_margins(p, pt);
    return ms > 0 && ma > 0;
}

inline bool contains(const DomainParams& p, cplx z1, cplx z2) { return contains(p, Point{z1, z2}); }

/// Explains which defining inequality fails; empty string when interior.
inline std::string containment_violation(const DomainParams& p, const Point& pt) {
    if (pt.z2 == cplx(0.0, 0.0)) return "z2 = 0";
    const double lg = std::log(std::norm(pt.z2));
    std::ostringstream os;
    if (!(std::abs(pt.z1.imag() - lg) < pi / 2)) {
        os << "|Im z1 - log|z2|^2| = " << std::abs(pt.z1.imag() - lg) << " >= pi/2";
        return os.str();
    }
    if (!(std::abs(lg) < p.beta - pi / 2)) {
        os << "|log|z2|^2| = " << std::abs(lg) << " >= beta - pi/2";
        return os.str();
    }
    return {};
}

/// Reduced variables tau = w1 - conj(z1), lam = w2 * conj(z2). The kernel
/// depends on (w, z) only through them. in_domain records membership in the
/// region where the mode series converges:
///   |Im tau - log|lam|^2| < pi   and   |log|lam|^2| < 2 beta - pi.
struct TauLambda {
    cplx tau;
    cplx lam;
    bool in_domain = false;
};

inline bool reduced_in_domain(const DomainParams& p, cplx tau, cplx lam) {
    if (lam == cplx(0.0, 0.0)) return false;
    const double lg = std::log(std::norm(lam));
    return std::abs(tau.imag() - lg) < pi && std::abs(lg) < 2 * p.beta - pi;
}

inline TauLambda reduce(const DomainParams& p, const PointPair& pr) {
    TauLambda tl;
    tl.tau = pr.w1 - std::conj(pr.z1);
    tl.lam = pr.w2 * std::conj(pr.z2);
    tl.in_domain = reduced_in_domain(p, tl.tau, tl.lam);
    return tl;
}

/// Margins of the reduced pair: (pi - |Im tau - log|lam|^2|, 2 beta - pi - |log|lam|^2|).
inline std::pair<double, double> reduced_margins(const DomainParams& p, cplx tau, cplx lam) {
    const double lg = std::log(std::norm(lam));
    return {pi - std::abs(tau.imag() - lg), 2 * p.beta - pi - std::abs(lg)};
}

// ---------------------------------------------------------------------------
// Boundary faces.
//
// In the (Im z1, log|z2|^2) plane the domain is a parallelogram-like strip.
// The distinguished boundary consists of the four corners E1..E4 (each a
// 3-real-dimensional set once x = Re z1 and the z2 phase theta are added);
// the topological boundary adds the two oblique lines Im z1 - log|z2|^2 =
// +-pi/2 and the two horizontal lines log|z2|^2 = +-(beta - pi/2).
// ---------------------------------------------------------------------------

enum class Face { E1, E2, E3, E4, ObliqueRight, ObliqueLeft, HorizTop, HorizBottom };

inline const char* face_name(Face f) {
    switch (f) {
        case Face::E1: return "E1";
        case Face::E2: return "E2";
        case Face::E3: return "E3";
        case Face::E4: return "E4";
        case Face::ObliqueRight: return "oblique-right";
        case Face::ObliqueLeft: return "oblique-left";
        case Face::HorizTop: return "horiz-top";
        case Face::HorizBottom: return "horiz-bottom";
    }
    return "?";
}

inline Face parse_face(const std::string& s) {
    if (s == "E1" || s == "e1") return Face::E1;
    if (s == "E2" || s == "e2") return Face::E2;
    if (s == "E3" || s == "e3") return Face::E3;
    if (s == "E4" || s == "e4") return Face::E4;
    if (s == "oblique-right") return Face::ObliqueRight;
    if (s == "oblique-left") return Face::ObliqueLeft;
    if (s == "horiz-top") return Face::HorizTop;
    if (s == "horiz-bottom") return Face::HorizBottom;
    throw UnknownFace("unknown face '" + s + "'");
}

/// A parameterized boundary point: x = Re z1, theta the z2 phase in [0,1),
/// aux the free coordinate of a non-distinguished face (height s of the
/// oblique lines, strip offset t of the horizontal lines). aux is ignored
/// for E1..E4.
struct BoundaryFace {
    Face face = Face::E1;
    double x = 0;
    double theta = 0;
    double aux = 0;
};

inline bool is_corner_face(Face f) {
    return f == Face::E1 || f == Face::E2 || f == Face::E3 || f == Face::E4;
}

/// (Im z1, log|z2|^2) coordinates of a face point retreated a distance eps
/// along the inward normal; eps = 0 gives the face itself. Corner faces
/// retreat both saturated inequalities by eps.
inline std::pair<double, double> face_plane_coords(const DomainParams& p, const BoundaryFace& bf,
                                                   double eps) {
    const double top = p.beta - pi / 2;
    switch (bf.face) {
        case Face::E1: return {p.beta - 2 * eps, top - eps};
        case Face::E2: return {p.beta - pi, top - eps};
        case Face::E3: return {-p.beta + 2 * eps, -top + eps};
        case Face::E4: return {-(p.beta - pi), -top + eps};
        case Face::ObliqueRight: {
            if (!(std::abs(bf.aux) < top)) throw FaceRangeError("oblique height outside (-(beta-pi/2), beta-pi/2)");
            return {bf.aux + pi / 2 - eps, bf.aux};
        }
        case Face::ObliqueLeft: {
            if (!(std::abs(bf.aux) < top)) throw FaceRangeError("oblique height outside (-(beta-pi/2), beta-pi/2)");
            return {bf.aux - pi / 2 + eps, bf.aux};
        }
        case Face::HorizTop: {
            if (!(std::abs(bf.aux) < pi / 2)) throw FaceRangeError("strip offset outside (-pi/2, pi/2)");
            return {top - eps + bf.aux, top - eps};
        }
        case Face::HorizBottom: {
            if (!(std::abs(bf.aux) < pi / 2)) throw FaceRangeError("strip offset outside (-pi/2, pi/2)");
            return {-top + eps + bf.aux, -top + eps};
        }
    }
    throw UnknownFace("invalid face enum");
}

inline Point point_from_plane(const BoundaryFace& bf, double im_z1, double log_sq) {
    const cplx z1(bf.x, im_z1);
    const cplx z2 = std::exp(log_sq / 2) * std::exp(cplx(0.0, 2 * pi * bf.theta));
    return {z1, z2};
}

/// Exact coordinates of a distinguished/topological boundary point.
inline Point face_point(const DomainParams& p, const BoundaryFace& bf) {
    if (!(bf.theta >= 0 && bf.theta < 1)) throw FaceRangeError("theta outside [0,1)");
    const auto [im, lg] = face_plane_coords(p, bf, 0.0);
    return point_from_plane(bf, im, lg);
}

/// Interior point at distance eps from the face along the inward normal.
inline Point face_interior_point(const DomainParams& p, const BoundaryFace& bf, double eps) {
    if (!(bf.theta >= 0 && bf.theta < 1)) throw FaceRangeError("theta outside [0,1)");
    if (!(eps > 0)) throw FaceRangeError("eps must be positive");
    const auto [im, lg] = face_plane_coords(p, bf, eps);
    return point_from_plane(bf, im, lg);
}

/// A boundary approach: interior pairs (w, z) retreating from a target face
/// pair along the inward normal, with strictly decreasing offsets.
struct ApproachPath {
    BoundaryFace target_w, target_z;
    std::vector<double> eps;
    std::vector<PointPair> points;
};

inline ApproachPath make_path(const DomainParams& p, const BoundaryFace& target_w,
                              const BoundaryFace& target_z, const std::vector<double>& eps) {
    if (eps.empty()) throw Error("make_path: empty eps list");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0)) throw Error("make_path: eps must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw Error("make_path: eps must be strictly decreasing");
    }
    ApproachPath path;
    path.target_w = target_w;
    path.target_z = target_z;
    path.eps = eps;
    path.points.reserve(eps.size());
    for (double e : eps) {
        const Point w = face_interior_point(p, target_w, e);
        const Point z = face_interior_point(p, target_z, e);
        if (!contains(p, w) || !contains(p, z)) {
            std::ostringstream os;
            os << "make_path: eps = " << e << " leaves the domain";
            throw PathLeavesDomain(os.str());
        }
        path.points.push_back({w.z1, w.z2, z.z1, z.z2});
    }
    return path;
}

} // namespace wormszego

#endif
