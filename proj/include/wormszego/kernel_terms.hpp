#ifndef WORMSZEGO_KERNEL_TERMS_HPP
#define WORMSZEGO_KERNEL_TERMS_HPP

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "wormszego/domain.hpp"
#include "wormszego/errors.hpp"
#include "wormszego/quadrature.hpp"
#include "wormszego/series.hpp"

// Per-mode building blocks of the kernel. Writing tau = w1 - conj(z1) and
// lam = w2 conj(z2), the kernel is (1/8pi) sum_j lam^j I(j, tau) with
//
//   I(j, tau) = int_R e^{i tau xi} / (ch(pi xi) ch((2b-pi)(xi - j/2))) dxi.
//
// Shifting the contour to Im xi = sgn(Re tau) * h crosses exactly one pole
// row and splits I into a residue term plus a shifted line integral,
//   I(j, tau) = R(j, tau) + J(j, tau),
// and expanding both hyperbolic factors of J around their envelopes splits
// it further into a main part and three error integrals,
//   J(j, tau) = 4 e^{-tau h} (M - E1 - E2 + E3).
// The sums over j of R and of M have closed forms implemented below; the
// error integrals are evaluated by quadrature only.
//
// The *_weighted variants evaluate lam^j times the integral with the factor
// folded into the integrand's exponent. Near the annulus edges lam^j and the
// integral overflow and underflow separately long before their bounded
// product does, so the series assembly always goes through these.

namespace wormszego {

inline int sign_of(cplx tau) { return tau.real() >= 0 ? 1 : -1; }   // sgn(0) := +1

inline double sgn(double x) { return x >= 0 ? 1.0 : -1.0; }

/// (e^u - 1)/u with the removable singularity at u = 0 filled in.
inline cplx phi1(cplx u) {
    if (std::abs(u) < 1e-2)
        return 1.0 + u * (0.5 + u * (1.0 / 6 + u * (1.0 / 24 + u * (1.0 / 120 + u / 720.0))));
    return (std::exp(u) - 1.0) / u;
}

/// d/du of phi1.
inline cplx phi1_deriv(cplx u) {
    if (std::abs(u) < 1e-2)
        return 0.5 + u * (1.0 / 3 + u * (1.0 / 8 + u * (1.0 / 30 + u / 144.0)));
    return (std::exp(u) * (u - 1.0) + 1.0) / (u * u);
}

// ---------------------------------------------------------------------------
// Line integrals
// ---------------------------------------------------------------------------

namespace detail {

/// lam^j e^{i tau zeta} / (ch(pi zeta) ch((2b-pi)(zeta - j/2))) with every
/// exponential factor combined before a single exp call.
inline cplx mode_term_integrand(const DomainParams& p, int j, cplx tau, cplx llam, cplx zeta) {
    const double tb = 2 * p.beta - pi;
    const cplx z2 = zeta - 0.5 * j;
    const double s1 = sgn(zeta.real()), s2 = sgn(z2.real());
    const cplx ex = double(j) * llam + cplx(0, 1) * tau * zeta - s1 * pi * zeta - s2 * tb * z2;
    return 4.0 * std::exp(ex) /
           ((1.0 + std::exp(-2.0 * s1 * pi * zeta)) * (1.0 + std::exp(-2.0 * s2 * tb * z2)));
}

inline QuadResult mode_quad(const DomainParams& p, int j, cplx tau,
                            const std::function<cplx(double)>& f, double extra_decay = 0) {
    Integrand g;
    g.eval = f;
    g.decay_rate = 2 * p.beta - std::abs(tau.imag()) + extra_decay;
    if (!(g.decay_rate > 0)) throw Error("mode integral: |Im tau| >= 2 beta, no decay");
    g.osc_freq = std::abs(tau.real());
    g.kink_points = {0.0, 0.5 * j};
    return integrate_line(g, p.tol_quad);
}

inline cplx check_quad(const QuadResult& r, double tol, const char* what) {
    if (!r.converged && r.err_est > 100 * tol) {
        std::ostringstream os;
        os << what << ": quadrature error " << r.err_est << " exceeds tol " << tol;
        throw ToleranceNotMet(os.str());
    }
    return r.value;
}

} // namespace detail

/// lam^j I(j, tau), with llam = Log lam. deriv inserts i xi.
inline cplx mode_integral_weighted(const DomainParams& p, int j, cplx tau, cplx llam,
                                   bool deriv = false) {
    auto f = [&p, j, tau, llam, deriv](double xi) {
        const cplx v = detail::mode_term_integrand(p, j, tau, llam, xi);
        return deriv ? cplx(0, xi) * v : v;
    };
    return detail::check_quad(detail::mode_quad(p, j, tau, f), p.tol_quad, "mode_integral");
}

/// I(j, tau): the j-th mode line integral.
inline cplx mode_integral(const DomainParams& p, int j, cplx tau) {
    return mode_integral_weighted(p, j, tau, cplx(0, 0), false);
}

/// d/dtau I(j, tau): inserts i xi into the integrand.
inline cplx mode_integral_dtau(const DomainParams& p, int j, cplx tau) {
    return mode_integral_weighted(p, j, tau, cplx(0, 0), true);
}

// ---------------------------------------------------------------------------
// Poles and residues of g(zeta) = e^{i tau zeta} / (ch(pi zeta) ch((2b-pi)(zeta - j/2)))
// ---------------------------------------------------------------------------

struct PoleList {
    std::vector<cplx> poles;     // all poles with |Im zeta| <= window
    cplx res_upper;              // residue at zeta = j/2 + i nu/2
    cplx res_lower;              // residue at zeta = j/2 - i nu/2
};

inline cplx residue_at_first_row(const DomainParams& p, int j, cplx tau, int sign) {
    // res(g, j/2 +- i nu/2) = +- e^{i tau zeta0} / (i (2b-pi) ch(pi zeta0))
    const cplx zeta0(0.5 * j, sign * p.nu / 2);
    return double(sign) * std::exp(cplx(0, 1) * tau * zeta0) /
           (cplx(0, 1) * (2 * p.beta - pi) * std::cosh(pi * zeta0));
}

inline PoleList poles_and_residues(const DomainParams& p, int j, cplx tau, double window) {
    if (!(window > 0)) throw Error("poles_and_residues: window must be positive");
    PoleList out;
    // ch(pi zeta) = 0 at zeta = i(1/2 + k)
    for (long k = std::lround(std::floor(-window - 0.5)); 0.5 + k <= window; ++k)
        if (std::abs(0.5 + k) <= window) out.poles.emplace_back(0.0, 0.5 + k);
    // ch((2b-pi)(zeta - j/2)) = 0 at zeta = j/2 + i nu (1/2 + k)
    for (long k = std::lround(std::floor(-window / p.nu - 0.5)); p.nu * (0.5 + k) <= window; ++k)
        if (std::abs(p.nu * (0.5 + k)) <= window) out.poles.emplace_back(0.5 * j, p.nu * (0.5 + k));
    out.res_upper = residue_at_first_row(p, j, tau, +1);
    out.res_lower = residue_at_first_row(p, j, tau, -1);
    return out;
}

// ---------------------------------------------------------------------------
// Residue and contour terms
// ---------------------------------------------------------------------------

/// R(j, tau) with the contour on the side s: 2 nu e^{i tau zeta0}/ch(pi zeta0)
/// at zeta0 = j/2 + i s nu/2.
inline cplx mode_residue_signed(const DomainParams& p, int j, cplx tau, int s) {
    const cplx zeta0(0.5 * j, s * p.nu / 2);
    return 2.0 * p.nu * std::exp(cplx(0, 1) * tau * zeta0) / std::cosh(pi * zeta0);
}

inline cplx mode_residue(const DomainParams& p, int j, cplx tau) {
    return mode_residue_signed(p, j, tau, sign_of(tau));
}

inline cplx mode_residue_dtau(const DomainParams& p, int j, cplx tau) {
    const int s = sign_of(tau);
    const cplx zeta0(0.5 * j, s * p.nu / 2);
    return cplx(0, 1) * zeta0 * mode_residue_signed(p, j, tau, s);
}

/// lam^j J(j, tau) at contour height sgn(Re tau) h. deriv inserts i(xi + ish).
inline cplx mode_contour_weighted(const DomainParams& p, int j, cplx tau, cplx llam,
                                  bool deriv = false) {
    const double height = sign_of(tau) * p.h;
    auto f = [&p, j, tau, llam, height, deriv](double xi) {
        const cplx z(xi, height);
        const cplx v = detail::mode_term_integrand(p, j, tau, llam, z);
        return deriv ? cplx(0, 1) * z * v : v;
    };
    return detail::check_quad(detail::mode_quad(p, j, tau, f), p.tol_quad, "mode_contour");
}

/// J(j, tau) at an explicit contour height (the contour-invariance tests use
/// heights other than sgn(Re tau) h).
inline cplx mode_contour_at(const DomainParams& p, int j, cplx tau, double height) {
    auto f = [&p, j, tau, height](double xi) {
        return detail::mode_term_integrand(p, j, tau, cplx(0, 0), cplx(xi, height));
    };
    return detail::check_quad(detail::mode_quad(p, j, tau, f), p.tol_quad, "mode_contour");
}

inline cplx mode_contour(const DomainParams& p, int j, cplx tau) {
    return mode_contour_weighted(p, j, tau, cplx(0, 0), false);
}

inline cplx mode_contour_dtau(const DomainParams& p, int j, cplx tau) {
    return mode_contour_weighted(p, j, tau, cplx(0, 0), true);
}

// ---------------------------------------------------------------------------
// Main and error integrals of the contour term.
//
// For Re tau >= 0 and sigma(xi) = e^{-i sgn(xi) pi h - i sgn(xi - j/2)(2b-pi) h},
//   M  = int sigma e^{i tau xi} e^{-pi|xi| - (2b-pi)|xi - j/2|} dxi
//   E1 = same with the extra factor  u1/(1+u1),  u1 = e^{-2 sgn(xi) pi (xi + ih)}
//   E2 = same with                   u2/(1+u2),  u2 = e^{-2 sgn(xi-j/2)(2b-pi)(xi - j/2 + ih)}
//   E3 = same with both factors.
// The Re tau < 0 case is the conjugate of the mirrored arguments.
// ---------------------------------------------------------------------------

namespace detail {

inline cplx main_error_integrand(const DomainParams& p, int j, cplx tau, cplx llam, double xi,
                                 bool with_u1, bool with_u2) {
    const double tb = 2 * p.beta - pi;
    const double s1 = sgn(xi), s2 = sgn(xi - 0.5 * j);
    // sigma phase, plane envelope and lam^j joined in one exponent
    const cplx ex = double(j) * llam + cplx(0, 1) * tau * xi - pi * std::abs(xi) -
                    tb * std::abs(xi - 0.5 * j) + cplx(0, -(s1 * pi + s2 * tb) * p.h);
    cplx v = std::exp(ex);
    if (with_u1) {
        const cplx u1 = std::exp(-2.0 * s1 * pi * cplx(xi, p.h));
        v *= u1 / (1.0 + u1);
    }
    if (with_u2) {
        const cplx u2 = std::exp(-2.0 * s2 * tb * cplx(xi - 0.5 * j, p.h));
        v *= u2 / (1.0 + u2);
    }
    return v;
}

/// the u-fractions add their own tail decay on top of the plane envelope
inline double error_extra_decay(const DomainParams& p, bool with_u1, bool with_u2) {
    double extra = 0;
    if (with_u1) extra += 2 * pi;
    if (with_u2) extra += 2 * (2 * p.beta - pi);
    return extra;
}

template <class F>
inline cplx mirror_even(cplx tau, F&& eval_upper) {
    // f^-(tau) = conj(f^+(-conj tau)) for the Re tau < 0 branch
    if (sign_of(tau) > 0) return eval_upper(tau);
    return std::conj(eval_upper(-std::conj(tau)));
}

} // namespace detail

/// M(j, tau) by quadrature.
inline cplx mode_main(const DomainParams& p, int j, cplx tau) {
    return detail::mirror_even(tau, [&p, j](cplx t) {
        auto f = [&p, j, t](double xi) {
            return detail::main_error_integrand(p, j, t, cplx(0, 0), xi, false, false);
        };
        return detail::check_quad(detail::mode_quad(p, j, t, f), p.tol_quad, "mode_main");
    });
}

/// lam^j E^(k)(j, tau) by quadrature, k in {1,2,3}. deriv inserts i xi
/// (applied before the mirror, so the mirrored branch carries the chain-rule
/// sign).
inline cplx mode_error_weighted(const DomainParams& p, int k, int j, cplx tau, cplx llam,
                                bool deriv = false) {
    if (k < 1 || k > 3) throw Error("mode_error: k must be 1, 2 or 3");
    if (sign_of(tau) < 0) {
        const cplx m = mode_error_weighted(p, k, j, -std::conj(tau), std::conj(llam), deriv);
        return deriv ? -std::conj(m) : std::conj(m);
    }
    const bool u1 = k != 2, u2 = k != 1;
    auto f = [&p, j, tau, llam, u1, u2, deriv](double xi) {
        const cplx v = detail::main_error_integrand(p, j, tau, llam, xi, u1, u2);
        return deriv ? cplx(0, xi) * v : v;
    };
    return detail::check_quad(
        detail::mode_quad(p, j, tau, f, detail::error_extra_decay(p, u1, u2)), p.tol_quad,
        "mode_error");
}

inline cplx mode_error(const DomainParams& p, int k, int j, cplx tau) {
    return mode_error_weighted(p, k, j, tau, cplx(0, 0), false);
}

inline cplx mode_error_dtau(const DomainParams& p, int k, int j, cplx tau) {
    return mode_error_weighted(p, k, j, tau, cplx(0, 0), true);
}

/// Piecewise-exact value of M(j, tau) obtained by integrating each of the
/// three constant-phase segments of the envelope analytically.
inline cplx mode_main_closed(const DomainParams& p, int j, cplx tau) {
    return detail::mirror_even(tau, [&p, j](cplx t) -> cplx {
        const double b = p.beta, tb = 2 * b - pi, hh = p.h;
        const cplx it = cplx(0, 1) * t;
        const cplx e2 = std::exp(cplx(0, 2 * b * hh));
        const cplx em2 = std::exp(cplx(0, -2 * b * hh));
        if (j == 0) return e2 / (it + 2 * b) - em2 / (it - 2 * b);
        if (j > 0) {
            const cplx head = e2 * std::exp(-tb * 0.5 * j) / (it + 2 * b);
            const cplx mid = std::exp(cplx(0, 2 * (b - pi) * hh)) * std::exp(-tb * 0.5 * j) *
                             (0.5 * j) * phi1((it + 2 * b - 2 * pi) * (0.5 * j));
            const cplx tail = -em2 * std::exp((it - pi) * (0.5 * j)) / (it - 2 * b);
            return head + mid + tail;
        }
        const cplx head = e2 * std::exp((it + pi) * (0.5 * j)) / (it + 2 * b);
        const cplx mid = -std::exp(cplx(0, -2 * (b - pi) * hh)) * std::exp(tb * 0.5 * j) *
                         (0.5 * j) * phi1((it - 2 * b + 2 * pi) * (0.5 * j));
        const cplx tail = -em2 * std::exp(tb * 0.5 * j) / (it - 2 * b);
        return head + mid + tail;
    });
}

// ---------------------------------------------------------------------------
// Closed-form sum of the residue terms:
//   sum_j R(j, tau) lam^j
//     = 4 nu e^{-tau nu/2} [ e^{i pi nu/2}/(q+ - 1)
//                            + e^{-i pi nu/2} q- / (1 - q-)
//                            + 1/(2 ch(i pi nu/2))
//                            - E(tau, lam) ]
// with q+ = lam e^{(i tau + pi)/2}, q- = lam e^{(i tau - pi)/2}, and E the
// explicit correction series
//   E = sum_{m>0} e^{-3 i pi nu/2} (lam e^{(i tau - 3 pi)/2})^m / (1 + e^{-pi(m + i nu)})
//     + sum_{m>0} e^{+3 i pi nu/2} (e^{-(i tau + 3 pi)/2}/lam)^m / (1 + e^{-pi(m - i nu)}).
// Valid for Re tau >= 0; the other branch is the conjugate mirror.
// ---------------------------------------------------------------------------

struct ResidueSeriesSum {
    cplx total;
    cplx main_right;     // simple pole at lam = e^{-(i tau + pi)/2} (right oblique line)
    cplx main_left;      // simple pole at lam = e^{(pi - i tau)/2}  (left oblique line)
    cplx constant;       // the j = 0 residue contribution
    cplx error_series;   // explicit correction, bounded on the closed region
    double tail_bound = 0;
    int n_terms = 0;
};

namespace detail {

struct RsumBracket {
    cplx f1, f2, g, err;   // bracket parts, total = 4 nu e^{-tau nu/2} (f1+f2+g-err)
    cplx f1_dl, f2_dl, err_dl;   // lam d/dlam of each part
    double tail = 0;
    int n_terms = 0;
};

inline RsumBracket rsum_bracket(const DomainParams& p, cplx tau, cplx lam) {
    const cplx qp = lam * std::exp((cplx(0, 1) * tau + pi) / 2.0);
    const cplx qm = lam * std::exp((cplx(0, 1) * tau - pi) / 2.0);
    if (!(std::abs(qm) < 1))
        throw SeriesDiverged("residue_sum: |lam e^{(i tau - pi)/2}| >= 1 (outside the reduced domain)");
    if (!(std::abs(qp) > 1))
        throw SeriesDiverged("residue_sum: |lam e^{(i tau + pi)/2}| <= 1 (outside the reduced domain)");
    const cplx rot = std::exp(cplx(0, pi * p.nu / 2));

    RsumBracket r;
    r.f1 = rot / (qp - 1.0);
    r.f1_dl = -rot * qp / ((qp - 1.0) * (qp - 1.0));
    r.f2 = qm / (rot * (1.0 - qm));
    r.f2_dl = qm / (rot * (1.0 - qm) * (1.0 - qm));
    r.g = 1.0 / (2.0 * std::cos(pi * p.nu / 2));

    // correction series: geometric with explicitly bounded denominators
    const cplx a_pos = lam * std::exp((cplx(0, 1) * tau - 3 * pi) / 2.0);
    const cplx a_neg = std::exp(-(cplx(0, 1) * tau + 3 * pi) / 2.0) / lam;
    const double rate = std::max(std::abs(a_pos), std::abs(a_neg));
    if (!(rate < 1)) throw SeriesDiverged("residue_sum: correction series diverges");
    const cplx rot3 = std::exp(cplx(0, 3 * pi * p.nu / 2));
    cplx e{0, 0}, e_dl{0, 0};
    cplx pp = 1.0, pn = 1.0;
    const int n_pred = predict_terms(1.0, rate, p.tol_series);
    int m = 0;
    double term_mag = 0;
    for (m = 1; m <= std::max(8, 2 * n_pred); ++m) {
        pp *= a_pos;
        pn *= a_neg;
        const cplx tp = pp / (rot3 * (1.0 + std::exp(-pi * cplx(m, p.nu))));
        const cplx tn = rot3 * pn / (1.0 + std::exp(-pi * cplx(m, -p.nu)));
        e += tp + tn;
        e_dl += double(m) * tp - double(m) * tn;
        term_mag = std::max(std::abs(tp), std::abs(tn));
        if (term_mag < p.tol_series * (1 - rate) && m >= 4) break;
    }
    r.err = e;
    r.err_dl = e_dl;
    r.tail = term_mag * rate / (1 - rate);
    r.n_terms = m;
    return r;
}

} // namespace detail

inline ResidueSeriesSum residue_sum(const DomainParams& p, cplx tau, cplx lam) {
    const int s = sign_of(tau);
    if (s < 0) {
        ResidueSeriesSum m = residue_sum(p, -std::conj(tau), std::conj(lam));
        for (cplx* v : {&m.total, &m.main_right, &m.main_left, &m.constant, &m.error_series})
            *v = std::conj(*v);
        return m;
    }
    const auto br = detail::rsum_bracket(p, tau, lam);
    const cplx pref = 4.0 * p.nu * std::exp(-tau * p.nu / 2.0);
    ResidueSeriesSum out;
    out.main_right = pref * br.f1;
    out.main_left = pref * br.f2;
    out.constant = pref * br.g;
    out.error_series = -pref * br.err;
    out.total = out.main_right + out.main_left + out.constant + out.error_series;
    out.tail_bound = std::abs(pref) * br.tail;
    out.n_terms = br.n_terms;
    return out;
}

/// lam d/dlam of sum_j R(j, tau) lam^j = sum_j j R(j, tau) lam^j.
inline cplx residue_sum_lambda_deriv(const DomainParams& p, cplx tau, cplx lam) {
    if (sign_of(tau) < 0) return std::conj(residue_sum_lambda_deriv(p, -std::conj(tau), std::conj(lam)));
    const auto br = detail::rsum_bracket(p, tau, lam);
    return 4.0 * p.nu * std::exp(-tau * p.nu / 2.0) * (br.f1_dl + br.f2_dl - br.err_dl);
}

/// d/dtau of sum_j R(j, tau) lam^j. Every bracket term carries tau only
/// through e^{i j tau / 2}, so the tau derivative is (i/2) of the lambda
/// derivative plus the prefactor term.
inline cplx residue_sum_tau_deriv(const DomainParams& p, cplx tau, cplx lam) {
    if (sign_of(tau) < 0) return -std::conj(residue_sum_tau_deriv(p, -std::conj(tau), std::conj(lam)));
    return cplx(0, 0.5) * residue_sum_lambda_deriv(p, tau, lam) -
           (p.nu / 2.0) * residue_sum(p, tau, lam).total;
}

// ---------------------------------------------------------------------------
// Closed-form sum of the main terms:
//   4 e^{-tau h} sum_j M(j, tau) lam^j
// as eight explicit summands. The two prefactors with denominators
// i tau +- (2b - 2pi) are removable and evaluated through phi1.
// ---------------------------------------------------------------------------

struct MainTermSum {
    cplx total;
    std::array<cplx, 8> parts;   // summands inside 4 e^{-tau h} [ ... ]
    cplx psi1, psi2, psi3, psi4;
};

namespace detail {

struct MsumVars {
    cplx Dp, Dm, qp, qm, tp, tm, up, um, e2, em2, ep, epm;
};

inline MsumVars msum_vars(const DomainParams& p, cplx tau, cplx lam) {
    MsumVars v;
    const cplx it = cplx(0, 1) * tau;
    v.Dp = it + 2 * p.beta;
    v.Dm = it - 2 * p.beta;
    v.up = it + 2 * p.beta - 2 * pi;
    v.um = it - 2 * p.beta + 2 * pi;
    v.qp = lam * std::exp((it + pi) / 2.0);
    v.qm = lam * std::exp((it - pi) / 2.0);
    v.tp = lam * std::exp(p.beta - pi / 2);
    v.tm = lam * std::exp(-(p.beta - pi / 2));
    v.e2 = std::exp(cplx(0, 2 * p.beta * p.h));
    v.em2 = std::exp(cplx(0, -2 * p.beta * p.h));
    v.ep = std::exp(cplx(0, 2 * (p.beta - pi) * p.h));
    v.epm = std::exp(cplx(0, -2 * (p.beta - pi) * p.h));
    return v;
}

} // namespace detail

inline MainTermSum main_term_sum(const DomainParams& p, cplx tau, cplx lam) {
    if (sign_of(tau) < 0) {
        MainTermSum m = main_term_sum(p, -std::conj(tau), std::conj(lam));
        m.total = std::conj(m.total);
        for (auto& c : m.parts) c = std::conj(c);
        m.psi1 = std::conj(m.psi1);
        m.psi2 = std::conj(m.psi2);
        m.psi3 = std::conj(m.psi3);
        m.psi4 = std::conj(m.psi4);
        return m;
    }
    const auto v = detail::msum_vars(p, tau, lam);
    MainTermSum out;
    out.psi1 = v.e2 * v.tm;
    out.psi2 = -v.em2 * v.qm;
    out.psi3 = v.tm * v.ep * 0.5 * phi1(v.up / 2.0);
    out.psi4 = v.tp * v.epm * 0.5 * phi1(v.um / 2.0);
    out.parts = {
        v.e2 / v.Dp,
        -v.em2 / v.Dm,
        -v.e2 / (v.Dp * (1.0 - v.qp)),
        v.em2 / (v.Dm * (1.0 - v.tp)),
        out.psi1 / (v.Dp * (1.0 - v.tm)),
        out.psi2 / (v.Dm * (1.0 - v.qm)),
        out.psi3 / ((1.0 - v.qm) * (1.0 - v.tm)),
        out.psi4 / ((1.0 - v.tp) * (1.0 - v.qp)),
    };
    cplx sum{0, 0};
    for (const cplx& c : out.parts) sum += c;
    out.total = 4.0 * std::exp(-tau * p.h) * sum;
    return out;
}

/// d/dtau of 4 e^{-tau h} sum_j M(j, tau) lam^j.
inline cplx main_term_sum_tau_deriv(const DomainParams& p, cplx tau, cplx lam) {
    if (sign_of(tau) < 0) return -std::conj(main_term_sum_tau_deriv(p, -std::conj(tau), std::conj(lam)));
    const auto v = detail::msum_vars(p, tau, lam);
    const cplx i{0, 1};
    const cplx psi1 = v.e2 * v.tm;
    const cplx psi2 = -v.em2 * v.qm;
    const cplx psi3 = v.tm * v.ep * 0.5 * phi1(v.up / 2.0);
    const cplx psi4 = v.tp * v.epm * 0.5 * phi1(v.um / 2.0);
    const cplx dpsi2 = -v.em2 * (i / 2.0) * v.qm;
    const cplx dpsi3 = v.tm * v.ep * 0.5 * phi1_deriv(v.up / 2.0) * (i / 2.0);
    const cplx dpsi4 = v.tp * v.epm * 0.5 * phi1_deriv(v.um / 2.0) * (i / 2.0);

    const cplx one_qp = 1.0 - v.qp, one_qm = 1.0 - v.qm, one_tp = 1.0 - v.tp, one_tm = 1.0 - v.tm;
    cplx d{0, 0};
    d += -i * v.e2 / (v.Dp * v.Dp);
    d += i * v.em2 / (v.Dm * v.Dm);
    d += -v.e2 * (-i / (v.Dp * v.Dp * one_qp) + (i / 2.0) * v.qp / (v.Dp * one_qp * one_qp));
    d += v.em2 * (-i) / (v.Dm * v.Dm * one_tp);
    d += psi1 * (-i) / (v.Dp * v.Dp * one_tm);
    d += dpsi2 / (v.Dm * one_qm) +
         psi2 * (-i / (v.Dm * v.Dm * one_qm) + (i / 2.0) * v.qm / (v.Dm * one_qm * one_qm));
    d += dpsi3 / (one_qm * one_tm) + psi3 * (i / 2.0) * v.qm / (one_qm * one_qm * one_tm);
    d += dpsi4 / (one_tp * one_qp) + psi4 * (i / 2.0) * v.qp / (one_tp * one_qp * one_qp);

    cplx sum{0, 0};
    for (const cplx& c : main_term_sum(p, tau, lam).parts) sum += c;
    return 4.0 * std::exp(-tau * p.h) * (d - p.h * sum);
}

/// lam d/dlam of 4 e^{-tau h} sum_j M(j, tau) lam^j = 4 e^{-tau h} sum_j j M(j,tau) lam^j.
inline cplx main_term_sum_lambda_deriv(const DomainParams& p, cplx tau, cplx lam) {
    if (sign_of(tau) < 0) return std::conj(main_term_sum_lambda_deriv(p, -std::conj(tau), std::conj(lam)));
    const auto v = detail::msum_vars(p, tau, lam);
    const cplx psi1 = v.e2 * v.tm;
    const cplx psi2 = -v.em2 * v.qm;
    const cplx psi3 = v.tm * v.ep * 0.5 * phi1(v.up / 2.0);
    const cplx psi4 = v.tp * v.epm * 0.5 * phi1(v.um / 2.0);
    const cplx one_qp = 1.0 - v.qp, one_qm = 1.0 - v.qm, one_tp = 1.0 - v.tp, one_tm = 1.0 - v.tm;
    cplx d{0, 0};
    d += -v.e2 * v.qp / (v.Dp * one_qp * one_qp);
    d += v.em2 * v.tp / (v.Dm * one_tp * one_tp);
    d += psi1 / (v.Dp * one_tm * one_tm);
    d += psi2 / (v.Dm * one_qm * one_qm);
    d += psi3 / (one_qm * one_tm) * (1.0 + v.qm / one_qm + v.tm / one_tm);
    d += psi4 / (one_tp * one_qp) * (1.0 + v.qp / one_qp + v.tp / one_tp);
    return 4.0 * std::exp(-tau * p.h) * d;
}

} // namespace wormszego

#endif
