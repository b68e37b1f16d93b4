#ifndef WORMSZEGO_SZEGO_HPP
#define WORMSZEGO_SZEGO_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "wormszego/domain.hpp"
#include "wormszego/errors.hpp"
#include "wormszego/fit.hpp"
#include "wormszego/kernel_terms.hpp"
#include "wormszego/series.hpp"

// Assembly of the kernel K(w,z) = (1/8pi) sum_j lam^j I(j, tau) by two
// independent routes, its first derivatives, and the explicit leading term
// of its large-|Re tau| expansion.

namespace wormszego {

enum class Route { DirectSeries, ResiduePlusContour };

struct KernelValue {
    cplx value{0, 0};
    int n_terms = 0;        // largest |j| summed on the reported route
    double tail_bound = 0;  // series tail + accumulated quadrature error
    Route route = Route::DirectSeries;
};

struct LeadingTerm {
    cplx value;
    cplx part_right;    // simple pole on the right oblique boundary line
    cplx part_left;     // simple pole on the left oblique boundary line
    cplx part_const;
    cplx part_error;    // explicit bounded correction series
    cplx prefactor;     // e^{-sgn(Re tau) tau nu / 2}
    double err_est = 0;
};

namespace detail {

// series budget knobs
inline constexpr int kDirectCap = 160;
inline constexpr int kDirectCapNearPole = 320;
inline constexpr int kContourSwitch = 140;  // per-mode contour sums above this go closed-form
inline constexpr int kErrorSumCap = 200;

struct RouteEval {
    cplx value{0, 0};
    double tail = 0;
    int n_terms = 0;
    bool converged = true;
};

inline double series_ratio(const DomainParams& p, cplx tau, cplx lam) {
    const auto [ms, ma] = reduced_margins(p, tau, lam);
    return std::exp(-0.5 * std::min(ms, ma));
}

/// Shell budget for the truncated error-term series. When the predicted
/// count is unaffordable the cap is tied to the decay rate so that the
/// truncated fraction e^{-N |ln r|} stays constant along an approach path;
/// a cap frozen in absolute terms would bend measured blow-up slopes.
inline int error_sum_cap(double ratio, int n_pred) {
    if (n_pred <= kErrorSumCap) return kErrorSumCap;
    const double lnr = -std::log(ratio);
    if (!(lnr > 0)) return kErrorSumCap;
    return std::clamp(static_cast<int>(0.3 / lnr), 8, 600);
}

/// Smallest of the four main denominator magnitudes; below 1e-3 the series
/// caps are raised and tail bounds reported enlarged instead of failing.
inline double min_denominator(const DomainParams& p, cplx tau, cplx lam) {
    const cplx it = cplx(0, 1) * tau;
    const double d1 = std::abs(1.0 - lam * std::exp((it + pi) / 2.0));
    const double d2 = std::abs(1.0 - lam * std::exp((it - pi) / 2.0));
    const double d3 = std::abs(1.0 - lam * std::exp(p.beta - pi / 2));
    const double d4 = std::abs(1.0 - lam * std::exp(-(p.beta - pi / 2)));
    return std::min(std::min(d1, d2), std::min(d3, d4));
}

inline RouteEval direct_route(const DomainParams& p, cplx tau, cplx lam, int cap) {
    const double r = series_ratio(p, tau, lam);
    const int n_pred = predict_terms(1.0, r, p.tol_series);
    const cplx llam = std::log(lam);
    auto term = [&](int j) { return mode_integral_weighted(p, j, tau, llam) / (8 * pi); };
    const SeriesSum s = sum_bilateral(term, p.tol_series, n_pred, cap, r);
    return {s.value, s.tail_bound + (2.0 * s.n_terms + 1) * p.tol_quad / (8 * pi), s.n_terms,
            s.converged};
}

/// Residue-plus-contour route: closed-form residue sum plus the contour
/// remainder. The remainder is summed mode by mode while that converges
/// within budget; otherwise its main part is replaced by the closed-form
/// mode-main sum and only the three error-term series are truncated, with
/// the truncation reported in the tail bound.
inline RouteEval rpc_route(const DomainParams& p, cplx tau, cplx lam) {
    const double r = series_ratio(p, tau, lam);
    const int n_pred = predict_terms(1.0, r, p.tol_series);
    const cplx llam = std::log(lam);
    const ResidueSeriesSum rs = residue_sum(p, tau, lam);
    RouteEval out;
    out.value = rs.total / (8 * pi);
    out.tail = rs.tail_bound / (8 * pi);
    if (n_pred <= kContourSwitch) {
        auto term = [&](int j) { return mode_contour_weighted(p, j, tau, llam) / (8 * pi); };
        const SeriesSum s = sum_bilateral(term, p.tol_series, n_pred, kContourSwitch, r);
        out.value += s.value;
        out.tail += s.tail_bound + (2.0 * s.n_terms + 1) * p.tol_quad / (8 * pi);
        out.n_terms = s.n_terms;
        out.converged = s.converged;
        return out;
    }
    const cplx pref = 4.0 * std::exp(-double(sign_of(tau)) * tau * p.h) / (8 * pi);
    out.value += main_term_sum(p, tau, lam).total / (8 * pi);
    const int cap_e = error_sum_cap(r, n_pred);
    for (int k = 1; k <= 3; ++k) {
        auto term = [&](int j) { return mode_error_weighted(p, k, j, tau, llam); };
        const SeriesSum s = sum_bilateral(term, p.tol_series, n_pred, cap_e, r);
        out.value += (k == 3 ? 1.0 : -1.0) * pref * s.value;
        out.tail += std::abs(pref) * (s.tail_bound + (2.0 * s.n_terms + 1) * p.tol_quad);
        out.n_terms = std::max(out.n_terms, s.n_terms);
        out.converged = out.converged && s.converged;
    }
    return out;
}

inline RouteEval rpc_with_seam(const DomainParams& p, cplx tau, cplx lam) {
    RouteEval e = rpc_route(p, tau, lam);
    if (tau.real() == 0.0 && lam.imag() != 0.0) {
        // Re tau = 0 sits on the branch seam; evaluate the mirrored branch
        // and average when the two agree, flag via the tail bound otherwise.
        RouteEval m = rpc_route(p, tau, std::conj(lam));
        const cplx mv = std::conj(m.value);
        const double diff = std::abs(e.value - mv);
        if (diff < 1e-9 * std::max(1.0, std::abs(e.value)))
            e.value = 0.5 * (e.value + mv);
        else
            e.tail += diff;
        e.tail = std::max(e.tail, m.tail);
    }
    return e;
}

inline void require_interior(const DomainParams& p, const PointPair& pr) {
    for (const auto& [pt, name] : {std::pair{pr.w(), "w"}, std::pair{pr.z(), "z"}}) {
        const std::string why = containment_violation(p, pt);
        if (!why.empty()) throw OutsideDomain(std::string(name) + " outside domain: " + why);
    }
}

} // namespace detail

/// Kernel value in the reduced variables. Both routes are evaluated and
/// cross-checked; the one with the smaller error bound is reported.
inline KernelValue kernel_reduced(const DomainParams& p, cplx tau, cplx lam) {
    if (lam == cplx(0, 0)) {
        // only the j = 0 mode survives
        return {mode_integral(p, 0, tau) / (8 * pi), 0, 2 * p.tol_quad, Route::DirectSeries};
    }
    if (!reduced_in_domain(p, tau, lam))
        throw OutsideDomain("reduced pair (tau, lam) outside the kernel's convergence region");

    const bool near_pole = detail::min_denominator(p, tau, lam) < 1e-3;
    const int cap = near_pole ? detail::kDirectCapNearPole : detail::kDirectCap;
    const double r = detail::series_ratio(p, tau, lam);
    const int n_pred = predict_terms(1.0, r, p.tol_series);

    const detail::RouteEval rpc = detail::rpc_with_seam(p, tau, lam);
    if (n_pred > 2 * detail::kDirectCapNearPole) {
        // the direct series cannot reach tolerance at any sane budget here;
        // the cross-check would be vacuous, so spend nothing on it
        return {rpc.value, rpc.n_terms, rpc.tail, Route::ResiduePlusContour};
    }
    const detail::RouteEval dir = detail::direct_route(p, tau, lam, cap);

    const double agree = 2 * (dir.tail + rpc.tail + p.tol_series) + 1e-13 * std::abs(dir.value);
    if (std::abs(dir.value - rpc.value) > agree) {
        std::ostringstream os;
        os << "kernel routes disagree: direct " << dir.value << " vs residue+contour " << rpc.value
           << " beyond combined tolerance " << agree;
        throw ToleranceNotMet(os.str());
    }
    if (dir.converged && dir.tail <= rpc.tail)
        return {dir.value, dir.n_terms, dir.tail, Route::DirectSeries};
    return {rpc.value, rpc.n_terms, rpc.tail, Route::ResiduePlusContour};
}

inline KernelValue kernel(const DomainParams& p, const PointPair& pr) {
    detail::require_interior(p, pr);
    const TauLambda tl = reduce(p, pr);
    return kernel_reduced(p, tl.tau, tl.lam);
}

/// Both route evaluations side by side (for reporting; kernel() already
/// cross-checks them). Near a singular configuration the direct series may
/// come back unconverged with an enlarged tail bound.
struct RoutePair {
    KernelValue direct;
    KernelValue rpc;
};

inline RoutePair kernel_routes(const DomainParams& p, cplx tau, cplx lam) {
    if (!reduced_in_domain(p, tau, lam))
        throw OutsideDomain("kernel_routes: reduced pair outside the convergence region");
    const bool near_pole = detail::min_denominator(p, tau, lam) < 1e-3;
    const detail::RouteEval dir = detail::direct_route(
        p, tau, lam, near_pole ? detail::kDirectCapNearPole : detail::kDirectCap);
    const detail::RouteEval rpc = detail::rpc_with_seam(p, tau, lam);
    return {{dir.value, dir.n_terms, dir.tail, Route::DirectSeries},
            {rpc.value, rpc.n_terms, rpc.tail, Route::ResiduePlusContour}};
}

enum class Var { W1, W2, Z1Bar, Z2Bar };

inline const char* var_name(Var v) {
    switch (v) {
        case Var::W1: return "w1";
        case Var::W2: return "w2";
        case Var::Z1Bar: return "conj-z1";
        case Var::Z2Bar: return "conj-z2";
    }
    return "?";
}

namespace detail {

/// sum_j lam^j dI/dtau (tau-group) or sum_j j lam^j I (lambda-group), each by
/// the better of the two routes.
struct DerivEval {
    cplx value{0, 0};
    double err_est = 0;
};

inline DerivEval derivative_series(const DomainParams& p, cplx tau, cplx lam, bool tau_group) {
    const double r = series_ratio(p, tau, lam);
    const int n_pred = predict_terms(1.0, r, p.tol_series);
    const bool near_pole = min_denominator(p, tau, lam) < 1e-3;
    const cplx llam = std::log(lam);

    // residue part in closed form
    cplx rpc = tau_group ? residue_sum_tau_deriv(p, tau, lam) : residue_sum_lambda_deriv(p, tau, lam);
    double rpc_tail = 0;
    if (n_pred <= kContourSwitch) {
        auto term = [&](int j) {
            return tau_group ? mode_contour_weighted(p, j, tau, llam, true)
                             : double(j) * mode_contour_weighted(p, j, tau, llam);
        };
        const SeriesSum s = sum_bilateral(term, p.tol_series, n_pred, kContourSwitch, r);
        rpc += s.value;
        rpc_tail = s.tail_bound + (2.0 * s.n_terms + 1) * p.tol_quad;
    } else {
        const int s_of = sign_of(tau);
        const cplx pref = 4.0 * std::exp(-double(s_of) * tau * p.h);
        rpc += tau_group ? main_term_sum_tau_deriv(p, tau, lam) : main_term_sum_lambda_deriv(p, tau, lam);
        const int cap_e = error_sum_cap(r, n_pred);
        for (int k = 1; k <= 3; ++k) {
            auto term = [&](int j) {
                if (tau_group)
                    return mode_error_weighted(p, k, j, tau, llam, true) -
                           double(s_of) * p.h * mode_error_weighted(p, k, j, tau, llam);
                return double(j) * mode_error_weighted(p, k, j, tau, llam);
            };
            const SeriesSum s = sum_bilateral(term, p.tol_series, n_pred, cap_e, r);
            rpc += (k == 3 ? 1.0 : -1.0) * pref * s.value;
            rpc_tail += std::abs(pref) * (s.tail_bound + 2.0 * (2.0 * s.n_terms + 1) * p.tol_quad);
        }
    }
    if (n_pred > 2 * kDirectCapNearPole) return {rpc, rpc_tail};

    auto term = [&](int j) {
        return tau_group ? mode_integral_weighted(p, j, tau, llam, true)
                         : double(j) * mode_integral_weighted(p, j, tau, llam);
    };
    const SeriesSum dir =
        sum_bilateral(term, p.tol_series, n_pred, near_pole ? kDirectCapNearPole : kDirectCap, r);
    const double dir_tail = dir.tail_bound + (2.0 * dir.n_terms + 1) * p.tol_quad;
    if (dir.converged && dir_tail <= rpc_tail) return {dir.value, dir_tail};
    return {rpc, rpc_tail};
}

} // namespace detail

/// Derivative of the kernel with respect to one of the holomorphic (w) or
/// anti-holomorphic (z) coordinates, via term-by-term differentiation of the
/// mode series: d/dw1 inserts i xi, d/dw2 maps lam^j to j w2^{j-1} conj(z2)^j.
struct DerivValue {
    cplx value{0, 0};
    double err_est = 0;
};

inline DerivValue kernel_derivative_reduced_est(const DomainParams& p, Var var, cplx tau, cplx w2,
                                                cplx z2b) {
    const cplx lam = w2 * z2b;
    switch (var) {
        case Var::W1:
        case Var::Z1Bar: {
            detail::DerivEval d;
            if (lam == cplx(0, 0))
                d = {mode_integral_dtau(p, 0, tau), 2 * p.tol_quad};   // only j = 0 survives
            else
                d = detail::derivative_series(p, tau, lam, true);
            return {(var == Var::W1 ? d.value : -d.value) / (8 * pi), d.err_est / (8 * pi)};
        }
        case Var::W2:
        case Var::Z2Bar: {
            if (lam == cplx(0, 0)) {
                // sum_j j w2^{j-1} z2b^j I(j): only j = 1 survives at w2 = 0
                if (var == Var::W2 && w2 == cplx(0, 0))
                    return {z2b * mode_integral(p, 1, tau) / (8 * pi), 2 * p.tol_quad};
                if (var == Var::Z2Bar && z2b == cplx(0, 0))
                    return {w2 * mode_integral(p, 1, tau) / (8 * pi), 2 * p.tol_quad};
                return {cplx(0, 0), 0.0};   // the other factor vanished; every term has it
            }
            const detail::DerivEval l = detail::derivative_series(p, tau, lam, false);
            const double denom = 8 * pi * std::abs(var == Var::W2 ? w2 : z2b);
            return {l.value / (8 * pi * (var == Var::W2 ? w2 : z2b)), l.err_est / denom};
        }
    }
    throw Error("kernel_derivative_reduced: bad variable");
}

inline cplx kernel_derivative_reduced(const DomainParams& p, Var var, cplx tau, cplx w2, cplx z2b) {
    return kernel_derivative_reduced_est(p, var, tau, w2, z2b).value;
}

inline DerivValue kernel_derivative_est(const DomainParams& p, Var var, const PointPair& pr) {
    detail::require_interior(p, pr);
    const TauLambda tl = reduce(p, pr);
    return kernel_derivative_reduced_est(p, var, tl.tau, pr.w2, std::conj(pr.z2));
}

inline cplx kernel_derivative(const DomainParams& p, Var var, const PointPair& pr) {
    return kernel_derivative_est(p, var, pr).value;
}

/// Explicit leading part of the kernel: the closed-form residue sum scaled by
/// 1/(8 pi), exposed with its singular-part attribution. Everything not in
/// here is the contour remainder, which carries the e^{-tau h} prefactor.
inline LeadingTerm leading_term(const DomainParams& p, cplx tau, cplx lam) {
    if (!reduced_in_domain(p, tau, lam))
        throw OutsideDomain("leading_term: reduced pair outside the convergence region");
    const ResidueSeriesSum rs = residue_sum(p, tau, lam);
    LeadingTerm lt;
    lt.value = rs.total / (8 * pi);
    lt.part_right = rs.main_right / (8 * pi);
    lt.part_left = rs.main_left / (8 * pi);
    lt.part_const = rs.constant / (8 * pi);
    lt.part_error = rs.error_series / (8 * pi);
    lt.prefactor = std::exp(-double(sign_of(tau)) * tau * p.nu / 2.0);
    lt.err_est = rs.tail_bound / (8 * pi);
    return lt;
}

inline LeadingTerm leading_term(const DomainParams& p, const PointPair& pr) {
    detail::require_interior(p, pr);
    const TauLambda tl = reduce(p, pr);
    return leading_term(p, tl.tau, tl.lam);
}

namespace detail {

inline void check_decay_path(const std::vector<PointPair>& path, const DomainParams& p) {
    if (path.size() < 6) throw Error("decay fit: need at least 6 points");
    double lo = 1e300, hi = 0;
    for (const auto& pr : path) {
        const double re = std::abs(reduce(p, pr).tau.real());
        lo = std::min(lo, re);
        hi = std::max(hi, re);
    }
    if (!(hi >= 4 * lo)) throw Error("decay fit: |Re tau| must span at least a factor of 4");
}

} // namespace detail

/// Slope of log|K - leading| against Re tau along a sweep with fixed
/// imaginary configuration. The remainder carries the e^{-tau h} prefactor,
/// so -h bounds the slope from above.
inline ExponentFit remainder_decay(const DomainParams& p, const std::vector<PointPair>& path) {
    detail::check_decay_path(path, p);
    std::vector<double> xs, ys;
    for (const auto& pr : path) {
        const TauLambda tl = reduce(p, pr);
        const cplx k = kernel_reduced(p, tl.tau, tl.lam).value;
        const cplx l = leading_term(p, tl.tau, tl.lam).value;
        xs.push_back(tl.tau.real());
        ys.push_back(std::log(std::abs(k - l)));
    }
    const ExponentFit f = linear_fit(xs, ys);
    if (f.residual_rms > 0.5) throw FitUnstable("remainder_decay: regression residual too large");
    return f;
}

/// Slope of log|leading| against Re tau on the same kind of sweep; the
/// leading part decays at rate nu/2.
inline ExponentFit leading_decay(const DomainParams& p, const std::vector<PointPair>& path) {
    detail::check_decay_path(path, p);
    std::vector<double> xs, ys;
    for (const auto& pr : path) {
        const TauLambda tl = reduce(p, pr);
        xs.push_back(tl.tau.real());
        ys.push_back(std::log(std::abs(leading_term(p, tl.tau, tl.lam).value)));
    }
    const ExponentFit f = linear_fit(xs, ys);
    if (f.residual_rms > 0.5) throw FitUnstable("leading_decay: regression residual too large");
    return f;
}

} // namespace wormszego

#endif
