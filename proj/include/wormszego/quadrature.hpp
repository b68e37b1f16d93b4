#ifndef WORMSZEGO_QUADRATURE_HPP
#define WORMSZEGO_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <set>
#include <vector>

#include "wormszego/domain.hpp"
#include "wormszego/errors.hpp"

namespace wormszego {

/// A complex-valued integrand on the real line with a known exponential
/// envelope C e^{-decay_rate |xi|} (used for truncation), a dominant
/// oscillation frequency (|Re tau| of the e^{i tau xi} factor), and the
/// points where the envelope slope changes.
struct Integrand {
    std::function<cplx(double)> eval;
    double decay_rate = 0;
    double osc_freq = 0;
    std::vector<double> kink_points;
};

struct QuadResult {
    cplx value{0.0, 0.0};
    double err_est = 0;
    double truncation_radius = 0;
    long evals = 0;
    bool converged = true;
};

/// Smallest T with magnitude_scale * e^{-decay_rate T} / decay_rate <= tol/4,
/// so that each envelope tail stays below a quarter of the error budget.
inline double truncation_radius(double decay_rate, double magnitude_scale, double tol) {
    if (!(decay_rate > 0)) throw NoDecay("truncation_radius: decay_rate must be positive");
    if (!(tol > 0)) throw Error("truncation_radius: tol must be positive");
    const double t = std::log(4 * magnitude_scale / (decay_rate * tol)) / decay_rate;
    return std::max(t, 1.0);
}

namespace detail {

// Gauss-Kronrod 15(7) nodes and weights on [-1,1] (QUADPACK dqk15).
inline constexpr double gk_x[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
inline constexpr double gk_wk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
inline constexpr double gk_wg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct Panel {
    double a, b;
    cplx value;
    double err;
};

inline Panel gk15(const std::function<cplx(double)>& f, double a, double b, long& evals) {
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    cplx k15{0.0, 0.0}, g7{0.0, 0.0};
    for (int i = 0; i < 8; ++i) {
        cplx s;
        if (i == 7) {
            s = f(c);
            ++evals;
        } else {
            s = f(c - hw * gk_x[i]) + f(c + hw * gk_x[i]);
            evals += 2;
        }
        k15 += gk_wk[i] * s;
        if (i % 2 == 1) g7 += gk_wg[i / 2] * s;
    }
    k15 *= hw;
    g7 *= hw;
    return {a, b, k15, std::abs(k15 - g7)};
}

struct PanelOrder {
    bool operator()(const Panel& p, const Panel& q) const {
        if (p.err != q.err) return p.err > q.err;
        return p.a < q.a;   // deterministic tie-break
    }
};

/// Adaptive refinement over pre-built segments; fills value/err/evals.
inline void adapt(const std::function<cplx(double)>& f, const std::vector<double>& edges,
                  double osc_freq, double tol, QuadResult& out, int max_panels) {
    std::multiset<Panel, PanelOrder> panels;
    double width_cap = osc_freq > 0 ? std::min(2.0, (2 * pi / osc_freq) / 4.0) : 2.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i];
        const double b = edges[i + 1];
        if (!(b > a)) continue;
        const int nsub = std::max(1, static_cast<int>(std::ceil((b - a) / width_cap)));
        const double step = (b - a) / nsub;
        for (int k = 0; k < nsub; ++k)
            panels.insert(gk15(f, a + k * step, a + (k + 1) * step, out.evals));
    }
    double err_sum = 0;
    for (const auto& p : panels) err_sum += p.err;
    while (err_sum > tol && static_cast<int>(panels.size()) < max_panels) {
        auto worst = panels.begin();
        if (worst->err <= 1e-300 || (worst->b - worst->a) < 1e-13 * (edges.back() - edges.front()))
            break;   // cannot refine further
        const Panel p = *worst;
        panels.erase(worst);
        err_sum -= p.err;
        const double m = 0.5 * (p.a + p.b);
        const Panel left = gk15(f, p.a, m, out.evals);
        const Panel right = gk15(f, m, p.b, out.evals);
        err_sum += left.err + right.err;
        panels.insert(left);
        panels.insert(right);
    }
    cplx v{0.0, 0.0};
    double e = 0;
    for (const auto& p : panels) {
        v += p.value;
        e += p.err;
    }
    out.value += v;
    out.err_est += e;
    out.converged = out.converged && (e <= tol);
}

} // namespace detail

/// Integral of f over a finite interval [a, b]. No truncation step; kinks
/// inside the interval become segment boundaries.
inline QuadResult integrate_segment(const Integrand& f, double a, double b, double tol,
                                    int max_panels = 4000) {
    if (!(tol > 0)) throw Error("integrate_segment: tol must be positive");
    QuadResult out;
    std::vector<double> edges{a, b};
    for (double k : f.kink_points)
        if (k > a && k < b) edges.push_back(k);
    std::sort(edges.begin(), edges.end());
    detail::adapt(f.eval, edges, f.osc_freq, tol, out, max_panels);
    out.truncation_radius = b - a;
    return out;
}

/// Error-controlled integral of f over the whole real line. The line is
/// truncated where the exponential envelope drops below tol/4 on each side
/// (half the budget), the rest goes to adaptive panel refinement. The result
/// carries an honest error estimate even when the panel budget runs out;
/// callers decide whether err_est > tol is fatal.
inline QuadResult integrate_line(const Integrand& f, double tol, int max_panels = 4000) {
    if (!(tol > 0)) throw Error("integrate_line: tol must be positive");
    std::vector<double> kinks = f.kink_points;
    if (kinks.empty()) kinks.push_back(0.0);
    std::sort(kinks.begin(), kinks.end());

    kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());

    QuadResult out;
    // envelope scale from probes at kinks and midpoints
    double scale = 0;
    std::vector<double> probes = kinks;
    for (std::size_t i = 0; i + 1 < kinks.size(); ++i) probes.push_back(0.5 * (kinks[i] + kinks[i + 1]));
    probes.push_back(kinks.front() - 0.5);
    probes.push_back(kinks.back() + 0.5);
    for (double x : probes) {
        scale = std::max(scale, std::abs(f.eval(x)));
        ++out.evals;
    }
    if (scale == 0) scale = 1e-300;

    // initial radius from the envelope formula, then extend until the
    // measured edge values put both tails below budget
    double T = truncation_radius(f.decay_rate, scale, tol);
    double tail = 0;
    for (int iter = 0;; ++iter) {
        tail = (std::abs(f.eval(kinks.front() - T)) + std::abs(f.eval(kinks.back() + T))) /
               f.decay_rate;
        out.evals += 2;
        if (tail <= tol / 4 || iter >= 10) break;
        T *= 1.4;
    }
    out.truncation_radius = T;
    std::vector<double> edges;
    edges.push_back(kinks.front() - T);
    for (double k : kinks) {
        // graded panels around each kink seed the refinement where the
        // integrands of interest have their peaks
        for (double off : {-0.5, -0.2, -0.05, 0.0, 0.05, 0.2, 0.5}) edges.push_back(k + off);
    }
    edges.push_back(kinks.back() + T);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [&](double e) {
                                   return e < kinks.front() - T || e > kinks.back() + T;
                               }),
                edges.end());

    detail::adapt(f.eval, edges, f.osc_freq, tol / 2, out, max_panels);
    out.err_est += tail;
    out.converged = out.converged && tail <= tol / 2;
    return out;
}

} // namespace wormszego

#endif
