#ifndef WORMSZEGO_SERIES_HPP
#define WORMSZEGO_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>

#include "wormszego/domain.hpp"

namespace wormszego {

struct SeriesSum {
    cplx value{0.0, 0.0};
    double tail_bound = 0;
    int n_terms = 0;        // largest |j| summed
    bool converged = false;
};

/// Bilateral sum  sum_j a(j)  in the fixed order j = 0, +1, -1, +2, -2, ...
/// Stops at shell N once the geometric tail bound, formed from the empirical
/// decay ratio over the last five shells (capped at 0.95, and never below the
/// caller's known rate), times the last shell magnitude drops below tol.
/// Gives up at hard_cap shells (or 10x the predicted shell count, whichever
/// is smaller) and then reports converged = false with the honest bound.
template <class TermFn>
SeriesSum sum_bilateral(TermFn&& a, double tol, int n_predicted, int hard_cap = 400,
                        double known_ratio = 0.0) {
    SeriesSum s;
    s.value = a(0);
    std::deque<double> shells;
    shells.push_back(std::abs(s.value));
    const int stop = std::max(5, std::min(hard_cap, 10 * std::max(1, n_predicted)));
    for (int n = 1; n <= stop; ++n) {
        const cplx term = a(n) + a(-n);
        s.value += term;
        s.n_terms = n;
        shells.push_back(std::max(std::abs(a(n)), std::abs(a(-n))));
        if (shells.size() > 5) shells.pop_front();
        if (n < 5) continue;
        double ratio = 0;
        for (std::size_t i = 1; i < shells.size(); ++i) {
            if (shells[i - 1] > 0) ratio = std::max(ratio, shells[i] / shells[i - 1]);
            else if (shells[i] > 0) ratio = 1.0;
        }
        ratio = std::min(std::max(ratio, known_ratio), 0.95);
        // factor 2 absorbs shell-to-shell fluctuation around the fitted ratio
        s.tail_bound = 2 * shells.back() * ratio / (1 - ratio);
        if (s.tail_bound < tol) {
            s.converged = true;
            return s;
        }
    }
    // budget exhausted: recompute the bound with the known rate if the
    // empirical one was capped, so the report stays honest
    if (known_ratio > 0 && known_ratio < 1 && !shells.empty())
        s.tail_bound = std::max(s.tail_bound, shells.back() * known_ratio / (1 - known_ratio));
    return s;
}

/// Predicted shell count for a geometric series with the given ratio to reach
/// tol from the given scale.
inline int predict_terms(double scale, double ratio, double tol) {
    if (!(ratio > 0) || ratio >= 1) return 1 << 20;
    if (scale <= tol) return 1;
    return static_cast<int>(std::ceil(std::log(scale / tol) / -std::log(ratio))) + 1;
}

} // namespace wormszego

#endif
