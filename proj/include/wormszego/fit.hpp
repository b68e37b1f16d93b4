#ifndef WORMSZEGO_FIT_HPP
#define WORMSZEGO_FIT_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "wormszego/errors.hpp"

namespace wormszego {

/// Result of a least-squares line fit y = slope*x + intercept.
struct ExponentFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;          // coefficient of determination
    double residual_rms = 0;
    int n_points = 0;
};

inline ExponentFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw FitUnstable("linear_fit: need at least 2 matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300) throw FitUnstable("linear_fit: degenerate abscissae");
    ExponentFit f;
    f.n_points = static_cast<int>(n);
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / n;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += r * r;
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    f.residual_rms = std::sqrt(ss_res / n);
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

/// Two-regressor fit y = o1*x1 + o2*x2 + c (normal equations, 3x3).
struct TwoFactorFit {
    double o1 = 0, o2 = 0, intercept = 0;
    double residual_rms = 0;
    int n_points = 0;
};

inline TwoFactorFit two_factor_fit(const std::vector<double>& x1, const std::vector<double>& x2,
                                   const std::vector<double>& y) {
    const std::size_t n = y.size();
    if (n < 4 || x1.size() != n || x2.size() != n)
        throw FitUnstable("two_factor_fit: need at least 4 matching points");
    double a[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double b[3] = {0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        const double row[3] = {1.0, x1[i], x2[i]};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) a[r][c] += row[r] * row[c];
            b[r] += row[r] * y[i];
        }
    }
    // Gaussian elimination with partial pivoting
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300) throw FitUnstable("two_factor_fit: collinear regressors");
        if (piv != col) {
            for (int c = 0; c < 3; ++c) std::swap(a[col][c], a[piv][c]);
            std::swap(b[col], b[piv]);
            std::swap(perm[col], perm[piv]);
        }
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    double sol[3];
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 3; ++c) s -= a[r][c] * sol[c];
        sol[r] = s / a[r][r];
    }
    TwoFactorFit f;
    f.intercept = sol[0];
    f.o1 = sol[1];
    f.o2 = sol[2];
    f.n_points = static_cast<int>(n);
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.o1 * x1[i] + f.o2 * x2[i]);
        ss += r * r;
    }
    f.residual_rms = std::sqrt(ss / n);
    return f;
}

} // namespace wormszego

#endif
