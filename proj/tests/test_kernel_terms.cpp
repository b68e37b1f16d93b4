#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "wormszego/kernel_terms.hpp"
#include "wormszego/rng.hpp"

using namespace wormszego;

namespace {
const DomainParams P = make_params(2 * pi);

cplx g_j(const DomainParams& p, int j, cplx tau, cplx zeta) {
    return std::exp(cplx(0, 1) * tau * zeta) /
           (std::cosh(pi * zeta) * std::cosh((2 * p.beta - pi) * (zeta - 0.5 * j)));
}
} // namespace

TEST_CASE("mode integral against the trapezoid reference") {
    // reference value computed with the fixed-step trapezoid oracle
    CHECK(mode_integral(P, 0, cplx(0, 0)).real() ==
          Catch::Approx(0.30099364849047357).epsilon(1e-12));
    CHECK(std::abs(mode_integral(P, 0, cplx(0, 0)).imag()) < 1e-13);

    for (int j : {-3, 0, 2, 5}) {
        for (cplx tau : {cplx(0.4, 0.0), cplx(1.0, 0.3), cplx(-2.0, -0.4)}) {
            const cplx ref = oracles::mode_integral_ref(P.beta, j, tau);
            CHECK(std::abs(mode_integral(P, j, tau) - ref) < 1e-10);
        }
    }
}

TEST_CASE("mode integral symmetries") {
    Rng rng(7);
    for (int i = 0; i < 8; ++i) {
        const int j = int(rng.next_u64() % 9) - 4;
        const cplx tau(rng.uniform(-3, 3), rng.uniform(-1, 1));
        CHECK(std::abs(mode_integral(P, j, -std::conj(tau)) - std::conj(mode_integral(P, j, tau))) <
              1e-11);
    }
    // substitution xi -> -xi sends (j, tau) to (-j, -tau)
    for (int j : {1, 3}) {
        const cplx tau(1.3, 0.0);
        CHECK(std::abs(mode_integral(P, -j, tau) - mode_integral(P, j, -tau)) < 1e-11);
    }
}

TEST_CASE("pole lattice and first-row residues") {
    const auto pl = poles_and_residues(P, 0, cplx(0, 0), 1.0);
    std::set<double> ims;
    for (const cplx& z : pl.poles) {
        CHECK(z.real() == 0.0);
        ims.insert(z.imag());
    }
    // nu = 1/3 rows at (1/2 + k)/3 plus the sech row at 1/2 (they overlap there)
    const std::set<double> expected{-5.0 / 6, -0.5, -1.0 / 6, 1.0 / 6, 0.5, 5.0 / 6};
    REQUIRE(ims.size() == expected.size());
    auto it = expected.begin();
    for (double v : ims) CHECK(v == Catch::Approx(*it++).margin(1e-14));

    // res(g, i nu/2) at tau = 0: 1/(i 3 pi cos(pi/6)) = -2i/(3 sqrt(3) pi)
    CHECK(std::abs(pl.res_upper - cplx(0, -2.0 / (3 * std::sqrt(3.0) * pi))) < 1e-14);
    CHECK(std::abs(pl.res_lower - cplx(0, 2.0 / (3 * std::sqrt(3.0) * pi))) < 1e-14);
    CHECK(std::abs(pl.res_lower - std::conj(pl.res_upper)) < 1e-15);

    SECTION("residue formula agrees with a small-circle contour oracle") {
        for (int j : {0, 2, -1}) {
            for (cplx tau : {cplx(0, 0), cplx(1.0, 0.2)}) {
                const auto r = poles_and_residues(P, j, tau, 1.0);
                const cplx ref = oracles::circle_residue(
                    [&](cplx z) { return g_j(P, j, tau, z); }, cplx(0.5 * j, P.nu / 2), 0.08);
                CHECK(std::abs(r.res_upper - ref) < 1e-9);
            }
        }
    }
}

TEST_CASE("residue term closed form") {
    CHECK(mode_residue(P, 0, cplx(0, 0)).real() ==
          Catch::Approx(4.0 / (3 * std::sqrt(3.0))).epsilon(1e-14));
    CHECK(std::abs(mode_residue(P, 0, cplx(0, 0)) - 2.0 * pi * cplx(0, 1) *
                                                        poles_and_residues(P, 0, cplx(0, 0), 1.0)
                                                            .res_upper) < 1e-14);

    SECTION("mirror branch is the conjugate") {
        Rng rng(11);
        for (int i = 0; i < 10; ++i) {
            const int j = int(rng.next_u64() % 7) - 3;
            const cplx tau(rng.uniform(0.1, 4), rng.uniform(-1, 1));
            CHECK(std::abs(mode_residue(P, j, -std::conj(tau)) -
                           std::conj(mode_residue(P, j, tau))) < 1e-15);
        }
    }

    SECTION("geometric decay in |j|") {
        const cplx tau(2.0, 0.5);
        for (int j = -8; j <= 8; ++j) {
            const double bound = 1.2 * 4 * P.nu * std::exp(-tau.real() * P.nu / 2) *
                                 std::exp((std::abs(tau.imag()) - pi) * std::abs(j) / 2.0);
            CHECK(std::abs(mode_residue(P, j, tau)) <= bound);
        }
    }
}

TEST_CASE("contour term") {
    SECTION("residue-theorem identity at a few spots") {
        for (int j : {-4, 0, 1, 5}) {
            for (cplx tau : {cplx(0.5, 0.0), cplx(1.0, 0.3), cplx(-2.5, 0.1)}) {
                const cplx lhs = mode_integral(P, j, tau);
                const cplx rhs = mode_residue(P, j, tau) + mode_contour(P, j, tau);
                CHECK(std::abs(lhs - rhs) / std::abs(lhs) < 1e-8);
            }
        }
    }
    SECTION("rearrangement at tau = 0") {
        const cplx j0 = mode_contour(P, 0, cplx(0, 0));
        CHECK(std::abs(j0 - (mode_integral(P, 0, cplx(0, 0)) - mode_residue(P, 0, cplx(0, 0)))) <
              1e-12);
    }
    SECTION("contour-shift invariance between the pole rows") {
        for (int j : {0, 2, -3}) {
            const cplx tau(1.2, 0.2);
            const cplx a = mode_contour_at(P, j, tau, 0.22);
            const cplx b = mode_contour_at(P, j, tau, 0.45);
            CHECK(std::abs(a - b) < 1e-10);
        }
    }
    SECTION("decays at least at rate h in Re tau") {
        std::vector<double> xs, ys;
        for (double t = 4; t <= 16; t += 3) {
            xs.push_back(t);
            ys.push_back(std::log(std::abs(mode_contour(P, 0, cplx(t, 0.0)))));
        }
        double slope = 0;   // quick two-point secant over the sweep ends
        slope = (ys.back() - ys.front()) / (xs.back() - xs.front());
        CHECK(slope < -P.h * 0.99);   // e^{-tau h} is an upper-bound rate, not sharp
    }
}

TEST_CASE("residue series sum") {
    SECTION("partial sums converge to the closed form") {
        for (double beta : {1.5 * pi, 2 * pi}) {
            const auto p = make_params(beta);
            Rng rng(31);
            for (int i = 0; i < 6; ++i) {
                const double lg = rng.uniform(-0.5, 0.5);
                const cplx tau(rng.uniform(-2, 4), lg + rng.uniform(-1.5, 1.5));
                const cplx lam = std::exp(lg / 2) * std::exp(cplx(0, rng.uniform(0, 2 * pi)));
                cplx partial{0, 0};
                const int s = sign_of(tau);
                for (int j = -60; j <= 60; ++j)
                    partial += std::pow(lam, j) * mode_residue_signed(p, j, tau, s);
                const auto rs = residue_sum(p, tau, lam);
                CHECK(std::abs(partial - rs.total) < 1e-8 * std::abs(rs.total) + 1e-12);
                CHECK(std::abs(rs.total - (rs.main_right + rs.main_left + rs.constant +
                                           rs.error_series)) < 1e-12 * std::abs(rs.total));
            }
        }
    }
    SECTION("constant part is exactly the j = 0 residue term") {
        for (cplx tau : {cplx(0.3, 0.1), cplx(2.0, -0.4)}) {
            const auto rs = residue_sum(P, tau, cplx(1.1, 0.2));
            CHECK(std::abs(rs.constant - mode_residue(P, 0, tau)) < 1e-14 * std::abs(rs.constant));
        }
    }
    SECTION("correction-series terms obey the stated geometric bound") {
        const cplx tau(0.8, 0.3), lam(1.1, 0.4);
        const cplx a_pos = lam * std::exp((cplx(0, 1) * tau - 3 * pi) / 2.0);
        const cplx a_neg = std::exp(-(cplx(0, 1) * tau + 3 * pi) / 2.0) / lam;
        const double mag = std::abs(lam * std::exp(cplx(0, 1) * tau / 2.0));
        const double floor = 1.0 / (1 - std::exp(-pi));   // denominators bounded below
        for (int m = 1; m <= 12; ++m) {
            const cplx tp = std::pow(a_pos, m) / (1.0 + std::exp(-pi * cplx(m, P.nu)));
            const double bound = std::exp(-3 * pi * m / 2.0) * std::pow(mag, m) * floor;
            CHECK(std::abs(tp) <= bound * (1 + 1e-12));
            const cplx tn = std::pow(a_neg, m) / (1.0 + std::exp(-pi * cplx(m, -P.nu)));
            const double bound_n =
                std::exp(-3 * pi * m / 2.0) * std::pow(1.0 / mag, m) * floor;
            CHECK(std::abs(tn) <= bound_n * (1 + 1e-12));
        }
        // the truncated sum's own tail bound sits below the series tolerance
        const auto rs = residue_sum(P, tau, lam);
        CHECK(rs.tail_bound <= P.tol_series * std::abs(4 * P.nu));
        CHECK(rs.n_terms < 40);
    }
    SECTION("misuse outside the region raises SeriesDiverged") {
        CHECK_THROWS_AS(residue_sum(P, cplx(0, 0), cplx(std::exp(pi / 2) + 0.2, 0)), SeriesDiverged);
        CHECK_THROWS_AS(residue_sum(P, cplx(0, 0), cplx(std::exp(-pi / 2) / 2, 0)), SeriesDiverged);
    }
    SECTION("derivatives against finite differences") {
        const cplx tau(0.8, 0.2), lam(1.2, -0.3);
        const cplx dt = oracles::central_diff(
            [&](double e) { return residue_sum(P, tau + e, lam).total; });
        CHECK(std::abs(residue_sum_tau_deriv(P, tau, lam) - dt) < 1e-7);
        const cplx dl = oracles::central_diff(
            [&](double e) { return residue_sum(P, tau, lam + e).total; });
        CHECK(std::abs(residue_sum_lambda_deriv(P, tau, lam) - lam * dl) < 1e-7 * std::abs(lam * dl));
    }
}

TEST_CASE("main term and its closed forms") {
    SECTION("piecewise-analytic value matches quadrature") {
        for (int j = -6; j <= 6; ++j) {
            for (cplx tau : {cplx(1.0, 0.0), cplx(0.5, 0.7), cplx(-1.5, -0.2)}) {
                CHECK(std::abs(mode_main(P, j, tau) - mode_main_closed(P, j, tau)) < 1e-10);
            }
        }
    }
    SECTION("j = 0 value") {
        const cplx tau(1.0, 0.0);
        const cplx it = cplx(0, 1) * tau;
        const cplx expected = std::exp(cplx(0, 2 * P.beta * P.h)) / (it + 2 * P.beta) -
                              std::exp(cplx(0, -2 * P.beta * P.h)) / (it - 2 * P.beta);
        CHECK(std::abs(mode_main_closed(P, 0, tau) - expected) < 1e-15);
    }
    SECTION("decomposition of the contour term") {
        for (int j = -3; j <= 3; ++j) {
            const cplx tau(1.0, 0.0);
            const cplx lhs = mode_contour(P, j, tau);
            const cplx rhs = 4.0 * std::exp(-tau * P.h) *
                             (mode_main(P, j, tau) - mode_error(P, 1, j, tau) -
                              mode_error(P, 2, j, tau) + mode_error(P, 3, j, tau));
            CHECK(std::abs(lhs - rhs) / std::abs(lhs) < 1e-10);
        }
    }
    SECTION("error integrals mirror by conjugation") {
        for (int k : {1, 2, 3}) {
            const cplx tau(1.5, 0.4);
            CHECK(std::abs(mode_error(P, k, 2, -std::conj(tau)) -
                           std::conj(mode_error(P, k, 2, tau))) < 1e-12);
        }
        CHECK_THROWS_AS(mode_error(P, 4, 0, cplx(1, 0)), Error);
    }
}

TEST_CASE("main term series sum") {
    SECTION("partial sums of the per-mode closed forms converge to the sum") {
        for (double beta : {1.5 * pi, 2 * pi}) {
            const auto p = make_params(beta);
            Rng rng(47);
            for (int i = 0; i < 6; ++i) {
                const double lg = rng.uniform(-0.5, 0.5);
                const cplx tau(rng.uniform(-2, 4), lg + rng.uniform(-1.5, 1.5));
                const cplx lam = std::exp(lg / 2) * std::exp(cplx(0, rng.uniform(0, 2 * pi)));
                cplx partial{0, 0};
                for (int j = -60; j <= 60; ++j)
                    partial += std::pow(lam, j) * mode_main_closed(p, j, tau);
                partial *= 4.0 * std::exp(-double(sign_of(tau)) * tau * p.h);
                const auto ms = main_term_sum(p, tau, lam);
                CHECK(std::abs(partial - ms.total) < 1e-8 * std::abs(ms.total) + 1e-12);
            }
        }
    }
    SECTION("two points tied back to quadrature") {
        const cplx tau(0.7, 0.1), lam(1.2, 0.3);
        cplx partial{0, 0};
        for (int j = -40; j <= 40; ++j) partial += std::pow(lam, j) * mode_main(P, j, tau);
        partial *= 4.0 * std::exp(-tau * P.h);
        CHECK(std::abs(partial - main_term_sum(P, tau, lam).total) < 1e-8);
    }
    SECTION("removable prefactor at i tau = -(2 beta - 2 pi)") {
        // at beta = 2 pi this happens at tau = 2 pi i; phi1 fills in the limit
        const cplx tau(0.0, 2 * pi);
        const cplx lam = std::exp(cplx(pi, 0.3));   // keeps (tau, lam) inside the region
        const auto ms = main_term_sum(P, tau, lam);
        const cplx expected_psi3 =
            lam * std::exp(-(P.beta - pi / 2)) * std::exp(cplx(0, 2 * (P.beta - pi) * P.h)) * 0.5;
        CHECK(std::abs(ms.psi3 - expected_psi3) < 1e-13 * std::abs(expected_psi3));
        // continuity across the removable point
        const auto lo = main_term_sum(P, tau - cplx(0, 1e-7), lam);
        const auto hi = main_term_sum(P, tau + cplx(0, 1e-7), lam);
        CHECK(std::abs(lo.total - hi.total) < 1e-5 * std::abs(ms.total));
        CHECK(std::abs(ms.total - 0.5 * (lo.total + hi.total)) < 1e-5 * std::abs(ms.total));
    }
    SECTION("derivatives against finite differences") {
        const cplx tau(1.1, -0.2), lam(0.9, 0.25);
        const cplx dt = oracles::central_diff(
            [&](double e) { return main_term_sum(P, tau + e, lam).total; });
        CHECK(std::abs(main_term_sum_tau_deriv(P, tau, lam) - dt) < 1e-7);
        const cplx dl = oracles::central_diff(
            [&](double e) { return main_term_sum(P, tau, lam + e).total; });
        CHECK(std::abs(main_term_sum_lambda_deriv(P, tau, lam) - lam * dl) <
              1e-7 * std::abs(lam * dl));
    }
}

TEST_CASE("splitting identity for e^{|a|}/ch(a+ib)") {
    for (int ia = 1; ia <= 20; ++ia) {
        for (int ib = 1; ib <= 20; ++ib) {
            const double a = -4.0 + 8.0 * ia / 21.0;
            const double b = -3.0 + 6.0 * ib / 21.0;
            if (a == 0) continue;
            const cplx lhs = std::exp(std::abs(a)) / std::cosh(cplx(a, b));
            const double s = sgn(a);
            const cplx u = std::exp(-2 * s * cplx(a, b));
            const cplx rhs = 2.0 * std::exp(cplx(0, -s * b)) * (1.0 - u / (1.0 + u));
            CHECK(std::abs(lhs - rhs) <= 1e-13 * std::abs(lhs));
        }
    }
}
