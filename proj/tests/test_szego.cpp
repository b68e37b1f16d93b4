#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "wormszego/rng.hpp"
#include "wormszego/szego.hpp"

using namespace wormszego;

namespace {
const DomainParams P = make_params(2 * pi);

Point sample_interior(const DomainParams& p, Rng& rng, double margin) {
    const double lg = rng.uniform(-(p.beta - pi / 2) + margin, p.beta - pi / 2 - margin);
    const double im = lg + rng.uniform(-pi / 2 + margin, pi / 2 - margin);
    return {cplx(rng.uniform(-1, 1), im),
            std::exp(lg / 2) * std::exp(cplx(0, 2 * pi * rng.uniform()))};
}

PointPair sample_pair(const DomainParams& p, Rng& rng, double margin) {
    const Point w = sample_interior(p, rng, margin);
    const Point z = sample_interior(p, rng, margin);
    return {w.z1, w.z2, z.z1, z.z2};
}
} // namespace

TEST_CASE("kernel at the diagonal center") {
    // reference computed with the trapezoid oracle summed over |j| <= 40
    const auto kv = kernel(P, {cplx(0, 0), cplx(1, 0), cplx(0, 0), cplx(1, 0)});
    CHECK(kv.value.real() == Catch::Approx(0.026573906157367).epsilon(2e-9));
    CHECK(std::abs(kv.value.imag()) < 1e-12);
    CHECK(std::abs(kv.value.real() - 0.026573906157367) <= kv.tail_bound + 1e-12);
}

TEST_CASE("kernel rejects exterior points with a diagnostic") {
    const Point e1 = face_point(P, {Face::E1, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(kernel(P, {e1.z1, e1.z2, cplx(0, 0), cplx(1, 0)}), OutsideDomain);
    CHECK_THROWS_AS(kernel_reduced(P, cplx(0, 10.0), cplx(1, 0)), OutsideDomain);
    CHECK_THROWS_WITH(kernel(P, {cplx(0, 3.0), cplx(1, 0), cplx(0, 0), cplx(1, 0)}),
                      Catch::Matchers::ContainsSubstring("Im z1 - log|z2|^2"));
}

TEST_CASE("reduced-variable call at lam = 0 keeps only the j = 0 mode") {
    const cplx tau(0.7, 0.2);
    const auto kv = kernel_reduced(P, tau, cplx(0, 0));
    CHECK(std::abs(kv.value - mode_integral(P, 0, tau) / (8 * pi)) < 1e-15);
}

TEST_CASE("Hermitian symmetry and diagonal positivity") {
    Rng rng(2024);
    for (int i = 0; i < 12; ++i) {
        const PointPair pr = sample_pair(P, rng, 0.2);
        const PointPair sw{pr.z1, pr.z2, pr.w1, pr.w2};
        const cplx a = kernel(P, pr).value;
        const cplx b = kernel(P, sw).value;
        CHECK(std::abs(a - std::conj(b)) < 1e-10 * std::abs(a));
    }
    for (int i = 0; i < 6; ++i) {
        const Point w = sample_interior(P, rng, 0.2);
        const cplx k = kernel(P, {w.z1, w.z2, w.z1, w.z2}).value;
        CHECK(k.real() > 0);
        CHECK(std::abs(k.imag()) < 1e-10 * std::abs(k));
    }
}

TEST_CASE("the two evaluation routes agree") {
    Rng rng(5150);
    for (int i = 0; i < 10; ++i) {
        const PointPair pr = sample_pair(P, rng, 0.3);
        const TauLambda tl = reduce(P, pr);
        // force both routes through the internals
        const auto dir = detail::direct_route(P, tl.tau, tl.lam, detail::kDirectCap);
        const auto rpc = detail::rpc_with_seam(P, tl.tau, tl.lam);
        REQUIRE(dir.converged);
        CHECK(std::abs(dir.value - rpc.value) < 1e-7 * std::abs(dir.value));
    }
}

TEST_CASE("routes agree away from the default beta") {
    const auto p = make_params(1.5 * pi);
    const cplx tau(0.8, 0.15), lam(1.05, -0.1);
    const RoutePair r = kernel_routes(p, tau, lam);
    CHECK(std::abs(r.direct.value - r.rpc.value) < 1e-8 * std::abs(r.direct.value));
}

TEST_CASE("kernel value is independent of the contour height") {
    const auto p1 = make_params(2 * pi, 0.25);
    const auto p2 = make_params(2 * pi, 0.45);
    const cplx tau(0.9, 0.2), lam(1.1, -0.2);
    const cplx k1 = kernel_reduced(p1, tau, lam).value;
    const cplx k2 = kernel_reduced(p2, tau, lam).value;
    CHECK(std::abs(k1 - k2) < 1e-8 * std::abs(k1));
}

TEST_CASE("branch seam at Re tau = 0 is handled") {
    // diagonal-like configuration with a complex lam exercises the averaging
    const cplx tau(0.0, 0.4), lam(1.05, 0.3);
    const auto rpc = detail::rpc_with_seam(P, tau, lam);
    const auto dir = detail::direct_route(P, tau, lam, detail::kDirectCap);
    CHECK(std::abs(rpc.value - dir.value) < 1e-8 * std::abs(dir.value));
}

TEST_CASE("kernel derivatives against finite differences") {
    Rng rng(777);
    for (int i = 0; i < 5; ++i) {
        const PointPair pr = sample_pair(P, rng, 0.25);
        const double e = 1e-5;

        const cplx dw1 = kernel_derivative(P, Var::W1, pr);
        const cplx fd1 = oracles::central_diff([&](double s) {
            PointPair q = pr;
            q.w1 += s;
            return kernel(P, q).value;
        }, e);
        CHECK(std::abs(dw1 - fd1) < 1e-6 * std::abs(dw1));

        const cplx dw2 = kernel_derivative(P, Var::W2, pr);
        const cplx fd2 = oracles::central_diff([&](double s) {
            PointPair q = pr;
            q.w2 += s;
            return kernel(P, q).value;
        }, e);
        CHECK(std::abs(dw2 - fd2) < 1e-6 * std::abs(dw2));

        // anti-holomorphic slots move with conj: a real step in z2 steps conj(z2) equally
        const cplx dz2 = kernel_derivative(P, Var::Z2Bar, pr);
        const cplx fd3 = oracles::central_diff([&](double s) {
            PointPair q = pr;
            q.z2 += s;
            return kernel(P, q).value;
        }, e);
        CHECK(std::abs(dz2 - fd3) < 1e-6 * std::abs(dz2));

        const cplx dz1 = kernel_derivative(P, Var::Z1Bar, pr);
        CHECK(std::abs(dz1 + dw1) < 1e-12 * std::abs(dw1));   // tau enters as w1 - conj z1
    }
}

TEST_CASE("derivative conjugate-pair symmetry") {
    Rng rng(31337);
    const PointPair pr = sample_pair(P, rng, 0.25);
    const PointPair sw{pr.z1, pr.z2, pr.w1, pr.w2};
    const cplx a = kernel_derivative(P, Var::W1, pr);
    const cplx b = kernel_derivative(P, Var::Z1Bar, sw);
    CHECK(std::abs(a - std::conj(b)) < 1e-9 * std::abs(a));
}

TEST_CASE("derivative reduced call at w2 = 0 keeps only the j = 1 mode") {
    const cplx tau(0.5, 0.1), z2b(0.8, -0.1);
    const cplx d = kernel_derivative_reduced(P, Var::W2, tau, cplx(0, 0), z2b);
    CHECK(std::abs(d - z2b * mode_integral(P, 1, tau) / (8 * pi)) < 1e-14);
}

TEST_CASE("leading term structure") {
    const cplx tau(0.6, 0.1), lam(1.2, 0.2);
    const auto lt = leading_term(P, tau, lam);
    CHECK(std::abs(lt.value - (lt.part_right + lt.part_left + lt.part_const + lt.part_error)) <
          1e-14 * std::abs(lt.value));
    CHECK(std::abs(lt.prefactor - std::exp(-tau * P.nu / 2.0)) < 1e-15);

    SECTION("diagonal center is far from every pole") {
        const auto c = leading_term(P, cplx(0, 0), cplx(1, 0));
        CHECK(std::isfinite(std::abs(c.value)));
        CHECK(std::abs(c.value) < 1.0);
    }
    SECTION("the right-oblique part blows up on the right oblique approach") {
        const BoundaryFace ob{Face::ObliqueRight, 0.0, 0.0, 0.0};
        const auto path = make_path(P, ob, ob, {1e-2, 1e-3});
        double prev = 0;
        for (const auto& pr : path.points) {
            const TauLambda tl = reduce(P, pr);
            const auto l = leading_term(P, tl.tau, tl.lam);
            CHECK(std::abs(l.part_right) > 10 * std::abs(l.part_left));
            CHECK(std::abs(l.part_right) > prev);
            prev = std::abs(l.part_right);
        }
    }
}

TEST_CASE("decay fits along a Re tau sweep") {
    std::vector<PointPair> sweep;
    for (int t = 4; t <= 24; ++t)
        sweep.push_back({cplx(t / 2.0, 0), cplx(1, 0), cplx(-t / 2.0, 0), cplx(1, 0)});

    const ExponentFit lead = leading_decay(P, sweep);
    CHECK(lead.slope == Catch::Approx(-P.nu / 2).epsilon(0.10));

    // The contour remainder carries e^{-tau h}, so -h bounds its log-slope
    // from above; the measured rate is steeper (set by the second pole row).
    const ExponentFit rem = remainder_decay(P, sweep);
    CHECK(rem.slope < -P.h);
    CHECK(rem.slope < lead.slope - 0.1);   // remainder decays strictly faster

    CHECK_THROWS_AS(remainder_decay(P, {sweep[0], sweep[1]}), Error);
}
