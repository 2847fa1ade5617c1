#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dnp/errors.hpp"
#include "dnp/flux_law.hpp"
#include "dnp/numerics.hpp"
#include "dnp/source_law.hpp"

using namespace dnp;
using Catch::Approx;

TEST_CASE("quadratic flux is the identity") {
    const auto law = FluxLaw::p_laplacian(2.0);
    const Vec2 a = law.flux({0, 0}, {3.0, -1.0});
    CHECK(a[0] == 3.0);
    CHECK(a[1] == -1.0);
    CHECK(law.quadratic());
}

TEST_CASE("p = 4 closed form") {
    const auto law = FluxLaw::p_laplacian(4.0);
    const Vec2 a = law.flux({0, 0}, {1.0, 0.0});
    CHECK(a[0] == 1.0);
    CHECK(a[1] == 0.0);
    CHECK(law.potential({0, 0}, {1.0, 0.0}) == 0.25);
}

TEST_CASE("regularized singular flux stays finite near zero") {
    const auto law = FluxLaw::p_laplacian(1.5, 1e-6);
    const Vec2 a = law.flux({0, 0}, {1e-9, 0.0});
    // (|z|^2 + eps^2)^{-1/4} |z| with |z|^2 = 1e-18, eps^2 = 1e-12
    const double expected = 1e-9 * std::pow(1e-18 + 1e-12, -0.25);
    CHECK(std::isfinite(a[0]));
    CHECK(a[0] == Approx(expected).epsilon(1e-14));
    CHECK(a[0] <= 1e-9 * std::pow(1e-12, -0.25));
    const Vec2 zero = law.flux({0, 0}, {0.0, 0.0});
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);
    const Mat2 J = law.jacobian({0, 0}, {0.0, 0.0});
    CHECK(std::isfinite(J[0]));
}

TEST_CASE("invalid flux parameters") {
    CHECK_THROWS_AS(FluxLaw::p_laplacian(1.0), InvalidParameter);
    CHECK_THROWS_AS(FluxLaw::p_laplacian(2.0, -1.0), InvalidParameter);
    CHECK_THROWS_AS(FluxLaw::sum_of_p_laplacians({}), InvalidParameter);
}

TEST_CASE("sum of p-Laplacians uses the largest exponent") {
    const auto law = FluxLaw::sum_of_p_laplacians({{2.0, 1.0}, {3.0, 0.5}});
    CHECK(law.exponent() == 3.0);
    const Vec2 a = law.flux({0, 0}, {2.0, 0.0});
    CHECK(a[0] == Approx(2.0 + 0.5 * 4.0));
}

TEST_CASE("flux jacobian matches finite differences of alpha") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N(0.0, 1.5);
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        const auto law = FluxLaw::p_laplacian(p, 1e-3);
        for (int k = 0; k < 200; ++k) {
            const Vec2 z{N(rng), N(rng)};
            const Mat2 J = law.jacobian({0, 0}, z);
            for (int b = 0; b < 2; ++b) {
                Vec2 zp = z, zm = z;
                const double h = 1e-6;
                zp[b] += h;
                zm[b] -= h;
                const Vec2 ap = law.flux({0, 0}, zp), am = law.flux({0, 0}, zm);
                for (int a = 0; a < 2; ++a)
                    CHECK(J[2 * a + b] == Approx((ap[a] - am[a]) / (2 * h)).epsilon(1e-5).margin(1e-7));
            }
        }
    }
}

TEST_CASE("spatial coefficient scales the flux and the constants") {
    FluxCoefficient k{[](const Vec2& x) { return 1.0 + x[0]; }, 1.0, 2.0};
    const auto law = FluxLaw::p_laplacian(3.0).with_coefficient(k);
    CHECK_FALSE(law.homogeneous());
    const Vec2 a = law.flux({0.5, 0.0}, {1.0, 0.0});
    CHECK(a[0] == Approx(1.5));
    CHECK(law.growth() == Approx(2.0 * FluxLaw::p_laplacian(3.0).growth()));
}

TEST_CASE("truncation clamps to [-M, M]") {
    const auto sq = SourceLaw::from_descriptor({SourceKind::square}).with_truncation(4.0);
    CHECK(truncate_source(sq, 3.0) == 4.0);
    CHECK(truncate_source(sq, 1.0) == 1.0);
    const auto cub = SourceLaw::from_descriptor({SourceKind::neg_cubic}).with_truncation(2.0);
    CHECK(truncate_source(cub, 2.0) == -2.0);
    CHECK_THROWS_AS(truncate_source(SourceLaw::zero(), 1.0), InvalidParameter);
    CHECK_THROWS_AS(SourceLaw::zero().with_truncation(0.0), InvalidParameter);
}

TEST_CASE("truncation is idempotent and preserves monotonicity") {
    const auto F = SourceLaw::from_descriptor({SourceKind::power, 1.0, 3.0}).with_truncation(5.0);
    CHECK(F.monotone());
    const double M = F.truncation_level();
    double prev = -1e300;
    for (int k = -400; k <= 400; ++k) {
        const double s = k * 0.01;
        const double t = F.truncated(s);
        CHECK(std::clamp(t, -M, M) == t);
        if (std::abs(F.eval(s)) <= M) CHECK(t == F.eval(s));
        CHECK(t >= prev);
        prev = t;
    }
}

TEST_CASE("psi^M values") {
    const auto lin = SourceLaw::from_descriptor({SourceKind::linear, 1.0});
    const auto id = MonotoneGraph::power(2.0);
    CHECK(psi_truncated_primitive(lin.with_truncation(3.0), id, 0.0) == 0.0);
    CHECK(psi_truncated_primitive(lin.with_truncation(10.0), id, 2.0) == Approx(2.0).epsilon(1e-13));

    const auto q3 = MonotoneGraph::power(3.0);
    // Simpson refinement oracle for the integral of sigma^2 over [0, 1]
    const auto f = [](double s) { return s * s; };
    double simpson = 0.0;
    const int n = 64;
    for (int k = 0; k < n; ++k) {
        const double a = double(k) / n, b = double(k + 1) / n;
        simpson += (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
    }
    CHECK(simpson == Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(psi_truncated_primitive(lin.with_truncation(100.0), q3, 1.0) == Approx(simpson).epsilon(1e-12));

    const auto F = lin.with_truncation(0.5);
    for (double s : {-3.0, -1.0, 0.7, 2.5}) CHECK(std::abs(psi_truncated_primitive(F, q3, s)) <= 0.5 * std::abs(s) + 1e-14);
    CHECK_THROWS_AS(psi_truncated_primitive(F, MonotoneGraph::tangent(), 2.0), DomainError);
}

TEST_CASE("Lipschitz constants") {
    CHECK(SourceLaw::zero().lipschitz_on(-3, 3) == 0.0);
    CHECK(SourceLaw::from_descriptor({SourceKind::linear, -2.0}).lipschitz_on(-1, 1) == 2.0);
    const double sq = SourceLaw::from_descriptor({SourceKind::square}).lipschitz_on(-2, 2);
    CHECK(sq == Approx(4.0).epsilon(1e-3));
    const auto custom = SourceLaw::custom([](double s) { return 3 * s; }, true, LipschitzBound{3.0, -10, 10});
    CHECK(custom.lipschitz_on(-1, 1) == 3.0);
}

TEST_CASE("flux potential sandwich, growth and strong monotonicity") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> N(0.0, 2.0);
    for (const double p : {1.5, 2.0, 3.0, 4.0}) {
        const auto law = FluxLaw::p_laplacian(p);
        const double c = law.coercivity(), C = law.growth();
        const Vec2 x{0.2, 0.7};
        CHECK(norm(law.flux(x, {0.0, 0.0})) == 0.0);
        for (int k = 0; k < 1000; ++k) {
            const Vec2 z1{N(rng), N(rng)}, z2{N(rng), N(rng)};
            const double r = norm(z1);
            const double a = law.potential(x, z1);
            REQUIRE(a >= c * std::pow(r, p) - C);
            REQUIRE(a <= C * (std::pow(r, p) + 1.0));
            REQUIRE(norm(law.flux(x, z1)) <= C * (std::pow(r, p - 1.0) + 1.0));
            const Vec2 d = law.flux(x, z1) - law.flux(x, z2);
            REQUIRE(dot(d, z1 - z2) >= law.monotonicity_bound(z1, z2) - 1e-12);
        }
    }
}
