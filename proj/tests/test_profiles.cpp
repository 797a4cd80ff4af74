#include <doctest.h>

#include <cmath>

#include "ddi/classification.hpp"
#include "ddi/profiles.hpp"

using namespace ddi;

namespace {

ProblemParams region1() { return {4, 2, 0.5, 0.5, 1, 0.2}; }

}  // namespace

TEST_CASE("self-similar exponents") {
    auto e1 = region1_exponents(region1());
    CHECK(e1.c == doctest::Approx(0.625));
    CHECK(e1.a == doctest::Approx(0.125));
    auto e2 = region2_exponents({0.5, 2, 1, 0.2, 0.4, 3.75});
    CHECK(e2.a == doctest::Approx(1.25));
    CHECK(e2.c == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("seeding is exact on self-similar data") {
    // u = t^a F(x t^-c) with quadratic F.
    const SelfSimilarExponents ex{0.125, 0.625};
    const double F0 = 0.75, F1 = -0.31, F2 = 0.2, dx = 1.0 / 128;
    for (double xs : {0.0, -0.4}) {
        std::vector<PdeSample> s;
        for (double t : {0.01, 0.02, 0.03}) {
            PdeSample ps{t, {}};
            for (int j = 0; j < 3; ++j) {
                const double xi = xs + j * dx * std::pow(t, -ex.c);
                ps.u[j] = std::pow(t, ex.a) * (F0 + F1 * xi + F2 * xi * xi);
            }
            s.push_back(ps);
        }
        auto seed = seed_from_pde(s, ex, dx, xs);
        CHECK(seed.xi == xs);
        CHECK(std::abs(seed.f - (F0 + F1 * xs + F2 * xs * xs)) < 1e-8);
        CHECK(std::abs(seed.fp - (F1 + 2 * F2 * xs)) < 1e-8);
    }
}

TEST_CASE("seeding rejects bad samples") {
    const SelfSimilarExponents ex{0.125, 0.625};
    std::vector<PdeSample> rising{{0.01, {0.1, 0.2, 0.3}}, {0.02, {0.1, 0.2, 0.3}}, {0.03, {0.1, 0.2, 0.3}}};
    CHECK_THROWS_AS(seed_from_pde(rising, ex, 0.01), DomainError);
    std::vector<PdeSample> nan{{0.01, {NAN, 0.2, 0.1}}};
    CHECK_THROWS_AS(seed_from_pde(nan, ex, 0.01), DomainError);
}

TEST_CASE("Region-1 profile from the published seed") {
    auto t = integrate_region1({0.0, 0.752, -0.309}, region1());
    CHECK(t.kind == ProfileKind::Region1);
    CHECK(t.front == doctest::Approx(0.696).epsilon(0.03));
    for (std::size_t k = 1; k < t.f.size(); ++k) CHECK(t.f[k] <= t.f[k - 1]);
    CHECK(t.xi.back() == t.front);

    auto half = integrate_region1({0.0, 0.752, -0.309}, region1(), {.step = 5e-5});
    CHECK(std::abs(half.front - t.front) < 1e-3);
    CHECK_THROWS_AS(integrate_region1({0.0, 0.0, -0.3}, region1()), DomainError);
}

TEST_CASE("closed-form b = 0 profile is recovered") {
    // f0 = (xi' - xi)_+^{p/(mp-1)}, xi' = (mp/(mp-1))^p.
    const double m = 4, p = 2, mu = p / (m * p - 1);
    const ProblemParams pp{m, p, 0, 1, 1, mu};
    const double xs = std::pow(m * p / (m * p - 1), p);
    const Seed seed{0.0, std::pow(xs, mu), -mu * std::pow(xs, mu - 1)};
    auto t = integrate_region1(seed, pp);
    CHECK(std::abs(t.front - xs) < 1e-3);
    for (std::size_t k = 0; k < t.xi.size(); k += t.xi.size() / 10) {
        CHECK(t.f[k] == doctest::Approx(std::pow(xs - t.xi[k], mu)).epsilon(1e-3));
    }
}

TEST_CASE("profile residual decreases with the step") {
    // Second-order finite differences of (phi((f^m)'))' + c(xi f' - alpha f).
    const ProblemParams pp = region1();
    const auto ex = region1_exponents(pp);
    auto residual = [&](double step) {
        auto t = integrate_region1({0.0, 0.752, -0.309}, pp, {.step = step});
        double r = 0;
        const std::size_t last = t.xi.size() - 5;
        const double h = step;
        for (std::size_t k = 2; k + 2 < last; ++k) {
            if (t.xi[k] < 0.1 || t.xi[k] > 0.5) continue;
            auto G = [&](std::size_t j) {
                return flux_phi((std::pow(t.f[j + 1], pp.m) - std::pow(t.f[j - 1], pp.m)) / (2 * h), pp.p);
            };
            const double dG = (G(k + 1) - G(k - 1)) / (2 * h);
            const double fp = (t.f[k + 1] - t.f[k - 1]) / (2 * h);
            r = std::max(r, std::abs(dG + ex.c * (t.xi[k] * fp - pp.alpha * t.f[k])));
        }
        return r;
    };
    const double r1 = residual(2e-3), r2 = residual(1e-3);
    CHECK(std::log2(r1 / r2) >= 1.8);
}

TEST_CASE("profile right-hand side") {
    auto d = profile_rhs(ProfileKind::Region1, region1(), 0.3, 0.5, -0.2);
    const double fp = -std::sqrt(0.2) / (4 * std::pow(0.5, 3));
    CHECK(d[0] == doctest::Approx(fp));
    CHECK(d[1] == doctest::Approx(-0.625 * (0.3 * fp - 0.2 * 0.5)));
    const ProblemParams r2{0.5, 2, 1, 0.2, 0.4, 3.75};
    auto e = profile_rhs(ProfileKind::Region2, r2, 0.1, 0.05, -0.01);
    const double fp2 = -0.1 / (0.5 * std::pow(0.05, -0.5));
    CHECK(e[0] == doctest::Approx(fp2));
    CHECK(e[1] == doctest::Approx(1.25 * 0.05 + std::pow(0.05, 0.2) - (1.0 / 3.0) * 0.1 * fp2));
}

TEST_CASE("Region-2 profile") {
    const ProblemParams pp{0.5, 2, 1, 0.2, 0.4, 3.75};
    auto t = integrate_region2({0.0, 0.0772, -0.3195}, pp);
    CHECK(t.kind == ProfileKind::Region2);
    CHECK(t.front > 0.5);
    CHECK(t.front < 1.0);
    CHECK_THROWS_AS(integrate_region2({0.0, -1.0, 0.0}, pp), DomainError);
}

TEST_CASE("phase plane") {
    SUBCASE("no absorption gives a straight line") {
        auto t = phase_plane(0.7, {2, 2, 0, 0.5, 1, 1}, 10.0);
        for (std::size_t k = 0; k < t.X.size(); ++k) CHECK(t.Y[k] == doctest::Approx(0.7 * t.X[k]).epsilon(1e-12));
    }
    SUBCASE("asymptote and monotonicity") {
        const ProblemParams pp{2, 2, 1, 0.5, 1, 1};
        CHECK(phase_asymptote_constant(pp) == doctest::Approx(std::pow(1.2, 2.0 / 3.0)).epsilon(1e-12));
        auto t = phase_plane(1.0, pp, 1e3);
        for (std::size_t k = 1; k < t.Y.size(); ++k) CHECK(t.Y[k] > t.Y[k - 1]);
        const double r = t.Y.back() / std::pow(t.X.back(), 5.0 / 3.0);
        CHECK(std::abs(r / phase_asymptote_constant(pp) - 1) < 0.02);
    }
    SUBCASE("regime checks") {
        CHECK_THROWS_AS(phase_plane(-1.0, {2, 2, 1, 0.5, 1, 1}, 10), DomainError);
        CHECK_THROWS_AS(phase_plane(1.0, {0.5, 2, 1, 0.2, 1, 1}, 10), DomainError);
    }
}

TEST_CASE("wave profile") {
    const ProblemParams pp{2, 2, 1, 0.5, 1, 1};
    auto tab = phase_plane(1.0, pp, 1e3);
    auto y = wave_coordinate(tab);
    for (std::size_t k = 1; k < y.size(); ++k) CHECK(y[k] > y[k - 1]);
    auto phi = wave_profile(tab, {0.0, 0.5 * y.back()});
    CHECK(phi[0] == 0.0);
    CHECK(phi[1] > 0.0);
    CHECK_THROWS_AS(wave_profile(tab, {2 * y.back()}), DomainError);
    const double lim = tab.X.back() / std::pow(y.back(), 3.0 / 3.5);
    CHECK(std::abs(lim / critical_constant(2, 2, 1, 0.5) - 1) < 0.05);
}
