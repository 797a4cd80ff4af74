#include <doctest.h>

#include <cmath>
#include <random>

#include "ddi/classification.hpp"

using namespace ddi;

namespace {

ProblemParams make(double m, double p, double b, double beta, double C, double alpha) {
    return ProblemParams{m, p, b, beta, C, alpha};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("region labels of the shipped parameter sets") {
    CHECK(classify(make(4, 2, 0.5, 0.5, 1, 0.2)).region == Region::R1);
    CHECK(classify(make(4, 2, 0.8, 0.5, 0.5, 0.8)).region == Region::R3);
    CHECK(classify(make(2, 3, 0.5, 1.0, 0.5, 0.8)).region == Region::R4a);
    CHECK(classify(make(2.5, 0.5, 1, 0.5, 0.5, 2)).region == Region::R2Expand);
    CHECK(classify(make(2.5, 0.5, 1, 0.5, 0.06, 2)).region == Region::R2Shrink);
    CHECK(classify(make(0.5, 2, 1, 0.2, 0.4, 3.75)).region == Region::R2Expand);
    CHECK(classify(make(0.5, 2, 1, 0.2, 0.05, 3.75)).region == Region::R2Shrink);
    CHECK(classify(make(4, 2, 0, 1, 1, 0.2)).region == Region::B0Case1);
    CHECK(classify(make(4, 2, 0, 1, 1, 3.0 / 7.0)).region == Region::B0Case2);
    CHECK(classify(make(4, 2, 0, 1, 1, 1.0)).region == Region::B0Case3);
}

TEST_CASE("region names round trip") {
    for (Region r : {Region::R1, Region::R2Expand, Region::R2Shrink, Region::R2Stationary, Region::R3, Region::R4a,
                     Region::R4b, Region::R4c, Region::R4d, Region::B0Case1, Region::B0Case2, Region::B0Case3}) {
        CHECK(region_from_string(to_string(r)) == r);
    }
    CHECK_FALSE(region_from_string("nowhere").has_value());
}

TEST_CASE("critical constant values") {
    CHECK(rel(critical_constant(2.5, 0.5, 1, 0.5), 0.13572) < 1e-4);
    CHECK(rel(critical_constant(2.0, 2.0, 1, 0.2), 0.75655) < 1e-4);
    CHECK(rel(critical_constant(0.5, 2.0, 1, 0.2), 0.1032) < 1e-3);
    CHECK_THROWS_AS(critical_constant(2, 2, 1, 1.0), DomainError);
    CHECK_THROWS_AS(critical_constant(0.2, 1, 1, 0.5), DomainError);
}

TEST_CASE("critical constant increases with b") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> um(1.0, 4.0), up(0.5, 3.0), ub(0.1, 2.0), ubeta(0.05, 0.95);
    for (int k = 0; k < 20; ++k) {
        const double m = um(rng), p = up(rng), b = ub(rng), beta = ubeta(rng);
        const double h = 1e-6 * b;
        CHECK(critical_constant(m, p, b + h, beta) > critical_constant(m, p, b - h, beta));
    }
}

TEST_CASE("direction flips exactly at C_*") {
    const double cs = critical_constant(0.5, 2, 1, 0.2);
    auto below = classify(make(0.5, 2, 1, 0.2, cs * (1 - 1e-9), 3.75));
    auto above = classify(make(0.5, 2, 1, 0.2, cs * (1 + 1e-9), 3.75));
    auto at = classify(make(0.5, 2, 1, 0.2, cs, 3.75));
    CHECK(below.region == Region::R2Shrink);
    CHECK(above.region == Region::R2Expand);
    CHECK(at.region == Region::R2Stationary);
    CHECK(below.thresholds.critical == above.thresholds.critical);
}

TEST_CASE("region is insensitive to b and C away from the critical line") {
    for (double b : {0.1, 0.5, 2.0}) {
        for (double C : {0.1, 1.0, 5.0}) {
            CHECK(classify(make(4, 2, b, 0.5, C, 0.2)).region == Region::R1);
            CHECK(classify(make(4, 2, b, 0.5, C, 0.8)).region == Region::R3);
        }
    }
}

TEST_CASE("interface laws") {
    auto r1 = make(4, 2, 0.5, 0.5, 1, 0.2);
    auto law1 = interface_law(classify(r1), r1);
    CHECK(law1.sign == 1);
    CHECK(*law1.exponent == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(std::holds_alternative<ProfileDetermined>(law1.prefactor));

    auto r3 = make(4, 2, 0.8, 0.5, 0.5, 0.8);
    auto law3 = interface_law(classify(r3), r3);
    CHECK(law3.sign == -1);
    CHECK(*law3.exponent == doctest::Approx(2.5).epsilon(1e-12));
    REQUIRE(std::holds_alternative<ExactPrefactor>(law3.prefactor));
    CHECK(std::get<ExactPrefactor>(law3.prefactor).value == doctest::Approx(0.2407).epsilon(2e-4));

    auto r2 = make(0.5, 2, 1, 0.2, 0.4, 3.75);
    auto law2 = interface_law(classify(r2), r2);
    CHECK(law2.sign == 1);
    CHECK(*law2.exponent == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    auto tw = make(2.5, 0.5, 1, 0.5, 0.5, 2);
    auto lawtw = interface_law(classify(tw), tw);
    REQUIRE(std::holds_alternative<ExactPrefactor>(lawtw.prefactor));
    CHECK(std::get<ExactPrefactor>(lawtw.prefactor).value == doctest::Approx(1.173).epsilon(1e-3));
    CHECK(*lawtw.exponent == doctest::Approx(1.0).epsilon(1e-12));

    auto second = make(2, 2, 1, 0.2, 1.2, 3.0 / 3.8);
    auto law_second = interface_law(classify(second), second);
    CHECK(*law_second.exponent == doctest::Approx(3.8 / 2.4).epsilon(1e-12));

    auto r4 = make(2, 3, 0.5, 1.0, 0.5, 0.8);
    auto law4 = interface_law(classify(r4), r4);
    CHECK(law4.sign == 0);
    CHECK_FALSE(law4.exponent.has_value());
}

TEST_CASE("shrink prefactor identity") {
    for (auto pp : {make(4, 2, 0.8, 0.5, 0.5, 0.8), make(2, 3, 0.3, 0.25, 2.0, 1.5), make(3, 1.5, 1.7, 0.7, 0.2, 4)}) {
        const double l = shrink_prefactor(pp);
        const double res = std::pow(pp.C, 1 - pp.beta) * std::pow(l, pp.alpha * (1 - pp.beta)) - pp.b * (1 - pp.beta);
        CHECK(std::abs(res) <= 1e-12 * pp.b * (1 - pp.beta));
    }
}

TEST_CASE("b = 0 front bounds") {
    auto pp = make(4, 2, 0, 1, 1, 0.2);
    auto cs = appendix_constants(pp, {.A0 = 0.725});
    CHECK(*cs.xi1 == 1.0);
    CHECK(*cs.xi2 == doctest::Approx(1.1262).epsilon(1e-4));
    CHECK(*cs.xi3 == doctest::Approx(0.604).epsilon(2e-3));
    CHECK(*cs.xi4 == doctest::Approx(0.680).epsilon(2e-3));
    CHECK(*cs.xi3 <= *cs.xi4);
    const double mu = 2.0 / 7.0;
    CHECK(rel(*cs.C4 * std::pow(*cs.xi3, mu), 0.725) < 1e-10);
    CHECK(rel(*cs.C5 * std::pow(*cs.xi4, mu), 0.725) < 1e-10);
    CHECK_THROWS_AS(appendix_constants(pp), DomainError);
}

TEST_CASE("c_bar transcription") {
    auto pp = make(2, 3, 0.5, 1, 0.5, 0.8);
    auto cs = appendix_constants(pp);
    const double m = 2, p = 3, mp = 6;
    const double expect = std::pow(std::pow(mp - 1, 1 + p) / (p * (m + 1) * std::pow(m * (1 + p), p)), 1 / (mp - 1));
    CHECK(rel(*cs.c_bar, expect) < 1e-14);
}

TEST_CASE("critical-case constants satisfy their identities") {
    SUBCASE("expanding, p(m+beta) < 1+p") {
        auto pp = make(0.5, 2, 1, 0.2, 0.4, 3.75);
        CHECK_THROWS_AS(appendix_constants(pp), DomainError);
        auto cs = appendix_constants(pp, {.A1 = 0.08});
        const double gam0 = 3.0 / (1.0 - 0.2);
        CHECK(*cs.zeta1 <= *cs.zeta2);
        CHECK(rel(*cs.C1 * std::pow(*cs.zeta1, gam0), 0.08) < 1e-10);
        CHECK(rel(*cs.C2 * std::pow(*cs.zeta2, gam0), 0.08) < 1e-10);
    }
    SUBCASE("expanding, p(m+beta) > 1+p") {
        auto pp = make(2, 2, 1, 0.2, 1.2, 3.0 / 3.8);
        auto cs = appendix_constants(pp, {.A1 = 1.5});
        CHECK(*cs.zeta1 <= *cs.zeta2);
        CHECK(rel(*cs.C1 * std::pow(*cs.zeta1, 2.0 / 3.0), 1.5) < 1e-10);
        CHECK(rel(*cs.C2 * std::pow(*cs.zeta2, 3.0 / 3.8), 1.5) < 1e-10);
    }
    SUBCASE("shrinking, p(m+beta) < 1+p") {
        auto pp = make(0.5, 2, 1, 0.2, 0.05, 3.75);
        auto cs = appendix_constants(pp);
        REQUIRE(cs.delta_star);
        CHECK(rel(*cs.zeta4, *cs.delta_star * *cs.big_gamma * *cs.ell1) < 1e-10);
        const double mpb = 0.8, q = mpb * 0.8 / (3.0 - 2 * 0.7);
        const double ratio = std::pow(*cs.c_star / 0.05, q);
        CHECK(rel(*cs.zeta3 / *cs.ell0, (ratio - 1) / ratio) < 1e-10);
        CHECK(rel(*cs.big_gamma, 1 - std::pow(0.05 / *cs.c_star, mpb / 3.0)) < 1e-10);
        CHECK(*cs.theta_star > 0);
    }
    SUBCASE("shrinking sharp bound needs eps and ell") {
        auto pp = make(4, 2, 0.8, 0.5, 0.5, 0.8);
        auto cs = appendix_constants(pp, {.eps = 0.1, .ell = 0.3});
        REQUIRE(cs.zeta5);
        CHECK(*cs.zeta5 < 0.3);
        CHECK_FALSE(appendix_constants(pp).zeta5.has_value());
        CHECK_THROWS_AS(appendix_constants(pp, {.eps = 0.1, .ell = 0.2}), DomainError);
    }
}

TEST_CASE("delta_star beats a grid scan") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> frac(0.05, 0.95);
    for (int k = 0; k < 10; ++k) {
        const double cs = critical_constant(0.5, 2, 1, 0.2);
        auto pp = make(0.5, 2, 1, 0.2, frac(rng) * cs, 3.75);
        auto ds = delta_star(pp);
        for (int j = 0; j <= 1000; ++j) CHECK(ds.value >= delta_objective(pp, j / 1000.0) - 1e-14);
    }
}

TEST_CASE("delta_star against a fine grid oracle") {
    auto pp = make(0.5, 2, 1, 0.2, 0.05, 3.75);
    double best = 0, arg = 0;
    for (int j = 0; j <= 1000000; ++j) {
        const double v = delta_objective(pp, j * 1e-6);
        if (v > best) best = v, arg = j * 1e-6;
    }
    auto ds = delta_star(pp);
    CHECK(std::abs(ds.delta - arg) < 2e-6);
    CHECK(ds.value >= best);
}

TEST_CASE("delta_star small-C limit") {
    // g -> delta^e (1 - delta) with maximizer e/(1+e).
    auto pp = make(0.5, 2, 1, 0.2, 1e-30, 3.75);
    const double e = (3.0 - 2 * 0.7) / 0.8;
    CHECK(std::abs(delta_star(pp).delta - e / (1 + e)) < 1e-6);
}

TEST_CASE("stationary datum at C = C_* has zero analytic residual") {
    for (auto [m, p, b, beta] : {std::array{0.5, 2.0, 1.0, 0.2}, std::array{2.5, 0.5, 1.0, 0.5}, std::array{2.0, 2.0, 1.0, 0.2}}) {
        const double gam = (1 + p) / (m * p - beta);
        const double C = critical_constant(m, p, b, beta);
        for (double x = -1.0; x <= -0.01; x += 0.01) {
            const double s = -x;
            const double k = m * gam * std::pow(C, m);
            const double diff = std::pow(k, p) * p * (m * gam - 1) * std::pow(s, p * (m * gam - 1) - 1);
            const double absorb = b * std::pow(C, beta) * std::pow(s, beta * gam);
            CHECK(std::abs(diff - absorb) <= 1e-10 * std::max(1.0, absorb));
        }
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(make(0.5, 1, 0, 1, 1, 1).validate(), DomainError);
    CHECK_THROWS_AS(make(2, 2, -1, 1, 1, 1).validate(), DomainError);
    CHECK_NOTHROW(make(0.5, 2, 1, 0.2, 0.4, 3.75).validate());
}
