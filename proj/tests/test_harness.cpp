#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ddi/harness.hpp"

using namespace ddi;

namespace {

const std::filesystem::path kScenarios = DDI_SCENARIO_DIR;

const char* kMinimal = R"(name = tiny
m = 2
p = 2
b = 0.5
beta = 0.5
C = 1
alpha = 0.3
x_left = -2
x_right = 1
n = 64
t_end = 0.01
)";

int error_line(const std::string& text) {
    try {
        load_scenario(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::string error_text(const std::string& text) {
    try {
        load_scenario(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("power-front initial data") {
    Grid g(-2, 1, 300);
    ProblemParams pp{4, 2, 0.5, 0.5, 1, 0.2};
    auto f = make_initial_condition(PowerFrontIC{}, g, pp);
    CHECK(f.u[g.nearest(-0.5)] == doctest::Approx(0.8706).epsilon(1e-4));
    for (int i = 0; i < g.n(); ++i) {
        if (g.x(i) >= 0) CHECK(f.u[i] == 0.0);
        if (g.x(i) >= -0.5 && g.x(i) < 0) CHECK(f.u[i] == doctest::Approx(std::pow(-g.x(i), 0.2)).epsilon(1e-15));
    }
    CHECK(f.u[0] < 1e-6);
}

TEST_CASE("source-type initial data") {
    Grid g(-5, 5, 200);
    ProblemParams pp{6, 2, 0, 1, 1, 1};
    auto f = make_initial_condition(IpsIC{1.0, 0.05}, g, pp);
    CHECK(f.t == 0.05);
    for (int i = 0; i < g.n(); ++i) CHECK(f.u[i] == ips_eval(6, 2, 1, g.x(i), 0.05));
}

TEST_CASE("explicit initial data") {
    Grid g(-3, 1, 128);
    ProblemParams pp{2, 3, 0.5, 1, 0.5, 0.8};
    auto f = make_initial_condition(ExplicitIC{SolutionKind::SeparableU6, 0.1}, g, pp);
    CHECK(f.t == 0.1);
    CHECK(f.u[g.nearest(-1)] == doctest::Approx(explicit_eval(SolutionKind::SeparableU6, pp, -1, 0.1)));
}

TEST_CASE("scenario parsing") {
    auto s = load_scenario(kMinimal);
    CHECK(s.name == "tiny");
    CHECK(s.grid.n() == 64);
    CHECK(std::holds_alternative<PowerFrontIC>(s.ic));
    CHECK(s.control.cfl == 0.4);

    SUBCASE("shipped Region-1 file") {
        auto r1 = load_scenario_file(kScenarios / "region1.cfg");
        CHECK(r1.params.m == 4);
        CHECK(r1.params.p == 2);
        CHECK(r1.params.beta == 0.5);
        CHECK(r1.params.b == 0.5);
        CHECK(r1.params.C == 1.0);
        CHECK(r1.params.alpha == 0.2);
    }
    SUBCASE("empty file names the first missing key") {
        CHECK(error_text("") == "missing required key 'name'");
        CHECK(error_text("# only a comment\n\n") == "missing required key 'name'");
    }
    SUBCASE("duplicate key") {
        CHECK(error_line(std::string(kMinimal) + "m = 3\n") == 12);
    }
    SUBCASE("unknown key") {
        CHECK(error_line(std::string(kMinimal) + "\ncolour = red\n") == 13);
    }
    SUBCASE("unparsable number") {
        std::string t = kMinimal;
        t.replace(t.find("p = 2"), 5, "p = two");
        CHECK(error_line(t) == 3);
        t = kMinimal;
        t.replace(t.find("n = 64"), 6, "n = 6.5");
        CHECK(error_line(t) == 10);
    }
    SUBCASE("missing key") {
        std::string t = kMinimal;
        t.erase(t.find("t_end"));
        CHECK(error_text(t) == "missing required key 't_end'");
    }
    SUBCASE("exclusive step settings") {
        CHECK(error_line(std::string(kMinimal) + "dt = 1e-4\ncfl = 0.3\n") == 13);
    }
    SUBCASE("taper outside the domain") {
        CHECK_THROWS_AS(load_scenario(std::string(kMinimal) + "ic.taper_center = -1.9\n"), ConfigError);
    }
    SUBCASE("keys of another initial-data kind") {
        CHECK_THROWS_AS(load_scenario(std::string(kMinimal) + "ic.gamma = 2\n"), ConfigError);
    }
    SUBCASE("source-type scenario") {
        auto ips = load_scenario(
            "name = s\nm = 6\np = 2\nb = 0\nx_left = -5\nx_right = 5\nn = 64\nt_end = 1\nic.kind = ips\nic.t0 = 0.1\n");
        CHECK(std::get<IpsIC>(ips.ic).t0 == 0.1);
        CHECK(ips.t_start() == 0.1);
    }
}

TEST_CASE("shipped scenarios carry the expected regions") {
    const std::pair<const char*, Region> expected[] = {
        {"region1.cfg", Region::R1},
        {"region1_b0.cfg", Region::B0Case1},
        {"region2_tw_expand.cfg", Region::R2Expand},
        {"region2_tw_shrink.cfg", Region::R2Shrink},
        {"region2_second_expand.cfg", Region::R2Expand},
        {"region2_sub_expand.cfg", Region::R2Expand},
        {"region2_sub_shrink.cfg", Region::R2Shrink},
        {"region3.cfg", Region::R3},
        {"region4a.cfg", Region::R4a},
    };
    for (auto [file, region] : expected) {
        const std::string name = file;
        CAPTURE(name);
        auto s = load_scenario_file(kScenarios / file);
        CHECK(classify(s.params).region == region);
    }
    for (const char* file : {"ips_p2.cfg", "ips_p3.cfg"}) {
        CHECK(std::holds_alternative<IpsIC>(load_scenario_file(kScenarios / file).ic));
    }
}

TEST_CASE("power-law fits") {
    std::vector<TrackPoint> tr;
    for (int k = 0; k < 50; ++k) {
        const double t = 0.01 + 0.002 * k;
        tr.push_back({t, 2 * std::pow(t, 0.625)});
    }
    auto f = fit_powerlaw(tr, {0.0, 1.0}, 1);
    CHECK(std::abs(f.prefactor - 2) < 1e-12);
    CHECK(std::abs(f.exponent - 0.625) < 1e-12);
    CHECK(f.points == 50);
    CHECK(f.rms < 1e-12);

    std::vector<TrackPoint> neg;
    for (int k = 0; k < 20; ++k) {
        const double t = 0.05 + 0.01 * k;
        neg.push_back({t, -0.586 * std::cbrt(t)});
    }
    auto g = fit_powerlaw(neg, {0.0, 1.0}, -1);
    CHECK(g.prefactor == doctest::Approx(0.586).epsilon(1e-12));
    CHECK(g.exponent == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(fit_powerlaw(neg, {0.05, 0.08}, -1), DomainError);
    CHECK_THROWS_AS(fit_powerlaw(neg, {0.0, 1.0}, 1), DomainError);
}

TEST_CASE("power-law fit under grid jitter") {
    std::mt19937 rng(42);
    const double dx = 1.0 / 128;
    std::uniform_real_distribution<double> jitter(-dx / 2, dx / 2);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<TrackPoint> tr;
        for (int k = 0; k < 200; ++k) {
            const double t = 0.1 + 0.0045 * k;
            tr.push_back({t, 0.7 * std::pow(t, 0.625) + jitter(rng)});
        }
        CHECK(std::abs(fit_powerlaw(tr, {0.1, 1.0}, 1).exponent - 0.625) < 0.05);
    }
}

TEST_CASE("speed fit") {
    std::vector<TrackPoint> tr;
    for (int k = 0; k < 30; ++k) tr.push_back({0.01 * k, 0.2 - 0.93 * 0.01 * k});
    auto s = fit_speed(tr, {0.0, 1.0});
    CHECK(s.speed == doctest::Approx(-0.93));
    CHECK(s.offset == doctest::Approx(0.2));
    CHECK_THROWS_AS(fit_speed(tr, {0.5, 1.0}), DomainError);
}

TEST_CASE("track CSV round trip") {
    std::vector<TrackPoint> tr{{0.1, 0.3}, {0.2, -1.0 / 3.0}, {1e-7, 0.1 + 0.2}};
    std::stringstream ss;
    write_track_csv(ss, tr);
    CHECK(ss.str().rfind("t,eta\n", 0) == 0);
    auto back = read_track_csv(ss);
    REQUIRE(back.size() == tr.size());
    for (std::size_t k = 0; k < tr.size(); ++k) {
        CHECK(back[k].t == tr[k].t);
        CHECK(back[k].eta == tr[k].eta);
    }
    std::stringstream bad("time,eta\n0,1\n");
    CHECK_THROWS_AS(read_track_csv(bad), ConfigError);
}

TEST_CASE("runs are deterministic and emit artifacts") {
    auto s = load_scenario(std::string(kMinimal) + "output_times = 0.005, 0.01\n");
    auto a = run_scenario(s);
    auto b = run_scenario(s);
    std::stringstream sa, sb, ta, tb;
    write_snapshots_csv(sa, a.snapshots);
    write_snapshots_csv(sb, b.snapshots);
    write_track_csv(ta, a.track);
    write_track_csv(tb, b.track);
    CHECK(sa.str() == sb.str());
    CHECK(ta.str() == tb.str());
    CHECK(a.snapshots.size() == 2);
    CHECK(sa.str().rfind("t,x,u\n", 0) == 0);
    CHECK(a.region.region == Region::R1);

    const auto dir = std::filesystem::temp_directory_path() / "ddi_harness_test";
    std::filesystem::remove_all(dir);
    write_artifacts(a, dir);
    CHECK(std::filesystem::exists(dir / "tiny_snapshots.csv"));
    CHECK(std::filesystem::exists(dir / "tiny_track.csv"));
    CHECK(std::filesystem::exists(dir / "tiny_report.json"));
    std::ifstream rep(dir / "tiny_report.json");
    std::string text((std::istreambuf_iterator<char>(rep)), {});
    CHECK(text.find("\"region\"") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("instability keeps partial output") {
    std::string t = kMinimal;
    t.replace(t.find("t_end = 0.01"), 12, "t_end = 5");
    auto s = load_scenario(t + "dt = 1.0\n");
    auto r = run_scenario(s);
    CHECK(r.unstable);
    CHECK_FALSE(r.error.empty());
    CHECK(r.track.size() >= 1);
}

TEST_CASE("field sampling") {
    Grid g(0, 1, 16);
    Field f{g, 0, std::vector<double>(16)};
    for (int i = 0; i < 16; ++i) f.u[i] = g.x(i);
    CHECK(sample_field(f, 0.3) == doctest::Approx(0.3));
}
