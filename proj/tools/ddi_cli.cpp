#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ddi/analytic.hpp"
#include "ddi/classification.hpp"
#include "ddi/harness.hpp"
#include "ddi/profiles.hpp"

using namespace ddi;
using nlohmann::json;

namespace {

constexpr int kConfigError = 2;
constexpr int kUnstable = 3;

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json law_to_json(const InterfaceLaw& law) {
    json j{{"sign", law.sign}, {"exponent", opt(law.exponent)}};
    if (const auto* e = std::get_if<ExactPrefactor>(&law.prefactor)) {
        j["prefactor"] = {{"kind", "exact"}, {"value", e->value}};
    } else if (const auto* iv = std::get_if<IntervalPrefactor>(&law.prefactor)) {
        j["prefactor"] = {{"kind", "interval"}, {"lo", iv->lo}, {"hi", iv->hi}};
    } else {
        j["prefactor"] = {{"kind", "profile"}};
    }
    return j;
}

json constants_to_json(const ConstantSet& c) {
    return {{"xi1", opt(c.xi1)},       {"xi2", opt(c.xi2)},
            {"xi3", opt(c.xi3)},       {"xi4", opt(c.xi4)},
            {"zeta1", opt(c.zeta1)},   {"zeta2", opt(c.zeta2)},
            {"zeta3", opt(c.zeta3)},   {"zeta4", opt(c.zeta4)},
            {"zeta5", opt(c.zeta5)},   {"ell0", opt(c.ell0)},
            {"ell1", opt(c.ell1)},     {"theta_star", opt(c.theta_star)},
            {"delta_star", opt(c.delta_star)}, {"big_gamma", opt(c.big_gamma)},
            {"R1", opt(c.R1)},         {"R2", opt(c.R2)},
            {"C1", opt(c.C1)},         {"C2", opt(c.C2)},
            {"C3", opt(c.C3)},         {"C4", opt(c.C4)},
            {"C5", opt(c.C5)},         {"C6", opt(c.C6)},
            {"c_bar", opt(c.c_bar)},   {"gamma_eps", opt(c.gamma_eps)},
            {"ell_star", opt(c.ell_star)}, {"c_star", opt(c.c_star)}};
}

std::vector<double> parse_times(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse time '" + item + "'");
        }
        if (item.find_first_not_of(" \t", pos) != std::string::npos) throw ConfigError("cannot parse time '" + item + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interfaces of the double degenerate parabolic equation with absorption"};
    app.require_subcommand(1);

    // classify
    ProblemParams cp;
    ConstantInputs ci;
    double A0 = 0, A1 = 0, eps = 0, ell = 0;
    auto* classify_cmd = app.add_subcommand("classify", "region, interface law and constants for a parameter set");
    classify_cmd->add_option("--m", cp.m)->required();
    classify_cmd->add_option("--p", cp.p)->required();
    classify_cmd->add_option("--b", cp.b)->required();
    classify_cmd->add_option("--beta", cp.beta)->required();
    classify_cmd->add_option("--C", cp.C)->required();
    classify_cmd->add_option("--alpha", cp.alpha)->required();
    auto* a0_opt = classify_cmd->add_option("--A0", A0, "w(0,1) for b = 0, C = 1");
    auto* a1_opt = classify_cmd->add_option("--A1", A1, "f_1(0) of the critical profile");
    auto* eps_opt = classify_cmd->add_option("--eps", eps, "perturbation size");
    auto* ell_opt = classify_cmd->add_option("--ell", ell, "ell > ell_* for the sharp shrinking bound");

    // run
    std::string run_file, out_dir = ".";
    double threshold = 0;
    auto* run_cmd = app.add_subcommand("run", "evolve a scenario and write snapshots, track and report");
    run_cmd->add_option("file", run_file)->required();
    run_cmd->add_option("--out-dir", out_dir);
    auto* thr_opt = run_cmd->add_option("--threshold", threshold, "interface threshold");

    // profile
    std::string prof_file, seed_times = "0.01,0.02,0.03", prof_out = ".";
    double seed_xi = 0, step = 1e-4;
    auto* prof_cmd = app.add_subcommand("profile", "seed the profile ODE from the PDE and integrate it");
    prof_cmd->add_option("file", prof_file)->required();
    prof_cmd->add_option("--seed-times", seed_times, "comma-separated sample times");
    auto* xi_opt = prof_cmd->add_option("--seed-xi", seed_xi, "seeding abscissa");
    prof_cmd->add_option("--step", step, "ODE step");
    prof_cmd->add_option("--out-dir", prof_out);

    // ips
    double im = 6, ip = 2, igamma = 1, it = 1, ixl = -5, ixr = 5;
    int in = 0;
    auto* ips_cmd = app.add_subcommand("ips", "evaluate the source-type solution");
    ips_cmd->add_option("--m", im);
    ips_cmd->add_option("--p", ip);
    ips_cmd->add_option("--gamma", igamma);
    ips_cmd->add_option("--t", it);
    ips_cmd->add_option("--x-left", ixl);
    ips_cmd->add_option("--x-right", ixr);
    ips_cmd->add_option("--n", in, "grid nodes; prints x,u as CSV when positive");

    // compare
    std::string track_file, scen_file, window_s;
    int sign = 0;
    auto* cmp_cmd = app.add_subcommand("compare", "fit a power law to an interface track");
    cmp_cmd->add_option("track", track_file)->required();
    cmp_cmd->add_option("--scenario", scen_file, "scenario whose interface law is the reference");
    cmp_cmd->add_option("--window", window_s, "t_a,t_b");
    cmp_cmd->add_option("--sign", sign, "+1 or -1; taken from the scenario when omitted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }

    try {
        if (*classify_cmd) {
            if (*a0_opt) ci.A0 = A0;
            if (*a1_opt) ci.A1 = A1;
            if (*eps_opt) ci.eps = eps;
            if (*ell_opt) ci.ell = ell;
            cp.validate();
            const auto rep = classify(cp);
            json j;
            j["region"] = std::string(to_string(rep.region));
            j["thresholds"] = {{"absorption", opt(rep.thresholds.absorption)},
                               {"critical", opt(rep.thresholds.critical)},
                               {"stationary", opt(rep.thresholds.stationary)},
                               {"explicit_b0", opt(rep.thresholds.explicit_b0)}};
            j["c_star"] = opt(rep.c_star);
            j["interface_law"] = law_to_json(interface_law(rep, cp));
            j["constants"] = constants_to_json(appendix_constants(cp, ci));
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (*run_cmd) {
            Scenario s = load_scenario_file(run_file);
            if (*thr_opt) {
                s.control.interface_threshold = threshold;
                s.validate();
            }
            const RunResult r = run_scenario(s);
            write_artifacts(r, out_dir);
            std::cout << report_json(r) << '\n';
            if (r.unstable) {
                std::cerr << "solver instability: " << r.error << '\n';
                return kUnstable;
            }
            return 0;
        }
        if (*prof_cmd) {
            const Scenario s = load_scenario_file(prof_file);
            ProfileOptions po;
            po.step = step;
            const auto pr = run_profile(s, parse_times(seed_times),
                                        *xi_opt ? std::optional<double>(seed_xi) : std::nullopt, po);
            std::filesystem::create_directories(prof_out);
            std::ofstream os(std::filesystem::path(prof_out) / (s.name + "_profile.csv"));
            write_profile_csv(os, pr.table);
            json j{{"name", s.name},
                   {"region", std::string(to_string(pr.region))},
                   {"exponents", {{"a", pr.exponents.a}, {"c", pr.exponents.c}}},
                   {"seed", {{"xi", pr.table.seed.xi}, {"f", pr.table.seed.f}, {"fp", pr.table.seed.fp}}},
                   {"front", pr.table.front},
                   {"samples", pr.table.xi.size()}};
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (*ips_cmd) {
            if (!(im * ip > 1.0) || !(igamma > 0.0) || !(it > 0.0)) throw DomainError("ips needs mp > 1, gamma > 0, t > 0");
            if (in > 0) {
                const Grid g(ixl, ixr, in);
                std::cout << "x,u\n";
                for (int i = 0; i < g.n(); ++i) {
                    std::printf("%.17g,%.17g\n", g.x(i), ips_eval(im, ip, igamma, g.x(i), it));
                }
                return 0;
            }
            json j{{"m", im},
                   {"p", ip},
                   {"gamma", igamma},
                   {"t", it},
                   {"k", ips_shape_constant(im, ip)},
                   {"eta", ips_interface(im, ip, igamma, it)},
                   {"u_at_origin", ips_eval(im, ip, igamma, 0.0, it)}};
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (*cmp_cmd) {
            std::ifstream is(track_file);
            if (!is) throw ConfigError("cannot open " + track_file);
            const auto track = read_track_csv(is);
            if (track.empty()) throw ConfigError("empty track");
            std::optional<InterfaceLaw> law;
            std::array<double, 2> window{0.02 * track.back().t, 0.2 * track.back().t};
            if (!scen_file.empty()) {
                const Scenario s = load_scenario_file(scen_file);
                law = interface_law(classify(s.params), s.params);
                window = s.fit_window.value_or(std::array<double, 2>{0.02 * s.t_end, 0.2 * s.t_end});
                if (sign == 0) sign = law->sign;
            }
            if (!window_s.empty()) {
                const auto w = parse_times(window_s);
                if (w.size() != 2) throw ConfigError("--window needs t_a,t_b");
                window = {w[0], w[1]};
            }
            if (sign == 0) sign = 1;
            const auto fit = fit_powerlaw(track, window, sign);
            json j{{"prefactor", fit.prefactor}, {"exponent", fit.exponent}, {"rms", fit.rms},
                   {"window", {fit.t_a, fit.t_b}}, {"points", fit.points}, {"sign", fit.sign}};
            if (law) {
                j["predicted"] = law_to_json(*law);
                if (law->exponent) j["exponent_error"] = fit.exponent - *law->exponent;
            }
            std::cout << j.dump(2) << '\n';
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kConfigError;
    } catch (const InstabilityError& e) {
        std::cerr << "solver instability: " << e.what() << '\n';
        return kUnstable;
    }
    return 0;
}
