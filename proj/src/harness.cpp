#include "ddi/harness.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace ddi {

double Scenario::t_start() const {
    if (const auto* ips = std::get_if<IpsIC>(&ic)) return ips->t0;
    if (const auto* ex = std::get_if<ExplicitIC>(&ic)) return ex->t0;
    return 0.0;
}

void Scenario::validate() const {
    params.validate();
    control.validate();
    const double t0 = t_start();
    if (!(t_end > t0)) throw DomainError("t_end must exceed the initial time");
    for (std::size_t i = 0; i < output_times.size(); ++i) {
        const double t = output_times[i];
        if (!(t > t0 && t <= t_end)) throw DomainError("output times must lie in (t0, t_end]");
        if (i > 0 && !(t > output_times[i - 1])) throw DomainError("output times must be strictly increasing");
    }
    if (fit_window && !((*fit_window)[0] > 0.0 && (*fit_window)[1] > (*fit_window)[0])) {
        throw DomainError("fit window needs 0 < t_a < t_b");
    }
    if (const auto* pf = std::get_if<PowerFrontIC>(&ic)) {
        if (!(pf->taper_width > 0.0)) throw DomainError("taper width must be positive");
        if (pf->taper_center + pf->taper_width > 0.0 || pf->taper_center - pf->taper_width < grid.x_left()) {
            throw DomainError("taper window must lie inside the domain left of 0");
        }
        if (!(grid.x_right() > 0.0)) throw DomainError("power-front data needs x = 0 inside the domain");
    }
    if (const auto* ips = std::get_if<IpsIC>(&ic)) {
        if (!(ips->t0 > 0.0 && ips->gamma > 0.0)) throw DomainError("IPS data needs t0 > 0 and gamma > 0");
    }
}

Field make_initial_condition(const InitialCondition& ic, const Grid& grid, const ProblemParams& pp) {
    Field f{grid, 0.0, std::vector<double>(static_cast<std::size_t>(grid.n()), 0.0)};
    if (const auto* ips = std::get_if<IpsIC>(&ic)) {
        f.t = ips->t0;
        for (int i = 0; i < grid.n(); ++i) f.u[i] = ips_eval(pp.m, pp.p, ips->gamma, grid.x(i), ips->t0);
    } else if (const auto* pf = std::get_if<PowerFrontIC>(&ic)) {
        const double lo = pf->taper_center - pf->taper_width;
        if (!(pf->taper_width > 0.0) || pf->taper_center + pf->taper_width > 0.0 || lo < grid.x_left()) {
            throw DomainError("taper window must lie inside the domain left of 0");
        }
        const double edge = pf->taper_center + pf->taper_width;
        const double steep = pf->taper_width / 4.0;
        for (int i = 0; i < grid.n(); ++i) {
            const double x = grid.x(i);
            double v = pp.C * pos_pow(-x, pp.alpha);
            if (x < edge) v *= 0.5 * (1.0 + std::tanh((x - pf->taper_center) / steep));
            f.u[i] = v;
        }
    } else {
        const auto& ex = std::get<ExplicitIC>(ic);
        const ExplicitSolution sol(ex.kind, pp);
        f.t = ex.t0;
        for (int i = 0; i < grid.n(); ++i) f.u[i] = sol(grid.x(i), ex.t0);
    }
    return f;
}

ConfigError::ConfigError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line;
};

double parse_double(const Entry& e, const std::string& key) {
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || e.value.empty()) {
        throw ConfigError("cannot parse number for '" + key + "': '" + e.value + "'", e.line);
    }
    return v;
}

int parse_int(const Entry& e, const std::string& key) {
    int v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || e.value.empty()) {
        throw ConfigError("cannot parse integer for '" + key + "': '" + e.value + "'", e.line);
    }
    return v;
}

std::vector<double> parse_list(const Entry& e, const std::string& key) {
    std::vector<double> out;
    std::string_view rest = e.value;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = trim(rest.substr(0, comma));
        out.push_back(parse_double(Entry{std::string(item), e.line}, key));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

const std::vector<std::string> kKnownKeys = {
    "name",       "m",         "p",          "b",        "beta",   "C",
    "alpha",      "x_left",    "x_right",    "n",        "dt",     "cfl",
    "t_end",      "output_times", "threshold", "clip",   "fit_window",
    "ic.kind",    "ic.gamma",  "ic.t0",      "ic.taper_center",    "ic.taper_width",
    "ic.solution",
};

}  // namespace

Scenario load_scenario(std::string_view text) {
    std::map<std::string, Entry> kv;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected key = value", line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError("empty key", line_no);
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
            throw ConfigError("unknown key '" + key + "'", line_no);
        }
        if (kv.count(key)) {
            throw ConfigError("duplicate key '" + key + "' (first on line " + std::to_string(kv[key].line) + ")",
                              line_no);
        }
        kv[key] = Entry{value, line_no};
    }

    auto has = [&](const std::string& k) { return kv.count(k) > 0; };
    auto require = [&](const std::string& k) {
        if (!has(k)) throw ConfigError("missing required key '" + k + "'");
    };
    auto num = [&](const std::string& k) { return parse_double(kv.at(k), k); };

    const std::string kind = has("ic.kind") ? kv["ic.kind"].value : "power_front";
    if (kind != "power_front" && kind != "ips" && kind != "explicit") {
        throw ConfigError("unknown ic.kind '" + kind + "'", kv["ic.kind"].line);
    }

    Scenario s;
    require("name");
    s.name = kv["name"].value;
    if (s.name.empty() || s.name.find_first_of("/\\ ") != std::string::npos) {
        throw ConfigError("name must be a non-empty token", kv["name"].line);
    }
    require("m");
    require("p");
    require("b");
    s.params.m = num("m");
    s.params.p = num("p");
    s.params.b = num("b");
    if (s.params.b != 0.0) require("beta");
    s.params.beta = has("beta") ? num("beta") : 1.0;
    if (kind != "ips") {
        require("C");
        require("alpha");
    }
    s.params.C = has("C") ? num("C") : 1.0;
    s.params.alpha = has("alpha") ? num("alpha") : 1.0;
    require("x_left");
    require("x_right");
    require("n");
    require("t_end");
    s.t_end = num("t_end");

    if (has("dt") && has("cfl")) throw ConfigError("dt and cfl are exclusive", kv["cfl"].line);
    if (has("dt")) s.control.dt = num("dt");
    if (has("cfl")) s.control.cfl = num("cfl");
    if (has("threshold")) s.control.interface_threshold = num("threshold");
    if (has("clip")) {
        const auto& v = kv["clip"].value;
        if (v != "true" && v != "false") throw ConfigError("clip must be true or false", kv["clip"].line);
        s.control.clip_negative = v == "true";
    }
    s.output_times = has("output_times") ? parse_list(kv["output_times"], "output_times")
                                         : std::vector<double>{s.t_end};
    if (has("fit_window")) {
        const auto w = parse_list(kv["fit_window"], "fit_window");
        if (w.size() != 2) throw ConfigError("fit_window needs two times", kv["fit_window"].line);
        s.fit_window = std::array<double, 2>{w[0], w[1]};
    }

    auto reject = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys) {
            if (has(k)) throw ConfigError(std::string("key '") + k + "' does not apply to ic.kind " + kind, kv[k].line);
        }
    };
    if (kind == "power_front") {
        reject({"ic.gamma", "ic.t0", "ic.solution"});
        PowerFrontIC pf;
        if (has("ic.taper_center")) pf.taper_center = num("ic.taper_center");
        if (has("ic.taper_width")) pf.taper_width = num("ic.taper_width");
        s.ic = pf;
    } else if (kind == "ips") {
        reject({"ic.taper_center", "ic.taper_width", "ic.solution"});
        IpsIC ips;
        if (has("ic.gamma")) ips.gamma = num("ic.gamma");
        if (has("ic.t0")) ips.t0 = num("ic.t0");
        s.ic = ips;
    } else {
        reject({"ic.taper_center", "ic.taper_width", "ic.gamma"});
        require("ic.solution");
        ExplicitIC ex;
        const auto k = solution_kind_from_string(kv["ic.solution"].value);
        if (!k) throw ConfigError("unknown ic.solution '" + kv["ic.solution"].value + "'", kv["ic.solution"].line);
        ex.kind = *k;
        if (has("ic.t0")) ex.t0 = num("ic.t0");
        s.ic = ex;
    }

    try {
        s.grid = Grid(num("x_left"), num("x_right"), parse_int(kv["n"], "n"));
        s.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
}

FitReport fit_powerlaw(const std::vector<TrackPoint>& track, std::array<double, 2> window, int sign) {
    if (sign != 1 && sign != -1) throw DomainError("fit sign must be +1 or -1");
    std::vector<double> lx, ly;
    for (const auto& pt : track) {
        if (pt.t < window[0] || pt.t > window[1]) continue;
        const double mag = sign * pt.eta;
        if (!(mag > 0.0) || !(pt.t > 0.0)) throw DomainError("power-law fit needs positive magnitudes in the window");
        lx.push_back(std::log(pt.t));
        ly.push_back(std::log(mag));
    }
    if (lx.size() < 5) throw DomainError("power-law fit needs at least 5 points in the window");
    const double n = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("power-law fit needs distinct times");
    FitReport rep;
    rep.exponent = sxy / sxx;
    const double intercept = my - rep.exponent * mx;
    rep.prefactor = std::exp(intercept);
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (intercept + rep.exponent * lx[i]);
        ss += r * r;
    }
    rep.rms = std::sqrt(ss / n);
    rep.t_a = window[0];
    rep.t_b = window[1];
    rep.points = lx.size();
    rep.sign = sign;
    return rep;
}

SpeedFit fit_speed(const std::vector<TrackPoint>& track, std::array<double, 2> window) {
    std::vector<double> ts, es;
    for (const auto& pt : track) {
        if (pt.t < window[0] || pt.t > window[1]) continue;
        ts.push_back(pt.t);
        es.push_back(pt.eta);
    }
    if (ts.size() < 5) throw DomainError("speed fit needs at least 5 points in the window");
    const double n = static_cast<double>(ts.size());
    double mt = 0.0, me = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mt += ts[i];
        me += es[i];
    }
    mt /= n;
    me /= n;
    double stt = 0.0, ste = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - mt) * (ts[i] - mt);
        ste += (ts[i] - mt) * (es[i] - me);
    }
    if (!(stt > 0.0)) throw DomainError("speed fit needs distinct times");
    SpeedFit out;
    out.speed = ste / stt;
    out.offset = me - out.speed * mt;
    double ss = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double r = es[i] - out.offset - out.speed * ts[i];
        ss += r * r;
    }
    out.rms = std::sqrt(ss / n);
    out.t_a = window[0];
    out.t_b = window[1];
    out.points = ts.size();
    return out;
}

double sample_field(const Field& f, double x) {
    const Grid& g = f.grid;
    const double s = (x - g.x_left()) / g.dx();
    const int n = g.n();
    double fl = std::floor(s);
    const double w = s - fl;
    long i = static_cast<long>(fl);
    const auto wrap = [n](long k) { return static_cast<std::size_t>(((k % n) + n) % n); };
    return (1.0 - w) * f.u[wrap(i)] + w * f.u[wrap(i + 1)];
}

RunResult run_scenario(const Scenario& s) {
    s.validate();
    RunResult r{s, classify(s.params), {}, {}, {}, {}, {}, 0, 0.0, 0.0, 0.0, 0.0, false, {},
                Field{s.grid, 0.0, {}}};
    r.law = interface_law(r.region, s.params);

    Field u0 = make_initial_condition(s.ic, s.grid, s.params);
    r.mass_initial = u0.mass();
    const double thr = s.control.interface_threshold;

    Observers obs;
    obs.output_times = s.output_times;
    obs.on_output = [&](const Field& f) { r.snapshots.push_back({f}); };
    obs.on_step = [&](const Field& f) {
        if (const auto eta = locate_interface(f, thr)) r.track.push_back({f.t, *eta});
    };
    try {
        const auto res = evolve(std::move(u0), s.params, s.control, s.t_end, obs);
        r.steps = res.steps;
        r.min_dt = res.min_dt;
        r.max_dt = res.max_dt;
        r.final_field = res.final;
    } catch (const InstabilityError& e) {
        r.unstable = true;
        r.error = e.what();
        r.final_field = e.last_good();
    }
    r.mass_final = r.final_field.mass();

    int sign = r.law.sign;
    if (std::holds_alternative<IpsIC>(s.ic)) sign = 1;
    if (sign == 0) {
        r.fit_error = "stationary interface; no power law";
    } else {
        const std::array<double, 2> window = s.fit_window.value_or(std::array<double, 2>{0.02 * s.t_end, 0.2 * s.t_end});
        try {
            r.fit = fit_powerlaw(r.track, window, sign);
            if (!std::holds_alternative<IpsIC>(s.ic)) r.fit->predicted = r.law;
        } catch (const DomainError& e) {
            r.fit_error = e.what();
        }
    }
    return r;
}

ProfileRun run_profile(const Scenario& s, const std::vector<double>& seed_times, std::optional<double> seed_xi,
                       const ProfileOptions& opt) {
    if (seed_times.empty()) throw DomainError("profile seeding needs sample times");
    if (!std::holds_alternative<PowerFrontIC>(s.ic)) throw DomainError("profile seeding needs power-front data");
    const auto rep = classify(s.params);
    ProfileRun out;
    out.region = rep.region;
    const bool region2 =
        rep.region == Region::R2Expand || rep.region == Region::R2Shrink || rep.region == Region::R2Stationary;
    if (rep.region == Region::R1 || rep.region == Region::B0Case1) {
        out.exponents = region1_exponents(s.params);
    } else if (region2) {
        out.exponents = region2_exponents(s.params);
    } else {
        throw DomainError("profiles exist for region 1 and region 2 data only");
    }
    double xs = 0.0;
    if (seed_xi) {
        xs = *seed_xi;
    } else if (rep.region == Region::R2Shrink) {
        const auto& pp = s.params;
        xs = -std::pow(pp.b * (1.0 - pp.beta) / std::pow(pp.C, 1.0 - pp.beta), out.exponents.c);
    }

    Scenario sc = s;
    sc.output_times = seed_times;
    std::sort(sc.output_times.begin(), sc.output_times.end());
    sc.t_end = sc.output_times.back();
    sc.validate();
    const double dx = s.grid.dx();
    Observers obs;
    obs.output_times = sc.output_times;
    obs.on_output = [&](const Field& f) {
        const double x0 = xs * std::pow(f.t, out.exponents.c);
        PdeSample smp{f.t, {}};
        for (int j = 0; j < 3; ++j) smp.u[j] = sample_field(f, x0 + j * dx);
        out.samples.push_back(smp);
    };
    evolve(make_initial_condition(sc.ic, sc.grid, sc.params), sc.params, sc.control, sc.t_end, obs);

    const Seed seed = seed_from_pde(out.samples, out.exponents, dx, xs);
    out.table = region2 ? integrate_region2(seed, s.params, opt) : integrate_region1(seed, s.params, opt);
    return out;
}

namespace {

void put(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

}  // namespace

void write_snapshots_csv(std::ostream& os, const std::vector<Snapshot>& snaps) {
    os << "t,x,u\n";
    for (const auto& s : snaps) {
        for (int i = 0; i < s.field.grid.n(); ++i) {
            put(os, s.field.t);
            os << ',';
            put(os, s.field.grid.x(i));
            os << ',';
            put(os, s.field.u[i]);
            os << '\n';
        }
    }
}

void write_track_csv(std::ostream& os, const std::vector<TrackPoint>& track) {
    os << "t,eta\n";
    for (const auto& p : track) {
        put(os, p.t);
        os << ',';
        put(os, p.eta);
        os << '\n';
    }
}

void write_profile_csv(std::ostream& os, const ProfileTable& table) {
    os << "xi,f\n";
    for (std::size_t i = 0; i < table.xi.size(); ++i) {
        put(os, table.xi[i]);
        os << ',';
        put(os, table.f[i]);
        os << '\n';
    }
}

std::vector<TrackPoint> read_track_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || trim(line) != "t,eta") throw ConfigError("track CSV needs header 't,eta'", 1);
    std::vector<TrackPoint> out;
    int no = 1;
    while (std::getline(is, line)) {
        ++no;
        const auto l = trim(line);
        if (l.empty()) continue;
        const auto comma = l.find(',');
        if (comma == std::string_view::npos) throw ConfigError("expected two columns", no);
        const double t = parse_double(Entry{std::string(trim(l.substr(0, comma))), no}, "t");
        const double eta = parse_double(Entry{std::string(trim(l.substr(comma + 1))), no}, "eta");
        out.push_back({t, eta});
    }
    return out;
}

namespace {

nlohmann::json law_json(const InterfaceLaw& law) {
    nlohmann::json j;
    j["sign"] = law.sign;
    j["exponent"] = law.exponent ? nlohmann::json(*law.exponent) : nlohmann::json(nullptr);
    std::visit(
        [&](const auto& pf) {
            using T = std::decay_t<decltype(pf)>;
            if constexpr (std::is_same_v<T, ExactPrefactor>) {
                j["prefactor"] = {{"kind", "exact"}, {"value", pf.value}};
            } else if constexpr (std::is_same_v<T, IntervalPrefactor>) {
                j["prefactor"] = {{"kind", "interval"}, {"lo", pf.lo}, {"hi", pf.hi}};
            } else {
                j["prefactor"] = {{"kind", "profile"}};
            }
        },
        law.prefactor);
    return j;
}

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

std::string report_json(const RunResult& r) {
    const auto& s = r.scenario;
    nlohmann::json j;
    j["name"] = s.name;
    j["params"] = {{"m", s.params.m},         {"p", s.params.p}, {"b", s.params.b},
                   {"beta", s.params.beta},   {"C", s.params.C}, {"alpha", s.params.alpha}};
    j["grid"] = {{"x_left", s.grid.x_left()}, {"x_right", s.grid.x_right()}, {"n", s.grid.n()}, {"dx", s.grid.dx()}};
    j["initial_condition"] = std::holds_alternative<IpsIC>(s.ic)       ? "ips"
                             : std::holds_alternative<PowerFrontIC>(s.ic) ? "power_front"
                                                                          : "explicit";
    j["region"] = std::string(to_string(r.region.region));
    j["thresholds"] = {{"absorption", opt_json(r.region.thresholds.absorption)},
                       {"critical", opt_json(r.region.thresholds.critical)},
                       {"stationary", opt_json(r.region.thresholds.stationary)},
                       {"explicit_b0", opt_json(r.region.thresholds.explicit_b0)}};
    j["c_star"] = opt_json(r.region.c_star);
    j["interface_law"] = law_json(r.law);
    j["steps"] = r.steps;
    j["min_dt"] = r.min_dt;
    j["max_dt"] = r.max_dt;
    j["final_time"] = r.final_field.t;
    j["mass_initial"] = r.mass_initial;
    j["mass_final"] = r.mass_final;
    j["status"] = r.unstable ? "unstable" : "ok";
    if (r.unstable) j["error"] = r.error;
    if (r.fit) {
        j["fit"] = {{"prefactor", r.fit->prefactor}, {"exponent", r.fit->exponent}, {"rms", r.fit->rms},
                    {"window", {r.fit->t_a, r.fit->t_b}},  {"points", r.fit->points}, {"sign", r.fit->sign}};
        if (r.fit->predicted) j["fit"]["predicted"] = law_json(*r.fit->predicted);
    } else {
        j["fit"] = nullptr;
        j["fit_error"] = r.fit_error;
    }
    return j.dump(2);
}

void write_artifacts(const RunResult& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto& name = r.scenario.name;
    {
        std::ofstream os(dir / (name + "_snapshots.csv"));
        write_snapshots_csv(os, r.snapshots);
    }
    {
        std::ofstream os(dir / (name + "_track.csv"));
        write_track_csv(os, r.track);
    }
    std::ofstream os(dir / (name + "_report.json"));
    os << report_json(r) << '\n';
}

}  // namespace ddi
