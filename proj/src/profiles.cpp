#include "ddi/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ddi {

SelfSimilarExponents region1_exponents(const ProblemParams& pp) {
    const double denom = 1.0 + pp.p - pp.alpha * (pp.mp() - 1.0);
    if (!(denom > 0.0)) throw DomainError("region-1 scaling needs alpha < (1+p)/(mp-1)");
    return {pp.alpha / denom, 1.0 / denom};
}

SelfSimilarExponents region2_exponents(const ProblemParams& pp) {
    if (!(pp.beta > 0.0 && pp.beta < 1.0)) throw DomainError("region-2 scaling needs 0 < beta < 1");
    return {1.0 / (1.0 - pp.beta), (pp.mp() - pp.beta) / ((1.0 + pp.p) * (1.0 - pp.beta))};
}

Seed seed_from_pde(const std::vector<PdeSample>& samples, const SelfSimilarExponents& exps, double dx,
                   double xi_s) {
    if (samples.empty()) throw DomainError("seeding needs at least one sample time");
    if (!(dx > 0.0)) throw DomainError("seeding needs dx > 0");
    std::array<double, 3> F{0.0, 0.0, 0.0};
    double h = 0.0;
    for (const auto& s : samples) {
        if (!(s.t > 0.0) || !std::isfinite(s.t)) throw DomainError("sample times must be positive");
        const double scale = std::pow(s.t, -exps.a);
        for (int j = 0; j < 3; ++j) {
            if (!std::isfinite(s.u[j]) || s.u[j] < 0.0) throw DomainError("non-finite or negative PDE sample");
            F[j] += s.u[j] * scale;
        }
        h += dx * std::pow(s.t, -exps.c);
    }
    const double n = static_cast<double>(samples.size());
    for (double& v : F) v /= n;
    h /= n;
    if (!(F[0] > 0.0)) throw DomainError("seed value must be positive");
    if (F[1] > F[0] || F[2] > F[1]) throw DomainError("PDE samples are not monotone near the seed point");
    return {xi_s, F[0], (-3.0 * F[0] + 4.0 * F[1] - F[2]) / (2.0 * h)};
}

std::array<double, 2> profile_rhs(ProfileKind kind, const ProblemParams& pp, double xi, double f, double G) {
    const double fp = flux_phi_inverse(G, pp.p) / (pp.m * std::pow(f, pp.m - 1.0));
    double Gp;
    if (kind == ProfileKind::Region1) {
        const auto e = region1_exponents(pp);
        Gp = -e.c * (xi * fp - pp.alpha * f);
    } else {
        const auto e = region2_exponents(pp);
        Gp = e.a * f + pp.b * std::pow(f, pp.beta) - e.c * xi * fp;
    }
    return {fp, Gp};
}

namespace {

bool finite2(const std::array<double, 2>& v) { return std::isfinite(v[0]) && std::isfinite(v[1]); }

ProfileTable integrate(ProfileKind kind, const Seed& seed, const ProblemParams& pp, const ProfileOptions& opt) {
    if (!(seed.f > 0.0) || !std::isfinite(seed.fp)) throw DomainError("profile seed needs f > 0 and finite f'");
    if (!(opt.step > 0.0) || !(opt.xi_max > seed.xi)) throw DomainError("bad profile step or range");
    constexpr double kMinF = 1e-6;
    constexpr double kMaxSlope = 1e6;

    ProfileTable tab;
    tab.kind = kind;
    tab.seed = seed;
    double xi = seed.xi;
    double f = seed.f;
    double G = flux_phi(pp.m * std::pow(f, pp.m - 1.0) * seed.fp, pp.p);
    tab.xi.push_back(xi);
    tab.f.push_back(f);

    const double h = opt.step;
    auto rhs = [&](double x, double ff, double gg) -> std::array<double, 2> {
        if (!(ff > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
        return profile_rhs(kind, pp, x, ff, gg);
    };
    bool first = true;
    while (xi < opt.xi_max) {
        const auto k1 = rhs(xi, f, G);
        const auto k2 = rhs(xi + 0.5 * h, f + 0.5 * h * k1[0], G + 0.5 * h * k1[1]);
        const auto k3 = rhs(xi + 0.5 * h, f + 0.5 * h * k2[0], G + 0.5 * h * k2[1]);
        const auto k4 = rhs(xi + h, f + h * k3[0], G + h * k3[1]);
        if (!(finite2(k1) && finite2(k2) && finite2(k3) && finite2(k4))) {
            if (first) throw DomainError("profile integration fails at the seed point");
            break;
        }
        const double fn = f + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        const double Gn = G + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        first = false;
        if (!std::isfinite(fn) || !std::isfinite(Gn) || fn <= 0.0) break;
        if (fn > f) break;
        xi += h;
        f = fn;
        G = Gn;
        tab.xi.push_back(xi);
        tab.f.push_back(f);
        if (f < kMinF) break;
        const double fm1 = std::pow(f, pp.m - 1.0);
        if (fm1 == 0.0 || !std::isfinite(fm1)) break;
        if (std::abs(flux_phi_inverse(G, pp.p) / (pp.m * fm1)) > kMaxSlope) break;
    }
    const auto it = std::min_element(tab.f.begin(), tab.f.end());
    tab.front = tab.xi[static_cast<std::size_t>(it - tab.f.begin())];
    return tab;
}

}  // namespace

ProfileTable integrate_region1(const Seed& seed, const ProblemParams& pp, const ProfileOptions& opt) {
    if (!(pp.mp() > 1.0)) throw DomainError("region-1 profile needs mp > 1");
    region1_exponents(pp);
    return integrate(ProfileKind::Region1, seed, pp, opt);
}

ProfileTable integrate_region2(const Seed& seed, const ProblemParams& pp, const ProfileOptions& opt) {
    region2_exponents(pp);
    return integrate(ProfileKind::Region2, seed, pp, opt);
}

double phase_asymptote_constant(const ProblemParams& pp) {
    return std::pow(pp.b * pp.m * (1.0 + pp.p) / (pp.p * (pp.m + pp.beta)), pp.p / (1.0 + pp.p));
}

PhasePlaneTable phase_plane(double k, const ProblemParams& pp, double X_max, int steps_per_decade) {
    if (!(pp.beta > 0.0 && pp.beta < 1.0)) throw DomainError("phase plane needs 0 < beta < 1");
    if (!(pp.p * (pp.m + pp.beta) > 1.0 + pp.p)) throw DomainError("phase plane needs p(m+beta) > 1+p");
    if (!(k > 0.0)) throw DomainError("phase plane needs k > 0");
    if (!(X_max > kPhaseSeed) || steps_per_decade < 1) throw DomainError("bad phase-plane range");

    PhasePlaneTable tab;
    tab.k = k;
    tab.params = pp;
    const double ds = std::log(10.0) / steps_per_decade;
    const double s_end = std::log(X_max);
    // dY/ds with s = ln X
    auto rhs = [&](double s, double Y) {
        const double X = std::exp(s);
        return X * (k + pp.b * pp.m * std::pow(X, pp.m + pp.beta - 1.0) * std::pow(Y, -1.0 / pp.p));
    };
    double s = std::log(kPhaseSeed);
    double Y = k * kPhaseSeed;
    tab.X.push_back(kPhaseSeed);
    tab.Y.push_back(Y);
    while (s < s_end - 1e-12) {
        const double h = std::min(ds, s_end - s);
        const double k1 = rhs(s, Y);
        const double k2 = rhs(s + 0.5 * h, Y + 0.5 * h * k1);
        const double k3 = rhs(s + 0.5 * h, Y + 0.5 * h * k2);
        const double k4 = rhs(s + h, Y + h * k3);
        Y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        s += h;
        if (!(Y > 0.0) || !std::isfinite(Y)) throw DomainError("phase-plane trajectory left Y > 0; reduce the step");
        tab.X.push_back(std::exp(s));
        tab.Y.push_back(Y);
    }
    return tab;
}

std::vector<double> wave_coordinate(const PhasePlaneTable& tab) {
    const auto& pp = tab.params;
    const double e = pp.m - 1.0 / pp.p;
    if (!(e > 0.0)) throw DomainError("wave profile needs mp > 1");
    std::vector<double> y(tab.X.size());
    // near the origin Y = kX, so the integrand is m k^{-1/p} X^{m-1-1/p}
    y[0] = pp.m * std::pow(tab.k, -1.0 / pp.p) * std::pow(tab.X[0], e) / e;
    auto g = [&](std::size_t i) {
        // integrand times X for quadrature in ln X
        return pp.m * std::pow(tab.X[i], pp.m) * std::pow(tab.Y[i], -1.0 / pp.p);
    };
    for (std::size_t i = 1; i < y.size(); ++i) {
        const double ds = std::log(tab.X[i] / tab.X[i - 1]);
        y[i] = y[i - 1] + 0.5 * ds * (g(i - 1) + g(i));
    }
    return y;
}

std::vector<double> wave_profile(const PhasePlaneTable& tab, const std::vector<double>& y_grid) {
    const auto y = wave_coordinate(tab);
    std::vector<double> phi;
    phi.reserve(y_grid.size());
    for (double yy : y_grid) {
        if (yy < 0.0 || yy > y.back()) throw DomainError("requested y outside the tabulated range");
        if (yy <= y.front()) {
            // inverse of the near-origin power law
            phi.push_back(tab.X.front() * std::pow(yy / y.front(), 1.0 / (tab.params.m - 1.0 / tab.params.p)));
            continue;
        }
        const auto it = std::lower_bound(y.begin(), y.end(), yy);
        const std::size_t i = static_cast<std::size_t>(it - y.begin());
        const double w = (yy - y[i - 1]) / (y[i] - y[i - 1]);
        phi.push_back(tab.X[i - 1] + w * (tab.X[i] - tab.X[i - 1]));
    }
    return phi;
}

}  // namespace ddi
