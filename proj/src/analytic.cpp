#include "ddi/analytic.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace ddi {

double ips_shape_constant(double m, double p) {
    return (m * p - 1.0) / (m * (1.0 + p)) * std::pow(1.0 / (p * (m + 1.0)), 1.0 / p);
}

double ips_eval(double m, double p, double gamma, double x, double t) {
    if (!(t > 0.0)) throw DomainError("ips_eval requires t > 0");
    if (!(m * p > 1.0)) throw DomainError("ips_eval requires mp > 1");
    const double s = std::pow(t, -1.0 / (p * (m + 1.0)));
    const double bracket = gamma - ips_shape_constant(m, p) * std::pow(std::abs(x) * s, (1.0 + p) / p);
    return s * pos_pow(bracket, p / (m * p - 1.0));
}

double ips_interface(double m, double p, double gamma, double t) {
    if (!(t > 0.0)) throw DomainError("ips_interface requires t > 0");
    return std::pow(t, 1.0 / (p * (m + 1.0))) * std::pow(gamma / ips_shape_constant(m, p), p / (p + 1.0));
}

namespace {

constexpr std::array kKindNames{
    std::pair{SolutionKind::IPS, "ips"},
    std::pair{SolutionKind::TravelingWaveU2, "traveling_wave"},
    std::pair{SolutionKind::SeparableU6, "separable_absorption"},
    std::pair{SolutionKind::ExplicitU7, "explicit_front"},
    std::pair{SolutionKind::SeparableU9, "separable"},
    std::pair{SolutionKind::ReactionLimitU5, "reaction_limit"},
};

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

}  // namespace

std::string_view to_string(SolutionKind k) {
    for (auto [kind, name] : kKindNames) {
        if (kind == k) return name;
    }
    return "unknown";
}

std::optional<SolutionKind> solution_kind_from_string(std::string_view s) {
    for (auto [kind, name] : kKindNames) {
        if (name == s) return kind;
    }
    return std::nullopt;
}

ExplicitSolution::ExplicitSolution(SolutionKind kind, const ProblemParams& pp, double ips_gamma)
    : kind_(kind), params_(pp), gamma_(ips_gamma), lifetime_(std::numeric_limits<double>::infinity()) {
    const double m = pp.m, p = pp.p, b = pp.b, beta = pp.beta, C = pp.C, alpha = pp.alpha;
    const double mp = pp.mp();
    switch (kind) {
        case SolutionKind::IPS:
            require(mp > 1.0 && gamma_ > 0.0, "IPS requires mp > 1 and gamma > 0");
            break;
        case SolutionKind::TravelingWaveU2: {
            require(beta > 0.0 && beta < 1.0 && b > 0.0, "U2 requires 0 < beta < 1 and b > 0");
            require(nearly_equal(p * (m + beta), 1.0 + p), "U2 requires p(m+beta) = 1+p");
            require(nearly_equal(alpha, (1.0 + p) / (mp - beta)), "U2 requires alpha = (1+p)/(mp-beta)");
            const double c_star = critical_constant(m, p, b, beta);
            speed_ = b * (1.0 - beta) * std::pow(C, beta - 1.0) * (std::pow(C / c_star, mp - beta) - 1.0);
            break;
        }
        case SolutionKind::SeparableU6: {
            require(mp > 1.0 && b > 0.0 && nearly_equal(beta, 1.0), "U6 requires beta = 1, b > 0, mp > 1");
            require(nearly_equal(alpha, (1.0 + p) / (mp - 1.0)), "U6 requires alpha = (1+p)/(mp-1)");
            c_bar_ = std::pow(std::pow(mp - 1.0, 1.0 + p) / (p * (m + 1.0) * std::pow(m * (1.0 + p), p)),
                              1.0 / (mp - 1.0));
            const double growth = std::pow(C / c_bar_, mp - 1.0);
            if (b < growth) {
                lifetime_ = std::log(1.0 - b * std::pow(c_bar_ / C, mp - 1.0)) / (b * (1.0 - mp));
            }
            break;
        }
        case SolutionKind::ExplicitU7:
            require(mp > 1.0 && b == 0.0, "U7 requires b = 0 and mp > 1");
            require(nearly_equal(alpha, p / (mp - 1.0)), "U7 requires alpha = p/(mp-1)");
            speed_ = std::pow(C, mp - 1.0) * std::pow(mp / (mp - 1.0), p);
            break;
        case SolutionKind::SeparableU9:
            require(mp > 1.0 && b == 0.0, "U9 requires b = 0 and mp > 1");
            require(nearly_equal(alpha, (1.0 + p) / (mp - 1.0)), "U9 requires alpha = (1+p)/(mp-1)");
            lambda_ = -std::pow(C, mp - 1.0) * p * (m + 1.0) * std::pow(m * (1.0 + p), p) /
                      std::pow(mp - 1.0, 1.0 + p);
            lifetime_ = 1.0 / (lambda_ * (1.0 - mp));
            break;
        case SolutionKind::ReactionLimitU5:
            require(beta > 0.0 && beta < 1.0, "U5 requires 0 < beta < 1");
            break;
    }
}

double ExplicitSolution::operator()(double x, double t) const {
    const ProblemParams& pp = params_;
    const double mp = pp.mp();
    if (kind_ == SolutionKind::IPS) return ips_eval(pp.m, pp.p, gamma_, x, t);
    if (!(t >= 0.0 && t < lifetime_)) throw DomainError("time outside the solution's lifetime");

    switch (kind_) {
        case SolutionKind::TravelingWaveU2:
            return pp.C * pos_pow(*speed_ * t - x, (1.0 + pp.p) / (mp - pp.beta));
        case SolutionKind::SeparableU6: {
            const double decay = std::exp(-pp.b * t);
            const double bracket = 1.0 - std::pow(pp.C / c_bar_, mp - 1.0) / pp.b *
                                             (1.0 - std::exp(-pp.b * (mp - 1.0) * t));
            return pp.C * pos_pow(-x, pp.alpha) * decay * std::pow(bracket, 1.0 / (1.0 - mp));
        }
        case SolutionKind::ExplicitU7:
            return pp.C * pos_pow(*speed_ * t - x, pp.p / (mp - 1.0));
        case SolutionKind::SeparableU9:
            return pp.C * pos_pow(-x, pp.alpha) *
                   std::pow(lambda_ * (lifetime_ - t) * (1.0 - mp), 1.0 / (1.0 - mp));
        case SolutionKind::ReactionLimitU5:
            return reaction_limit_eval(pp, x, t);
        case SolutionKind::IPS:
            break;
    }
    return 0.0;
}

double explicit_eval(SolutionKind kind, const ProblemParams& params, double x, double t) {
    return ExplicitSolution(kind, params)(x, t);
}

double reaction_limit_eval(const ProblemParams& pp, double x, double t) {
    if (!(pp.beta > 0.0 && pp.beta < 1.0)) throw DomainError("U5 requires 0 < beta < 1");
    const double omb = 1.0 - pp.beta;
    const double bracket = std::pow(pp.C, omb) * pos_pow(-x, pp.alpha * omb) - pp.b * omb * t;
    return pos_pow(bracket, 1.0 / omb);
}

std::string_view to_string(EnvelopeTag tag) {
    switch (tag) {
        case EnvelopeTag::E1: return "E1";
        case EnvelopeTag::E3: return "E3";
        case EnvelopeTag::E4: return "E4";
        case EnvelopeTag::E5: return "E5";
        case EnvelopeTag::E6: return "E6";
        case EnvelopeTag::E7: return "E7";
        case EnvelopeTag::E8: return "E8";
        case EnvelopeTag::E9: return "E9";
        case EnvelopeTag::E10: return "E10";
        case EnvelopeTag::E21: return "E21";
    }
    return "unknown";
}

namespace {

double need(const std::optional<double>& v, const char* name) {
    if (!v) throw DomainError(std::string("envelope needs constant ") + name);
    return *v;
}

void need_region(const RegionReport& rep, std::initializer_list<Region> allowed, EnvelopeTag tag) {
    for (Region r : allowed) {
        if (rep.region == r) return;
    }
    throw DomainError(std::string(to_string(tag)) + " does not apply in region " +
                      std::string(to_string(rep.region)));
}

// Shared shape of the critical-case shrinking estimates:
// [C^{1-beta}(-x)_+^{(1+p)(1-beta)/(mp-beta)} - b(1-beta) * factor * t]_+^{1/(1-beta)}.
double absorbed_power(const ProblemParams& pp, double x, double t, double factor) {
    const double omb = 1.0 - pp.beta;
    const double bracket = std::pow(pp.C, omb) * pos_pow(-x, (1.0 + pp.p) * omb / (pp.mp() - pp.beta)) -
                           pp.b * omb * factor * t;
    return pos_pow(bracket, 1.0 / omb);
}

double gamma_of(const ProblemParams& pp, double c, double eps) {
    const double m = pp.m, p = pp.p, mp = pp.mp();
    return p * (m + 1.0) * std::pow(m * (1.0 + p), p) * std::pow(c, mp - 1.0) / std::pow(mp - 1.0, p) + eps;
}

}  // namespace

Bounds envelope_eval(EnvelopeTag tag, const ProblemParams& pp, const ConstantSet& cs, double x, double t,
                     const LocalWindow& win) {
    const RegionReport rep = classify(pp);
    const double m = pp.m, p = pp.p, b = pp.b, beta = pp.beta, C = pp.C, alpha = pp.alpha;
    const double mp = pp.mp();
    if (t < 0.0) throw DomainError("envelopes need t >= 0");
    Bounds out;

    auto local_eps = [&]() {
        const double eps = need(win.eps, "eps");
        const double x_eps = need(win.x_eps, "x_eps");
        if (!(eps > 0.0 && eps < C)) throw DomainError("eps must lie in (0, C)");
        return std::pair{eps, x_eps};
    };

    switch (tag) {
        case EnvelopeTag::E1: {
            need_region(rep, {Region::R2Expand}, tag);
            if (x < 0.0 || t <= 0.0) return out;
            const double mpb = mp - beta;
            const double c = mpb / ((1.0 + p) * (1.0 - beta));
            const double zeta = x * std::pow(t, -c);
            const double tpow = std::pow(t, 1.0 / (1.0 - beta));
            const double mu_lower = p * (m + beta) > 1.0 + p ? p / (mp - 1.0) : (1.0 + p) / mpb;
            const double mu_upper = (1.0 + p) / mpb;
            out.lower = need(cs.C1, "C1") * tpow * pos_pow(need(cs.zeta1, "zeta1") - zeta, mu_lower);
            out.upper = need(cs.C2, "C2") * tpow * pos_pow(need(cs.zeta2, "zeta2") - zeta, mu_upper);
            return out;
        }
        case EnvelopeTag::E3: {
            need_region(rep, {Region::R2Shrink}, tag);
            if (!(p * (m + beta) > 1.0 + p)) throw DomainError("E3 requires p(m+beta) > 1+p");
            const double kappa = std::pow(C / *rep.c_star, mp - beta);
            out.lower = absorbed_power(pp, x, t, 1.0);
            out.upper = absorbed_power(pp, x, t, 1.0 - kappa);
            return out;
        }
        case EnvelopeTag::E21: {
            need_region(rep, {Region::R2Shrink}, tag);
            if (!(p * (m + beta) < 1.0 + p)) throw DomainError("E21 requires p(m+beta) < 1+p");
            const double kappa = std::pow(C / *rep.c_star, mp - beta);
            out.lower = absorbed_power(pp, x, t, 1.0 - kappa);
            out.upper = C * pos_pow(-x, (1.0 + p) / (mp - beta));
            return out;
        }
        case EnvelopeTag::E4: {
            need_region(rep, {Region::R2Shrink}, tag);
            if (!(p * (m + beta) < 1.0 + p)) throw DomainError("E4 requires p(m+beta) < 1+p");
            const double mpb = mp - beta;
            const double tc = std::pow(t, mpb / ((1.0 + p) * (1.0 - beta)));
            const double gam = (1.0 + p) / mpb;
            if (x >= -need(cs.ell0, "ell0") * tc) {
                out.lower = *rep.c_star * pos_pow(-need(cs.zeta3, "zeta3") * tc - x, gam);
            }
            if (x >= -need(cs.ell1, "ell1") * tc) {
                out.upper = need(cs.C3, "C3") * pos_pow(-need(cs.zeta4, "zeta4") * tc - x, gam);
            }
            return out;
        }
        case EnvelopeTag::E5: {
            need_region(rep, {Region::R4b}, tag);
            auto [eps, x_eps] = local_eps();
            if (x <= x_eps) return out;
            const double base = pos_pow(-x, alpha) * std::exp(-b * t);
            const double bracket = 1.0 - eps / (b * (mp - 1.0)) * (1.0 - std::exp(-b * (mp - 1.0) * t));
            out.lower = (C - eps) * base;
            if (bracket > 0.0) out.upper = (C + eps) * base * std::pow(bracket, 1.0 / (1.0 - mp));
            return out;
        }
        case EnvelopeTag::E6: {
            need_region(rep, {Region::R4c}, tag);
            auto [eps, x_eps] = local_eps();
            if (x < x_eps) return out;
            const bool critical = nearly_equal(alpha, (1.0 + p) / (mp - beta));
            auto g = [&](double s) {
                if (x >= 0.0) return 0.0;
                const double c = C + s * eps;
                const double kappa = critical ? std::pow(c / *rep.c_star, mp - beta) : 0.0;
                const double bracket = std::pow(c, 1.0 - beta) * std::pow(-x, alpha * (1.0 - beta)) +
                                       b * (beta - 1.0) * (1.0 - s * eps - kappa) * t;
                return bracket > 0.0 ? std::pow(bracket, 1.0 / (1.0 - beta)) : 0.0;
            };
            out.lower = g(-1.0);
            out.upper = g(1.0);
            return out;
        }
        case EnvelopeTag::E7: {
            need_region(rep, {Region::R4d}, tag);
            if (!nearly_equal(alpha, (1.0 + p) / (mp - 1.0))) throw DomainError("E7 requires alpha = (1+p)/(mp-1)");
            auto [eps, x_eps] = local_eps();
            if (x <= x_eps) return out;
            const double base = pos_pow(-x, alpha);
            const double lo = 1.0 - gamma_of(pp, C - eps, -eps) * t;
            const double hi = 1.0 - gamma_of(pp, C + eps, eps) * t;
            if (lo > 0.0) out.lower = (C - eps) * base * std::pow(lo, 1.0 / (1.0 - mp));
            if (hi > 0.0) out.upper = (C + eps) * base * std::pow(hi, 1.0 / (1.0 - mp));
            return out;
        }
        case EnvelopeTag::E8:
        case EnvelopeTag::E10: {
            if (tag == EnvelopeTag::E8) {
                need_region(rep, {Region::R4d}, tag);
                if (!(alpha > (1.0 + p) / (mp - 1.0))) throw DomainError("E8 requires alpha > (1+p)/(mp-1)");
            } else {
                need_region(rep, {Region::B0Case3}, tag);
            }
            auto [eps, x_eps] = local_eps();
            if (x < x_eps) return out;
            const double base = pos_pow(-x, alpha);
            out.lower = (C - eps) * base;
            if (1.0 - eps * t > 0.0) out.upper = (C + eps) * base * std::pow(1.0 - eps * t, 1.0 / (1.0 - mp));
            return out;
        }
        case EnvelopeTag::E9: {
            need_region(rep, {Region::B0Case1}, tag);
            if (x < 0.0 || t <= 0.0) return out;
            const double den = 1.0 + p - alpha * (mp - 1.0);
            const double xi = x * std::pow(t, -1.0 / den);
            const double tpow = std::pow(t, alpha / den);
            const double mu = p / (mp - 1.0);
            out.lower = need(cs.C4, "C4") * tpow * pos_pow(need(cs.xi3, "xi3") - xi, mu);
            out.upper = need(cs.C5, "C5") * tpow * pos_pow(need(cs.xi4, "xi4") - xi, mu);
            return out;
        }
    }
    return out;
}

}  // namespace ddi
