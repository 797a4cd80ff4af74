#include "ddi/classification.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace ddi {

void ProblemParams::validate() const {
    for (double v : {m, p, b, beta, C, alpha}) {
        if (!std::isfinite(v)) throw DomainError("parameters must be finite");
    }
    if (m <= 0 || p <= 0 || beta <= 0 || C <= 0 || alpha <= 0) {
        throw DomainError("m, p, beta, C and alpha must be positive");
    }
    if (b < 0) throw DomainError("absorption coefficient b must be nonnegative");
    const double prod = mp();
    if (prod > 1.0 && !nearly_equal(prod, 1.0)) return;
    if (nearly_equal(prod, 1.0) && b > 0 && beta < 1.0) return;
    throw DomainError("slow diffusion requires m*p > 1 (m*p == 1 only with b > 0, beta < 1)");
}

namespace {

std::optional<double> ratio_if_positive(double num, double den) {
    if (den <= 0.0 || nearly_equal(den, 0.0)) return std::nullopt;
    return num / den;
}

// alpha strictly below threshold, equality judged with kRelTol
bool below(double alpha, double threshold) {
    return alpha < threshold && !nearly_equal(alpha, threshold);
}

// C_* formula without the 0 < beta < 1 restriction; needs mp > beta, b > 0.
double critical_value(double m, double p, double b, double beta) {
    const double mpb = m * p - beta;
    const double inner = b * std::pow(mpb, 1.0 + p) / (std::pow(m * (1.0 + p), p) * p * (m + beta));
    return std::pow(inner, 1.0 / mpb);
}

Region critical_direction(const ProblemParams& pp, double c_star) {
    if (nearly_equal(pp.C, c_star)) return Region::R2Stationary;
    return pp.C > c_star ? Region::R2Expand : Region::R2Shrink;
}

}  // namespace

std::string_view to_string(Region r) {
    switch (r) {
        case Region::R1: return "R1";
        case Region::R2Expand: return "R2_expand";
        case Region::R2Shrink: return "R2_shrink";
        case Region::R2Stationary: return "R2_stationary";
        case Region::R3: return "R3";
        case Region::R4a: return "R4a";
        case Region::R4b: return "R4b";
        case Region::R4c: return "R4c";
        case Region::R4d: return "R4d";
        case Region::B0Case1: return "B0_case1";
        case Region::B0Case2: return "B0_case2";
        case Region::B0Case3: return "B0_case3";
    }
    return "unknown";
}

std::optional<Region> region_from_string(std::string_view s) {
    constexpr std::array all{Region::R1,  Region::R2Expand, Region::R2Shrink, Region::R2Stationary,
                             Region::R3,  Region::R4a,      Region::R4b,      Region::R4c,
                             Region::R4d, Region::B0Case1,  Region::B0Case2,  Region::B0Case3};
    for (Region r : all) {
        if (to_string(r) == s) return r;
    }
    return std::nullopt;
}

double critical_constant(double m, double p, double b, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("critical_constant requires 0 < beta < 1");
    if (!(m * p > beta)) throw DomainError("critical_constant requires m*p > beta");
    if (!(b > 0.0)) throw DomainError("critical_constant requires b > 0");
    if (!(m > 0.0 && p > 0.0)) throw DomainError("critical_constant requires m, p > 0");
    return critical_value(m, p, b, beta);
}

RegionReport classify(const ProblemParams& pp) {
    pp.validate();
    const double m = pp.m, p = pp.p, beta = pp.beta, alpha = pp.alpha;
    const double mp = pp.mp();

    RegionReport rep;
    rep.thresholds.absorption = ratio_if_positive(1.0 + p, mp - std::min(1.0, beta));
    rep.thresholds.critical = ratio_if_positive(1.0 + p, mp - beta);
    rep.thresholds.stationary = ratio_if_positive(1.0 + p, mp - 1.0);
    rep.thresholds.explicit_b0 = ratio_if_positive(p, mp - 1.0);
    if (pp.b > 0.0 && mp > beta) rep.c_star = critical_value(m, p, pp.b, beta);

    if (pp.b == 0.0) {
        const double st = *rep.thresholds.stationary;
        if (nearly_equal(alpha, st)) {
            rep.region = Region::B0Case2;
        } else {
            rep.region = alpha < st ? Region::B0Case1 : Region::B0Case3;
        }
        return rep;
    }

    const bool beta_is_one = nearly_equal(beta, 1.0);
    if (beta < 1.0 && !beta_is_one) {
        const double crit = *rep.thresholds.critical;
        if (below(alpha, crit)) {
            rep.region = Region::R1;
        } else if (nearly_equal(alpha, crit)) {
            rep.region = critical_direction(pp, *rep.c_star);
        } else {
            rep.region = Region::R3;
        }
        return rep;
    }

    const double st = *rep.thresholds.stationary;
    if (below(alpha, st)) {
        rep.region = Region::R1;
    } else if (beta_is_one) {
        rep.region = nearly_equal(alpha, st) ? Region::R4a : Region::R4b;
    } else if (beta < mp && !nearly_equal(beta, mp)) {
        rep.region = below(alpha, *rep.thresholds.critical) ? Region::R4d : Region::R4c;
    } else {
        rep.region = Region::R4d;
    }
    return rep;
}

double shrink_prefactor(const ProblemParams& pp) {
    if (!(pp.beta > 0.0 && pp.beta < 1.0) || !(pp.b > 0.0)) {
        throw DomainError("ell_* requires 0 < beta < 1 and b > 0");
    }
    const double omb = 1.0 - pp.beta;
    return std::pow(pp.C, -1.0 / pp.alpha) * std::pow(pp.b * omb, 1.0 / (pp.alpha * omb));
}

namespace {

// Fronts of the E3 envelopes (p(m+beta) > 1+p, C < C_*), both negative.
std::pair<double, double> e3_front_interval(const ProblemParams& pp, double c_star) {
    const double mpb = pp.mp() - pp.beta, omb = 1.0 - pp.beta;
    const double lead = std::pow(pp.C, -mpb / (1.0 + pp.p));
    const double expo = mpb / ((1.0 + pp.p) * omb);
    const double kappa = std::pow(pp.C / c_star, mpb);
    return {-lead * std::pow(pp.b * omb, expo), -lead * std::pow(pp.b * omb * (1.0 - kappa), expo)};
}

}  // namespace

InterfaceLaw interface_law(const RegionReport& rep, const ProblemParams& pp) {
    const double m = pp.m, p = pp.p, beta = pp.beta, alpha = pp.alpha, mp = pp.mp();
    InterfaceLaw law;
    switch (rep.region) {
        case Region::R1:
        case Region::B0Case1: {
            law.sign = 1;
            law.exponent = 1.0 / (1.0 + p - alpha * (mp - 1.0));
            if (rep.region == Region::B0Case1 && rep.thresholds.explicit_b0 &&
                nearly_equal(alpha, *rep.thresholds.explicit_b0)) {
                law.prefactor = ExactPrefactor{std::pow(pp.C, mp - 1.0) * std::pow(mp / (mp - 1.0), p)};
            }
            return law;
        }
        case Region::R2Expand:
        case Region::R2Shrink: {
            const double c_star = *rep.c_star;
            law.sign = rep.region == Region::R2Expand ? 1 : -1;
            law.exponent = (mp - beta) / ((1.0 + p) * (1.0 - beta));
            const double pmb = p * (m + beta);
            if (nearly_equal(pmb, 1.0 + p)) {
                law.prefactor = ExactPrefactor{pp.b * (1.0 - beta) * std::pow(pp.C, beta - 1.0) *
                                               (std::pow(pp.C / c_star, mp - beta) - 1.0)};
            } else if (rep.region == Region::R2Shrink) {
                if (pmb > 1.0 + p) {
                    auto [lo, hi] = e3_front_interval(pp, c_star);
                    law.prefactor = IntervalPrefactor{lo, hi};
                } else {
                    const ConstantSet cs = appendix_constants(pp);
                    law.prefactor = IntervalPrefactor{-*cs.zeta3, -*cs.zeta4};
                }
            }
            return law;
        }
        case Region::R3:
            law.sign = -1;
            law.exponent = 1.0 / (alpha * (1.0 - beta));
            law.prefactor = ExactPrefactor{shrink_prefactor(pp)};
            return law;
        default:
            law.sign = 0;
            return law;
    }
}

double delta_objective(const ProblemParams& pp, double delta) {
    const double mp = pp.mp(), p = pp.p, beta = pp.beta, m = pp.m;
    const double mpb = mp - beta;
    const double c_star = critical_value(m, p, pp.b, beta);
    const double gam = 1.0 - std::pow(pp.C / c_star, mpb / (1.0 + p));
    const double kappa = std::pow(pp.C / c_star, mpb);
    const double e = (1.0 + p - p * (m + beta)) / mpb;
    const double s = 1.0 - delta * gam;
    return std::pow(delta, e) * (s - std::pow(s, -p) * kappa);
}

DeltaStar delta_star(const ProblemParams& pp) {
    if (!(pp.beta > 0.0 && pp.beta < 1.0) || !(pp.b > 0.0)) {
        throw DomainError("delta_star requires 0 < beta < 1 and b > 0");
    }
    if (!(pp.p * (pp.m + pp.beta) < 1.0 + pp.p)) throw DomainError("delta_star requires p(m+beta) < 1+p");
    const double c_star = critical_value(pp.m, pp.p, pp.b, pp.beta);
    if (!(pp.C > 0.0 && pp.C < c_star)) throw DomainError("delta_star requires 0 < C < C_*");

    // Unimodality of g is not known, so bracket the best grid point first.
    constexpr int kGrid = 1000;
    int best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kGrid; ++k) {
        const double v = delta_objective(pp, static_cast<double>(k) / kGrid);
        if (v > best_val) {
            best_val = v;
            best = k;
        }
    }
    double lo = std::max(0, best - 1) / static_cast<double>(kGrid);
    double hi = std::min(kGrid, best + 1) / static_cast<double>(kGrid);

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = delta_objective(pp, x1), f2 = delta_objective(pp, x2);
    while (hi - lo > 1e-11) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = delta_objective(pp, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = delta_objective(pp, x1);
        }
    }
    DeltaStar out{0.5 * (lo + hi), 0.0};
    out.value = delta_objective(pp, out.delta);
    if (best_val > out.value) out = {static_cast<double>(best) / kGrid, best_val};
    return out;
}

ConstantSet appendix_constants(const ProblemParams& pp, const ConstantInputs& in) {
    const RegionReport rep = classify(pp);
    const double m = pp.m, p = pp.p, b = pp.b, beta = pp.beta, C = pp.C, alpha = pp.alpha;
    const double mp = pp.mp();

    ConstantSet cs;
    cs.inputs = in;
    cs.c_star = rep.c_star;
    if (b > 0.0 && beta > 0.0 && beta < 1.0) {
        cs.c_star = critical_value(m, p, b, beta);
        cs.ell_star = shrink_prefactor(pp);
    }
    if (mp > 1.0 && !nearly_equal(mp, 1.0)) {
        cs.c_bar = std::pow(std::pow(mp - 1.0, 1.0 + p) / (p * (m + 1.0) * std::pow(m * (1.0 + p), p)),
                            1.0 / (mp - 1.0));
    }

    // Self-similar expansion: front bounds of the b = 0 profile.
    if (rep.region == Region::R1 || rep.region == Region::B0Case1) {
        if (mp > 1.0 && !nearly_equal(mp, 1.0)) {
            const double ratio = std::pow(p / (alpha * (mp - 1.0)), 1.0 / (1.0 + p));
            if (alpha < p / (mp - 1.0) || nearly_equal(alpha, p / (mp - 1.0))) {
                cs.xi1 = 1.0;
                cs.xi2 = ratio;
            } else {
                cs.xi1 = ratio;
                cs.xi2 = 1.0;
            }
            if (rep.region == Region::B0Case1 && !in.A0) {
                throw DomainError("A0 = w(0,1) is required for xi3, xi4, C4, C5");
            }
            if (in.A0) {
                const double A0 = *in.A0;
                const double den = 1.0 + p - alpha * (mp - 1.0);
                const double scale = std::pow(A0, (mp - 1.0) / (1.0 + p)) *
                                     std::pow(std::pow(mp, p) * den / std::pow(mp - 1.0, p), 1.0 / (1.0 + p)) *
                                     std::pow(C, (mp - 1.0) / den);
                cs.xi3 = scale * *cs.xi1;
                cs.xi4 = scale * *cs.xi2;
                const double cpre = std::pow(C, (1.0 + p) / den) * A0;
                cs.C4 = cpre * std::pow(*cs.xi3, p / (1.0 - mp));
                cs.C5 = cpre * std::pow(*cs.xi4, p / (1.0 - mp));
            }
        }
    }

    const bool critical = rep.region == Region::R2Expand || rep.region == Region::R2Shrink;
    if (critical) {
        const double c_star = *cs.c_star;
        const double mpb = mp - beta, omb = 1.0 - beta;
        const double pmb = p * (m + beta);
        const double gam0 = (1.0 + p) / mpb;
        const bool borderline = nearly_equal(pmb, 1.0 + p);

        if (!borderline) {
            const double den = b * std::pow(mpb, 1.0 + p);
            cs.R1 = std::pow(m * (1.0 + p), p) * p * (1.0 + p - pmb) / den;
            cs.R2 = std::pow(m * (1.0 + p), p) * (1.0 + p) * p * (m + beta - 1.0) / den;
        }

        if (rep.region == Region::R2Expand && !borderline) {
            if (!in.A1) throw DomainError("A1 = f_1(0) is required for zeta1, zeta2, C1, C2");
            const double A1 = *in.A1;
            const double damp = std::pow(1.0 + b * omb * std::pow(A1, beta - 1.0), -1.0 / (1.0 + p));
            const double lead = std::pow(A1, (mp - 1.0) / (1.0 + p)) * damp;
            const double upper_front =
                lead * std::pow(std::pow(m * (1.0 + p), p) * p * (m + beta) * omb, 1.0 / (1.0 + p)) / mpb;
            if (pmb > 1.0 + p) {
                cs.zeta1 = lead * std::pow(p * std::pow(mp, p) * omb, 1.0 / (1.0 + p)) / (mp - 1.0);
                cs.C1 = A1 * std::pow(*cs.zeta1, -p / (mp - 1.0));
                cs.zeta2 = upper_front;
                cs.C2 = A1 * std::pow(*cs.zeta2, -gam0);
            } else {
                cs.zeta1 = upper_front;
                cs.C1 = A1 * std::pow(*cs.zeta1, -gam0);
                cs.zeta2 = std::pow(A1 / c_star, mpb / (1.0 + p));
                cs.C2 = c_star;
            }
        }

        if (rep.region == Region::R2Shrink && !borderline) {
            const double lead = std::pow(C, -mpb / (1.0 + p));
            const double expo = mpb / ((1.0 + p) * omb);
            const double kappa = std::pow(C / c_star, mpb);
            if (pmb > 1.0 + p) {
                cs.zeta1 = -lead * std::pow(b * omb, expo);
            } else {
                cs.zeta2 = -lead * std::pow(b * omb * (1.0 - kappa), expo);

                const double q = mpb * omb / (1.0 + p - pmb);
                const double ratio_q = std::pow(c_star / C, q);
                cs.theta_star = (1.0 - kappa) / (ratio_q - 1.0);
                const double tail = std::pow(b * omb * *cs.theta_star, expo);
                const double cs_lead = std::pow(c_star, -mpb / (1.0 + p));
                cs.ell0 = cs_lead * ratio_q * tail;
                cs.zeta3 = cs_lead * (ratio_q - 1.0) * tail;

                const DeltaStar ds = delta_star(pp);
                const double G = 1.0 - std::pow(C / c_star, mpb / (1.0 + p));
                const double s = 1.0 - ds.delta * G;
                cs.delta_star = ds.delta;
                cs.big_gamma = G;
                cs.ell1 = lead * std::pow(b * omb / (ds.delta * G) * (s - std::pow(s, -p) * kappa), expo);
                cs.zeta4 = ds.delta * G * *cs.ell1;
                cs.C3 = C * std::pow(s, -gam0);
            }
        }
    }

    if (rep.region == Region::R3 && in.eps && in.ell) {
        const double eps = *in.eps, ell = *in.ell, ls = *cs.ell_star;
        if (!(ell > ls)) throw DomainError("ell must exceed ell_*");
        const double omb = 1.0 - beta;
        const double r = std::pow(ls / ell, alpha * omb) * (1.0 - eps);
        cs.zeta5 = r * ell;
        cs.C6 = std::pow(1.0 - r, -alpha) *
                std::pow(std::pow(C, omb) - std::pow(ell, -alpha * omb) * b * omb * (1.0 - eps), 1.0 / omb);
    }

    if (rep.region == Region::R4d && rep.thresholds.stationary &&
        nearly_equal(alpha, *rep.thresholds.stationary)) {
        if (!in.eps) throw DomainError("eps is required for gamma_eps");
        const double eps = *in.eps;
        cs.gamma_eps = p * (m + 1.0) * std::pow(m * (1.0 + p), p) * std::pow(C + eps, mp - 1.0) /
                           std::pow(mp - 1.0, p) +
                       eps;
    }
    return cs;
}

}  // namespace ddi
