#pragma once

// Interface-behaviour classification in the (alpha, beta) parameter plane,
// the interface laws attached to each region, and the catalog of explicit
// constants used by the envelope estimates.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "ddi/params.hpp"

namespace ddi {

enum class Region {
    R1,             // expanding, alpha below the absorption threshold
    R2Expand,       // critical alpha, C > C_*
    R2Shrink,       // critical alpha, C < C_*
    R2Stationary,   // critical alpha, C == C_*
    R3,             // shrinking, absorption dominates
    R4a,            // beta == 1, alpha == (1+p)/(mp-1)
    R4b,            // beta == 1, alpha > (1+p)/(mp-1)
    R4c,            // 1 < beta < mp, alpha >= (1+p)/(mp-beta)
    R4d,            // remaining waiting-time cases with beta > 1
    B0Case1,        // b == 0, alpha < (1+p)/(mp-1): self-similar expansion
    B0Case2,        // b == 0, alpha == (1+p)/(mp-1): stationary, explicit
    B0Case3,        // b == 0, alpha > (1+p)/(mp-1): stationary
};

std::string_view to_string(Region r);
std::optional<Region> region_from_string(std::string_view s);

/// Region boundary values. Absent when the denominator is not positive.
struct Thresholds {
    std::optional<double> absorption;   // (1+p)/(mp - min{1, beta})
    std::optional<double> critical;     // (1+p)/(mp - beta)
    std::optional<double> stationary;   // (1+p)/(mp - 1)
    std::optional<double> explicit_b0;  // p/(mp - 1)
};

struct RegionReport {
    Region region = Region::R1;
    Thresholds thresholds;
    std::optional<double> c_star;
};

RegionReport classify(const ProblemParams& params);

/// C_* = [b (mp-beta)^{1+p} / ((m(1+p))^p p (m+beta))]^{1/(mp-beta)}.
/// Requires 0 < beta < 1, mp > beta, b > 0.
double critical_constant(double m, double p, double b, double beta);

struct ExactPrefactor {
    double value;
};
struct IntervalPrefactor {
    double lo;
    double hi;
};
struct ProfileDetermined {};

using Prefactor = std::variant<ExactPrefactor, IntervalPrefactor, ProfileDetermined>;

/// eta(t) ~ sign * prefactor * t^exponent as t -> 0+.
///
/// For shrinking fronts the exact/interval prefactor is the signed
/// coordinate (negative), except in R3 where the value is ell_* > 0 and
/// eta = -ell_* t^exponent.
struct InterfaceLaw {
    int sign = 0;
    std::optional<double> exponent;
    Prefactor prefactor = ProfileDetermined{};
};

InterfaceLaw interface_law(const RegionReport& report, const ProblemParams& params);

/// ell_* = C^{-1/alpha} (b(1-beta))^{1/(alpha(1-beta))}.
double shrink_prefactor(const ProblemParams& params);

/// Measured or chosen inputs that some constants depend on.
struct ConstantInputs {
    std::optional<double> A0;   // w(0,1) for b = 0, C = 1
    std::optional<double> A1;   // f_1(0) of the critical-case profile
    std::optional<double> eps;  // perturbation size of the local estimates
    std::optional<double> ell;  // ell > ell_* for the sharp shrinking bound
};

struct ConstantSet {
    std::optional<double> xi1, xi2, xi3, xi4;
    std::optional<double> zeta1, zeta2, zeta3, zeta4, zeta5;
    std::optional<double> ell0, ell1, theta_star, delta_star, big_gamma;
    std::optional<double> R1, R2;
    std::optional<double> C1, C2, C3, C4, C5, C6;
    std::optional<double> c_bar, gamma_eps, ell_star, c_star;
    ConstantInputs inputs;
};

/// Every constant whose regime condition holds for `params`.
///
/// Throws DomainError when the regime calls for A0, A1 or eps and the
/// input is missing.
ConstantSet appendix_constants(const ProblemParams& params, const ConstantInputs& inputs = {});

struct DeltaStar {
    double delta;
    double value;  // g(delta)
};

/// g(delta) = delta^{(1+p-p(m+beta))/(mp-beta)} (1 - delta G - (1 - delta G)^{-p} (C/C_*)^{mp-beta}),
/// G = 1 - (C/C_*)^{(mp-beta)/(1+p)}.
double delta_objective(const ProblemParams& params, double delta);

/// Maximizer of delta_objective over [0, 1]. Requires p(m+beta) < 1+p and
/// 0 < C < C_*.
DeltaStar delta_star(const ProblemParams& params);

}  // namespace ddi
