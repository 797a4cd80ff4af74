#pragma once

// Closed-form solutions and two-sided envelope estimates. These serve as
// oracles for the finite-difference solver and as references in the
// experiment reports.

#include <optional>
#include <string_view>

#include "ddi/classification.hpp"
#include "ddi/params.hpp"

namespace ddi {

/// k(m,p) = ((mp-1)/(m(1+p))) (1/(p(m+1)))^{1/p}.
double ips_shape_constant(double m, double p);

/// Source-type solution with conserved-energy constant gamma (b = 0).
double ips_eval(double m, double p, double gamma, double x, double t);

/// Right edge of the source-type solution's support.
double ips_interface(double m, double p, double gamma, double t);

enum class SolutionKind {
    IPS,
    TravelingWaveU2,  // p(m+beta) = 1+p, alpha = (1+p)/(mp-beta)
    SeparableU6,      // beta = 1, alpha = (1+p)/(mp-1), b > 0
    ExplicitU7,       // b = 0, alpha = p/(mp-1)
    SeparableU9,      // b = 0, alpha = (1+p)/(mp-1)
    ReactionLimitU5,  // 0 < beta < 1 local asymptotics of the shrinking case
};

std::string_view to_string(SolutionKind k);
std::optional<SolutionKind> solution_kind_from_string(std::string_view s);

/// A closed-form solution with its constants resolved once.
class ExplicitSolution {
public:
    /// Checks the regime predicate of `kind`; throws DomainError otherwise.
    ExplicitSolution(SolutionKind kind, const ProblemParams& params, double ips_gamma = 1.0);

    SolutionKind kind() const { return kind_; }
    const ProblemParams& params() const { return params_; }

    /// Blow-up time (infinite when the solution is global).
    double lifetime() const { return lifetime_; }

    /// Front speed for the traveling-wave kinds (zeta_* for U2, xi_* for U7).
    std::optional<double> front_speed() const { return speed_; }

    /// Throws DomainError for t outside [0, lifetime).
    double operator()(double x, double t) const;

private:
    SolutionKind kind_;
    ProblemParams params_;
    double gamma_ = 1.0;
    double lifetime_;
    std::optional<double> speed_;
    double c_bar_ = 0.0;
    double lambda_ = 0.0;
};

double explicit_eval(SolutionKind kind, const ProblemParams& params, double x, double t);

/// [C^{1-beta}(-x)_+^{alpha(1-beta)} - b(1-beta)t]_+^{1/(1-beta)}.
double reaction_limit_eval(const ProblemParams& params, double x, double t);

enum class EnvelopeTag { E1, E3, E4, E5, E6, E7, E8, E9, E10, E21 };

std::string_view to_string(EnvelopeTag tag);

/// Quantities the local estimates leave free.
struct LocalWindow {
    std::optional<double> eps;
    std::optional<double> x_eps;
};

/// Each side is absent outside its validity window.
struct Bounds {
    std::optional<double> lower;
    std::optional<double> upper;
};

/// Evaluates the lower and upper estimate of `tag` at (x, t).
///
/// Throws DomainError if the parameters are outside the tag's regime or a
/// needed constant is missing from `constants`.
Bounds envelope_eval(EnvelopeTag tag, const ProblemParams& params, const ConstantSet& constants, double x,
                     double t, const LocalWindow& window = {});

}  // namespace ddi
