#pragma once

// Self-similar and traveling-wave profiles.
//
// Region 1:  u = t^a f(xi),  xi = x t^{-c},  c = 1/(1+p-alpha(mp-1)), a = alpha c
// Region 2:  u = t^a f(zeta), zeta = x t^{-c}, a = 1/(1-beta), c = (mp-beta)/((1+p)(1-beta))
// Traveling wave: u = phi(kt - x) with phase-plane form Y(X).

#include <array>
#include <vector>

#include "ddi/params.hpp"

namespace ddi {

enum class ProfileKind { Region1, Region2, TravelingWavePhase };

struct SelfSimilarExponents {
    double a;  // amplitude exponent
    double c;  // front exponent
};

SelfSimilarExponents region1_exponents(const ProblemParams& params);
SelfSimilarExponents region2_exponents(const ProblemParams& params);

/// PDE values at x_s(t) + j dx, j = 0, 1, 2, with x_s(t) = xi_s t^c.
struct PdeSample {
    double t;
    std::array<double, 3> u;
};

struct Seed {
    double xi = 0.0;  // seeding abscissa
    double f = 0.0;
    double fp = 0.0;
};

/// Rescales the samples to profile values, averages over the sample times
/// and differentiates the quadratic through the three averaged points.
Seed seed_from_pde(const std::vector<PdeSample>& samples, const SelfSimilarExponents& exps, double dx,
                   double xi_s = 0.0);

struct ProfileTable {
    ProfileKind kind = ProfileKind::Region1;
    std::vector<double> xi;
    std::vector<double> f;
    double front = 0.0;
    Seed seed;
};

struct ProfileOptions {
    double step = 1e-4;
    double xi_max = 1e3;
};

ProfileTable integrate_region1(const Seed& seed, const ProblemParams& params, const ProfileOptions& opt = {});
ProfileTable integrate_region2(const Seed& seed, const ProblemParams& params, const ProfileOptions& opt = {});

/// Right-hand side of the profile system in (f, G), G = phi((f^m)').
/// Returns {f', G'}; exposed for residual checks.
std::array<double, 2> profile_rhs(ProfileKind kind, const ProblemParams& params, double xi, double f, double G);

struct PhasePlaneTable {
    std::vector<double> X;
    std::vector<double> Y;
    double k = 0.0;
    ProblemParams params;
};

/// Seed offset on the X axis.
inline constexpr double kPhaseSeed = 1e-8;

/// dY/dX = k + b m X^{m+beta-1} Y^{-1/p} from (kPhaseSeed, k kPhaseSeed) to
/// X_max. `steps_per_decade` RK4 steps per decade of X (log-uniform).
PhasePlaneTable phase_plane(double k, const ProblemParams& params, double X_max, int steps_per_decade = 2000);

/// [b m (1+p)/(p (m+beta))]^{p/(1+p)}: large-X limit of Y / X^{p(m+beta)/(1+p)}.
double phase_asymptote_constant(const ProblemParams& params);

/// Inverts y(phi) = m int_0^phi X^{m-1} Y^{-1/p} dX onto `y_grid`.
std::vector<double> wave_profile(const PhasePlaneTable& table, const std::vector<double>& y_grid);

/// The tabulated y(X) at every phase-table sample.
std::vector<double> wave_coordinate(const PhasePlaneTable& table);

}  // namespace ddi
