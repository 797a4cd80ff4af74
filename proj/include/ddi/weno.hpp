#pragma once

// Fifth-order WENO finite-difference discretization of
//   u_t = (|(u^m)_x|^{p-1} (u^m)_x)_x - b u^beta
// on a uniform periodic grid, advanced with the three-stage TVD Runge-Kutta
// scheme.
//
// The diffusion term is a conservative flux difference. Left- and
// right-biased WENO derivatives of v = u^m give node fluxes H_i = phi(v_x),
// read as cell averages of an auxiliary function h over
// [x_i - dx/2, x_i + dx/2]. h at half nodes is the mean of the right-biased
// reconstruction of the left-biased fluxes and the left-biased reconstruction
// of the right-biased ones. Pairing opposite biases keeps the odd-even mode
// damped; the plain symmetric composition leaves it neutral.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ddi/params.hpp"

namespace ddi {

/// Uniform periodic grid, node i at x_left + i*dx, dx = (x_right - x_left)/n.
class Grid {
public:
    Grid(double x_left, double x_right, int n);

    double x_left() const { return x_left_; }
    double x_right() const { return x_right_; }
    int n() const { return n_; }
    double dx() const { return dx_; }
    double x(int i) const { return x_left_ + i * dx_; }

    /// Index of the node nearest to x (clamped to the grid).
    int nearest(double x) const;

    bool operator==(const Grid&) const = default;

private:
    double x_left_;
    double x_right_;
    int n_;
    double dx_;
};

struct Field {
    Grid grid;
    double t = 0.0;
    std::vector<double> u;

    /// Throws DomainError when a value is negative or non-finite.
    void validate() const;
    double mass() const;
};

struct StepControl {
    std::optional<double> dt;            // fixed step; adaptive when absent
    double cfl = 0.4;                    // sigma in dt = sigma dx^2 / D_max
    bool clip_negative = true;
    double interface_threshold = 1e-10;

    void validate() const;
};

/// Raised when a stage produces a non-finite value. `last_good` is the
/// field at the beginning of the failed step.
class InstabilityError : public std::runtime_error {
public:
    InstabilityError(const std::string& what, Field last_good)
        : std::runtime_error(what), last_good_(std::move(last_good)) {}
    const Field& last_good() const { return last_good_; }

private:
    Field last_good_;
};

/// Regularization in the WENO nonlinear weights.
inline constexpr double kWenoEps = 1e-6;

/// Fifth-order WENO value at the right edge of the cell holding `c`, from
/// five consecutive cell averages.
double weno5_edge(double a, double b, double c, double d, double e);

/// Left- and right-biased WENO derivatives at every node (periodic).
void weno5_biased_derivatives(std::span<const double> v, double dx, std::span<double> left,
                              std::span<double> right);

/// Mean of left- and right-biased WENO derivatives at every node (periodic).
void weno5_node_derivative(std::span<const double> v, double dx, std::span<double> out);
std::vector<double> weno5_node_derivative(std::span<const double> v, double dx);

/// out[i] = value at x_{i+1/2} from periodic cell averages, mean of the
/// left- and right-biased reconstructions.
void weno5_halfnode_reconstruct(std::span<const double> avg, std::span<double> out);
std::vector<double> weno5_halfnode_reconstruct(std::span<const double> avg);

/// Scratch buffers for the spatial operator; reuse across calls.
class DiffusionWorkspace {
public:
    void resize(std::size_t n);

    std::vector<double> v;      // u^m
    std::vector<double> slope;        // left-biased (u^m)_x at nodes
    std::vector<double> slope_right;  // right-biased (u^m)_x
    std::vector<double> flux;         // phi(slope)
    std::vector<double> flux_right;   // phi(slope_right)
    std::vector<double> half;   // h at i+1/2
};

void degenerate_diffusion(std::span<const double> u, double dx, double m, double p, DiffusionWorkspace& ws,
                          std::span<double> out);
std::vector<double> degenerate_diffusion(const Field& field, double m, double p);

/// Diffusion minus the absorption b u^beta.
void rhs(std::span<const double> u, double dx, const ProblemParams& params, DiffusionWorkspace& ws,
         std::span<double> out);
std::vector<double> rhs(const Field& field, const ProblemParams& params);

/// Floor for |v_x| when p < 1, as a fraction of its maximum on the grid.
inline constexpr double kSlopeFloorFraction = 1e-2;

/// Largest effective diffusivity over the cell interfaces,
/// p |v_x|^{p-1} (v_{i+1} - v_i)/(u_{i+1} - u_i) with v = u^m. The secant in
/// u stays bounded at fronts when m < 1 and mp >= 1. The slope is the
/// two-point difference; for p < 1 it is floored at kSlopeFloorFraction of
/// the largest WENO slope.
double max_effective_diffusivity(std::span<const double> u, double dx, double m, double p,
                                 DiffusionWorkspace& ws);

using SpatialOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// One TVD-RK3 step in place. With `clip_negative`, each stage is floored at
/// zero; with `conserve_mass` as well, the clipped amount is removed
/// proportionally from the positive values. Throws std::runtime_error when a
/// stage value is not finite.
void tvd_rk3_step(std::span<double> u, double dt, const SpatialOperator& op, bool clip_negative,
                  bool conserve_mass = false);

/// Clipping is mass-neutral when b = 0.
Field rk3_step(const Field& field, double dt, const ProblemParams& params, bool clip_negative = true);

struct Observers {
    std::vector<double> output_times;                // sorted, hit exactly
    std::function<void(const Field&)> on_output;     // at each output time
    std::function<void(const Field&)> on_step;       // initial state and after every step
};

struct EvolveResult {
    Field final;
    std::size_t steps = 0;
    double min_dt = 0.0;
    double max_dt = 0.0;
};

/// Integrates from u0.t to t_end. Throws InstabilityError on blow-up.
EvolveResult evolve(Field u0, const ProblemParams& params, const StepControl& control, double t_end,
                    const Observers& observers = {});

/// First node to the right of the peak of u where u < threshold (scanning
/// with periodic wrap). Absent when no value reaches the threshold.
std::optional<double> locate_interface(const Field& field, double threshold = 1e-10);

}  // namespace ddi
