#include "ddi/weno.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ddi {

Grid::Grid(double x_left, double x_right, int n) : x_left_(x_left), x_right_(x_right), n_(n) {
    if (!(std::isfinite(x_left) && std::isfinite(x_right) && x_right > x_left)) {
        throw DomainError("grid needs finite x_left < x_right");
    }
    if (n < 16) throw DomainError("grid needs at least 16 nodes");
    dx_ = (x_right - x_left) / n;
}

int Grid::nearest(double x) const {
    const long i = std::lround((x - x_left_) / dx_);
    return static_cast<int>(std::clamp<long>(i, 0, n_ - 1));
}

void Field::validate() const {
    if (u.size() != static_cast<std::size_t>(grid.n())) throw DomainError("field size does not match grid");
    for (double v : u) {
        if (!std::isfinite(v) || v < 0.0) throw DomainError("field values must be finite and nonnegative");
    }
}

double Field::mass() const {
    double s = 0.0;
    for (double v : u) s += v;
    return s * grid.dx();
}

void StepControl::validate() const {
    if (dt) {
        if (!(*dt > 0.0)) throw DomainError("fixed dt must be positive");
    } else if (!(cfl > 0.0 && cfl <= 0.9)) {
        throw DomainError("cfl must lie in (0, 0.9]");
    }
    if (!(interface_threshold > 0.0)) throw DomainError("interface threshold must be positive");
}

double weno5_edge(double a, double b, double c, double d, double e) {
    const double q1 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
    const double q2 = (-b + 5.0 * c + 2.0 * d) / 6.0;
    const double q3 = (2.0 * c + 5.0 * d - e) / 6.0;

    const double s1 = 13.0 / 12.0 * (a - 2.0 * b + c) * (a - 2.0 * b + c) +
                      0.25 * (a - 4.0 * b + 3.0 * c) * (a - 4.0 * b + 3.0 * c);
    const double s2 = 13.0 / 12.0 * (b - 2.0 * c + d) * (b - 2.0 * c + d) + 0.25 * (b - d) * (b - d);
    const double s3 = 13.0 / 12.0 * (c - 2.0 * d + e) * (c - 2.0 * d + e) +
                      0.25 * (3.0 * c - 4.0 * d + e) * (3.0 * c - 4.0 * d + e);

    const double w1 = 0.1 / ((kWenoEps + s1) * (kWenoEps + s1));
    const double w2 = 0.6 / ((kWenoEps + s2) * (kWenoEps + s2));
    const double w3 = 0.3 / ((kWenoEps + s3) * (kWenoEps + s3));
    return (w1 * q1 + w2 * q2 + w3 * q3) / (w1 + w2 + w3);
}

namespace {

constexpr int kGhost = 3;

// Periodic copy of `src` with kGhost ghost entries on each side.
void pad_periodic(std::span<const double> src, std::vector<double>& dst) {
    const int n = static_cast<int>(src.size());
    dst.resize(n + 2 * kGhost);
    for (int g = 0; g < kGhost; ++g) {
        dst[g] = src[(n - kGhost + g) % n];
        dst[n + kGhost + g] = src[g % n];
    }
    std::copy(src.begin(), src.end(), dst.begin() + kGhost);
}

void require_length(std::size_t n) {
    if (n < 6) throw DomainError("WENO5 stencils need at least 6 values");
}

thread_local std::vector<double> tl_pad;
thread_local std::vector<double> tl_diff;

}  // namespace

void weno5_node_derivative(std::span<const double> v, double dx, std::span<double> out) {
    require_length(v.size());
    const int n = static_cast<int>(v.size());
    // diff[k] = (v_{j+1} - v_j)/dx for j = k - kGhost, j in [-3, n+2)
    pad_periodic(v, tl_pad);
    tl_diff.resize(n + 2 * kGhost);
    const double inv = 1.0 / dx;
    for (int k = 0; k < n + 2 * kGhost - 1; ++k) tl_diff[k] = (tl_pad[k + 1] - tl_pad[k]) * inv;
    tl_diff[n + 2 * kGhost - 1] = (v[kGhost % n] - v[(kGhost - 1) % n]) * inv;

    const double* d = tl_diff.data() + kGhost;  // d[j] = (v_{j+1} - v_j)/dx
    for (int i = 0; i < n; ++i) {
        const double left = weno5_edge(d[i - 3], d[i - 2], d[i - 1], d[i], d[i + 1]);
        const double right = weno5_edge(d[i + 2], d[i + 1], d[i], d[i - 1], d[i - 2]);
        out[i] = 0.5 * (left + right);
    }
}

std::vector<double> weno5_node_derivative(std::span<const double> v, double dx) {
    std::vector<double> out(v.size());
    weno5_node_derivative(v, dx, out);
    return out;
}

void weno5_halfnode_reconstruct(std::span<const double> avg, std::span<double> out) {
    require_length(avg.size());
    const int n = static_cast<int>(avg.size());
    pad_periodic(avg, tl_pad);
    const double* h = tl_pad.data() + kGhost;
    for (int i = 0; i < n; ++i) {
        const double left = weno5_edge(h[i - 2], h[i - 1], h[i], h[i + 1], h[i + 2]);
        const double right = weno5_edge(h[i + 3], h[i + 2], h[i + 1], h[i], h[i - 1]);
        out[i] = 0.5 * (left + right);
    }
}

std::vector<double> weno5_halfnode_reconstruct(std::span<const double> avg) {
    std::vector<double> out(avg.size());
    weno5_halfnode_reconstruct(avg, out);
    return out;
}

void DiffusionWorkspace::resize(std::size_t n) {
    v.resize(n);
    slope.resize(n);
    slope_right.resize(n);
    flux.resize(n);
    flux_right.resize(n);
    half.resize(n);
}

namespace {

// u^e for clipped u >= 0, with 0^e = 0.
inline double nonneg_pow(double u, double e) {
    return u > 0.0 ? std::exp(e * std::log(u)) : 0.0;
}

}  // namespace

void weno5_biased_derivatives(std::span<const double> v, double dx, std::span<double> left,
                              std::span<double> right) {
    require_length(v.size());
    const int n = static_cast<int>(v.size());
    pad_periodic(v, tl_pad);
    tl_diff.resize(n + 2 * kGhost);
    const double inv = 1.0 / dx;
    for (int k = 0; k < n + 2 * kGhost - 1; ++k) tl_diff[k] = (tl_pad[k + 1] - tl_pad[k]) * inv;
    tl_diff[n + 2 * kGhost - 1] = (v[kGhost % n] - v[(kGhost - 1) % n]) * inv;
    const double* d = tl_diff.data() + kGhost;
    for (int i = 0; i < n; ++i) {
        left[i] = weno5_edge(d[i - 3], d[i - 2], d[i - 1], d[i], d[i + 1]);
        right[i] = weno5_edge(d[i + 2], d[i + 1], d[i], d[i - 1], d[i - 2]);
    }
}

namespace {
thread_local std::vector<double> tl_pad_r;
}  // namespace

void degenerate_diffusion(std::span<const double> u, double dx, double m, double p, DiffusionWorkspace& ws,
                          std::span<double> out) {
    const std::size_t n = u.size();
    ws.resize(n);
    for (std::size_t i = 0; i < n; ++i) ws.v[i] = nonneg_pow(u[i], m);
    weno5_biased_derivatives(ws.v, dx, ws.slope, ws.slope_right);
    for (std::size_t i = 0; i < n; ++i) {
        ws.flux[i] = flux_phi(ws.slope[i], p);
        ws.flux_right[i] = flux_phi(ws.slope_right[i], p);
    }
    // Left-biased fluxes go through the right-biased reconstruction and vice versa.
    pad_periodic(ws.flux, tl_pad);
    pad_periodic(ws.flux_right, tl_pad_r);
    const double* hl = tl_pad.data() + kGhost;
    const double* hr = tl_pad_r.data() + kGhost;
    const int ni = static_cast<int>(n);
    for (int i = 0; i < ni; ++i) {
        const double a = weno5_edge(hl[i + 3], hl[i + 2], hl[i + 1], hl[i], hl[i - 1]);
        const double b = weno5_edge(hr[i - 2], hr[i - 1], hr[i], hr[i + 1], hr[i + 2]);
        ws.half[i] = 0.5 * (a + b);
    }
    const double inv = 1.0 / dx;
    out[0] = (ws.half[0] - ws.half[n - 1]) * inv;
    for (std::size_t i = 1; i < n; ++i) out[i] = (ws.half[i] - ws.half[i - 1]) * inv;
}

std::vector<double> degenerate_diffusion(const Field& field, double m, double p) {
    DiffusionWorkspace ws;
    std::vector<double> out(field.u.size());
    degenerate_diffusion(field.u, field.grid.dx(), m, p, ws, out);
    return out;
}

void rhs(std::span<const double> u, double dx, const ProblemParams& pp, DiffusionWorkspace& ws,
         std::span<double> out) {
    degenerate_diffusion(u, dx, pp.m, pp.p, ws, out);
    if (pp.b == 0.0) return;
    for (std::size_t i = 0; i < u.size(); ++i) out[i] -= pp.b * nonneg_pow(u[i], pp.beta);
}

std::vector<double> rhs(const Field& field, const ProblemParams& params) {
    DiffusionWorkspace ws;
    std::vector<double> out(field.u.size());
    rhs(field.u, field.grid.dx(), params, ws, out);
    return out;
}

double max_effective_diffusivity(std::span<const double> u, double dx, double m, double p,
                                 DiffusionWorkspace& ws) {
    const std::size_t n = u.size();
    ws.resize(n);
    for (std::size_t i = 0; i < n; ++i) ws.v[i] = nonneg_pow(u[i], m);
    weno5_biased_derivatives(ws.v, dx, ws.slope, ws.slope_right);
    for (std::size_t i = 0; i < n; ++i) ws.slope[i] = 0.5 * (ws.slope[i] + ws.slope_right[i]);
    // p < 1: |g|^{p-1} is unbounded where the slope vanishes; floor the slope
    // at a fraction of the largest one
    double gfloor = 0.0;
    if (p < 1.0) {
        for (std::size_t i = 0; i < n; ++i) gfloor = std::max(gfloor, std::abs(ws.slope[i]));
        gfloor *= kSlopeFloorFraction;
    }
    // per interface: p |g|^{p-1} times the secant slope of u -> u^m
    double dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = (i + 1) % n;
        const double du = u[r] - u[i];
        double sv;
        if (du != 0.0) {
            sv = (ws.v[r] - ws.v[i]) / du;
        } else {
            sv = u[i] > 0.0 ? m * std::pow(u[i], m - 1.0) : 0.0;
        }
        if (!(sv > 0.0)) continue;
        double g = std::abs(ws.v[r] - ws.v[i]) / dx;
        if (p < 1.0) g = std::max(g, gfloor);
        if (g <= 0.0) continue;
        dmax = std::max(dmax, p * std::pow(g, p - 1.0) * sv);
    }
    return dmax;
}

namespace {

void check_finite(std::span<const double> u, const char* stage) {
    for (double v : u) {
        if (!std::isfinite(v)) throw std::runtime_error(std::string("non-finite value in RK3 ") + stage);
    }
}

// Floors at zero; with `conserve`, the removed deficit is taken
// proportionally from the positive values so the sum is unchanged.
void clip(std::span<double> u, bool conserve) {
    double deficit = 0.0, positive = 0.0;
    for (double& v : u) {
        if (v < 0.0) {
            deficit -= v;
            v = 0.0;
        } else {
            positive += v;
        }
    }
    if (conserve && deficit > 0.0 && positive > deficit) {
        const double scale = 1.0 - deficit / positive;
        for (double& v : u) v *= scale;
    }
}

thread_local std::vector<double> tl_u0, tl_stage, tl_l;

}  // namespace

void tvd_rk3_step(std::span<double> u, double dt, const SpatialOperator& op, bool clip_negative, bool conserve_mass) {
    const std::size_t n = u.size();
    tl_u0.assign(u.begin(), u.end());
    tl_stage.resize(n);
    tl_l.resize(n);

    op(tl_u0, tl_l);
    for (std::size_t i = 0; i < n; ++i) tl_stage[i] = tl_u0[i] + dt * tl_l[i];
    if (clip_negative) clip(tl_stage, conserve_mass);
    check_finite(tl_stage, "stage 1");

    op(tl_stage, tl_l);
    for (std::size_t i = 0; i < n; ++i) tl_stage[i] = 0.75 * tl_u0[i] + 0.25 * (tl_stage[i] + dt * tl_l[i]);
    if (clip_negative) clip(tl_stage, conserve_mass);
    check_finite(tl_stage, "stage 2");

    op(tl_stage, tl_l);
    for (std::size_t i = 0; i < n; ++i) u[i] = tl_u0[i] / 3.0 + 2.0 / 3.0 * (tl_stage[i] + dt * tl_l[i]);
    if (clip_negative) clip(u, conserve_mass);
    check_finite(u, "stage 3");
}

Field rk3_step(const Field& field, double dt, const ProblemParams& params, bool clip_negative) {
    if (!(dt > 0.0)) throw DomainError("rk3_step needs dt > 0");
    Field next = field;
    DiffusionWorkspace ws;
    const double dx = field.grid.dx();
    const SpatialOperator op = [&](std::span<const double> u, std::span<double> out) {
        rhs(u, dx, params, ws, out);
    };
    try {
        tvd_rk3_step(next.u, dt, op, clip_negative, params.b == 0.0);
    } catch (const std::runtime_error& e) {
        throw InstabilityError(e.what(), field);
    }
    next.t = field.t + dt;
    return next;
}

EvolveResult evolve(Field u0, const ProblemParams& params, const StepControl& control, double t_end,
                    const Observers& obs) {
    control.validate();
    u0.validate();
    if (!(t_end > u0.t)) throw DomainError("t_end must exceed the initial time");
    if (!std::is_sorted(obs.output_times.begin(), obs.output_times.end())) {
        throw DomainError("output times must be sorted");
    }

    EvolveResult res{std::move(u0), 0, std::numeric_limits<double>::infinity(), 0.0};
    Field& f = res.final;
    const double dx = f.grid.dx();
    DiffusionWorkspace ws;
    const SpatialOperator op = [&](std::span<const double> u, std::span<double> out) {
        rhs(u, dx, params, ws, out);
    };

    auto next_output = std::lower_bound(obs.output_times.begin(), obs.output_times.end(), f.t);
    // Outputs at the initial time are reported before stepping.
    while (next_output != obs.output_times.end() && *next_output <= f.t) {
        if (obs.on_output) obs.on_output(f);
        ++next_output;
    }
    if (obs.on_step) obs.on_step(f);

    constexpr double kDiffusivityFloor = 1e-12;
    std::vector<double> backup;
    while (f.t < t_end) {
        double dt;
        if (control.dt) {
            dt = *control.dt;
        } else {
            const double dmax = max_effective_diffusivity(f.u, dx, params.m, params.p, ws);
            dt = control.cfl * dx * dx / std::max(dmax, kDiffusivityFloor);
        }
        double target = t_end;
        if (next_output != obs.output_times.end()) target = std::min(target, *next_output);
        bool lands = false;
        if (f.t + dt >= target * (1.0 - 1e-14)) {
            dt = target - f.t;
            lands = true;
        }

        backup = f.u;
        try {
            tvd_rk3_step(f.u, dt, op, control.clip_negative, params.b == 0.0);
        } catch (const std::runtime_error& e) {
            Field last{f.grid, f.t, std::move(backup)};
            throw InstabilityError(std::string(e.what()) + " at t = " + std::to_string(f.t), std::move(last));
        }
        f.t = lands ? target : f.t + dt;
        ++res.steps;
        res.min_dt = std::min(res.min_dt, dt);
        res.max_dt = std::max(res.max_dt, dt);

        if (obs.on_step) obs.on_step(f);
        while (next_output != obs.output_times.end() && *next_output <= f.t) {
            if (obs.on_output) obs.on_output(f);
            ++next_output;
        }
    }
    return res;
}

std::optional<double> locate_interface(const Field& field, double threshold) {
    const auto& u = field.u;
    const int n = static_cast<int>(u.size());
    const auto peak = std::max_element(u.begin(), u.end());
    if (peak == u.end() || *peak < threshold) return std::nullopt;
    const int start = static_cast<int>(peak - u.begin());
    for (int k = 1; k < n; ++k) {
        const int i = (start + k) % n;
        if (u[i] < threshold) return field.grid.x(i);
    }
    return std::nullopt;
}

}  // namespace ddi
