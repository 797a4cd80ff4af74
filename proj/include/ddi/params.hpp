#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ddi {

/// Raised when a parameter set or an operation's regime precondition fails.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters of u_t = (|(u^m)_x|^{p-1}(u^m)_x)_x - b u^beta with initial
/// datum C(-x)_+^alpha.
struct ProblemParams {
    double m = 1.0;
    double p = 1.0;
    double b = 0.0;
    double beta = 1.0;
    double C = 1.0;
    double alpha = 1.0;

    double mp() const { return m * p; }

    /// Throws DomainError unless the slow-diffusion assumptions hold.
    ///
    /// mp == 1 is admitted only together with strong absorption
    /// (b > 0, 0 < beta < 1), which still localizes the support.
    void validate() const;
};

/// Relative tolerance used for every threshold and regime equality test.
inline constexpr double kRelTol = 1e-12;

inline bool nearly_equal(double a, double b, double rel = kRelTol) {
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) <= rel * scale;
}

/// |g|^{p-1} g with the continuous extension 0 at g = 0.
inline double flux_phi(double g, double p) {
    if (g == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(g), p), g);
}

/// Inverse of flux_phi.
inline double flux_phi_inverse(double G, double p) {
    if (G == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(G), 1.0 / p), G);
}

/// max(x, 0)^e with 0^e = 0 for every e > 0.
inline double pos_pow(double x, double e) {
    return x > 0.0 ? std::pow(x, e) : 0.0;
}

}  // namespace ddi
