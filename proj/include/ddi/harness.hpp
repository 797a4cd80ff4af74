#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ddi/analytic.hpp"
#include "ddi/classification.hpp"
#include "ddi/params.hpp"
#include "ddi/profiles.hpp"
#include "ddi/weno.hpp"

namespace ddi {

struct IpsIC {
    double gamma = 1.0;
    double t0 = 0.05;
};

/// C(-x)_+^alpha with a tanh taper on the left; C and alpha come from the
/// problem parameters.
struct PowerFrontIC {
    double taper_center = -1.0;
    double taper_width = 0.5;
};

struct ExplicitIC {
    SolutionKind kind = SolutionKind::SeparableU6;
    double t0 = 0.0;
};

using InitialCondition = std::variant<IpsIC, PowerFrontIC, ExplicitIC>;

struct Scenario {
    std::string name;
    ProblemParams params;
    Grid grid{-1.0, 1.0, 16};
    StepControl control;
    InitialCondition ic = PowerFrontIC{};
    double t_end = 1.0;
    std::vector<double> output_times;
    std::optional<std::array<double, 2>> fit_window;  // absolute times

    double t_start() const;
    /// Throws DomainError on inconsistent settings.
    void validate() const;
};

Field make_initial_condition(const InitialCondition& ic, const Grid& grid, const ProblemParams& params);

/// Configuration problems, with the offending line when there is one.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0);
    int line() const { return line_; }

private:
    int line_;
};

Scenario load_scenario(std::string_view text);
Scenario load_scenario_file(const std::filesystem::path& path);

struct TrackPoint {
    double t;
    double eta;
};

struct FitReport {
    double prefactor = 0.0;
    double exponent = 0.0;
    double rms = 0.0;  // residual in log-log coordinates
    double t_a = 0.0;
    double t_b = 0.0;
    std::size_t points = 0;
    int sign = 1;
    std::optional<InterfaceLaw> predicted;
};

/// Least squares of ln(sign eta) on ln t over track points with t in
/// [window[0], window[1]]. Needs at least 5 points, all with sign eta > 0.
FitReport fit_powerlaw(const std::vector<TrackPoint>& track, std::array<double, 2> window, int sign);

struct SpeedFit {
    double speed = 0.0;
    double offset = 0.0;
    double rms = 0.0;
    double t_a = 0.0;
    double t_b = 0.0;
    std::size_t points = 0;
};

/// Least squares of eta = offset + speed t over track points in the window.
SpeedFit fit_speed(const std::vector<TrackPoint>& track, std::array<double, 2> window);

struct Snapshot {
    Field field;
};

struct RunResult {
    Scenario scenario;
    RegionReport region;
    InterfaceLaw law;
    std::vector<Snapshot> snapshots;
    std::vector<TrackPoint> track;
    std::optional<FitReport> fit;
    std::string fit_error;
    std::size_t steps = 0;
    double min_dt = 0.0;
    double max_dt = 0.0;
    double mass_initial = 0.0;
    double mass_final = 0.0;
    bool unstable = false;
    std::string error;
    Field final_field{Grid{-1.0, 1.0, 16}, 0.0, {}};
};

/// Runs the scenario. Solver instability is reported in the result with
/// the outputs gathered so far.
RunResult run_scenario(const Scenario& s);

/// Linear interpolation of the field at x.
double sample_field(const Field& f, double x);

struct ProfileRun {
    ProfileTable table;
    std::vector<PdeSample> samples;
    SelfSimilarExponents exponents;
    Region region;
};

/// Evolves the scenario up to the last seed time, seeds from the PDE and
/// integrates the profile ODE (Region 1 or Region 2 by classification).
/// Without `seed_xi`, Region-2 shrinking cases seed at the reaction-limit
/// front -(b(1-beta)/C^{1-beta})^c; everything else seeds at 0.
ProfileRun run_profile(const Scenario& s, const std::vector<double>& seed_times,
                       std::optional<double> seed_xi = std::nullopt, const ProfileOptions& opt = {});

// CSV output, 17 significant digits, mandatory headers.
void write_snapshots_csv(std::ostream& os, const std::vector<Snapshot>& snaps);
void write_track_csv(std::ostream& os, const std::vector<TrackPoint>& track);
void write_profile_csv(std::ostream& os, const ProfileTable& table);
std::vector<TrackPoint> read_track_csv(std::istream& is);

std::string report_json(const RunResult& r);

/// Writes <name>_snapshots.csv, <name>_track.csv and <name>_report.json.
void write_artifacts(const RunResult& r, const std::filesystem::path& dir);

}  // namespace ddi
