#pragma once

#include "chkp/breaking.hpp"
#include "chkp/liouville.hpp"
#include "chkp/model.hpp"
#include "chkp/stepper.hpp"

#include <optional>
#include <string>

namespace chkp {

struct InitialDataSpec {
    std::string preset = "smooth_small";  // smooth_small | steep_front | localized_bump | y_modulated
    double amplitude = 1e-2;
    std::optional<double> target_m0;      // steep_front: bisect amplitude to hit this grid min_ux
    double sigma = 1.5;
    double b = 1.0;                       // transverse width factor
    double steepness = 1.0;               // carrier wavenumber of the front
    double eps = 0.25;                    // y-modulation depth
};

struct AnalysisSpec {
    double xs_order = 2.0;
    std::optional<double> char_x0;        // default: grid argmin of u0_x
    std::optional<double> char_y0;
    double weight_sigma = 0.5;
    double c_user = 0.0;
    double liouville_tol = 1e-10;
    double k_window_factor = 1.8;         // empirical_K window: samples with w >= factor*m0
    double umin = -2.0, umax = 2.0;       // sampling range for the condition checkers
    int n_samples = 2001;
};

struct RunConfig {
    int version = 1;
    int nx = 128, ny = 128;
    double lx = 12.566370614359172;       // 4*pi
    double ly = 12.566370614359172;
    std::string model_preset = "classical";
    std::vector<double> poly_coeffs;      // model_preset == "polynomial"
    double gamma = 1.0;
    double kappa = 1.0;
    StepperConfig stepper;
    InitialDataSpec initial;
    AnalysisSpec analysis;
};

RunConfig parse_config(const std::string& json_text);  // strict; unknown keys rejected
RunConfig load_config(const std::string& path);
std::string canonical_config_json(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

ModelParams build_model(const RunConfig& cfg);
SpectralField initial_data(std::shared_ptr<const Grid> grid, const InitialDataSpec& spec);

// --- persistence -----------------------------------------------------------

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticRecord>& diags);
std::vector<DiagnosticRecord> read_diagnostics_csv(const std::string& path);

void save_snapshot(const std::string& dir, int index, double t, const SpectralField& u);
Trajectory load_trajectory(const std::string& dir);

// Executes the configured run and persists diagnostics, snapshots, config and
// report under out_dir. Returns the stop reason.
StopReason execute_run(const RunConfig& cfg, const std::string& out_dir);

// Rebuilds the verification report purely from persisted data.
std::string build_report(const std::string& run_dir);

// Polyline SVG charts of the persisted diagnostics (throws on missing data;
// writes the file only on success).
void write_plots(const std::string& run_dir, const std::string& out_file);

std::string presets_listing();

} // namespace chkp
