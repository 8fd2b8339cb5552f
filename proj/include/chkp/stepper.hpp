#pragma once

#include "chkp/diagnostics.hpp"
#include "chkp/model.hpp"

#include <vector>

namespace chkp {

struct StepperConfig {
    double dt0 = 1e-2;
    double t_end = 1.0;
    double cfl = 0.5;
    double grad_stop = 1e4;
    double dt_floor = 1e-9;
    double c_g = 0.5;        // adaptive cap dt <= c_g / |grad u|_inf
    int snapshot_every = 4;  // steps between stored snapshots
    int diag_every = 1;      // steps between diagnostic records
    double xs_order = 2.0;   // s used for the tracked X^s norm
};

enum class StopKind { horizon_reached, gradient_threshold, step_floor, non_finite };

struct StopReason {
    StopKind kind = StopKind::horizon_reached;
    double t_stop = 0.0;
};

const char* to_string(StopKind k);

// One classical RK4 step in the integrating-factor variable w = e^{-tL} u_hat,
// L = -i eta^2/(xi (1+xi^2)); the nonlinear remainder is explicit.
SpectralField step(const SpectralField& u, const ModelParams& p, double dt);

struct Snapshot {
    double t;
    SpectralField u;
};

class Trajectory {
public:
    void add(double t, SpectralField u) { snaps_.push_back({t, std::move(u)}); }
    const std::vector<Snapshot>& snapshots() const { return snaps_; }
    bool empty() const { return snaps_.empty(); }
    // Index i with t_i <= t <= t_{i+1} (clamped).
    std::size_t interval(double t) const;

private:
    std::vector<Snapshot> snaps_;
};

struct RunResult {
    Trajectory traj;
    StopReason stop;
    std::vector<DiagnosticRecord> diags;
};

RunResult run(const SpectralField& u0, const ModelParams& p, const StepperConfig& cfg);

// Trapezoidal accumulation of grad_inf^2 over the record times.
std::vector<double> blowup_integral(const std::vector<DiagnosticRecord>& diags);

} // namespace chkp
