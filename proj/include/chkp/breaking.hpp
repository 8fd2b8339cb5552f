#pragma once

#include "chkp/model.hpp"
#include "chkp/stepper.hpp"

#include <optional>
#include <vector>

namespace chkp {

struct TraceSample {
    double t;
    double q;  // characteristic position, reduced modulo lx
    double w;  // u_x along the characteristic
    double r;  // residual R along the characteristic
};

struct CharacteristicTrace {
    double x0 = 0.0;
    double y0 = 0.0;
    std::vector<TraceSample> samples;
};

// Integrates dq/dt = gamma u(t, q, y0) through the snapshot sequence (RK4 per
// interval, u linearly interpolated in t); w and r are sampled at snapshot
// times. y0 is snapped to the nearest grid line. Throws if the snapshot
// cadence is too sparse to resolve the advection.
CharacteristicTrace track(const Trajectory& traj, const ModelParams& p, double x0, double y0);

// Finite-difference dw/dt + gamma w^2 + r along the trace; one value per
// interior sample.
std::vector<double> verify_riccati_ode(const CharacteristicTrace& trace, double gamma);

// sup |r| over all samples, or over samples taken while w >= w_floor.
double empirical_K(const CharacteristicTrace& trace);
double empirical_K(const CharacteristicTrace& trace, double w_floor);

struct RiccatiBound {
    double gamma = 1.0;
    double k = 0.0;
    double m0 = 0.0;
    std::optional<double> t_star;  // finite iff m0 < -sqrt(k/gamma)
};

RiccatiBound t_star_bound(double m0, double k, double gamma);

// Closed-form lower bound for psi solving dpsi/dt >= gamma psi^2 - K with
// psi(0) = psi0 > sqrt(K/gamma). Returns +inf for t >= t_star.
double riccati_lower_envelope(double psi0, double k, double gamma, double t);

// Gaussian weight on the y-grid, periodized and renormalized so the discrete
// integral equals 1; phi'' tabulated from the same image sum.
struct WeightSpec {
    double sigma = 0.5;
    double y0 = 0.0;
    std::vector<double> phi;
    std::vector<double> phi_pp;
    double norm_inf = 0.0;     // |phi|_Linf
    double norm_pp_l2 = 0.0;   // |phi''|_L2
};

WeightSpec make_gaussian_weight(const Grid& grid, double sigma, double y0);

struct M1Series {
    std::vector<double> t;
    std::vector<double> m1;
};

// One characteristic per y-grid line, all seeded at x0; M1(t) is the
// quadrature of u_x along the family against phi.
M1Series weighted_M1(const Trajectory& traj, const ModelParams& p, double x0,
                     const WeightSpec& w);

struct C3Result {
    double c3 = 0.0;
    double m1_0 = 0.0;
    std::optional<double> t0;  // finite iff m1_0 < -sqrt(2/gamma) c3
};

// C3^2 = c_user*|u0|_{X^s} + (3/2) gamma E(u0) |phi|_inf + E(u0)^{1/2} |phi''|_L2,
// with E the full-domain energy (|u|^2 + |u_x|^2)/2.
C3Result c3_and_t0(const SpectralField& u0, const WeightSpec& w, double gamma,
                   double c_user, double xs_order, double x0);

// sup over interior samples of dM1/dt + (gamma/2) M1^2 (centered differences).
double empirical_D(const M1Series& series, double gamma);
double empirical_D(const M1Series& series, double gamma, double m1_floor);

} // namespace chkp
