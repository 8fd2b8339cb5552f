#pragma once

#include "chkp/model.hpp"
#include "chkp/stepper.hpp"

#include <vector>

namespace chkp {

struct VanishWindow {
    int t_begin, t_end;  // snapshot index range, inclusive
    int x_begin, x_end;  // grid column range, inclusive
    int cells = 0;       // flagged cells inside the bounding rectangle
};

struct VanishReport {
    double tol = 0.0;
    std::vector<VanishWindow> windows;
    int largest_cells = 0;
    double largest_area = 0.0;  // largest_cells scaled by the mean cell measure dt*dx
};

// Per (snapshot, column) computes sup_y |u|, flags sub-threshold cells and
// flood-fills connected components.
VanishReport vanish_scan(const Trajectory& traj, double tol);

// q = g(u)/2 + (gamma/2) u_x^2 - (gamma/2) u^2 as a pointwise field.
SpectralField q_functional(const SpectralField& u, const ModelParams& p);

enum class PVerdict { monotone_ok, monotone_violation, descriptive };

struct PFunctionalResult {
    std::vector<double> p_c;   // p(c, y) on the y-grid
    std::vector<double> p_d;
    PVerdict verdict = PVerdict::descriptive;
    double min_gap = 0.0;      // min_y (p(d,y) - p(c,y))
};

// Line convolutions of q with -1/2 sgn(x) e^{-|x|} (kernel periodized until
// the image tail is below 1e-14). The monotone verdict applies only when q
// vanishes on [c, d] (the hypothesis scenario); otherwise descriptive.
PFunctionalResult p_functional(const SpectralField& u, const ModelParams& p, double c, double d);

} // namespace chkp
