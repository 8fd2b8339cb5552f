#pragma once

#include "chkp/spectral_ops.hpp"

namespace chkp {

struct DiagnosticRecord {
    double t = 0.0;
    double dt = 0.0;
    double conserved = 0.0;   // |u|_{L2}^2 + |u_x|_{L2}^2
    double energy_e = 0.0;    // conserved / 2
    double xs_norm = 0.0;
    double grad_inf = 0.0;
    double min_ux = 0.0;
    double blowup_i = 0.0;    // trapezoid of grad_inf^2 up to t
    bool finite = true;
};

DiagnosticRecord record(const SpectralField& u, double t, double dt, double xs_order,
                        double i_accum);

struct InequalityRatios {
    double r1 = 0.0;  // |u|_inf^2 / (|u|^1/2 |u_x|^1/2 |u_y|^1/2 |u_xy|^1/2)
    double r2 = 0.0;  // |u|_inf^3 / (|u| |u_x| |u_y|_inf)
    double r3 = 0.0;  // |u|_inf / (|u| + |u_x| + |u_y|_inf)
    bool degenerate = false;
};

InequalityRatios inequality_report(const SpectralField& u);

} // namespace chkp
