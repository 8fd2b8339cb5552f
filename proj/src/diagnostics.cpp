#include "chkp/diagnostics.hpp"

#include <cmath>

namespace chkp {

DiagnosticRecord record(const SpectralField& u, double t, double dt, double xs_order,
                        double i_accum) {
    DiagnosticRecord r;
    r.t = t;
    r.dt = dt;
    r.blowup_i = i_accum;
    if (!u.finite()) {
        r.finite = false;
        return r;
    }
    double l2 = norm_hs(u, 0.0);
    double l2x = norm_hs(ddx(u), 0.0);
    r.conserved = l2 * l2 + l2x * l2x;
    r.energy_e = 0.5 * r.conserved;
    r.xs_norm = norm_xs(u, xs_order);
    r.grad_inf = grad_inf(u);
    r.min_ux = min_value(ddx(u));
    return r;
}

InequalityRatios inequality_report(const SpectralField& u) {
    InequalityRatios out;
    SpectralField ux = ddx(u);
    SpectralField uy = ddy(u);
    SpectralField uxy = ddy(ux);
    double u_inf = max_abs(u);
    double uy_inf = max_abs(uy);
    double u_2 = norm_hs(u, 0.0);
    double ux_2 = norm_hs(ux, 0.0);
    double uy_2 = norm_hs(uy, 0.0);
    double uxy_2 = norm_hs(uxy, 0.0);
    if (u_2 == 0.0 || ux_2 == 0.0 || uy_2 == 0.0 || uxy_2 == 0.0 || uy_inf == 0.0) {
        out.degenerate = true;
        return out;
    }
    out.r1 = u_inf * u_inf / std::sqrt(u_2 * ux_2 * uy_2 * uxy_2);
    out.r2 = u_inf * u_inf * u_inf / (u_2 * ux_2 * uy_inf);
    out.r3 = u_inf / (u_2 + ux_2 + uy_inf);
    return out;
}

} // namespace chkp
