#pragma once

#include "chkp/field.hpp"

#include <complex>
#include <functional>

namespace chkp {

// Diagonal Fourier multiplier m(xi, eta) applied mode-wise.
SpectralField apply_multiplier(const SpectralField& f,
                               const std::function<std::complex<double>(double, double)>& m);

SpectralField ddx(const SpectralField& f);
SpectralField ddy(const SpectralField& f);

// Spectral antiderivative in x; all (xi=0, eta) modes are set to zero, so
// inputs with nonzero x-mean are silently projected.
SpectralField inv_ddx(const SpectralField& f);

// (1 - d^2/dx^2)^{-1}, multiplier 1/(1+xi^2).
SpectralField green(const SpectralField& f);

// d/dx (1 - d^2/dx^2)^{-1}, multiplier i xi/(1+xi^2).
SpectralField green_dx(const SpectralField& f);

// Transverse nonlocal operator: multiplier i eta^2/(xi (1+xi^2)), zero at xi=0.
SpectralField kp_nonlocal(const SpectralField& f);

SpectralField project_xmean(const SpectralField& f);
SpectralField dealias(const SpectralField& f);

// Continuum-normalized Sobolev norm: sqrt( sum (1+xi^2+eta^2)^s |c|^2 * lx*ly ).
double norm_hs(const SpectralField& f, double s);

// X^s norm: sqrt(|f|_{H^s}^2 + |inv_ddx f|_{H^s}^2 + |ddx f|_{H^s}^2).
// Rejects inputs that are not x-mean-free.
double norm_xs(const SpectralField& f, double s);

double inner_l2(const SpectralField& a, const SpectralField& b);

// Trigonometric (band-limited exact) interpolation at an off-grid point.
double eval_at(const SpectralField& f, double x, double y);

double max_abs(const SpectralField& f);
double min_value(const SpectralField& f);
double max_value(const SpectralField& f);

// Grid max of sqrt(u_x^2 + u_y^2).
double grad_inf(const SpectralField& u);

// Fourier interpolant of one x-row (y fixed at a grid line). Evaluation is
// O(nx) per point; building costs one 1D transform.
class LineInterpolant {
public:
    LineInterpolant(const SpectralField& f, int iy);
    double operator()(double x) const;

private:
    std::vector<std::complex<double>> c_;
    double lx_;
    int nx_;
};

} // namespace chkp
