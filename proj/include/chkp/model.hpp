#pragma once

#include "chkp/spectral_ops.hpp"

#include <functional>
#include <optional>
#include <string>

namespace chkp {

// |g'(u)| <= c1 |u|^alpha + c2.
struct GrowthSpec {
    double alpha = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

struct Nonlinearity {
    std::string name;
    std::function<double(double)> g;
    std::function<double(double)> g_prime;
    std::optional<GrowthSpec> growth;
};

// Built-in presets.
Nonlinearity make_classical(double kappa);     // g(u) = 2*kappa*u + 3u^2
Nonlinearity make_quadratic_pure();            // g(u) = 3u^2
Nonlinearity make_cubic();                     // g(u) = u^3
Nonlinearity make_quartic();                   // g(u) = u^4
Nonlinearity make_polynomial(const std::vector<double>& coeffs); // sum coeffs[k] u^{k+1}
Nonlinearity nonlinearity_by_name(const std::string& name, double kappa);

// g(0)=0 and a finite-difference consistency check of g_prime on [-10,10].
void validate_nonlinearity(const Nonlinearity& n);

struct ModelParams {
    double gamma = 1.0;
    Nonlinearity g;
};

// F = g(u)/2 + (gamma/2) u_x^2 - (gamma/2) u^2, evaluated pointwise and dealiased.
SpectralField flux_F(const SpectralField& u, const ModelParams& p);

// u_t = -gamma u u_x - green_dx(F) - kp_nonlocal(u); output dealiased and
// projected x-mean-free. Rejects inputs with nonzero x-mean.
SpectralField rhs(const SpectralField& u, const ModelParams& p);

// rhs without the linear transverse term (the part stepped explicitly under
// the integrating factor).
SpectralField rhs_explicit(const SpectralField& u, const ModelParams& p);

// R = ddx(green_dx(F)) + ddx(kp_nonlocal(u)).
SpectralField residual_R(const SpectralField& u, const ModelParams& p);

enum class ConditionVerdict { holds_strict, holds_weak, fails };

struct LiouvilleCheck {
    ConditionVerdict verdict;
    double fail_at = 0.0;     // sample where g(u) - gamma u^2 < 0 (verdict == fails)
    double min_margin = 0.0;  // min over nonzero samples of g(u) - gamma u^2
};

// Samples g(u) - gamma u^2 on [umin, umax].
LiouvilleCheck check_liouville_condition(const ModelParams& p, double umin, double umax,
                                         int n_samples);

struct GrowthCheck {
    bool holds = false;
    double worst_ratio = 0.0; // max over samples of |g'(u)| / (c1|u|^alpha + c2)
    double worst_at = 0.0;
};

GrowthCheck check_growth(const ModelParams& p, double umin, double umax, int n_samples);

} // namespace chkp
