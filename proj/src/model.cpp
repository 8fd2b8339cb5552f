#include "chkp/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace chkp {

Nonlinearity make_classical(double kappa) {
    Nonlinearity n;
    std::ostringstream name;
    name << "classical(kappa=" << kappa << ")";
    n.name = name.str();
    n.g = [kappa](double u) { return 2.0 * kappa * u + 3.0 * u * u; };
    n.g_prime = [kappa](double u) { return 2.0 * kappa + 6.0 * u; };
    n.growth = GrowthSpec{1.0, 6.0, 2.0 * std::abs(kappa)};
    return n;
}

Nonlinearity make_quadratic_pure() {
    Nonlinearity n;
    n.name = "quadratic_pure";
    n.g = [](double u) { return 3.0 * u * u; };
    n.g_prime = [](double u) { return 6.0 * u; };
    n.growth = GrowthSpec{1.0, 6.0, 0.0};
    return n;
}

Nonlinearity make_cubic() {
    Nonlinearity n;
    n.name = "cubic";
    n.g = [](double u) { return u * u * u; };
    n.g_prime = [](double u) { return 3.0 * u * u; };
    n.growth = GrowthSpec{2.0, 3.0, 0.0};
    return n;
}

Nonlinearity make_quartic() {
    Nonlinearity n;
    n.name = "quartic";
    n.g = [](double u) { return u * u * u * u; };
    n.g_prime = [](double u) { return 4.0 * u * u * u; };
    n.growth = GrowthSpec{3.0, 4.0, 0.0};
    return n;
}

Nonlinearity make_polynomial(const std::vector<double>& coeffs) {
    Nonlinearity n;
    n.name = "polynomial";
    n.g = [coeffs](double u) {
        double s = 0.0, p = u;
        for (double c : coeffs) {
            s += c * p;
            p *= u;
        }
        return s;
    };
    n.g_prime = [coeffs](double u) {
        double s = 0.0, p = 1.0;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            s += coeffs[k] * (k + 1) * p;
            p *= u;
        }
        return s;
    };
    // |g'(u)| <= sum (k+1)|c_k| |u|^k <= (sum_{k>=1} (k+1)|c_k|) |u|^{deg-1} + |c_0|
    // on |u| >= 1; registered as metadata for the sampled check.
    if (!coeffs.empty()) {
        double c1 = 0.0;
        for (std::size_t k = 1; k < coeffs.size(); ++k) c1 += (k + 1) * std::abs(coeffs[k]);
        double c2 = std::abs(coeffs[0]) + c1;
        n.growth = GrowthSpec{static_cast<double>(coeffs.size() - 1), c1, c2};
    }
    return n;
}

Nonlinearity nonlinearity_by_name(const std::string& name, double kappa) {
    if (name == "classical") return make_classical(kappa);
    if (name == "quadratic_pure") return make_quadratic_pure();
    if (name == "cubic") return make_cubic();
    if (name == "quartic") return make_quartic();
    throw std::invalid_argument("unknown nonlinearity preset: " + name);
}

void validate_nonlinearity(const Nonlinearity& n) {
    if (std::abs(n.g(0.0)) > 1e-14)
        throw std::invalid_argument(n.name + ": g(0) != 0");
    const int samples = 201;
    const double h = 1e-5;
    for (int i = 0; i < samples; ++i) {
        double u = -10.0 + 20.0 * i / (samples - 1);
        double fd = (n.g(u + h) - n.g(u - h)) / (2.0 * h);
        double scale = std::max({1.0, std::abs(fd), std::abs(n.g_prime(u))});
        if (std::abs(fd - n.g_prime(u)) > 1e-6 * scale)
            throw std::invalid_argument(n.name + ": g_prime inconsistent with g");
    }
}

namespace {

SpectralField pointwise(const SpectralField& a, const std::function<double(double)>& f) {
    SpectralField out(a.grid_ptr());
    auto& v = out.values_mut();
    const auto& in = a.values();
    for (std::size_t i = 0; i < in.size(); ++i) v[i] = f(in[i]);
    return out;
}

SpectralField product(const SpectralField& a, const SpectralField& b) {
    SpectralField out(a.grid_ptr());
    auto& v = out.values_mut();
    const auto& va = a.values();
    const auto& vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i) v[i] = va[i] * vb[i];
    return dealias(out);
}

} // namespace

SpectralField flux_F(const SpectralField& u, const ModelParams& p) {
    SpectralField ux = ddx(u);
    SpectralField out(u.grid_ptr());
    auto& v = out.values_mut();
    const auto& vu = u.values();
    const auto& vx = ux.values();
    const double hg = 0.5 * p.gamma;
    for (std::size_t i = 0; i < vu.size(); ++i)
        v[i] = 0.5 * p.g.g(vu[i]) + hg * (vx[i] * vx[i] - vu[i] * vu[i]);
    return dealias(out);
}

SpectralField rhs_explicit(const SpectralField& u, const ModelParams& p) {
    if (!u.x_mean_free(1e-8))
        throw std::invalid_argument("rhs: input is not x-mean-free");
    SpectralField ux = ddx(u);
    SpectralField adv = product(u, ux);
    SpectralField gF = green_dx(flux_F(u, p));
    SpectralField out(u.grid_ptr());
    auto& v = out.values_mut();
    const auto& va = adv.values();
    const auto& vg = gF.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = -p.gamma * va[i] - vg[i];
    return project_xmean(dealias(out));
}

SpectralField rhs(const SpectralField& u, const ModelParams& p) {
    SpectralField expl = rhs_explicit(u, p);
    SpectralField kp = kp_nonlocal(u);
    auto& v = expl.values_mut();
    const auto& vk = kp.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= vk[i];
    return expl;
}

SpectralField residual_R(const SpectralField& u, const ModelParams& p) {
    if (!u.x_mean_free(1e-8))
        throw std::invalid_argument("residual_R: input is not x-mean-free");
    SpectralField r1 = ddx(green_dx(flux_F(u, p)));
    SpectralField r2 = ddx(kp_nonlocal(u));
    auto& v = r1.values_mut();
    const auto& v2 = r2.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += v2[i];
    return r1;
}

LiouvilleCheck check_liouville_condition(const ModelParams& p, double umin, double umax,
                                         int n_samples) {
    if (!(umin < 0.0 && 0.0 < umax)) throw std::invalid_argument("check_liouville: need umin < 0 < umax");
    if (n_samples < 3) throw std::invalid_argument("check_liouville: empty range");
    LiouvilleCheck out;
    out.verdict = ConditionVerdict::holds_strict;
    out.min_margin = std::numeric_limits<double>::infinity();
    if (std::abs(p.g.g(0.0)) > 1e-14) {
        out.verdict = ConditionVerdict::fails;
        out.fail_at = 0.0;
        return out;
    }
    for (int i = 0; i < n_samples; ++i) {
        double u = umin + (umax - umin) * i / (n_samples - 1);
        double margin = p.g.g(u) - p.gamma * u * u;
        if (std::abs(u) < 1e-12) continue;
        out.min_margin = std::min(out.min_margin, margin);
        if (margin < -1e-14) {
            out.verdict = ConditionVerdict::fails;
            out.fail_at = u;
            return out;
        }
        if (margin <= 1e-14 && out.verdict == ConditionVerdict::holds_strict)
            out.verdict = ConditionVerdict::holds_weak;
    }
    return out;
}

GrowthCheck check_growth(const ModelParams& p, double umin, double umax, int n_samples) {
    if (!p.g.growth) throw std::invalid_argument("check_growth: growth metadata missing");
    if (n_samples < 2) throw std::invalid_argument("check_growth: empty range");
    const GrowthSpec& gs = *p.g.growth;
    GrowthCheck out;
    out.holds = true;
    for (int i = 0; i < n_samples; ++i) {
        double u = umin + (umax - umin) * i / (n_samples - 1);
        double bound = gs.c1 * std::pow(std::abs(u), gs.alpha) + gs.c2;
        double ratio = bound > 0.0 ? std::abs(p.g.g_prime(u)) / bound
                                   : (std::abs(p.g.g_prime(u)) > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (ratio > out.worst_ratio) {
            out.worst_ratio = ratio;
            out.worst_at = u;
        }
    }
    if (out.worst_ratio > 1.0 + 1e-12) out.holds = false;
    return out;
}

} // namespace chkp
