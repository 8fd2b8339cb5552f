#include "chkp/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chkp {

const char* to_string(StopKind k) {
    switch (k) {
        case StopKind::horizon_reached: return "horizon_reached";
        case StopKind::gradient_threshold: return "gradient_threshold";
        case StopKind::step_floor: return "step_floor";
        case StopKind::non_finite: return "non_finite";
    }
    return "unknown";
}

namespace {

// Phase factors e^{L dt} for the transverse symbol L = -i eta^2/(xi(1+xi^2)).
std::vector<std::complex<double>> phase_table(const Grid& g, double dt) {
    std::vector<std::complex<double>> e(g.spec_size());
    for (int ky = 0; ky < g.ny(); ++ky) {
        const double eta = g.eta(ky);
        for (int kx = 0; kx < g.nxh(); ++kx) {
            const double xi = g.xi(kx);
            double omega = xi == 0.0 ? 0.0 : eta * eta / (xi * (1.0 + xi * xi));
            e[static_cast<std::size_t>(ky) * g.nxh() + kx] = std::polar(1.0, -omega * dt);
        }
    }
    return e;
}

std::vector<std::complex<double>> combine(
    const std::vector<std::complex<double>>& a, double ca,
    const std::vector<std::complex<double>>& b, double cb) {
    std::vector<std::complex<double>> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = ca * a[i] + cb * b[i];
    return out;
}

} // namespace

SpectralField step(const SpectralField& u, const ModelParams& p, double dt) {
    const Grid& g = u.grid();
    auto grid = u.grid_ptr();
    const auto e_half = phase_table(g, 0.5 * dt);
    const auto e_full = phase_table(g, dt);

    auto mul = [](std::vector<std::complex<double>> v,
                  const std::vector<std::complex<double>>& ph) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] *= ph[i];
        return v;
    };
    auto nonlin = [&](const std::vector<std::complex<double>>& spec) {
        return rhs_explicit(SpectralField::from_spectrum(grid, spec), p).spectrum();
    };

    const auto& u0 = u.spectrum();
    auto k1 = nonlin(u0);

    auto ua = mul(combine(u0, 1.0, k1, 0.5 * dt), e_half);
    auto k2 = nonlin(ua);

    auto ub = combine(mul(u0, e_half), 1.0, k2, 0.5 * dt);
    auto k3 = nonlin(ub);

    auto uc = combine(mul(u0, e_full), 1.0, mul(k3, e_half), dt);
    auto k4 = nonlin(uc);

    // u_{n+1} = E u0 + dt/6 (E k1 + 2 E_half (k2 + k3) + k4)
    auto out = mul(u0, e_full);
    auto ek1 = mul(std::move(k1), e_full);
    auto ek23 = mul(combine(k2, 1.0, k3, 1.0), e_half);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += dt / 6.0 * (ek1[i] + 2.0 * ek23[i] + k4[i]);

    SpectralField next = SpectralField::from_spectrum(grid, std::move(out));
    return project_xmean(dealias(next));
}

std::size_t Trajectory::interval(double t) const {
    if (snaps_.size() < 2) return 0;
    std::size_t lo = 0, hi = snaps_.size() - 1;
    while (lo + 1 < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (snaps_[mid].t <= t)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

RunResult run(const SpectralField& u0, const ModelParams& p, const StepperConfig& cfg) {
    RunResult res;
    SpectralField u = project_xmean(dealias(u0));
    double t = 0.0;
    double i_accum = 0.0;
    double prev_g2 = 0.0, prev_t = 0.0;
    bool have_prev = false;

    auto emit_diag = [&](const SpectralField& f, double dt_now) {
        DiagnosticRecord r = record(f, t, dt_now, cfg.xs_order, 0.0);
        if (r.finite) {
            if (have_prev)
                i_accum += 0.5 * (prev_g2 + r.grad_inf * r.grad_inf) * (t - prev_t);
            prev_g2 = r.grad_inf * r.grad_inf;
            prev_t = t;
            have_prev = true;
        }
        r.blowup_i = i_accum;
        res.diags.push_back(r);
        return r;
    };

    res.traj.add(t, u);
    DiagnosticRecord d0 = emit_diag(u, cfg.dt0);
    if (cfg.t_end <= 0.0) {
        res.stop = {StopKind::horizon_reached, 0.0};
        return res;
    }
    if (!d0.finite) {
        res.stop = {StopKind::non_finite, 0.0};
        return res;
    }

    const double dx = u.grid().dx();
    long steps = 0;
    double gmax = d0.grad_inf;
    double umax = max_abs(u);

    while (t < cfg.t_end) {
        if (cfg.t_end - t <= cfg.dt_floor) break;
        double dt = cfg.dt0;
        dt = std::min(dt, cfg.cfl * dx / (p.gamma * umax + 1e-12));
        dt = std::min(dt, cfg.c_g / std::max(gmax, 1e-12));
        dt = std::min(dt, cfg.t_end - t);
        if (dt < cfg.dt_floor) {
            res.stop = {StopKind::step_floor, t};
            return res;
        }
        u = step(u, p, dt);
        t += dt;
        ++steps;

        if (!u.finite()) {
            res.stop = {StopKind::non_finite, t};
            res.traj.add(t, u);
            DiagnosticRecord r;
            r.t = t;
            r.dt = dt;
            r.finite = false;
            r.blowup_i = i_accum;
            res.diags.push_back(r);
            return res;
        }

        bool snap_due = steps % cfg.snapshot_every == 0;
        bool diag_due = steps % cfg.diag_every == 0;
        gmax = grad_inf(u);
        umax = max_abs(u);
        bool stopping = gmax >= cfg.grad_stop || t >= cfg.t_end;
        if (snap_due || stopping) res.traj.add(t, u);
        if (diag_due || stopping) emit_diag(u, dt);

        if (gmax >= cfg.grad_stop) {
            res.stop = {StopKind::gradient_threshold, t};
            return res;
        }
    }
    res.stop = {StopKind::horizon_reached, t};
    return res;
}

std::vector<double> blowup_integral(const std::vector<DiagnosticRecord>& diags) {
    if (diags.empty()) throw std::invalid_argument("blowup_integral: empty stream");
    std::vector<double> out(diags.size(), 0.0);
    for (std::size_t i = 1; i < diags.size(); ++i) {
        double a = diags[i - 1].grad_inf, b = diags[i].grad_inf;
        out[i] = out[i - 1] + 0.5 * (a * a + b * b) * (diags[i].t - diags[i - 1].t);
    }
    return out;
}

} // namespace chkp
