#include "chkp/breaking.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace chkp {

namespace {

double wrap_period(double x, double l) {
    double r = std::fmod(x, l);
    return r < 0.0 ? r + l : r;
}

int nearest_row(const Grid& g, double y0) {
    double yw = wrap_period(y0, g.ly());
    int iy = static_cast<int>(std::lround(yw / g.dy()));
    return iy % g.ny();
}

struct SnapshotLines {
    double t;
    LineInterpolant u;
    LineInterpolant ux;
    LineInterpolant r;
};

// Advance q over one snapshot interval with RK4, u interpolated linearly in t.
double advect(double q, double gamma, const SnapshotLines& a, const SnapshotLines& b) {
    const double h = b.t - a.t;
    auto vel = [&](double tau, double x) {
        double th = (tau - a.t) / h;
        return gamma * ((1.0 - th) * a.u(x) + th * b.u(x));
    };
    double k1 = vel(a.t, q);
    double k2 = vel(a.t + 0.5 * h, q + 0.5 * h * k1);
    double k3 = vel(a.t + 0.5 * h, q + 0.5 * h * k2);
    double k4 = vel(a.t + h, q + h * k3);
    return q + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

CharacteristicTrace track(const Trajectory& traj, const ModelParams& p, double x0, double y0) {
    const auto& snaps = traj.snapshots();
    if (snaps.size() < 2) throw std::invalid_argument("track: need at least two snapshots");
    const Grid& g = snaps.front().u.grid();
    const int iy = nearest_row(g, y0);

    CharacteristicTrace trace;
    trace.x0 = wrap_period(x0, g.lx());
    trace.y0 = g.y(iy);

    // Cadence check: the advection must move q by less than a period fraction
    // per interval.
    for (std::size_t i = 1; i < snaps.size(); ++i) {
        double h = snaps[i].t - snaps[i - 1].t;
        double umax = max_abs(snaps[i - 1].u);
        if (p.gamma * umax * h > 0.25 * g.lx()) {
            std::ostringstream msg;
            msg << "track: snapshot cadence too sparse (dt=" << h
                << ", need dt <= " << 0.25 * g.lx() / (p.gamma * umax + 1e-300) << ")";
            throw std::invalid_argument(msg.str());
        }
    }

    std::vector<SnapshotLines> lines;
    lines.reserve(snaps.size());
    for (const auto& s : snaps) {
        SpectralField ux = ddx(s.u);
        SpectralField r = residual_R(s.u, p);
        lines.push_back({s.t, LineInterpolant(s.u, iy), LineInterpolant(ux, iy),
                         LineInterpolant(r, iy)});
    }

    double q = trace.x0;
    trace.samples.push_back({lines[0].t, q, lines[0].ux(q), lines[0].r(q)});
    for (std::size_t i = 1; i < lines.size(); ++i) {
        q = wrap_period(advect(q, p.gamma, lines[i - 1], lines[i]), g.lx());
        trace.samples.push_back({lines[i].t, q, lines[i].ux(q), lines[i].r(q)});
    }
    return trace;
}

std::vector<double> verify_riccati_ode(const CharacteristicTrace& trace, double gamma) {
    const auto& s = trace.samples;
    if (s.size() < 3) throw std::invalid_argument("verify_riccati_ode: need >= 3 samples");
    std::vector<double> res;
    res.reserve(s.size() - 2);
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        double dwdt = (s[i + 1].w - s[i - 1].w) / (s[i + 1].t - s[i - 1].t);
        res.push_back(dwdt + gamma * s[i].w * s[i].w + s[i].r);
    }
    return res;
}

double empirical_K(const CharacteristicTrace& trace) {
    return empirical_K(trace, -std::numeric_limits<double>::infinity());
}

double empirical_K(const CharacteristicTrace& trace, double w_floor) {
    if (trace.samples.empty()) throw std::invalid_argument("empirical_K: empty trace");
    double k = 0.0;
    for (const auto& s : trace.samples) {
        if (s.w < w_floor) break;
        k = std::max(k, std::abs(s.r));
    }
    return k;
}

RiccatiBound t_star_bound(double m0, double k, double gamma) {
    if (gamma <= 0.0) throw std::invalid_argument("t_star: gamma must be positive");
    if (k < 0.0) throw std::invalid_argument("t_star: K must be >= 0");
    RiccatiBound out;
    out.gamma = gamma;
    out.k = k;
    out.m0 = m0;
    const double a = std::sqrt(k / gamma);
    if (!(m0 < -a)) return out;  // no blow-up guaranteed
    if (k == 0.0) {
        out.t_star = 1.0 / (gamma * (-m0));
        return out;
    }
    // Argument of the log is > 1 precisely when m0 < -sqrt(K/gamma).
    double num = std::sqrt(gamma) * m0 - std::sqrt(k);
    double den = std::sqrt(gamma) * m0 + std::sqrt(k);
    out.t_star = std::log(num / den) / (2.0 * std::sqrt(k * gamma));
    return out;
}

double riccati_lower_envelope(double psi0, double k, double gamma, double t) {
    const double a = std::sqrt(k / gamma);
    if (!(psi0 > a)) throw std::invalid_argument("riccati_lower_envelope: need psi0 > sqrt(K/gamma)");
    if (t == 0.0) return psi0;
    if (k == 0.0) {
        double den = 1.0 - gamma * psi0 * t;
        return den <= 0.0 ? std::numeric_limits<double>::infinity() : psi0 / den;
    }
    const double b = std::sqrt(k * gamma);
    const double ratio = (psi0 - a) / (psi0 + a);
    double den = 1.0 - ratio * std::exp(2.0 * b * t);
    if (den <= 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * a / den - a;
}

WeightSpec make_gaussian_weight(const Grid& grid, double sigma, double y0) {
    if (sigma <= 0.0) throw std::invalid_argument("make_gaussian_weight: sigma must be positive");
    WeightSpec w;
    w.sigma = sigma;
    w.y0 = wrap_period(y0, grid.ly());
    const int ny = grid.ny();
    const double ly = grid.ly();
    w.phi.assign(ny, 0.0);
    w.phi_pp.assign(ny, 0.0);
    const double s2 = sigma * sigma;
    for (int j = 0; j < ny; ++j) {
        double dy0 = grid.y(j) - w.y0;
        // Sum over period images; beyond the cutoff the terms underflow.
        double phi = 0.0, phi_pp = 0.0;
        for (int m = -64; m <= 64; ++m) {
            double d = dy0 + m * ly;
            double e = std::exp(-0.5 * d * d / s2);
            if (e < 1e-300) continue;
            phi += e;
            phi_pp += e * (d * d / (s2 * s2) - 1.0 / s2);
        }
        w.phi[j] = phi;
        w.phi_pp[j] = phi_pp;
    }
    // Renormalize so the discrete integral is exactly 1.
    double integral = 0.0;
    for (double v : w.phi) integral += v;
    integral *= grid.dy();
    for (int j = 0; j < ny; ++j) {
        w.phi[j] /= integral;
        w.phi_pp[j] /= integral;
    }
    for (double v : w.phi) w.norm_inf = std::max(w.norm_inf, v);
    double pp2 = 0.0;
    for (double v : w.phi_pp) pp2 += v * v;
    w.norm_pp_l2 = std::sqrt(pp2 * grid.dy());
    return w;
}

M1Series weighted_M1(const Trajectory& traj, const ModelParams& p, double x0,
                     const WeightSpec& w) {
    const auto& snaps = traj.snapshots();
    if (snaps.size() < 2) throw std::invalid_argument("weighted_M1: need at least two snapshots");
    const Grid& g = snaps.front().u.grid();
    const int ny = g.ny();
    const double dy = g.dy();

    // Per-snapshot row interpolants for u and u_x; one characteristic per row.
    std::vector<double> q(ny, wrap_period(x0, g.lx()));
    M1Series out;
    out.t.reserve(snaps.size());
    out.m1.reserve(snaps.size());

    std::vector<LineInterpolant> prev_u, prev_ux;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        SpectralField ux = ddx(snaps[i].u);
        std::vector<LineInterpolant> cur_u, cur_ux;
        cur_u.reserve(ny);
        cur_ux.reserve(ny);
        for (int j = 0; j < ny; ++j) {
            cur_u.emplace_back(snaps[i].u, j);
            cur_ux.emplace_back(ux, j);
        }
        if (i > 0) {
            const double ta = snaps[i - 1].t, tb = snaps[i].t, h = tb - ta;
            for (int j = 0; j < ny; ++j) {
                auto vel = [&](double tau, double x) {
                    double th = (tau - ta) / h;
                    return p.gamma * ((1.0 - th) * prev_u[j](x) + th * cur_u[j](x));
                };
                double k1 = vel(ta, q[j]);
                double k2 = vel(ta + 0.5 * h, q[j] + 0.5 * h * k1);
                double k3 = vel(ta + 0.5 * h, q[j] + 0.5 * h * k2);
                double k4 = vel(tb, q[j] + h * k3);
                q[j] = wrap_period(q[j] + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), g.lx());
            }
        }
        double m1 = 0.0;
        for (int j = 0; j < ny; ++j) m1 += cur_ux[j](q[j]) * w.phi[j];
        out.t.push_back(snaps[i].t);
        out.m1.push_back(m1 * dy);
        prev_u = std::move(cur_u);
        prev_ux = std::move(cur_ux);
    }
    return out;
}

C3Result c3_and_t0(const SpectralField& u0, const WeightSpec& w, double gamma,
                   double c_user, double xs_order, double x0) {
    if (c_user < 0.0) throw std::invalid_argument("c3_and_t0: c_user must be >= 0");
    const Grid& g = u0.grid();
    C3Result out;
    double l2 = norm_hs(u0, 0.0);
    double l2x = norm_hs(ddx(u0), 0.0);
    double energy = 0.5 * (l2 * l2 + l2x * l2x);
    double xs = (l2 == 0.0) ? 0.0 : norm_xs(u0, xs_order);
    double c3sq = c_user * xs + 1.5 * gamma * energy * w.norm_inf
                + std::sqrt(energy) * w.norm_pp_l2;
    out.c3 = std::sqrt(c3sq);

    SpectralField ux = ddx(u0);
    double m1 = 0.0;
    for (int j = 0; j < g.ny(); ++j) m1 += LineInterpolant(ux, j)(x0) * w.phi[j];
    out.m1_0 = m1 * g.dy();

    if (out.m1_0 < -std::sqrt(2.0 / gamma) * out.c3 && out.c3 > 0.0) {
        // Same Riccati closed form with gamma -> gamma/2 and K -> C3^2.
        out.t0 = t_star_bound(out.m1_0, c3sq, 0.5 * gamma).t_star;
    } else if (out.c3 == 0.0 && out.m1_0 < 0.0) {
        out.t0 = t_star_bound(out.m1_0, 0.0, 0.5 * gamma).t_star;
    }
    return out;
}

double empirical_D(const M1Series& series, double gamma) {
    return empirical_D(series, gamma, -std::numeric_limits<double>::infinity());
}

double empirical_D(const M1Series& series, double gamma, double m1_floor) {
    if (series.t.size() < 3) throw std::invalid_argument("empirical_D: need >= 3 samples");
    double d_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < series.t.size(); ++i) {
        if (series.m1[i + 1] < m1_floor) break;
        double dm = (series.m1[i + 1] - series.m1[i - 1]) / (series.t[i + 1] - series.t[i - 1]);
        d_max = std::max(d_max, dm + 0.5 * gamma * series.m1[i] * series.m1[i]);
    }
    return d_max;
}

} // namespace chkp
