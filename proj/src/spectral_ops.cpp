#include "chkp/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace chkp {

namespace {

int worker_count() {
    static const int n = [] {
        const char* env = std::getenv("CHKP_THREADS");
        if (!env) return 1;
        int v = std::atoi(env);
        return std::clamp(v, 1, 64);
    }();
    return n;
}

// Deterministic block partition; workers write disjoint index ranges only,
// so the result is identical for any worker count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const int nw = worker_count();
    if (nw <= 1 || n < 4096) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> threads;
    const std::size_t chunk = (n + nw - 1) / nw;
    for (int w = 0; w < nw; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& t : threads) t.join();
}

} // namespace

SpectralField apply_multiplier(const SpectralField& f,
                               const std::function<std::complex<double>(double, double)>& m) {
    const Grid& g = f.grid();
    const auto& in = f.spectrum();
    std::vector<std::complex<double>> out(g.spec_size());
    parallel_for(static_cast<std::size_t>(g.ny()), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t ky = lo; ky < hi; ++ky) {
            const double eta = g.eta(static_cast<int>(ky));
            for (int kx = 0; kx < g.nxh(); ++kx) {
                std::size_t i = ky * g.nxh() + kx;
                out[i] = m(g.xi(kx), eta) * in[i];
            }
        }
    });
    return SpectralField::from_spectrum(f.grid_ptr(), std::move(out));
}

SpectralField ddx(const SpectralField& f) {
    const Grid& g = f.grid();
    const int nyq = g.nx() / 2;
    return apply_multiplier(f, [&g, nyq](double xi, double) -> std::complex<double> {
        // The Nyquist mode has no well-defined odd derivative; drop it.
        if (xi >= g.xi(nyq)) return {0.0, 0.0};
        return {0.0, xi};
    });
}

SpectralField ddy(const SpectralField& f) {
    const Grid& g = f.grid();
    const double eta_nyq = 2.0 * M_PI * (g.ny() / 2) / g.ly();
    return apply_multiplier(f, [eta_nyq](double, double eta) -> std::complex<double> {
        if (std::abs(std::abs(eta) - eta_nyq) < 1e-14 * eta_nyq) return {0.0, 0.0};
        return {0.0, eta};
    });
}

SpectralField inv_ddx(const SpectralField& f) {
    return apply_multiplier(f, [](double xi, double) -> std::complex<double> {
        if (xi == 0.0) return {0.0, 0.0};
        return {0.0, -1.0 / xi};
    });
}

SpectralField green(const SpectralField& f) {
    return apply_multiplier(f, [](double xi, double) -> std::complex<double> {
        return {1.0 / (1.0 + xi * xi), 0.0};
    });
}

SpectralField green_dx(const SpectralField& f) {
    const Grid& g = f.grid();
    const double xi_nyq = g.xi(g.nx() / 2);
    return apply_multiplier(f, [xi_nyq](double xi, double) -> std::complex<double> {
        if (xi >= xi_nyq) return {0.0, 0.0};
        return {0.0, xi / (1.0 + xi * xi)};
    });
}

SpectralField kp_nonlocal(const SpectralField& f) {
    return apply_multiplier(f, [](double xi, double eta) -> std::complex<double> {
        if (xi == 0.0) return {0.0, 0.0};
        return {0.0, eta * eta / (xi * (1.0 + xi * xi))};
    });
}

SpectralField project_xmean(const SpectralField& f) {
    return apply_multiplier(f, [](double xi, double) -> std::complex<double> {
        return {xi == 0.0 ? 0.0 : 1.0, 0.0};
    });
}

SpectralField dealias(const SpectralField& f) {
    const Grid& g = f.grid();
    const auto& in = f.spectrum();
    std::vector<std::complex<double>> out(g.spec_size());
    for (int ky = 0; ky < g.ny(); ++ky)
        for (int kx = 0; kx < g.nxh(); ++kx) {
            std::size_t i = static_cast<std::size_t>(ky) * g.nxh() + kx;
            out[i] = g.dealias_keep(kx, ky) ? in[i] : std::complex<double>{0.0, 0.0};
        }
    return SpectralField::from_spectrum(f.grid_ptr(), std::move(out));
}

namespace {

// Hermitian weight of a reduced-spectrum column: modes 0 < kx < nx/2 stand
// for a conjugate pair.
double hermitian_weight(const Grid& g, int kx) {
    return (kx == 0 || kx == g.nx() / 2) ? 1.0 : 2.0;
}

double weighted_spectral_sum(const SpectralField& f, double s) {
    const Grid& g = f.grid();
    const auto& c = f.spectrum();
    // Fixed-order summation: ky outer, kx inner.
    double sum = 0.0;
    for (int ky = 0; ky < g.ny(); ++ky) {
        const double eta = g.eta(ky);
        for (int kx = 0; kx < g.nxh(); ++kx) {
            const double xi = g.xi(kx);
            const std::complex<double>& a = c[static_cast<std::size_t>(ky) * g.nxh() + kx];
            double mag2 = a.real() * a.real() + a.imag() * a.imag();
            double w = s == 0.0 ? 1.0 : std::pow(1.0 + xi * xi + eta * eta, s);
            sum += hermitian_weight(g, kx) * w * mag2;
        }
    }
    return sum * g.lx() * g.ly();
}

} // namespace

double norm_hs(const SpectralField& f, double s) {
    if (s < 0.0) throw std::invalid_argument("norm_hs: s must be >= 0");
    return std::sqrt(weighted_spectral_sum(f, s));
}

double norm_xs(const SpectralField& f, double s) {
    if (s < 0.0) throw std::invalid_argument("norm_xs: s must be >= 0");
    if (!f.x_mean_free(1e-10))
        throw std::invalid_argument("norm_xs: input is not x-mean-free (inv_ddx undefined)");
    double a = weighted_spectral_sum(f, s);
    double b = weighted_spectral_sum(inv_ddx(f), s);
    double c = weighted_spectral_sum(ddx(f), s);
    return std::sqrt(a + b + c);
}

double inner_l2(const SpectralField& a, const SpectralField& b) {
    const Grid& g = a.grid();
    if (&g != &b.grid()) throw std::invalid_argument("inner_l2: grid mismatch");
    const auto& ca = a.spectrum();
    const auto& cb = b.spectrum();
    double sum = 0.0;
    for (int ky = 0; ky < g.ny(); ++ky)
        for (int kx = 0; kx < g.nxh(); ++kx) {
            std::size_t i = static_cast<std::size_t>(ky) * g.nxh() + kx;
            sum += hermitian_weight(g, kx) * (ca[i] * std::conj(cb[i])).real();
        }
    return sum * g.lx() * g.ly();
}

double eval_at(const SpectralField& f, double x, double y) {
    const Grid& g = f.grid();
    const auto& c = f.spectrum();
    double sum = 0.0;
    for (int ky = 0; ky < g.ny(); ++ky) {
        const double eta = g.eta(ky);
        for (int kx = 0; kx < g.nxh(); ++kx) {
            const std::complex<double>& a = c[static_cast<std::size_t>(ky) * g.nxh() + kx];
            double phase = g.xi(kx) * x + eta * y;
            sum += hermitian_weight(g, kx) *
                   (a.real() * std::cos(phase) - a.imag() * std::sin(phase));
        }
    }
    return sum;
}

double max_abs(const SpectralField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double min_value(const SpectralField& f) {
    double m = f.values().empty() ? 0.0 : f.values()[0];
    for (double v : f.values()) m = std::min(m, v);
    return m;
}

double max_value(const SpectralField& f) {
    double m = f.values().empty() ? 0.0 : f.values()[0];
    for (double v : f.values()) m = std::max(m, v);
    return m;
}

double grad_inf(const SpectralField& u) {
    SpectralField ux = ddx(u);
    SpectralField uy = ddy(u);
    const auto& a = ux.values();
    const auto& b = uy.values();
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, a[i] * a[i] + b[i] * b[i]);
    return std::sqrt(m);
}

LineInterpolant::LineInterpolant(const SpectralField& f, int iy)
    : lx_(f.grid().lx()), nx_(f.grid().nx()) {
    const Grid& g = f.grid();
    if (iy < 0 || iy >= g.ny()) throw std::invalid_argument("LineInterpolant: bad row");
    c_.resize(g.nxh());
    g.forward_row(f.values().data() + static_cast<std::size_t>(iy) * g.nx(), c_.data());
}

double LineInterpolant::operator()(double x) const {
    const double k0 = 2.0 * M_PI / lx_;
    double sum = c_[0].real();
    for (int k = 1; k < nx_ / 2; ++k) {
        double phase = k0 * k * x;
        sum += 2.0 * (c_[k].real() * std::cos(phase) - c_[k].imag() * std::sin(phase));
    }
    // Nyquist term, cosine only.
    sum += c_[nx_ / 2].real() * std::cos(k0 * (nx_ / 2) * x);
    return sum;
}

} // namespace chkp
