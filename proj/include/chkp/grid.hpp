#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace chkp {

// Periodic 2D grid: nx x ny nodes on [0,lx) x [0,ly), row-major with y as
// the outer index (index = iy*nx + ix). Owns the FFT plans for the
// real-to-complex transform pair and the per-row 1D transform used by the
// line interpolants. Transforms are unnormalized internally; the public
// forward() returns coefficients c_k such that u = sum c_k exp(i(xi x + eta y)).
class Grid {
public:
    Grid(int nx, int ny, double lx, double ly);
    ~Grid();
    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double lx() const { return lx_; }
    double ly() const { return ly_; }
    int nxh() const { return nx_ / 2 + 1; }   // reduced x-extent of the r2c spectrum
    std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
    std::size_t spec_size() const { return static_cast<std::size_t>(nxh()) * ny_; }

    double dx() const { return lx_ / nx_; }
    double dy() const { return ly_ / ny_; }
    double x(int ix) const { return ix * dx(); }
    double y(int iy) const { return iy * dy(); }

    // Wavenumbers. kx in [0, nx/2]; ky in [0, ny-1] with the usual signed mapping.
    double xi(int kx) const { return two_pi_ * kx / lx_; }
    double eta(int ky) const {
        int j = ky <= ny_ / 2 ? ky : ky - ny_;
        return two_pi_ * j / ly_;
    }
    int signed_ky(int ky) const { return ky <= ny_ / 2 ? ky : ky - ny_; }

    // Two-thirds rule: keep |jx| <= nx/3 and |jy| <= ny/3.
    bool dealias_keep(int kx, int ky) const {
        int jy = signed_ky(ky);
        return 3 * kx <= nx_ && 3 * (jy < 0 ? -jy : jy) <= ny_;
    }

    // phys (nx*ny reals) -> spec (nxh*ny complex), normalized by 1/(nx*ny).
    void forward(const double* phys, std::complex<double>* spec) const;
    // spec -> phys; input is not modified.
    void inverse(const std::complex<double>* spec, double* phys) const;

    // 1D transform of a single x-row (nx reals -> nx/2+1 complex), normalized.
    void forward_row(const double* row, std::complex<double>* spec) const;

private:
    int nx_, ny_;
    double lx_, ly_;
    static constexpr double two_pi_ = 6.283185307179586476925286766559;
    void* plan_fwd_;      // fftw_plan
    void* plan_bwd_;
    void* plan_row_;
};

} // namespace chkp
