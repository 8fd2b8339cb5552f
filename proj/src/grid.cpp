#include "chkp/grid.hpp"

#include <fftw3.h>

#include <cassert>
#include <mutex>
#include <stdexcept>

namespace chkp {

namespace {
// FFTW planning is not thread safe; execution via the new-array interface is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Grid::Grid(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
    if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0)
        throw std::invalid_argument("Grid: nx, ny must be even and >= 8");
    if (lx <= 0 || ly <= 0) throw std::invalid_argument("Grid: periods must be positive");

    std::lock_guard<std::mutex> lock(planner_mutex());
    std::vector<double> phys(size());
    std::vector<fftw_complex> spec(spec_size());
    // Row-major y-outer storage means FFTW dims are (ny, nx).
    plan_fwd_ = fftw_plan_dft_r2c_2d(ny_, nx_, phys.data(), spec.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_bwd_ = fftw_plan_dft_c2r_2d(ny_, nx_, spec.data(), phys.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    std::vector<double> row(nx_);
    std::vector<fftw_complex> rowspec(nx_ / 2 + 1);
    plan_row_ = fftw_plan_dft_r2c_1d(nx_, row.data(), rowspec.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_fwd_ || !plan_bwd_ || !plan_row_) throw std::runtime_error("Grid: FFTW planning failed");
}

Grid::~Grid() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_row_));
}

void Grid::forward(const double* phys, std::complex<double>* spec) const {
    // r2c does not modify its input for out-of-place transforms.
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), const_cast<double*>(phys),
                         reinterpret_cast<fftw_complex*>(spec));
    const double scale = 1.0 / (static_cast<double>(nx_) * ny_);
    for (std::size_t i = 0; i < spec_size(); ++i) spec[i] *= scale;
}

void Grid::inverse(const std::complex<double>* spec, double* phys) const {
    // c2r destroys its input; work on a copy.
    std::vector<std::complex<double>> tmp(spec, spec + spec_size());
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                         reinterpret_cast<fftw_complex*>(tmp.data()), phys);
}

void Grid::forward_row(const double* row, std::complex<double>* spec) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_row_), const_cast<double*>(row),
                         reinterpret_cast<fftw_complex*>(spec));
    const double scale = 1.0 / nx_;
    for (int i = 0; i < nxh(); ++i) spec[i] *= scale;
}

} // namespace chkp
