#include "chkp/field.hpp"

#include <cmath>
#include <stdexcept>

namespace chkp {

SpectralField::SpectralField(std::shared_ptr<const Grid> grid)
    : grid_(std::move(grid)), phys_(grid_->size(), 0.0) {}

SpectralField SpectralField::from_function(std::shared_ptr<const Grid> grid,
                                           const std::function<double(double, double)>& f) {
    SpectralField out(grid);
    const Grid& g = out.grid();
    auto& v = out.values_mut();
    for (int iy = 0; iy < g.ny(); ++iy)
        for (int ix = 0; ix < g.nx(); ++ix)
            v[static_cast<std::size_t>(iy) * g.nx() + ix] = f(g.x(ix), g.y(iy));
    return out;
}

SpectralField SpectralField::from_spectrum(std::shared_ptr<const Grid> grid,
                                           std::vector<std::complex<double>> spec) {
    if (spec.size() != grid->spec_size())
        throw std::invalid_argument("from_spectrum: size mismatch");
    SpectralField out(std::move(grid));
    out.spec_ = std::move(spec);
    out.grid_->inverse(out.spec_.data(), out.phys_.data());
    out.spec_valid_ = true;
    return out;
}

const std::vector<std::complex<double>>& SpectralField::spectrum() const {
    if (!spec_valid_) {
        spec_.resize(grid_->spec_size());
        grid_->forward(phys_.data(), spec_.data());
        spec_valid_ = true;
    }
    return spec_;
}

bool SpectralField::x_mean_free(double rel_tol) const {
    const auto& c = spectrum();
    const Grid& g = *grid_;
    double max_all = 0.0, max_zero = 0.0;
    for (int ky = 0; ky < g.ny(); ++ky) {
        for (int kx = 0; kx < g.nxh(); ++kx) {
            double a = std::abs(c[static_cast<std::size_t>(ky) * g.nxh() + kx]);
            if (a > max_all) max_all = a;
            if (kx == 0 && a > max_zero) max_zero = a;
        }
    }
    if (max_all == 0.0) return true;
    return max_zero <= rel_tol * max_all;
}

bool SpectralField::finite() const {
    for (double v : phys_)
        if (!std::isfinite(v)) return false;
    return true;
}

} // namespace chkp
