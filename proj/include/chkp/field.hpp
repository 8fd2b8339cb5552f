#pragma once

#include "chkp/grid.hpp"

#include <functional>
#include <memory>

namespace chkp {

// Real scalar field on a periodic grid with a lazily computed spectral
// representation. Mutating the physical values through values_mut()
// invalidates the cached spectrum; fields built from a spectrum keep both
// representations in sync.
class SpectralField {
public:
    explicit SpectralField(std::shared_ptr<const Grid> grid);
    static SpectralField from_function(std::shared_ptr<const Grid> grid,
                                       const std::function<double(double, double)>& f);
    static SpectralField from_spectrum(std::shared_ptr<const Grid> grid,
                                       std::vector<std::complex<double>> spec);

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }

    const std::vector<double>& values() const { return phys_; }
    std::vector<double>& values_mut() {
        spec_valid_ = false;
        return phys_;
    }
    double at(int ix, int iy) const { return phys_[static_cast<std::size_t>(iy) * grid_->nx() + ix]; }

    const std::vector<std::complex<double>>& spectrum() const;

    // ξ=0 column empty to round-off (checked against the largest coefficient).
    bool x_mean_free(double rel_tol = 1e-12) const;

    bool finite() const;

private:
    std::shared_ptr<const Grid> grid_;
    std::vector<double> phys_;
    mutable std::vector<std::complex<double>> spec_;
    mutable bool spec_valid_ = false;
};

} // namespace chkp
