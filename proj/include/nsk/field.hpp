#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

#include "nsk/grid.hpp"

namespace nsk {

using cplx = std::complex<double>;

/// Fourier coefficients of a real scalar or vector field on the torus.
/// Coefficients are amplitudes (forward transform carries 1/n^d), stored
/// per component in row-major FFT order.  Real fields are maintained
/// through Hermitian symmetry; Nyquist rows are kept identically zero so
/// every coefficient has an unambiguous conjugate partner.
class SpectralField {
public:
    SpectralField() : grid_(TorusGrid::make(1, 8, 2.0 * M_PI)), components_(0) {}

    SpectralField(const TorusGrid& grid, int components)
        : grid_(grid), components_(components),
          coeff_(static_cast<std::size_t>(components) * grid.size(), cplx(0.0, 0.0)) {
        if (components < 1 || components > 3)
            throw std::invalid_argument("SpectralField: component count must be in {1,2,3}");
    }

    static SpectralField scalar(const TorusGrid& grid) { return SpectralField(grid, 1); }
    static SpectralField vector(const TorusGrid& grid) { return SpectralField(grid, grid.dim()); }

    const TorusGrid& grid() const { return grid_; }
    int components() const { return components_; }
    std::size_t modes() const { return grid_.size(); }

    cplx& at(int comp, std::size_t flat) { return coeff_[offset(comp) + flat]; }
    const cplx& at(int comp, std::size_t flat) const { return coeff_[offset(comp) + flat]; }

    std::vector<cplx>& raw() { return coeff_; }
    const std::vector<cplx>& raw() const { return coeff_; }

    /// Zero out Nyquist rows (any axis index == n/2).
    void zero_nyquist() {
        for (int c = 0; c < components_; ++c)
            for (std::size_t i = 0; i < modes(); ++i)
                if (grid_.on_nyquist(i)) at(c, i) = 0.0;
    }

    /// Project onto the Hermitian-symmetric (real-field) subspace:
    /// c(-k) <- conj(c(k)) averaged pairwise.  Also zeroes Nyquist rows.
    void symmetrize() {
        zero_nyquist();
        for (int c = 0; c < components_; ++c) {
            for (std::size_t i = 0; i < modes(); ++i) {
                std::size_t j = grid_.conjugate_index(i);
                if (j < i) continue;
                cplx avg = 0.5 * (at(c, i) + std::conj(at(c, j)));
                at(c, i) = avg;
                at(c, j) = std::conj(avg);
            }
        }
    }

    /// Max relative Hermitian-symmetry defect (0 for exactly real fields).
    double hermitian_defect() const {
        double maxc = 1e-300, defect = 0.0;
        for (const auto& z : coeff_) maxc = std::max(maxc, std::abs(z));
        for (int c = 0; c < components_; ++c)
            for (std::size_t i = 0; i < modes(); ++i) {
                std::size_t j = grid_.conjugate_index(i);
                defect = std::max(defect, std::abs(at(c, i) - std::conj(at(c, j))));
            }
        return defect / maxc;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& z : coeff_) m = std::max(m, std::abs(z));
        return m;
    }

    /// Spectral l2 energy sum |c|^2 over all components and modes.
    double energy() const {
        double e = 0.0;
        for (const auto& z : coeff_) e += std::norm(z);
        return e;
    }

    SpectralField component(int c) const {
        require_component(c);
        SpectralField out(grid_, 1);
        std::copy_n(coeff_.begin() + static_cast<std::ptrdiff_t>(offset(c)), modes(), out.coeff_.begin());
        return out;
    }

    void set_component(int c, const SpectralField& src) {
        require_component(c);
        if (src.components_ != 1 || src.grid_ != grid_)
            throw std::invalid_argument("SpectralField::set_component: shape mismatch");
        std::copy_n(src.coeff_.begin(), modes(), coeff_.begin() + static_cast<std::ptrdiff_t>(offset(c)));
    }

    SpectralField& operator+=(const SpectralField& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += o.coeff_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= o.coeff_[i];
        return *this;
    }
    SpectralField& operator*=(double s) {
        for (auto& z : coeff_) z *= s;
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField f) { return f *= s; }

    void require_same_shape(const SpectralField& o) const {
        if (grid_ != o.grid_ || components_ != o.components_)
            throw std::invalid_argument("SpectralField: grid/component mismatch");
    }

private:
    std::size_t offset(int comp) const { return static_cast<std::size_t>(comp) * modes(); }
    void require_component(int c) const {
        if (c < 0 || c >= components_)
            throw std::out_of_range("SpectralField: component index out of range");
    }

    TorusGrid grid_;
    int components_;
    std::vector<cplx> coeff_;
};

} // namespace nsk
