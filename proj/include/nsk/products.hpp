#pragma once

#include "nsk/fft.hpp"

namespace nsk {

/// 2/3-rule wavenumber cutoff: modes with any |k_i| > n/3 are dropped.
inline int dealias_cutoff(const TorusGrid& g) { return g.n() / 3; }

/// Zero all modes outside the 2/3 cutoff (in place).
inline void dealias(SpectralField& f) {
    const TorusGrid& g = f.grid();
    const int kcut = dealias_cutoff(g);
    for (std::size_t i = 0; i < f.modes(); ++i) {
        auto k = g.wavenumbers(i);
        for (int a = 0; a < g.dim(); ++a)
            if (std::abs(k[a]) > kcut) {
                for (int c = 0; c < f.components(); ++c) f.at(c, i) = 0.0;
                break;
            }
    }
}

inline SpectralField dealiased(SpectralField f) {
    dealias(f);
    return f;
}

/// Spectral energy fraction sitting outside the 2/3 cutoff; the aliasing
/// diagnostic recorded by the integrator.
inline double aliased_energy_fraction(const SpectralField& f) {
    const TorusGrid& g = f.grid();
    const int kcut = dealias_cutoff(g);
    double out = 0.0, tot = 0.0;
    for (std::size_t i = 0; i < f.modes(); ++i) {
        auto k = g.wavenumbers(i);
        bool outside = false;
        for (int a = 0; a < g.dim(); ++a)
            if (std::abs(k[a]) > kcut) outside = true;
        for (int c = 0; c < f.components(); ++c) {
            double e = std::norm(f.at(c, i));
            tot += e;
            if (outside) out += e;
        }
    }
    return tot > 0.0 ? out / tot : 0.0;
}

/// Pointwise product of two scalar fields with 2/3-rule dealiasing.
/// Exact (alias-free) when both inputs are supported inside the cutoff.
inline SpectralField multiply(const SpectralField& f, const SpectralField& h) {
    f.require_same_shape(h);
    if (f.components() != 1) throw std::invalid_argument("multiply: scalar fields expected");
    RealSamples a = to_physical(f), b = to_physical(h);
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] *= b.data[i];
    SpectralField out = to_spectral(a);
    dealias(out);
    return out;
}

/// Workspace for evaluating nonlinear pointwise algebra on a 2x-padded grid
/// (alias-free for products of up to three masked factors; compositions are
/// evaluated on the padded grid as well, which keeps their low-order
/// aliasing below the truncation tail of analytic closures).
class PaddedWorkspace {
public:
    explicit PaddedWorkspace(const TorusGrid& base)
        : base_(base), fine_(TorusGrid::make_any_even(base.dim(), 2 * base.n(), base.period())) {}

    const TorusGrid& base() const { return base_; }
    const TorusGrid& fine() const { return fine_; }

    /// Physical samples of a (base-grid) field on the padded grid.
    RealSamples lift(const SpectralField& f) const { return to_physical(embed(f, fine_)); }

    /// Back to the base grid with the 2/3 mask applied.
    SpectralField lower(const RealSamples& s) const {
        SpectralField out = restrict_to(to_spectral(s), base_);
        dealias(out);
        return out;
    }

private:
    TorusGrid base_;
    TorusGrid fine_;
};

} // namespace nsk
