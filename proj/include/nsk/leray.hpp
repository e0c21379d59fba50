#pragma once

#include "nsk/field.hpp"

namespace nsk {

/// Result of the Leray split m = Pm + Qm.
struct LeraySplit {
    SpectralField solenoidal;   // Pm, divergence-free part
    SpectralField compressible; // Qm = (xi xi^T / |xi|^2) m_hat
};

/// Leray projection, computed mode-wise.  Convention at xi = 0: the zero
/// mode belongs to P (Q drops it), matching the propagator convention.
inline LeraySplit leray_split(const SpectralField& m) {
    const TorusGrid& g = m.grid();
    if (m.components() != g.dim())
        throw std::invalid_argument("leray_split: expects a d-component vector field");
    LeraySplit out{m, SpectralField::vector(g)};
    for (std::size_t i = 0; i < m.modes(); ++i) {
        double xi2 = g.xi_norm2(i);
        if (xi2 == 0.0) continue;
        auto xi = g.xi(i);
        cplx dot = 0.0;
        for (int a = 0; a < g.dim(); ++a) dot += xi[a] * m.at(a, i);
        for (int a = 0; a < g.dim(); ++a) {
            cplx q = (xi[a] / xi2) * dot;
            out.compressible.at(a, i) = q;
            out.solenoidal.at(a, i) = m.at(a, i) - q;
        }
    }
    return out;
}

inline SpectralField leray_p(const SpectralField& m) { return leray_split(m).solenoidal; }
inline SpectralField leray_q(const SpectralField& m) { return leray_split(m).compressible; }

} // namespace nsk
