#pragma once

#include <random>

#include "nsk/field.hpp"

namespace nsk {

/// Seeded random real fields used by probes and property tests.  All
/// generators walk the lattice in flat order, so output is deterministic
/// for a given (grid, seed).

/// Power-law spectrum: |c(xi)| = amp * (1+|k|)^(-decay), random phases only
/// (deterministic magnitudes keep max-statistics over samples tight).  Zero
/// mean, supported in the Euclidean ball |k| <= k_ball (default the
/// dealiasing radius n/3; the ball avoids the sparsely populated |k|_1
/// corners of the box cut), Hermitian-symmetrized.
inline SpectralField random_power_law(const TorusGrid& g, std::mt19937_64& rng, int components = 1,
                                      double decay = 2.0, double amp = 1.0, double k_ball = -1.0) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    if (k_ball <= 0.0) k_ball = g.n() / 3.0;
    SpectralField f(g, components);
    const int kcut = g.n() / 3;
    for (int c = 0; c < components; ++c)
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto k = g.wavenumbers(i);
            double kn = std::sqrt(double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2]);
            bool keep = kn > 0.0 && kn <= k_ball;
            for (int a = 0; a < g.dim(); ++a)
                if (std::abs(k[a]) > kcut) keep = false;
            // Always draw, so masking does not shift the stream layout.
            double ph = phase(rng);
            if (!keep) continue;
            double r = amp * std::pow(1.0 + kn, -decay);
            f.at(c, i) = r * cplx(std::cos(ph), std::sin(ph));
        }
    f.symmetrize();
    return f;
}

/// Flat ("white") spectrum up to the dealiasing cutoff; zero mean.
inline SpectralField random_white(const TorusGrid& g, std::mt19937_64& rng, int components = 1,
                                  double amp = 1.0) {
    return random_power_law(g, rng, components, 0.0, amp);
}

/// Random field supported on a band of wavenumber magnitudes [klo, khi].
inline SpectralField random_band(const TorusGrid& g, std::mt19937_64& rng, double klo, double khi,
                                 int components = 1, double amp = 1.0) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> mag(0.5, 1.0);
    SpectralField f(g, components);
    for (int c = 0; c < components; ++c)
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto k = g.wavenumbers(i);
            double kn = std::sqrt(double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2]);
            double ph = phase(rng), m = mag(rng);
            if (kn < klo || kn > khi) continue;
            f.at(c, i) = amp * m * cplx(std::cos(ph), std::sin(ph));
        }
    f.symmetrize();
    return f;
}

/// Gaussian-decaying spectrum |c| ~ amp * exp(-width * |k|^2): very smooth
/// analytic test fields.
inline SpectralField random_gaussian_spectrum(const TorusGrid& g, std::mt19937_64& rng,
                                              int components = 1, double width = 0.5,
                                              double amp = 1.0) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> mag(0.5, 1.0);
    SpectralField f(g, components);
    const int kcut = g.n() / 3;
    for (int c = 0; c < components; ++c)
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto k = g.wavenumbers(i);
            double k2 = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
            double ph = phase(rng), m = mag(rng);
            bool keep = k2 > 0.0;
            for (int a = 0; a < g.dim(); ++a)
                if (std::abs(k[a]) > kcut) keep = false;
            if (!keep) continue;
            f.at(c, i) = amp * m * std::exp(-width * k2) * cplx(std::cos(ph), std::sin(ph));
        }
    f.symmetrize();
    return f;
}

} // namespace nsk
