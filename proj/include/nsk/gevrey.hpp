#pragma once

#include <map>

#include "nsk/params.hpp"
#include "nsk/state.hpp"

namespace nsk {

struct gevrey_overflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rate constant for the analyticity multiplier e^{sqrt(c0 t) Lambda1}.
/// Default rule: 0.9 x 2 min(mu_bar, alpha, nu_bar - alpha), keeping a
/// strict safety margin under the admissible ceiling.
struct GevreySpec {
    double c0 = 0.0;

    static GevreySpec with_default(const FluidParams& p) { return {default_gevrey_c0(p)}; }
    static GevreySpec with_c0(double c0) {
        if (!(c0 >= 0.0)) throw std::invalid_argument("GevreySpec: c0 must be >= 0");
        return {c0};
    }
};

/// Multiply coefficients by e^{r |xi|_1}.  The |xi|_1 symbol is even, so
/// realness is preserved.  Amplification beyond double range is an error
/// naming the offending shell.
inline SpectralField apply_multiplier(const SpectralField& f, double r) {
    if (r < 0.0) throw std::invalid_argument("apply_multiplier: r must be >= 0");
    const TorusGrid& g = f.grid();
    SpectralField out = f;
    for (std::size_t i = 0; i < f.modes(); ++i) {
        double l1 = g.xi_norm1(i);
        double w = std::exp(r * l1);
        for (int c = 0; c < f.components(); ++c) {
            cplx v = w * f.at(c, i);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw gevrey_overflow_error(
                    "apply_multiplier: amplified coefficient overflows at |xi|_1 = " +
                    std::to_string(l1));
            out.at(c, i) = v;
        }
    }
    return out;
}

inline FluidState apply_multiplier(const FluidState& s, double r) {
    return {apply_multiplier(s.a, r), apply_multiplier(s.m, r)};
}

/// Largest mode-wise exponent sqrt(c0 t)|xi|_1 - t |xi|^2 over the lattice;
/// the per-coordinate maximum of sqrt(c0 t) x - t x^2 is c0/4, so this never
/// exceeds d c0 / 4.
inline double heat_composition_max_exponent(const TorusGrid& g, double c0, double t) {
    double m = -1e300;
    for (std::size_t i = 0; i < g.size(); ++i)
        m = std::max(m, std::sqrt(c0 * t) * g.xi_norm1(i) - t * g.xi_norm2(i));
    return m;
}

/// Trajectory norm of the Gevrey-multiplied solution: the standard
/// trajectory norm applied to e^{sqrt(c0 t_i) Lambda1}(a, m) snapshots.
inline double gevrey_trajectory_norm(const std::vector<double>& times,
                                     const std::vector<FluidState>& states, const GevreySpec& spec,
                                     double p, double q, int j0, double T,
                                     const DyadicFilterBank& bank) {
    std::vector<FluidState> amplified;
    amplified.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        amplified.push_back(apply_multiplier(states[i], std::sqrt(spec.c0 * times[i])));
    return epq_norm(times, amplified, p, q, j0, T, bank);
}

/// Analyticity-radius estimate from Fourier decay: bin coefficients by
/// |xi|_1, take the log of the shell-max modulus, and fit the slope by
/// least squares over the band of shells with max in [1e-12, 1e-2] x field
/// max.  The radius is minus the slope.
struct RadiusEstimate {
    double radius = 0.0;
    double band_lo = 0.0;   // |xi|_1 at the lower band edge
    double band_hi = 0.0;   // |xi|_1 at the upper band edge
    double residual = 0.0;  // rms residual of the log-linear fit
    int shells = 0;
};

inline RadiusEstimate estimate_radius(const SpectralField& f) {
    const TorusGrid& g = f.grid();
    // Shell key: integer sum |k_1|+...+|k_d|; physical |xi|_1 = key * dxi.
    std::map<int, double> shell_max;
    double global_max = 0.0;
    for (std::size_t i = 0; i < f.modes(); ++i) {
        auto k = g.wavenumbers(i);
        int key = std::abs(k[0]) + std::abs(k[1]) + std::abs(k[2]);
        if (key == 0) continue;
        double v = 0.0;
        for (int c = 0; c < f.components(); ++c) v = std::max(v, std::abs(f.at(c, i)));
        auto it = shell_max.find(key);
        if (it == shell_max.end())
            shell_max[key] = v;
        else
            it->second = std::max(it->second, v);
        global_max = std::max(global_max, v);
    }
    const double noise_floor = 1e-13;
    if (global_max < noise_floor)
        throw std::runtime_error("estimate_radius: field is below the noise floor");

    // Preferred band: the decayed tail, shell max in [1e-12, 1e-2] x max.
    // Spectra with no decay have no such tail; fall back to every shell
    // above the noise floor so flat spectra report radius ~ 0.
    std::vector<std::pair<double, double>> pts; // (|xi|_1, log max)
    for (auto& [key, v] : shell_max) {
        double rel = v / global_max;
        if (rel < 1e-12 || rel > 1e-2) continue;
        pts.emplace_back(key * g.dxi(), std::log(v));
    }
    if (pts.size() < 3) {
        pts.clear();
        for (auto& [key, v] : shell_max) {
            if (v / global_max < noise_floor) continue;
            pts.emplace_back(key * g.dxi(), std::log(v));
        }
    }
    if (pts.size() < 3)
        throw std::runtime_error("estimate_radius: fewer than 3 shells above the noise floor");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icept = (sy - slope * sx) / n;
    double rss = 0.0;
    for (auto& [x, y] : pts) {
        double e = y - (icept + slope * x);
        rss += e * e;
    }
    RadiusEstimate out;
    out.radius = std::max(0.0, -slope);
    out.band_lo = pts.front().first;
    out.band_hi = pts.back().first;
    out.residual = std::sqrt(rss / n);
    out.shells = static_cast<int>(pts.size());
    return out;
}

struct RadiusSeries {
    std::vector<double> times;
    std::vector<RadiusEstimate> estimates;
};

struct PowerLawFit {
    double prefactor = 0.0;
    double exponent = 0.0;
    double residual = 0.0; // rms residual in log-log coordinates
    int points = 0;
};

/// Per-snapshot radius of the a component, plus a power-law fit
/// r(t) = c t^beta over the window [fit_lo, fit_hi].
inline std::pair<RadiusSeries, PowerLawFit> track_radius(const std::vector<double>& times,
                                                         const std::vector<FluidState>& states,
                                                         double fit_lo, double fit_hi) {
    RadiusSeries series;
    for (std::size_t i = 0; i < states.size(); ++i) {
        series.times.push_back(times[i]);
        series.estimates.push_back(estimate_radius(states[i].a));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        double t = series.times[i], r = series.estimates[i].radius;
        if (t < fit_lo || t > fit_hi || r <= 0.0) continue;
        double x = std::log(t), y = std::log(r);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 3) throw std::runtime_error("track_radius: fewer than 3 usable points in fit window");
    PowerLawFit fit;
    fit.points = n;
    fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icept = (sy - fit.exponent * sx) / n;
    fit.prefactor = std::exp(icept);
    double rss = 0.0;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        double t = series.times[i], r = series.estimates[i].radius;
        if (t < fit_lo || t > fit_hi || r <= 0.0) continue;
        double e = std::log(r) - (icept + fit.exponent * std::log(t));
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / n);
    return {series, fit};
}

} // namespace nsk
