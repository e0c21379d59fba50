#pragma once

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "nsk/field.hpp"

namespace nsk {

/// Real samples of a field on the physical grid, row-major, one block per
/// component.
struct RealSamples {
    TorusGrid grid;
    int components = 1;
    std::vector<double> data;

    RealSamples(const TorusGrid& g, int comps)
        : grid(g), components(comps), data(static_cast<std::size_t>(comps) * g.size(), 0.0) {}

    double& at(int c, std::size_t i) { return data[static_cast<std::size_t>(c) * grid.size() + i]; }
    const double& at(int c, std::size_t i) const {
        return data[static_cast<std::size_t>(c) * grid.size() + i];
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data) m = std::max(m, std::abs(v));
        return m;
    }
    double min_component(int c) const {
        double m = at(c, 0);
        for (std::size_t i = 1; i < grid.size(); ++i) m = std::min(m, at(c, i));
        return m;
    }
};

namespace detail {

/// FFTW planner calls are not thread-safe; executions on distinct plans are.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct CachedPlan {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    fftw_complex* buf = nullptr;
    std::size_t size = 0;

    ~CachedPlan() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
        if (buf) fftw_free(buf);
    }
};

/// One in-place c2c plan pair per (dim, n), cached per thread so executions
/// never contend.
inline CachedPlan& plan_for(const TorusGrid& g) {
    thread_local std::map<std::pair<int, int>, CachedPlan> cache;
    auto key = std::make_pair(g.dim(), g.n());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    CachedPlan& p = cache[key];
    p.size = g.size();
    p.buf = fftw_alloc_complex(p.size);
    int dims[3] = {g.n(), g.n(), g.n()};
    std::lock_guard<std::mutex> lock(planner_mutex());
    p.forward = fftw_plan_dft(g.dim(), dims, p.buf, p.buf, FFTW_FORWARD, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft(g.dim(), dims, p.buf, p.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!p.forward || !p.backward) throw std::runtime_error("fft: FFTW plan creation failed");
    return p;
}

} // namespace detail

/// Inverse transform: amplitudes -> physical samples, f(x_j) = sum_k c_k e^{i xi_k x_j}.
inline RealSamples to_physical(const SpectralField& f) {
    auto& plan = detail::plan_for(f.grid());
    RealSamples out(f.grid(), f.components());
    const std::size_t n = f.modes();
    for (int c = 0; c < f.components(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            plan.buf[i][0] = f.at(c, i).real();
            plan.buf[i][1] = f.at(c, i).imag();
        }
        fftw_execute(plan.backward);
        for (std::size_t i = 0; i < n; ++i) out.at(c, i) = plan.buf[i][0];
    }
    return out;
}

/// Forward transform: physical samples -> amplitudes (1/n^d normalization).
/// Nyquist rows are zeroed; the caller gets a Hermitian-clean field.
inline SpectralField to_spectral(const RealSamples& s) {
    auto& plan = detail::plan_for(s.grid);
    SpectralField out(s.grid, s.components);
    const std::size_t n = s.grid.size();
    const double scale = 1.0 / static_cast<double>(n);
    for (int c = 0; c < s.components; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            plan.buf[i][0] = s.at(c, i);
            plan.buf[i][1] = 0.0;
        }
        fftw_execute(plan.forward);
        for (std::size_t i = 0; i < n; ++i)
            out.at(c, i) = scale * cplx(plan.buf[i][0], plan.buf[i][1]);
    }
    out.zero_nyquist();
    return out;
}

/// Embed coefficients into a finer grid with the same period (spectral
/// padding; new high modes are zero).
inline SpectralField embed(const SpectralField& f, const TorusGrid& fine) {
    if (fine.dim() != f.grid().dim() || fine.n() < f.grid().n() || fine.period() != f.grid().period())
        throw std::invalid_argument("embed: target grid must refine the source grid");
    SpectralField out(fine, f.components());
    const TorusGrid& g = f.grid();
    for (int c = 0; c < f.components(); ++c)
        for (std::size_t i = 0; i < f.modes(); ++i) {
            if (g.on_nyquist(i)) continue;
            auto k = g.wavenumbers(i);
            std::size_t j = 0;
            for (int a = 0; a < fine.dim(); ++a) {
                int idx = k[a] >= 0 ? k[a] : k[a] + fine.n();
                j = j * fine.n() + static_cast<std::size_t>(idx);
            }
            out.at(c, j) = f.at(c, i);
        }
    return out;
}

/// Truncate coefficients back onto a coarser grid with the same period.
inline SpectralField restrict_to(const SpectralField& f, const TorusGrid& coarse) {
    if (coarse.dim() != f.grid().dim() || coarse.n() > f.grid().n() ||
        coarse.period() != f.grid().period())
        throw std::invalid_argument("restrict_to: target grid must coarsen the source grid");
    SpectralField out(coarse, f.components());
    const TorusGrid& g = f.grid();
    for (int c = 0; c < f.components(); ++c)
        for (std::size_t i = 0; i < coarse.size(); ++i) {
            if (coarse.on_nyquist(i)) continue;
            auto k = coarse.wavenumbers(i);
            std::size_t j = 0;
            for (int a = 0; a < g.dim(); ++a) {
                int idx = k[a] >= 0 ? k[a] : k[a] + g.n();
                j = j * g.n() + static_cast<std::size_t>(idx);
            }
            out.at(c, i) = f.at(c, j);
        }
    return out;
}

} // namespace nsk
