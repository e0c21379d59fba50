#pragma once

#include <limits>
#include <vector>

#include "nsk/fft.hpp"
#include "nsk/filter_bank.hpp"

namespace nsk {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// L^p norm by uniform-grid quadrature of the physical samples, with the
/// unnormalized Lebesgue measure on [0,L)^d.  Vector fields use the
/// pointwise Euclidean magnitude.  p = inf is the grid max.
inline double lp_norm(const SpectralField& f, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    RealSamples s = to_physical(f);
    const std::size_t n = f.modes();
    auto mag = [&](std::size_t i) {
        if (f.components() == 1) return std::abs(s.at(0, i));
        double v = 0.0;
        for (int c = 0; c < f.components(); ++c) v += s.at(c, i) * s.at(c, i);
        return std::sqrt(v);
    };
    if (p == inf) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, mag(i));
        return m;
    }
    double cell = std::pow(f.grid().dx(), f.grid().dim());
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::pow(mag(i), p);
    return std::pow(cell * acc, 1.0 / p);
}

/// Homogeneous Besov indices (s, p, r).
struct NormSpec {
    double s = 0.0;
    double p = 2.0;
    double r = 2.0;

    NormSpec() = default;
    NormSpec(double s_, double p_, double r_) : s(s_), p(p_), r(r_) {
        if (p < 1.0 || r < 1.0) throw std::invalid_argument("NormSpec: p, r must be >= 1");
    }
};

/// Hybrid Besov indices: (s, p, r1) for blocks j >= j0, (t, q, r2) below.
struct HybridNormSpec {
    NormSpec high;
    NormSpec low;
    int j0 = 0;

    HybridNormSpec() = default;
    HybridNormSpec(NormSpec hi, NormSpec lo, int j0_) : high(hi), low(lo), j0(j0_) {}
    static HybridNormSpec plain(NormSpec spec, int j0 = 0) { return {spec, spec, j0}; }
};

namespace detail {

inline double lr_accumulate(const std::vector<double>& terms, double r) {
    if (r == inf) {
        double m = 0.0;
        for (double t : terms) m = std::max(m, t);
        return m;
    }
    double acc = 0.0;
    for (double t : terms) acc += std::pow(t, r);
    return std::pow(acc, 1.0 / r);
}

} // namespace detail

/// Homogeneous Besov norm: l^r over certified blocks of 2^{js} ||block_j f||_{L^p}.
inline double besov_norm(const SpectralField& f, const NormSpec& spec,
                         const DyadicFilterBank& bank) {
    bank.require_resolved(f);
    std::vector<double> terms;
    terms.reserve(bank.j_max() - bank.j_min() + 1);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j)
        terms.push_back(std::pow(2.0, spec.s * j) * lp_norm(bank.block(f, j), spec.p));
    return detail::lr_accumulate(terms, spec.r);
}

/// Hybrid Besov norm of Definition-style form: high-side l^{r1} over j >= j0
/// plus low-side l^{r2} over j < j0.
inline double hybrid_norm(const SpectralField& f, const HybridNormSpec& spec,
                          const DyadicFilterBank& bank) {
    bank.require_resolved(f);
    std::vector<double> hi, lo;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        if (j >= spec.j0)
            hi.push_back(std::pow(2.0, spec.high.s * j) * lp_norm(bank.block(f, j), spec.high.p));
        else
            lo.push_back(std::pow(2.0, spec.low.s * j) * lp_norm(bank.block(f, j), spec.low.p));
    }
    return detail::lr_accumulate(hi, spec.high.r) + detail::lr_accumulate(lo, spec.low.r);
}

/// Chemin-Lerner time structure: per-block L^theta norm in time first
/// (trapezoid quadrature on the snapshot grid; sup for theta = inf), then
/// the dyadic l^r sum.
struct CheminLernerSpec {
    HybridNormSpec space;
    double theta = inf;
    double horizon = 1.0;

    CheminLernerSpec(HybridNormSpec sp, double th, double T) : space(sp), theta(th), horizon(T) {
        if (theta < 1.0) throw std::invalid_argument("CheminLernerSpec: theta must be >= 1");
        if (!(horizon > 0.0)) throw std::invalid_argument("CheminLernerSpec: horizon must be > 0");
    }
    static CheminLernerSpec plain(NormSpec spec, double theta, double T, int j0 = 0) {
        return CheminLernerSpec(HybridNormSpec::plain(spec, j0), theta, T);
    }
};

namespace detail {

inline double time_norm(const std::vector<double>& times, const std::vector<double>& vals,
                        double theta, double T) {
    if (theta == inf) {
        double m = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i)
            if (times[i] <= T + 1e-12) m = std::max(m, vals[i]);
        return m;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        if (times[i] >= T) break;
        double t1 = times[i], t2 = std::min(times[i + 1], T);
        double v1 = std::pow(vals[i], theta), v2 = std::pow(vals[i + 1], theta);
        acc += 0.5 * (v1 + v2) * (t2 - t1);
    }
    return std::pow(acc, 1.0 / theta);
}

} // namespace detail

/// Chemin-Lerner norm of a snapshot sequence.
inline double chemin_lerner_norm(const std::vector<double>& times,
                                 const std::vector<SpectralField>& fields,
                                 const CheminLernerSpec& spec, const DyadicFilterBank& bank) {
    if (times.size() != fields.size())
        throw std::invalid_argument("chemin_lerner_norm: times/fields length mismatch");
    if (times.size() < 2) throw std::invalid_argument("chemin_lerner_norm: need >= 2 snapshots");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (!(times[i] < times[i + 1]))
            throw std::invalid_argument("chemin_lerner_norm: timestamps must be increasing");
    if (times.front() > 1e-12 || times.back() < spec.horizon - 1e-12)
        throw std::invalid_argument("chemin_lerner_norm: snapshots must cover [0, T]");
    for (const auto& f : fields) bank.require_resolved(f);

    std::vector<double> hi, lo;
    std::vector<double> vals(times.size());
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        bool high = j >= spec.space.j0;
        const NormSpec& side = high ? spec.space.high : spec.space.low;
        for (std::size_t i = 0; i < fields.size(); ++i)
            vals[i] = lp_norm(bank.block(fields[i], j), side.p);
        double tn = detail::time_norm(times, vals, spec.theta, spec.horizon);
        (high ? hi : lo).push_back(std::pow(2.0, side.s * j) * tn);
    }
    return detail::lr_accumulate(hi, spec.space.high.r) +
           detail::lr_accumulate(lo, spec.space.low.r);
}

} // namespace nsk
