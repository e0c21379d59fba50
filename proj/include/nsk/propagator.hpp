#pragma once

#include <Eigen/Core>
#include <unsupported/Eigen/MatrixFunctions>

#include <map>

#include "nsk/params.hpp"
#include "nsk/state.hpp"

namespace nsk {

/// Per-mode semigroup factors: transverse scalar e^{-mu_bar |xi|^2 t} and the
/// longitudinal 2x2 complex block acting on (a_hat, m_parallel) where
/// m_parallel = (xi/|xi|) . m_hat.
struct PropagatorMatrix {
    double transverse = 1.0;
    cplx l11{1.0, 0.0}, l12{0.0, 0.0}, l21{0.0, 0.0}, l22{1.0, 0.0};

    void apply(cplx& a_hat, cplx& m_par) const {
        cplx a2 = l11 * a_hat + l12 * m_par;
        cplx m2 = l21 * a_hat + l22 * m_par;
        a_hat = a2;
        m_par = m2;
    }

    PropagatorMatrix compose(const PropagatorMatrix& o) const {
        PropagatorMatrix out;
        out.transverse = transverse * o.transverse;
        out.l11 = l11 * o.l11 + l12 * o.l21;
        out.l12 = l11 * o.l12 + l12 * o.l22;
        out.l21 = l21 * o.l11 + l22 * o.l21;
        out.l22 = l21 * o.l12 + l22 * o.l22;
        return out;
    }

    double max_abs() const {
        return std::max({std::abs(transverse), std::abs(l11), std::abs(l12), std::abs(l21),
                         std::abs(l22)});
    }
};

/// Longitudinal symbol matrix A(xi) in the (a_hat, V_hat) variables,
/// V = Lambda^{-1} div m.
inline Eigen::Matrix2d longitudinal_symbol(const FluidParams& p, double xi_norm) {
    Eigen::Matrix2d A;
    A << 0.0, -xi_norm, p.kappa_bar() * xi_norm * xi_norm * xi_norm,
        -p.nu_bar() * xi_norm * xi_norm;
    return A;
}

namespace detail {

/// (a_hat, V_hat) -> (a_hat, m_parallel) change of basis applied to a real
/// 2x2 propagator in (a, V) variables: V = i m_parallel.
inline PropagatorMatrix to_momentum_basis(const Eigen::Matrix2d& E, double transverse) {
    PropagatorMatrix out;
    out.transverse = transverse;
    out.l11 = E(0, 0);
    out.l12 = cplx(0.0, 1.0) * E(0, 1);
    out.l21 = cplx(0.0, -1.0) * E(1, 0);
    out.l22 = E(1, 1);
    return out;
}

inline cplx expm1_c(cplx z) {
    if (std::abs(z) < 1e-4) {
        // 4-term series; relative error below 1e-18 at |z| = 1e-4.
        return z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
    }
    return std::exp(z) - 1.0;
}

} // namespace detail

/// Authoritative per-mode propagator: scaling-and-squaring matrix
/// exponential of t * A(xi), plus the transverse heat factor.  The slow
/// decay rate is pulled out as an exact scalar factor (e^{tA} = e^s
/// e^{tA - sI} for any shift), which keeps the squaring phase at O(1)
/// entries; deeply decayed modes would otherwise sit below the roundoff
/// floor of the intermediate products.
inline PropagatorMatrix semigroup_matrix(const FluidParams& p, double xi_norm, double t) {
    if (t < 0.0) throw std::invalid_argument("semigroup_matrix: t must be >= 0");
    if (xi_norm == 0.0) return PropagatorMatrix{}; // A(0) = 0, identity propagation
    const double shift = eigenvalues(p, xi_norm).slow().real() * t;
    Eigen::Matrix2d shifted =
        t * longitudinal_symbol(p, xi_norm) - shift * Eigen::Matrix2d::Identity();
    Eigen::Matrix2d E = std::exp(shift) * shifted.exp();
    return detail::to_momentum_basis(E, std::exp(-p.mu_bar() * xi_norm * xi_norm * t));
}

/// Explicit kernel: entries assembled from lambda_pm and the divided
/// difference D = (e^{l+ t} - e^{l- t})/(l+ - l-).  The expm1 series keeps D
/// uniformly accurate down to vanishing gap; the defective-limit form
/// D = t e^{lambda t} takes over at exact eigenvalue collision (the critical
/// parabola, where the discriminant is floating-point zero).  Cross-check
/// only; the matrix exponential above is authoritative.
inline PropagatorMatrix closed_form_matrix(const FluidParams& p, double xi_norm, double t) {
    if (t < 0.0) throw std::invalid_argument("closed_form_matrix: t must be >= 0");
    if (xi_norm == 0.0) return PropagatorMatrix{};
    EigenPair ev = eigenvalues(p, xi_norm);
    // Anchor every entry at the slow branch: the fast factor e^{lf t} can
    // denormalize long before e^{ls t} does, so only the bounded ratio
    // e^{(lf - ls) t} ever appears.
    cplx ls = ev.slow(), lf = ev.fast();
    cplx g = lf - ls;
    cplx els = std::exp(ls * t);
    cplx D, E11, E22; // D = (e^{l+ t} - e^{l- t})/(l+ - l-)
    if (!(std::abs(g) > 0.0)) {
        D = t * els;
        E11 = (1.0 - ls * t) * els;
        E22 = (1.0 + ls * t) * els;
    } else {
        cplx efs = std::exp(g * t); // e^{(lf - ls) t}, modulus <= 1
        D = els * detail::expm1_c(g * t) / g;
        E11 = els * (lf - ls * efs) / g;
        E22 = els * (lf * efs - ls) / g;
    }
    PropagatorMatrix out;
    out.transverse = std::exp(-p.mu_bar() * xi_norm * xi_norm * t);
    const double x = xi_norm;
    out.l11 = E11;
    out.l12 = cplx(0.0, 1.0) * (-x * D);
    out.l21 = cplx(0.0, -1.0) * (p.kappa_bar() * x * x * x * D);
    out.l22 = E22;
    return out;
}

/// Exact linear flow: transverse part of m under the heat factor, (a_hat,
/// m_parallel) under the longitudinal block, zero mode unchanged.
inline FluidState propagate_linear(const FluidState& state, const FluidParams& p, double t) {
    if (t < 0.0) throw std::invalid_argument("propagate_linear: t must be >= 0");
    const TorusGrid& g = state.grid();
    if (state.m.components() != g.dim())
        throw std::invalid_argument("propagate_linear: momentum must have d components");
    FluidState out = state;

    // One propagator per distinct |xi|^2 (exact dyadic products, so the map
    // key is reliable).
    std::map<double, PropagatorMatrix> cache;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double xi2 = g.xi_norm2(i);
        if (xi2 == 0.0) continue;
        auto it = cache.find(xi2);
        if (it == cache.end())
            it = cache.emplace(xi2, semigroup_matrix(p, std::sqrt(xi2), t)).first;
        const PropagatorMatrix& G = it->second;

        auto xi = g.xi(i);
        double xin = std::sqrt(xi2);
        cplx mpar = 0.0;
        for (int c = 0; c < g.dim(); ++c) mpar += (xi[c] / xin) * state.m.at(c, i);

        cplx a_hat = state.a.at(0, i);
        cplx mp = mpar;
        G.apply(a_hat, mp);
        out.a.at(0, i) = a_hat;
        for (int c = 0; c < g.dim(); ++c) {
            cplx transv = state.m.at(c, i) - mpar * (xi[c] / xin);
            out.m.at(c, i) = G.transverse * transv + mp * (xi[c] / xin);
        }
    }
    return out;
}

} // namespace nsk
