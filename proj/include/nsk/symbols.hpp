#pragma once

#include <functional>

#include "nsk/field.hpp"

namespace nsk {

/// Scalar Fourier multipliers.  lambda = |xi| (the square root of -Laplace),
/// lambda1 = |xi|_1 = sum_i |xi_i|; both are real and even, hence
/// realness-preserving.
struct SymbolSpec {
    enum class Kind { lambda, lambda1, laplacian, custom };

    Kind kind = Kind::lambda;
    std::function<double(const std::array<double, 3>&, int dim)> custom;

    static SymbolSpec lambda() { return {Kind::lambda, nullptr}; }
    static SymbolSpec lambda1() { return {Kind::lambda1, nullptr}; }
    static SymbolSpec laplacian() { return {Kind::laplacian, nullptr}; }
    static SymbolSpec make_custom(std::function<double(const std::array<double, 3>&, int)> f) {
        return {Kind::custom, std::move(f)};
    }

    double eval(const std::array<double, 3>& xi, int dim) const {
        switch (kind) {
            case Kind::lambda: {
                double s = 0.0;
                for (int a = 0; a < dim; ++a) s += xi[a] * xi[a];
                return std::sqrt(s);
            }
            case Kind::lambda1: {
                double s = 0.0;
                for (int a = 0; a < dim; ++a) s += std::abs(xi[a]);
                return s;
            }
            case Kind::laplacian: {
                double s = 0.0;
                for (int a = 0; a < dim; ++a) s += xi[a] * xi[a];
                return -s;
            }
            case Kind::custom:
                return custom(xi, dim);
        }
        return 0.0;
    }
};

/// Coefficient-wise multiplication by a scalar symbol.
inline SpectralField apply_symbol(const SpectralField& f, const SymbolSpec& s) {
    SpectralField out = f;
    const TorusGrid& g = f.grid();
    for (std::size_t i = 0; i < f.modes(); ++i) {
        double m = s.eval(g.xi(i), g.dim());
        for (int c = 0; c < f.components(); ++c) out.at(c, i) = m * f.at(c, i);
    }
    return out;
}

/// Gradient of a scalar field: (i xi) f_hat, one output component per axis.
inline SpectralField gradient(const SpectralField& f) {
    if (f.components() != 1) throw std::invalid_argument("gradient: expects a scalar field");
    const TorusGrid& g = f.grid();
    SpectralField out = SpectralField::vector(g);
    for (std::size_t i = 0; i < f.modes(); ++i) {
        auto xi = g.xi(i);
        for (int a = 0; a < g.dim(); ++a) out.at(a, i) = cplx(0.0, xi[a]) * f.at(0, i);
    }
    return out;
}

/// Divergence of a vector field: (i xi) . m_hat.
inline SpectralField divergence(const SpectralField& m) {
    const TorusGrid& g = m.grid();
    if (m.components() != g.dim())
        throw std::invalid_argument("divergence: expects a d-component vector field");
    SpectralField out = SpectralField::scalar(g);
    for (std::size_t i = 0; i < m.modes(); ++i) {
        auto xi = g.xi(i);
        cplx s = 0.0;
        for (int a = 0; a < g.dim(); ++a) s += cplx(0.0, xi[a]) * m.at(a, i);
        out.at(0, i) = s;
    }
    return out;
}

/// Partial derivative along one axis (works componentwise).
inline SpectralField partial(const SpectralField& f, int axis) {
    const TorusGrid& g = f.grid();
    if (axis < 0 || axis >= g.dim()) throw std::invalid_argument("partial: axis out of range");
    SpectralField out = f;
    for (std::size_t i = 0; i < f.modes(); ++i) {
        double xia = g.xi(i)[axis];
        for (int c = 0; c < f.components(); ++c) out.at(c, i) = cplx(0.0, xia) * f.at(c, i);
    }
    return out;
}

/// Laplacian, componentwise.
inline SpectralField laplacian(const SpectralField& f) {
    SpectralField out = f;
    const TorusGrid& g = f.grid();
    for (std::size_t i = 0; i < f.modes(); ++i) {
        double m = -g.xi_norm2(i);
        for (int c = 0; c < f.components(); ++c) out.at(c, i) = m * f.at(c, i);
    }
    return out;
}

} // namespace nsk
