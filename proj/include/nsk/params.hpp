#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsk {

/// Dense univariate polynomial, coefficients in increasing order.
struct Polynomial {
    std::vector<double> c;

    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : c(std::move(coeffs)) {}
    static Polynomial constant(double v) { return Polynomial({v}); }

    double operator()(double x) const {
        double acc = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }

    Polynomial derivative() const {
        if (c.size() <= 1) return Polynomial({0.0});
        Polynomial d;
        d.c.resize(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) d.c[i - 1] = c[i] * static_cast<double>(i);
        return d;
    }

    /// Substitute x -> s*x (coefficients c_k -> c_k s^k).
    Polynomial scaled_arg(double s) const {
        Polynomial out = *this;
        double f = 1.0;
        for (std::size_t i = 0; i < out.c.size(); ++i, f *= s) out.c[i] *= f;
        return out;
    }

    Polynomial operator*(const Polynomial& o) const {
        Polynomial out;
        out.c.assign(c.size() + o.c.size() - 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < o.c.size(); ++j) out.c[i + j] += c[i] * o.c[j];
        return out;
    }
    Polynomial operator+(const Polynomial& o) const {
        Polynomial out = *this;
        if (o.c.size() > out.c.size()) out.c.resize(o.c.size(), 0.0);
        for (std::size_t i = 0; i < o.c.size(); ++i) out.c[i] += o.c[i];
        return out;
    }
    Polynomial operator-() const {
        Polynomial out = *this;
        for (auto& v : out.c) v = -v;
        return out;
    }
    Polynomial operator*(double s) const {
        Polynomial out = *this;
        for (auto& v : out.c) v *= s;
        return out;
    }
};

/// Spectral regime of the linearized longitudinal system, decided by the
/// sign of nu_bar^2 - 4 kappa_bar.
enum class Regime { RealSeparated, Critical, Complex };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::RealSeparated: return "real-separated";
        case Regime::Critical: return "critical";
        case Regime::Complex: return "complex";
    }
    return "?";
}

/// Scaled fluid coefficients plus the constitutive closures as polynomials
/// in (rho - rho_star).  The bars are derived from the closures at the
/// reference density, so the two cannot drift apart.
class FluidParams {
public:
    static FluidParams from_closures(double rho_star, Polynomial pressure, Polynomial mu,
                                     Polynomial lambda, Polynomial kappa) {
        FluidParams p;
        p.rho_star_ = rho_star;
        p.pressure_ = std::move(pressure);
        p.mu_ = std::move(mu);
        p.lambda_ = std::move(lambda);
        p.kappa_ = std::move(kappa);
        p.finish();
        return p;
    }

    /// Simplest admissible family: P = P0 + c (rho-rho*)^2, constant shear
    /// and bulk viscosities, constant capillarity.
    static FluidParams make(double mu_bar, double lambda_bar, double kappa_bar, double rho_star,
                            double pressure_coeff = 1.0, double pressure_offset = 1.0) {
        return from_closures(rho_star, Polynomial({pressure_offset, 0.0, pressure_coeff}),
                             Polynomial::constant(mu_bar * rho_star),
                             Polynomial::constant(lambda_bar * rho_star),
                             Polynomial::constant(kappa_bar / rho_star));
    }

    double mu_bar() const { return mu_bar_; }
    double lambda_bar() const { return lambda_bar_; }
    double nu_bar() const { return nu_bar_; }
    double kappa_bar() const { return kappa_bar_; }
    double kappa_check() const { return kappa_check_; }
    double rho_star() const { return rho_star_; }
    double discriminant() const { return discriminant_; }

    const Polynomial& pressure() const { return pressure_; }
    const Polynomial& mu() const { return mu_; }
    const Polynomial& lambda() const { return lambda_; }
    const Polynomial& kappa() const { return kappa_; }

    Regime regime() const {
        if (std::abs(discriminant_) < 1e-10 * nu_bar_ * nu_bar_) return Regime::Critical;
        return discriminant_ > 0.0 ? Regime::RealSeparated : Regime::Complex;
    }

private:
    void finish() {
        if (!(rho_star_ > 0.0)) throw std::invalid_argument("FluidParams: rho_star must be > 0");
        mu_bar_ = mu_(0.0) / rho_star_;
        lambda_bar_ = lambda_(0.0) / rho_star_;
        nu_bar_ = 2.0 * mu_bar_ + lambda_bar_;
        kappa_bar_ = kappa_(0.0) * rho_star_;
        kappa_check_ = kappa_(0.0) + rho_star_ * kappa_.derivative()(0.0);
        if (!(mu_bar_ > 0.0)) throw std::invalid_argument("FluidParams: mu_bar must be > 0");
        if (!(nu_bar_ > 0.0))
            throw std::invalid_argument("FluidParams: nu_bar = 2 mu_bar + lambda_bar must be > 0");
        if (!(kappa_bar_ > 0.0)) throw std::invalid_argument("FluidParams: kappa_bar must be > 0");
        double dp = pressure_.derivative()(0.0);
        if (std::abs(dp) > 1e-10)
            throw std::invalid_argument("FluidParams: zero-sound-speed condition P'(rho*) = 0 "
                                        "violated, P'(rho*) = " + std::to_string(dp));
        discriminant_ = nu_bar_ * nu_bar_ - 4.0 * kappa_bar_;
    }

    double rho_star_ = 1.0;
    double mu_bar_ = 0.0, lambda_bar_ = 0.0, nu_bar_ = 0.0;
    double kappa_bar_ = 0.0, kappa_check_ = 0.0;
    double discriminant_ = 0.0;
    Polynomial pressure_, mu_, lambda_, kappa_;
};

inline Regime classify_regime(const FluidParams& p) { return p.regime(); }

/// Closed-form eigenvalues of the longitudinal symbol matrix
/// A(xi) = [[0, -|xi|], [kappa_bar |xi|^3, -nu_bar |xi|^2]]:
/// lambda_pm = (-nu_bar +- sqrt(nu_bar^2 - 4 kappa_bar))/2 |xi|^2.
struct EigenPair {
    std::complex<double> plus;
    std::complex<double> minus;

    /// Branch with the smaller |Re| (slowest decay).
    std::complex<double> slow() const { return std::abs(plus.real()) <= std::abs(minus.real()) ? plus : minus; }
    std::complex<double> fast() const { return std::abs(plus.real()) <= std::abs(minus.real()) ? minus : plus; }
};

inline EigenPair eigenvalues(const FluidParams& p, double xi_norm) {
    const double xi2 = xi_norm * xi_norm;
    std::complex<double> root = std::sqrt(std::complex<double>(p.discriminant(), 0.0));
    return {0.5 * (-p.nu_bar() + root) * xi2, 0.5 * (-p.nu_bar() - root) * xi2};
}

/// Both real roots of alpha^2 - nu_bar alpha + kappa_bar = 0, i.e. the
/// effective-velocity constants with alpha (nu_bar - alpha) = kappa_bar.
struct AlphaBranches {
    double plus;  // (nu_bar + sqrt(disc))/2
    double minus; // (nu_bar - sqrt(disc))/2; equals nu_bar - plus

    double complement(double alpha_value) const { return plus + minus - alpha_value; }
};

inline AlphaBranches effective_alpha(const FluidParams& p) {
    if (p.regime() == Regime::Complex)
        throw std::domain_error(
            "effective_alpha: the effective velocity is real-valued only when nu_bar^2 >= "
            "4 kappa_bar (real-separated or critical regime)");
    double root = std::sqrt(std::max(p.discriminant(), 0.0));
    return {0.5 * (p.nu_bar() + root), 0.5 * (p.nu_bar() - root)};
}

/// Default Gevrey rate constant: 0.9 x 2 min(mu_bar, alpha, nu_bar - alpha).
inline double default_gevrey_c0(const FluidParams& p) {
    auto ab = effective_alpha(p);
    double m = std::min(p.mu_bar(), std::min(ab.plus, ab.minus));
    return 0.9 * 2.0 * m;
}

} // namespace nsk
