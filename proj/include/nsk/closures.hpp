#pragma once

#include "nsk/params.hpp"

namespace nsk {

/// Composite closure functions of the density fluctuation a, derived from
/// the constitutive polynomials.  All vanish at a = 0.  G uses the exact
/// difference-quotient realization a G(a) = [P(rho) - P(rho*)]/rho*, which
/// for polynomial pressure laws is itself a polynomial.
struct ClosureTable {
    double rho_star = 1.0;

    Polynomial G;            // a G(a) = (P(rho) - P(rho*))/rho*
    Polynomial mu_tilde;     // 2 mu(rho)/rho* - 2 mu_bar
    Polynomial lambda_tilde; // lambda(rho)/rho* - lambda_bar
    Polynomial kappa1;       // rho kappa(rho) - kappa_bar
    Polynomial kappa2;       // kappa(rho) + rho kappa'(rho) - kappa_check
    Polynomial kappa3;       // rho* kappa(rho) - kappa_bar

    Polynomial G_prime, mu_tilde_prime, lambda_tilde_prime;
    Polynomial kappa1_prime, kappa2_prime, kappa3_prime;

    /// Q(a) = a/(a+1); requires a > -1 (positive density).
    static double Q(double a) { return a / (a + 1.0); }
    static double Q_prime(double a) {
        double s = a + 1.0;
        return 1.0 / (s * s);
    }

    /// The seven closures by index, for probe drivers: 0 = Q, 1 = G,
    /// 2 = mu_tilde, 3 = lambda_tilde, 4..6 = kappa1..kappa3.
    double eval(int which, double a) const {
        switch (which) {
            case 0: return Q(a);
            case 1: return G(a);
            case 2: return mu_tilde(a);
            case 3: return lambda_tilde(a);
            case 4: return kappa1(a);
            case 5: return kappa2(a);
            case 6: return kappa3(a);
        }
        throw std::out_of_range("ClosureTable::eval: closure index out of range");
    }
    static constexpr int count = 7;
    static const char* name(int which) {
        static const char* names[] = {"Q", "G", "mu_tilde", "lambda_tilde",
                                      "kappa1", "kappa2", "kappa3"};
        if (which < 0 || which >= count) throw std::out_of_range("ClosureTable::name");
        return names[which];
    }
};

/// Assemble the closure table from the constitutive polynomials (which are
/// in powers of rho - rho*; substituting rho = rho*(1+a) just rescales the
/// argument by rho*).
inline ClosureTable build_closures(const FluidParams& p) {
    const double rs = p.rho_star();
    ClosureTable t;
    t.rho_star = rs;

    // G(a) = sum_{k>=1} P_k rho*^{k-1} a^{k-1}; the k=1 coefficient is
    // P'(rho*), already verified ~0 by FluidParams.
    {
        const auto& P = p.pressure().c;
        t.G.c.assign(P.size() > 1 ? P.size() - 1 : 1, 0.0);
        double rpow = 1.0;
        for (std::size_t k = 1; k < P.size(); ++k) {
            t.G.c[k - 1] = P[k] * rpow;
            rpow *= rs;
        }
    }

    auto in_a = [rs](const Polynomial& f) { return f.scaled_arg(rs); }; // f(rho*(1+a))
    Polynomial one_plus_a({1.0, 1.0});

    Polynomial mu_a = in_a(p.mu());
    Polynomial lambda_a = in_a(p.lambda());
    Polynomial kappa_a = in_a(p.kappa());
    Polynomial kappa_da = in_a(p.kappa().derivative());

    t.mu_tilde = (mu_a + Polynomial::constant(-p.mu_bar() * rs)) * (2.0 / rs);
    t.lambda_tilde = (lambda_a + Polynomial::constant(-p.lambda_bar() * rs)) * (1.0 / rs);
    t.kappa1 = (one_plus_a * kappa_a) * rs + Polynomial::constant(-p.kappa_bar());
    t.kappa2 = kappa_a + (one_plus_a * kappa_da) * rs + Polynomial::constant(-p.kappa_check());
    t.kappa3 = kappa_a * rs + Polynomial::constant(-p.kappa_bar());

    for (const Polynomial* f :
         {&t.G, &t.mu_tilde, &t.lambda_tilde, &t.kappa1, &t.kappa2, &t.kappa3})
        if (std::abs((*f)(0.0)) >= 1e-14)
            throw std::logic_error("build_closures: composite does not vanish at 0");

    t.G_prime = t.G.derivative();
    t.mu_tilde_prime = t.mu_tilde.derivative();
    t.lambda_tilde_prime = t.lambda_tilde.derivative();
    t.kappa1_prime = t.kappa1.derivative();
    t.kappa2_prime = t.kappa2.derivative();
    t.kappa3_prime = t.kappa3.derivative();
    return t;
}

} // namespace nsk
