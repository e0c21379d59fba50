#pragma once

#include "nsk/closures.hpp"
#include "nsk/leray.hpp"
#include "nsk/products.hpp"
#include "nsk/propagator.hpp"

namespace nsk {

struct density_guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The six nonlinear momentum forcing terms and their sum, signed so that
/// the momentum equation reads  d/dt m = Lam(m) + kappa_bar grad Lap a + g,
/// with Lam the Lame operator mu_bar Lap + (nu_bar - mu_bar) grad div.
/// Consistency with the primitive-variable form of the system is enforced
/// by the physical oracle below.
struct RhsBreakdown {
    SpectralField g1, g2, g3, g4, g5, g6;
    SpectralField total;
};

/// Linear momentum operator: mu_bar Lap m + (nu_bar - mu_bar) grad div m.
inline SpectralField lame_operator(const SpectralField& m, const FluidParams& p) {
    SpectralField out = laplacian(m);
    out *= p.mu_bar();
    SpectralField gd = gradient(divergence(m));
    gd *= p.nu_bar() - p.mu_bar();
    out += gd;
    return out;
}

namespace detail {

/// Pointwise evaluation of a scalar function over padded samples.
template <typename F>
inline RealSamples map_samples(const RealSamples& in, F&& f) {
    RealSamples out = in;
    for (auto& v : out.data) v = f(v);
    return out;
}

inline RealSamples product(const RealSamples& x, const RealSamples& y) {
    RealSamples out = x;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= y.data[i];
    return out;
}

} // namespace detail

/// Evaluate g(a, m): spectral differentiation outside, pointwise physical
/// products inside, on a 2x-padded grid.  Throws density_guard_error when
/// min(1 + a) falls below the positivity margin and under_resolved_error
/// when the state carries aliased energy above tolerance.
inline RhsBreakdown evaluate_g(const FluidState& state, const ClosureTable& cl,
                               const FluidParams& p, double density_margin = 0.1,
                               double alias_tol = 1e-10) {
    const TorusGrid& g = state.grid();
    const int d = g.dim();
    if (aliased_energy_fraction(state.a) > alias_tol ||
        aliased_energy_fraction(state.m) > alias_tol)
        throw under_resolved_error("evaluate_g: state carries aliased energy above tolerance");

    PaddedWorkspace ws(g);
    RealSamples a_ph = ws.lift(state.a);
    if (a_ph.min_component(0) <= -1.0 + density_margin)
        throw density_guard_error("evaluate_g: density positivity margin violated, min(1+a) = " +
                                  std::to_string(1.0 + a_ph.min_component(0)));

    std::vector<RealSamples> m_ph, grad_a;
    for (int c = 0; c < d; ++c) {
        m_ph.push_back(ws.lift(state.m.component(c)));
        grad_a.push_back(ws.lift(partial(state.a, c)));
    }
    RealSamples lap_a = ws.lift(laplacian(state.a));

    RealSamples Qa = detail::map_samples(a_ph, [](double a) { return ClosureTable::Q(a); });

    auto lower_vector = [&](const std::vector<RealSamples>& comps) {
        SpectralField out = SpectralField::vector(g);
        for (int c = 0; c < d; ++c) out.set_component(c, ws.lower(comps[c]));
        return out;
    };

    // g1 = div((Q(a) - 1) m (x) m): row-wise divergence of the tensor.
    SpectralField g1 = SpectralField::vector(g);
    {
        RealSamples Qm1 = detail::map_samples(Qa, [](double q) { return q - 1.0; });
        for (int c = 0; c < d; ++c) {
            SpectralField div_row = SpectralField::scalar(g);
            for (int e = 0; e < d; ++e) {
                RealSamples T = detail::product(Qm1, detail::product(m_ph[c], m_ph[e]));
                div_row += partial(ws.lower(T), e);
            }
            g1.set_component(c, div_row);
        }
    }

    // g2 = -[mu_bar Lap(Q(a) m) + (mu_bar + lambda_bar) grad div(Q(a) m)]
    SpectralField g2 = SpectralField::vector(g);
    {
        std::vector<RealSamples> Qm;
        for (int c = 0; c < d; ++c) Qm.push_back(detail::product(Qa, m_ph[c]));
        SpectralField Qm_s = lower_vector(Qm);
        SpectralField lap = laplacian(Qm_s);
        lap *= -p.mu_bar();
        SpectralField gd = gradient(divergence(Qm_s));
        gd *= -(p.mu_bar() + p.lambda_bar());
        g2 = lap + gd;
    }

    // g3 = div(mu_tilde(a) D(u)) + grad(lambda_tilde(a) div u), u = (1-Q(a)) m.
    SpectralField g3 = SpectralField::vector(g);
    {
        std::vector<RealSamples> u;
        for (int c = 0; c < d; ++c)
            u.push_back(detail::product(
                detail::map_samples(Qa, [](double q) { return 1.0 - q; }), m_ph[c]));
        SpectralField u_s = lower_vector(u);

        RealSamples mu_t = detail::map_samples(a_ph, [&](double a) { return cl.mu_tilde(a); });
        RealSamples la_t = detail::map_samples(a_ph, [&](double a) { return cl.lambda_tilde(a); });

        for (int c = 0; c < d; ++c) {
            SpectralField acc = SpectralField::scalar(g);
            for (int e = 0; e < d; ++e) {
                SpectralField Dce = partial(u_s.component(e), c) + partial(u_s.component(c), e);
                Dce *= 0.5;
                acc += partial(ws.lower(detail::product(mu_t, ws.lift(Dce))), e);
            }
            g3.set_component(c, acc);
        }
        SpectralField divu = divergence(u_s);
        g3 += gradient(ws.lower(detail::product(la_t, ws.lift(divu))));
    }

    // g4 = -grad(a G(a))
    SpectralField g4;
    {
        RealSamples aG = detail::map_samples(a_ph, [&](double a) { return -a * cl.G(a); });
        g4 = gradient(ws.lower(aG));
    }

    // g5 = grad(kappa1(a) Lap a)
    SpectralField g5;
    {
        RealSamples k1 = detail::map_samples(a_ph, [&](double a) { return cl.kappa1(a); });
        g5 = gradient(ws.lower(detail::product(k1, lap_a)));
    }

    // g6 = (rho*/2) grad((kappa2(a) + kappa_check)|grad a|^2)
    //      - div((kappa3(a) + kappa_bar) grad a (x) grad a)
    SpectralField g6 = SpectralField::vector(g);
    {
        RealSamples grad2 = grad_a[0];
        for (auto& v : grad2.data) v *= v;
        for (int c = 1; c < d; ++c) {
            for (std::size_t i = 0; i < grad2.data.size(); ++i) {
                double v = grad_a[c].data[i];
                grad2.data[i] += v * v;
            }
        }
        RealSamples k2 = detail::map_samples(
            a_ph, [&](double a) { return cl.kappa2(a) + p.kappa_check(); });
        SpectralField part1 = gradient(ws.lower(detail::product(k2, grad2)));
        part1 *= 0.5 * p.rho_star();

        RealSamples k3 = detail::map_samples(
            a_ph, [&](double a) { return cl.kappa3(a) + p.kappa_bar(); });
        SpectralField part2 = SpectralField::vector(g);
        for (int c = 0; c < d; ++c) {
            SpectralField acc = SpectralField::scalar(g);
            for (int e = 0; e < d; ++e)
                acc += partial(ws.lower(detail::product(k3, detail::product(grad_a[c], grad_a[e]))), e);
            part2.set_component(c, acc);
        }
        g6 = part1 - part2;
    }

    RhsBreakdown out{g1, g2, g3, g4, g5, g6, g1};
    out.total = g1 + g2 + g3 + g4 + g5 + g6;
    return out;
}

/// Momentum right-hand side assembled directly from the primitive-variable
/// system: d/dt m = [ -div(rho u (x) u) - grad P(rho) + A u + div K(rho) ] / rho*,
/// entirely independent of the g-term decomposition.  Inputs are the
/// spectral density rho (around rho*) and velocity u.
inline SpectralField physical_oracle_rhs(const SpectralField& rho, const SpectralField& u,
                                         const FluidParams& p) {
    const TorusGrid& g = rho.grid();
    const int d = g.dim();
    if (rho.components() != 1 || u.components() != d)
        throw std::invalid_argument("physical_oracle_rhs: expects scalar rho and d-component u");

    PaddedWorkspace ws(g);
    RealSamples rho_ph = ws.lift(rho);
    if (rho_ph.min_component(0) <= 0.0)
        throw density_guard_error("physical_oracle_rhs: density must stay positive");

    std::vector<RealSamples> u_ph, grad_rho;
    for (int c = 0; c < d; ++c) {
        u_ph.push_back(ws.lift(u.component(c)));
        grad_rho.push_back(ws.lift(partial(rho, c)));
    }
    RealSamples lap_rho = ws.lift(laplacian(rho));

    auto of_rho = [&](const Polynomial& f) {
        return detail::map_samples(rho_ph, [&](double r) { return f(r - p.rho_star()); });
    };

    SpectralField rhs = SpectralField::vector(g);

    // -div(rho u (x) u)
    for (int c = 0; c < d; ++c) {
        SpectralField acc = SpectralField::scalar(g);
        for (int e = 0; e < d; ++e) {
            RealSamples T = detail::product(rho_ph, detail::product(u_ph[c], u_ph[e]));
            acc += partial(ws.lower(T), e);
        }
        acc *= -1.0;
        rhs.set_component(c, acc);
    }

    // -grad P(rho)
    rhs -= gradient(ws.lower(of_rho(p.pressure())));

    // A u = div(2 mu(rho) D(u)) + grad(lambda(rho) div u)
    {
        RealSamples mu_ph = of_rho(p.mu());
        RealSamples la_ph = of_rho(p.lambda());
        SpectralField visc = SpectralField::vector(g);
        for (int c = 0; c < d; ++c) {
            SpectralField acc = SpectralField::scalar(g);
            for (int e = 0; e < d; ++e) {
                SpectralField Dce = partial(u.component(e), c) + partial(u.component(c), e);
                // 2 mu D(u) = mu (grad u + grad u^T)
                acc += partial(ws.lower(detail::product(mu_ph, ws.lift(Dce))), e);
            }
            visc.set_component(c, acc);
        }
        visc += gradient(ws.lower(detail::product(la_ph, ws.lift(divergence(u)))));
        rhs += visc;
    }

    // div K(rho) = grad(rho kappa Lap rho + (kappa + rho kappa')/2 |grad rho|^2)
    //              - div(kappa grad rho (x) grad rho)
    {
        RealSamples kap = of_rho(p.kappa());
        RealSamples kap_d = of_rho(p.kappa().derivative());

        RealSamples scal = detail::product(detail::product(rho_ph, kap), lap_rho);
        RealSamples grad2 = grad_rho[0];
        for (auto& v : grad2.data) v *= v;
        for (int c = 1; c < d; ++c)
            for (std::size_t i = 0; i < grad2.data.size(); ++i) {
                double v = grad_rho[c].data[i];
                grad2.data[i] += v * v;
            }
        for (std::size_t i = 0; i < scal.data.size(); ++i)
            scal.data[i] += 0.5 * (kap.data[i] + rho_ph.data[i] * kap_d.data[i]) * grad2.data[i];
        rhs += gradient(ws.lower(scal));

        for (int c = 0; c < d; ++c) {
            SpectralField acc = SpectralField::scalar(g);
            for (int e = 0; e < d; ++e)
                acc += partial(
                    ws.lower(detail::product(kap, detail::product(grad_rho[c], grad_rho[e]))), e);
            SpectralField row = rhs.component(c);
            row -= acc;
            rhs.set_component(c, row);
        }
    }

    rhs *= 1.0 / p.rho_star();
    return rhs;
}

/// Primitive variables (rho, u) of a momentum-form state, with products on
/// the padded grid.
inline std::pair<SpectralField, SpectralField> primitive_variables(const FluidState& state,
                                                                   const FluidParams& p) {
    const TorusGrid& g = state.grid();
    PaddedWorkspace ws(g);
    RealSamples a_ph = ws.lift(state.a);
    SpectralField rho = SpectralField::scalar(g);
    {
        RealSamples r = detail::map_samples(a_ph, [&](double a) { return p.rho_star() * (1.0 + a); });
        rho = ws.lower(r);
        // keep the mean exactly: lower() masks only high modes
    }
    SpectralField u = SpectralField::vector(g);
    for (int c = 0; c < g.dim(); ++c) {
        RealSamples uc = detail::product(
            detail::map_samples(a_ph, [](double a) { return 1.0 / (1.0 + a); }),
            ws.lift(state.m.component(c)));
        u.set_component(c, ws.lower(uc));
    }
    return {rho, u};
}

/// Effective velocity w = Q m + alpha grad a for a chosen alpha branch.
inline SpectralField effective_velocity(const FluidState& state, const FluidParams& p,
                                        double alpha) {
    if (p.regime() == Regime::Complex)
        throw std::domain_error("effective_velocity: requires nu_bar^2 >= 4 kappa_bar");
    SpectralField w = leray_q(state.m);
    SpectralField ga = gradient(state.a);
    ga *= alpha;
    w += ga;
    return w;
}

/// Recover grad a = (w - Q m)/alpha; exact algebraic inverse of the above.
inline SpectralField recover_grad_a(const SpectralField& w, const SpectralField& m, double alpha) {
    SpectralField out = w;
    out -= leray_q(m);
    out *= 1.0 / alpha;
    return out;
}

} // namespace nsk
