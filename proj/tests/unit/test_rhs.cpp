#include <catch2/catch_amalgamated.hpp>

#include "nsk/random_fields.hpp"
#include "nsk/rhs.hpp"

using namespace nsk;

namespace {

double max_diff(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    d -= b;
    return d.max_abs_coeff();
}

/// Params with genuinely density-dependent viscosities and capillarity, so
/// every closure is exercised.
FluidParams rich_params() {
    return FluidParams::from_closures(1.0,
                                      Polynomial({1.0, 0.0, 1.0, 0.4}),   // P
                                      Polynomial({1.0, 0.3, 0.1}),        // mu
                                      Polynomial({1.0, -0.2}),            // lambda
                                      Polynomial({2.0, 0.5, 0.2}));       // kappa
}

FluidState smooth_state(const TorusGrid& g, std::uint64_t seed, double a_linf, double m_amp) {
    std::mt19937_64 rng(seed);
    FluidState st{random_gaussian_spectrum(g, rng, 1, 0.6, 1.0),
                  random_gaussian_spectrum(g, rng, g.dim(), 0.6, m_amp)};
    double linf = lp_norm(st.a, inf);
    st.a *= a_linf / linf;
    return st;
}

} // namespace

TEST_CASE("closure table structure") {
    // P(rho) = (rho - 1)^2 with rho* = 1 gives G(a) = a.
    auto p = FluidParams::from_closures(1.0, Polynomial({0.0, 0.0, 1.0}),
                                        Polynomial::constant(1.0), Polynomial::constant(1.0),
                                        Polynomial::constant(1.0));
    auto cl = build_closures(p);
    for (double a : {-0.4, -0.1, 0.0, 0.2, 0.5}) CHECK(cl.G(a) == Catch::Approx(a).margin(1e-15));

    // Constant capillarity: kappa3 vanishes identically; kappa1(a) = kappa_bar a.
    CHECK(cl.kappa3(0.3) == Catch::Approx(0.0).margin(1e-15));
    CHECK(cl.kappa1(0.3) == Catch::Approx(p.kappa_bar() * 0.3).epsilon(1e-13));

    // Every closure vanishes at zero (also for rich closures).
    auto rich = build_closures(rich_params());
    for (int w = 0; w < ClosureTable::count; ++w)
        CHECK(std::abs(rich.eval(w, 0.0)) < 1e-14);

    // a G(a) equals the pressure difference quotient exactly.
    auto pr = rich_params();
    for (double a : {-0.3, 0.15, 0.4}) {
        double lhs = a * rich.G(a);
        double rhs = (pr.pressure()(pr.rho_star() * a) - pr.pressure()(0.0)) / pr.rho_star();
        CHECK(lhs == Catch::Approx(rhs).epsilon(1e-13));
    }
}

TEST_CASE("g terms at structured states") {
    auto g = TorusGrid::make(2, 32, 2.0 * M_PI);
    auto p = rich_params();
    auto cl = build_closures(p);
    std::mt19937_64 rng(71);

    // a = 0: only the convection term survives, g1 = div(-m (x) m).
    FluidState st = FluidState::zero(g);
    st.m = random_gaussian_spectrum(g, rng, 2, 0.6, 0.1);
    auto rhs = evaluate_g(st, cl, p);
    CHECK(rhs.g2.max_abs_coeff() < 1e-15);
    CHECK(rhs.g3.max_abs_coeff() < 1e-15);
    CHECK(rhs.g4.max_abs_coeff() < 1e-15);
    CHECK(rhs.g5.max_abs_coeff() < 1e-15);
    CHECK(rhs.g6.max_abs_coeff() < 1e-15);

    PaddedWorkspace ws(g);
    SpectralField expect = SpectralField::vector(g);
    for (int c = 0; c < 2; ++c) {
        SpectralField acc = SpectralField::scalar(g);
        for (int e = 0; e < 2; ++e) {
            RealSamples mc = ws.lift(st.m.component(c)), me = ws.lift(st.m.component(e));
            for (std::size_t i = 0; i < mc.data.size(); ++i) mc.data[i] *= -me.data[i];
            acc += partial(ws.lower(mc), e);
        }
        expect.set_component(c, acc);
    }
    CHECK(max_diff(rhs.g1, expect) < 1e-12 * std::max(expect.max_abs_coeff(), 1e-30));

    // m = 0: convection and viscosity terms vanish, capillary/pressure stay.
    FluidState sd = FluidState::zero(g);
    sd.a = random_gaussian_spectrum(g, rng, 1, 0.6, 1.0);
    sd.a *= 0.2 / lp_norm(sd.a, inf);
    auto rhs2 = evaluate_g(sd, cl, p);
    CHECK(rhs2.g1.max_abs_coeff() < 1e-15);
    CHECK(rhs2.g2.max_abs_coeff() < 1e-15);
    CHECK(rhs2.g3.max_abs_coeff() < 1e-15);
    CHECK(rhs2.g4.max_abs_coeff() > 0.0);
    CHECK(rhs2.g5.max_abs_coeff() > 0.0);
    CHECK(rhs2.g6.max_abs_coeff() > 0.0);

    // Breakdown sums exactly.
    FluidState both = smooth_state(g, 73, 0.25, 0.1);
    auto rhs3 = evaluate_g(both, cl, p);
    SpectralField total =
        rhs3.g1 + rhs3.g2 + rhs3.g3 + rhs3.g4 + rhs3.g5 + rhs3.g6;
    CHECK(max_diff(total, rhs3.total) == 0.0);
}

TEST_CASE("physical oracle pins the decomposition") {
    auto g = TorusGrid::make_any_even(2, 48, 2.0 * M_PI);
    auto p = rich_params();
    auto cl = build_closures(p);

    // Equilibrium: rho = rho*, u = 0 -> zero right-hand side.
    SpectralField rho0 = SpectralField::scalar(g);
    rho0.at(0, 0) = p.rho_star();
    SpectralField u0 = SpectralField::vector(g);
    CHECK(physical_oracle_rhs(rho0, u0, p).max_abs_coeff() < 1e-15);

    // rho = rho*: only viscosity and convection act, and m = u.
    std::mt19937_64 rng(79);
    SpectralField u = random_gaussian_spectrum(g, rng, 2, 0.6, 0.1);
    SpectralField oracle = physical_oracle_rhs(rho0, u, p);
    FluidState st = FluidState::zero(g);
    st.m = u;
    SpectralField expect = lame_operator(u, p) + evaluate_g(st, cl, p).total;
    CHECK(max_diff(oracle, expect) <= 1e-10 * std::max(expect.max_abs_coeff(), 1e-30));

    // The central consistency check: g assembled either way agrees.
    FluidState full = smooth_state(g, 83, 0.25, 0.1);
    auto [rho, uu] = primitive_variables(full, p);
    SpectralField o = physical_oracle_rhs(rho, uu, p);
    SpectralField lin = lame_operator(full.m, p);
    SpectralField cap = gradient(laplacian(full.a));
    cap *= p.kappa_bar();
    SpectralField via_g = lin + cap + evaluate_g(full, cl, p).total;
    double rel = max_diff(o, via_g) / std::max(evaluate_g(full, cl, p).total.max_abs_coeff(), 1e-30);
    CHECK(rel <= 1e-8);
}

TEST_CASE("gradient structure of the pressure and capillary terms") {
    auto g = TorusGrid::make(2, 32, 2.0 * M_PI);
    auto p = rich_params();
    auto cl = build_closures(p);
    FluidState st = smooth_state(g, 89, 0.25, 0.1);
    auto rhs = evaluate_g(st, cl, p);

    for (const SpectralField* grad_term : {&rhs.g4, &rhs.g5}) {
        double scale = std::max(grad_term->max_abs_coeff(), 1e-30);
        CHECK(leray_p(*grad_term).max_abs_coeff() <= 1e-10 * scale);
    }

    // The gradient half of g6, reassembled from the closure: its transverse
    // part must vanish like the others.
    PaddedWorkspace ws(g);
    RealSamples a_ph = ws.lift(st.a);
    RealSamples grad2(ws.fine(), 1);
    for (int c = 0; c < 2; ++c) {
        RealSamples gc = ws.lift(partial(st.a, c));
        for (std::size_t i = 0; i < grad2.data.size(); ++i)
            grad2.data[i] += gc.data[i] * gc.data[i];
    }
    for (std::size_t i = 0; i < grad2.data.size(); ++i)
        grad2.data[i] *= 0.5 * p.rho_star() * (cl.kappa2(a_ph.data[i]) + p.kappa_check());
    SpectralField grad_half = gradient(ws.lower(grad2));
    CHECK(leray_p(grad_half).max_abs_coeff() <=
          1e-10 * std::max(grad_half.max_abs_coeff(), 1e-30));
}

TEST_CASE("each g term is at least quadratic near equilibrium") {
    auto g = TorusGrid::make(2, 32, 2.0 * M_PI);
    auto p = rich_params();
    auto cl = build_closures(p);
    FluidState base = smooth_state(g, 97, 0.25, 0.25);

    auto norm_at = [&](double eps) {
        FluidState st = base;
        st *= eps;
        auto rhs = evaluate_g(st, cl, p);
        return std::array<double, 7>{rhs.g1.max_abs_coeff(), rhs.g2.max_abs_coeff(),
                                     rhs.g3.max_abs_coeff(), rhs.g4.max_abs_coeff(),
                                     rhs.g5.max_abs_coeff(), rhs.g6.max_abs_coeff(),
                                     rhs.total.max_abs_coeff()};
    };
    auto n2 = norm_at(1e-2), n3 = norm_at(1e-3), n4 = norm_at(1e-4);
    for (int i = 0; i < 7; ++i) {
        double r23 = (n2[i] / 1e-4) / (n3[i] / 1e-6);
        double r34 = (n3[i] / 1e-6) / (n4[i] / 1e-8);
        // ||g_i(eps u)||/eps^2 stabilizes: consecutive ratios approach 1.
        CHECK(std::abs(r34 - 1.0) < 0.05);
        CHECK(std::abs(r23 - 1.0) < 0.5);
    }
}

TEST_CASE("density margin guard") {
    auto g = TorusGrid::make(2, 32, 2.0 * M_PI);
    auto p = rich_params();
    auto cl = build_closures(p);
    FluidState st = FluidState::zero(g);
    std::mt19937_64 rng(101);
    st.a = random_gaussian_spectrum(g, rng, 1, 0.6, 1.0);
    double amin = to_physical(st.a).min_component(0);
    st.a *= 0.95 / std::abs(amin); // min(1 + a) ~ 0.05, below the 0.1 margin
    CHECK_THROWS_AS(evaluate_g(st, cl, p), density_guard_error);
    CHECK_NOTHROW(evaluate_g(st, cl, p, /*density_margin=*/0.01));
}

TEST_CASE("effective velocity on states") {
    auto g = TorusGrid::make(2, 32, 2.0 * M_PI);
    auto p = FluidParams::make(1.0, 1.0, 2.0, 1.0); // nu = 3, kappa = 2
    std::mt19937_64 rng(103);

    // a = 0: w reduces to the compressible momentum part.
    FluidState st = FluidState::zero(g);
    st.m = random_power_law(g, rng, 2, 1.5);
    SpectralField w = effective_velocity(st, p, 1.0);
    CHECK(max_diff(w, leray_q(st.m)) < 1e-14);

    // m = 0, single density mode: w_hat = alpha i xi a_hat.
    FluidState sd = FluidState::zero(g);
    sd.a.at(0, 2) = 0.5; // k = (0, 2)
    sd.a.symmetrize();
    double alpha = 2.0;
    SpectralField w2 = effective_velocity(sd, p, alpha);
    SpectralField expect = gradient(sd.a);
    expect *= alpha;
    CHECK(max_diff(w2, expect) < 1e-14);

    auto pc = FluidParams::make(0.25, 0.5, 1.0, 1.0); // complex regime
    CHECK_THROWS_AS(effective_velocity(st, pc, 1.0), std::domain_error);
}
