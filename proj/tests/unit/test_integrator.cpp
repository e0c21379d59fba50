#include <catch2/catch_amalgamated.hpp>

#include "nsk/integrator.hpp"
#include "nsk/random_fields.hpp"

using namespace nsk;

namespace {

double state_diff(const FluidState& x, const FluidState& y) {
    SpectralField da = x.a - y.a;
    SpectralField dm = x.m - y.m;
    return std::max(da.max_abs_coeff(), dm.max_abs_coeff());
}

FluidState small_state(const TorusGrid& g, std::uint64_t seed, double eps) {
    std::mt19937_64 rng(seed);
    FluidState st{random_gaussian_spectrum(g, rng, 1, 0.5, eps),
                  random_gaussian_spectrum(g, rng, g.dim(), 0.5, eps)};
    return st;
}

} // namespace

TEST_CASE("zero forcing reduces a step to the linear flow") {
    auto g = TorusGrid::make(2, 32, 2.0 * M_PI);
    auto p = FluidParams::make(1.0, 1.0, 2.0, 1.0);
    auto cl = build_closures(p);
    FluidState st = small_state(g, 7, 1e-2);

    IntegratorConfig cfg;
    cfg.nonlinear = false;
    cfg.dt = 0.05;
    FluidState stepped = step(st, 0.05, p, cl, cfg);
    FluidState linear = propagate_linear(st, p, 0.05);
    CHECK(state_diff(stepped, linear) == 0.0);

    FluidState z = FluidState::zero(g);
    cfg.nonlinear = true;
    CHECK(step(z, 0.05, p, cl, cfg).max_abs_coeff() == 0.0);
}

TEST_CASE("simulate with nonlinearity disabled matches the propagator at snapshots") {
    auto g = TorusGrid::make(2, 32, 2.0 * M_PI);
    auto p = FluidParams::make(1.0, 1.0, 2.0, 1.0);
    auto cl = build_closures(p);
    FluidState st = small_state(g, 11, 1e-3);

    IntegratorConfig cfg;
    cfg.nonlinear = false;
    cfg.dt = 0.05;
    cfg.t_end = 0.5;
    auto traj = simulate(st, cfg, p, cl);
    REQUIRE(traj.completed);
    FluidState masked = st;
    dealias(masked.a);
    dealias(masked.m);
    masked.a.symmetrize();
    masked.m.symmetrize();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        FluidState expect = propagate_linear(masked, p, traj.times[i]);
        CHECK(state_diff(traj.states[i], expect) <= 1e-12 * std::max(1e-30, st.max_abs_coeff()));
    }
}

TEST_CASE("self-convergence orders of the two schemes") {
    auto g = TorusGrid::make(2, 32, 2.0 * M_PI);
    auto p = FluidParams::make(1.0, 1.0, 2.0, 1.0);
    auto cl = build_closures(p);
    // Order-1 amplitude makes the nonlinearity visible above roundoff.
    FluidState st = small_state(g, 13, 0.05);
    const double T = 0.2;

    auto final_state = [&](IntegratorConfig::Scheme sch, double dt) {
        IntegratorConfig cfg;
        cfg.scheme = sch;
        cfg.dt = dt;
        cfg.t_end = T;
        cfg.snapshot_stride = 1 << 20; // only keep the final state
        auto traj = simulate(st, cfg, p, cl);
        REQUIRE(traj.completed);
        return traj.states.back();
    };

    for (auto [scheme, min_order] :
         {std::pair{IntegratorConfig::Scheme::ExponentialEuler, 0.9},
          std::pair{IntegratorConfig::Scheme::Etdrk2, 1.9}}) {
        FluidState ref = final_state(scheme, T / 256.0);
        double e1 = state_diff(final_state(scheme, T / 16.0), ref);
        double e2 = state_diff(final_state(scheme, T / 32.0), ref);
        double order = std::log2(e1 / e2);
        INFO("scheme " << IntegratorConfig::scheme_name(scheme) << " errors " << e1 << " " << e2);
        CHECK(order >= min_order);
    }
}

TEST_CASE("mass and momentum zero modes are conserved") {
    auto g = TorusGrid::make(2, 32, 2.0 * M_PI);
    auto p = FluidParams::make(1.0, 1.0, 2.0, 1.0);
    auto cl = build_closures(p);
    FluidState st = small_state(g, 17, 0.05);
    st.a.at(0, 0) = 0.01; // nonzero mean density fluctuation
    st.m.at(0, 0) = 0.02;
    st.m.at(1, 0) = -0.01;

    IntegratorConfig cfg;
    cfg.dt = 0.02;
    cfg.t_end = 0.3;
    auto traj = simulate(st, cfg, p, cl);
    REQUIRE(traj.completed);
    for (const auto& s : traj.states) {
        CHECK(std::abs(s.a.at(0, 0) - cplx(0.01)) <= 1e-12);
        CHECK(std::abs(s.m.at(0, 0) - cplx(0.02)) <= 1e-12);
        CHECK(std::abs(s.m.at(1, 0) - cplx(-0.01)) <= 1e-12);
    }
}

TEST_CASE("residual check orders and magnitudes") {
    auto g = TorusGrid::make(2, 32, 2.0 * M_PI);
    auto p = FluidParams::make(1.0, 1.0, 2.0, 1.0);
    auto cl = build_closures(p);

    // Stationary zero trajectory: residual stays zero.
    IntegratorConfig cfg;
    cfg.dt = 0.05;
    cfg.t_end = 0.3;
    auto zero_traj = simulate(FluidState::zero(g), cfg, p, cl);
    CHECK(residual_check(zero_traj, p, cl) == 0.0);

    // Linear trajectory: centered differences -> residual drops ~4x per halving.
    FluidState st = small_state(g, 19, 1e-3);
    auto lin_res = [&](double dt) {
        IntegratorConfig c;
        c.nonlinear = false;
        c.dt = dt;
        c.t_end = 0.4;
        auto traj = simulate(st, c, p, cl);
        return residual_check(traj, p, cl, /*nonlinear=*/false);
    };
    double r1 = lin_res(0.04), r2 = lin_res(0.02);
    CHECK(r1 / r2 == Catch::Approx(4.0).margin(1.2));

    // Nonlinear small-data run: tolerance frozen at dt = 1e-3.
    IntegratorConfig cn;
    cn.dt = 1e-3;
    cn.t_end = 0.05;
    auto traj = simulate(small_state(g, 23, 1e-3), cn, p, cl);
    REQUIRE(traj.completed);
    CHECK(residual_check(traj, p, cl) < 1e-4);

    CHECK_THROWS_AS(residual_check(TrajectoryRecord{}, p, cl), std::invalid_argument);
}

TEST_CASE("guards and adaptivity") {
    auto g = TorusGrid::make(2, 32, 2.0 * M_PI);
    auto p = FluidParams::make(1.0, 1.0, 2.0, 1.0);
    auto cl = build_closures(p);

    // Density margin trip: a large fluctuation stops the run with a report.
    FluidState big = FluidState::zero(g);
    std::mt19937_64 rng(29);
    big.a = random_gaussian_spectrum(g, rng, 1, 0.5, 1.0);
    big.a *= 0.95 / lp_norm(big.a, inf);
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.1;
    auto traj = simulate(big, cfg, p, cl);
    CHECK_FALSE(traj.completed);
    REQUIRE_FALSE(traj.guard_events.empty());
    CHECK(traj.guard_events.front().what.find("density") != std::string::npos);

    // Adaptive stepping completes and respects the caps.
    IntegratorConfig ad;
    ad.adapt = true;
    ad.dt = 0.05;
    ad.dt_min = 1e-6;
    ad.dt_max = 0.1;
    ad.t_end = 0.5;
    auto traj2 = simulate(small_state(g, 31, 1e-3), ad, p, cl);
    REQUIRE(traj2.completed);
    CHECK(traj2.times.back() == Catch::Approx(0.5).epsilon(1e-12));
    for (const auto& d : traj2.diagnostics)
        if (d.time > 0.0) {
            CHECK(d.dt <= ad.dt_max * (1 + 1e-12));
            CHECK(d.dt >= ad.dt_min * (1 - 1e-12));
        }
}

TEST_CASE("rescaled runs track the scaling map") {
    // If (a, m) solves the system with pressure P, then a(l^2 t, l x),
    // l m(l^2 t, l x) solves it with pressure l^2 P.  On the lattice the
    // rescaled data reuse the same coefficient arrays on a torus of period
    // L / l.
    const double lambda = 2.0;
    auto g1 = TorusGrid::make(2, 32, 4.0 * M_PI);
    auto g2 = TorusGrid::make(2, 32, 2.0 * M_PI);
    double c_pressure = 1.0;
    auto p1 = FluidParams::make(1.0, 1.0, 2.0, 1.0, c_pressure);
    auto p2 = FluidParams::make(1.0, 1.0, 2.0, 1.0, c_pressure * lambda * lambda);
    auto cl1 = build_closures(p1);
    auto cl2 = build_closures(p2);

    FluidState st1 = small_state(g1, 37, 1e-2);
    FluidState st2 = FluidState::zero(g2);
    for (std::size_t i = 0; i < g1.size(); ++i) {
        st2.a.at(0, i) = st1.a.at(0, i);
        for (int c = 0; c < 2; ++c) st2.m.at(c, i) = lambda * st1.m.at(c, i);
    }

    const double T = 0.4, dt = 0.005;
    IntegratorConfig c1;
    c1.dt = dt;
    c1.t_end = T;
    c1.snapshot_stride = 1 << 20;
    IntegratorConfig c2 = c1;
    c2.dt = dt / (lambda * lambda);
    c2.t_end = T / (lambda * lambda);

    auto r1 = simulate(st1, c1, p1, cl1);
    auto r2 = simulate(st2, c2, p2, cl2);
    REQUIRE(r1.completed);
    REQUIRE(r2.completed);

    const FluidState& f1 = r1.states.back();
    const FluidState& f2 = r2.states.back();
    double scale = std::max(f1.max_abs_coeff(), 1e-30);
    double worst = 0.0;
    for (std::size_t i = 0; i < g1.size(); ++i) {
        worst = std::max(worst, std::abs(f2.a.at(0, i) - f1.a.at(0, i)));
        for (int c = 0; c < 2; ++c)
            worst = std::max(worst, std::abs(f2.m.at(c, i) - lambda * f1.m.at(c, i)));
    }
    // Integrator-limited agreement; generous multiple of the scheme error.
    CHECK(worst / scale < 1e-6);
}
