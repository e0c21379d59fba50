#include <catch2/catch_amalgamated.hpp>

#include "nsk/fft.hpp"
#include "nsk/leray.hpp"
#include "nsk/random_fields.hpp"
#include "nsk/symbols.hpp"

using namespace nsk;

namespace {

SpectralField cosine_mode(const TorusGrid& g, int k_axis0, double amplitude = 1.0) {
    SpectralField f = SpectralField::scalar(g);
    std::size_t stride = 1;
    for (int a = 1; a < g.dim(); ++a) stride *= g.n();
    // symmetrize() splits a one-sided coefficient across the +-k pair.
    f.at(0, static_cast<std::size_t>(k_axis0) * stride) = amplitude;
    f.symmetrize();
    return f;
}

double max_diff(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    d -= b;
    return d.max_abs_coeff();
}

} // namespace

TEST_CASE("grid construction and frequency lattice") {
    auto g1 = TorusGrid::make(1, 8, 2.0 * M_PI);
    CHECK(g1.dxi() == Catch::Approx(1.0));
    std::vector<int> ks;
    for (std::size_t i = 0; i < g1.size(); ++i) ks.push_back(g1.wavenumbers(i)[0]);
    CHECK(ks == std::vector<int>{0, 1, 2, 3, -4, -3, -2, -1});

    auto g2 = TorusGrid::make(2, 16, 2.0 * M_PI);
    CHECK(g2.size() == 256);
    CHECK(g2.dxi() == Catch::Approx(1.0));

    auto g3 = TorusGrid::make(3, 32, 4.0 * M_PI);
    CHECK(g3.dxi() == Catch::Approx(0.5));

    CHECK_THROWS_AS(TorusGrid::make(1, 12, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TorusGrid::make(1, 4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TorusGrid::make(4, 8, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TorusGrid::make(2, 8, -1.0), std::invalid_argument);
    CHECK_NOTHROW(TorusGrid::make_any_even(2, 48, 1.0));
    CHECK_THROWS_AS(TorusGrid::make_any_even(2, 47, 1.0), std::invalid_argument);
}

TEST_CASE("transform pair: analytic coefficients and round trip") {
    auto g = TorusGrid::make(1, 8, 2.0 * M_PI);

    // f(x) = cos(x): amplitudes 1/2 at k = +-1.
    RealSamples s(g, 1);
    for (std::size_t i = 0; i < g.size(); ++i) s.at(0, i) = std::cos(i * g.dx());
    SpectralField f = to_spectral(s);
    CHECK(std::abs(f.at(0, 1) - cplx(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(f.at(0, 7) - cplx(0.5, 0.0)) < 1e-14);
    for (std::size_t i : {0u, 2u, 3u, 5u, 6u}) CHECK(std::abs(f.at(0, i)) < 1e-14);

    // f == 1: only the zero mode.
    for (std::size_t i = 0; i < g.size(); ++i) s.at(0, i) = 1.0;
    f = to_spectral(s);
    CHECK(std::abs(f.at(0, 0) - cplx(1.0, 0.0)) < 1e-14);

    // Random real field: inverse(forward) identity below 1e-12.
    auto g2 = TorusGrid::make(2, 32, 5.0);
    std::mt19937_64 rng(11);
    SpectralField r = random_power_law(g2, rng, 1, 1.0);
    RealSamples rp = to_physical(r);
    SpectralField r2 = to_spectral(rp);
    CHECK(max_diff(r, r2) < 1e-12);

    // Parseval with the L^d factor: int |f|^2 = L^d sum |c|^2.
    double quad = 0.0;
    for (double v : rp.data) quad += v * v;
    quad *= std::pow(g2.dx(), 2);
    double parseval = r.energy() * std::pow(g2.period(), 2);
    CHECK(quad == Catch::Approx(parseval).epsilon(1e-12));
}

TEST_CASE("symbols: laplacian, l1 norm multiplier, identities") {
    auto g = TorusGrid::make(1, 16, 2.0 * M_PI);
    SpectralField c = cosine_mode(g, 1);

    SpectralField lap = laplacian(c);
    SpectralField minus_c = c;
    minus_c *= -1.0;
    CHECK(max_diff(lap, minus_c) < 1e-14);

    // Mode (1,1) under |xi|_1: multiplier 2.
    auto g2 = TorusGrid::make(2, 16, 2.0 * M_PI);
    SpectralField m2 = SpectralField::scalar(g2);
    m2.at(0, 1 * 16 + 1) = 0.5;
    m2.symmetrize();
    SpectralField l1 = apply_symbol(m2, SymbolSpec::lambda1());
    SpectralField twice = m2;
    twice *= 2.0;
    CHECK(max_diff(l1, twice) < 1e-14);

    // div(grad f) = laplacian f.
    std::mt19937_64 rng(5);
    SpectralField f = random_power_law(g2, rng, 1, 1.5);
    CHECK(max_diff(divergence(gradient(f)), laplacian(f)) < 1e-12);

    // lambda^2 = -laplacian, coefficient-wise exactly.
    SpectralField lam2 = apply_symbol(apply_symbol(f, SymbolSpec::lambda()), SymbolSpec::lambda());
    SpectralField neg_lap = laplacian(f);
    neg_lap *= -1.0;
    CHECK(max_diff(lam2, neg_lap) <= 1e-15 * neg_lap.max_abs_coeff()); // sqrt(x)^2 is 1 ulp from x

    // Real even symbols preserve Hermitian symmetry.
    CHECK(apply_symbol(f, SymbolSpec::lambda()).hermitian_defect() < 1e-13);
    CHECK(apply_symbol(f, SymbolSpec::lambda1()).hermitian_defect() < 1e-13);
}

TEST_CASE("leray split: gradients, solenoidal fields, projector algebra") {
    auto g = TorusGrid::make(2, 32, 2.0 * M_PI);
    std::mt19937_64 rng(17);

    // m = grad(phi) is fully compressible.
    SpectralField phi = random_power_law(g, rng, 1, 2.0);
    SpectralField gp = gradient(phi);
    auto split = leray_split(gp);
    CHECK(split.solenoidal.max_abs_coeff() < 1e-12 * gp.max_abs_coeff());
    CHECK(max_diff(split.compressible, gp) < 1e-12);

    // m = (-d2 psi, d1 psi) is divergence-free.
    SpectralField psi = random_power_law(g, rng, 1, 2.0);
    SpectralField sol = SpectralField::vector(g);
    SpectralField d2 = partial(psi, 1);
    d2 *= -1.0;
    sol.set_component(0, d2);
    sol.set_component(1, partial(psi, 0));
    auto split2 = leray_split(sol);
    CHECK(split2.compressible.max_abs_coeff() < 1e-12 * sol.max_abs_coeff());

    // Random m: idempotence and complementarity.
    SpectralField m = random_power_law(g, rng, 2, 1.0);
    auto sp = leray_split(m);
    double scale = m.max_abs_coeff();
    CHECK(max_diff(leray_p(sp.solenoidal), sp.solenoidal) < 1e-12 * scale);
    CHECK(max_diff(leray_q(sp.compressible), sp.compressible) < 1e-12 * scale);
    CHECK(leray_q(sp.solenoidal).max_abs_coeff() < 1e-12 * scale);
    CHECK(max_diff(sp.solenoidal + sp.compressible, m) < 1e-13 * scale);
    CHECK(divergence(sp.solenoidal).max_abs_coeff() < 1e-12 * scale * g.xi_max());
    CHECK(sp.solenoidal.hermitian_defect() < 1e-13);

    CHECK_THROWS_AS(leray_split(phi), std::invalid_argument);
}
