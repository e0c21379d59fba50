#pragma once

#include <functional>

#include "nsk/rhs.hpp"

namespace nsk {

struct IntegratorConfig {
    enum class Scheme { ExponentialEuler, Etdrk2 };

    Scheme scheme = Scheme::Etdrk2;
    double dt = 1e-2;
    double t_end = 1.0;
    bool adapt = false;
    double adapt_tol = 1e-3;
    double dt_min = 1e-6;
    double dt_max = 1e-1;
    int snapshot_stride = 1;
    double density_margin = 0.1;
    bool nonlinear = true;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("IntegratorConfig: dt must be > 0");
        if (!(t_end > 0.0)) throw std::invalid_argument("IntegratorConfig: t_end must be > 0");
        if (snapshot_stride < 1)
            throw std::invalid_argument("IntegratorConfig: snapshot_stride must be >= 1");
    }

    static Scheme scheme_from_name(const std::string& s) {
        if (s == "exponential-euler") return Scheme::ExponentialEuler;
        if (s == "etdrk2") return Scheme::Etdrk2;
        throw std::invalid_argument("unknown integrator scheme: " + s);
    }
    static const char* scheme_name(Scheme s) {
        return s == Scheme::ExponentialEuler ? "exponential-euler" : "etdrk2";
    }
};

struct StepDiagnostics {
    double time = 0.0;
    double dt = 0.0;
    double a_linf = 0.0;
    double alias_fraction = 0.0;
};

struct GuardEvent {
    double time = 0.0;
    std::string what;
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<FluidState> states;
    std::vector<StepDiagnostics> diagnostics;
    std::vector<GuardEvent> guard_events;
    bool completed = true;
};

namespace detail {

/// Per-mode propagator table for one fixed time increment.
class ModePropagator {
public:
    ModePropagator(const TorusGrid& g, const FluidParams& p, double dt) : grid_(g), dt_(dt) {
        table_.reserve(g.size());
        std::map<double, PropagatorMatrix> cache;
        for (std::size_t i = 0; i < g.size(); ++i) {
            double xi2 = g.xi_norm2(i);
            auto it = cache.find(xi2);
            if (it == cache.end())
                it = cache.emplace(xi2, semigroup_matrix(p, std::sqrt(xi2), dt)).first;
            table_.push_back(it->second);
        }
    }

    double dt() const { return dt_; }

    FluidState apply(const FluidState& s) const {
        FluidState out = s;
        const TorusGrid& g = grid_;
        for (std::size_t i = 0; i < g.size(); ++i) {
            double xi2 = g.xi_norm2(i);
            if (xi2 == 0.0) continue;
            auto xi = g.xi(i);
            double xin = std::sqrt(xi2);
            cplx mpar = 0.0;
            for (int c = 0; c < g.dim(); ++c) mpar += (xi[c] / xin) * s.m.at(c, i);
            cplx a_hat = s.a.at(0, i), mp = mpar;
            table_[i].apply(a_hat, mp);
            out.a.at(0, i) = a_hat;
            for (int c = 0; c < g.dim(); ++c)
                out.m.at(c, i) =
                    table_[i].transverse * (s.m.at(c, i) - mpar * (xi[c] / xin)) + mp * (xi[c] / xin);
        }
        return out;
    }

private:
    TorusGrid grid_;
    double dt_;
    std::vector<PropagatorMatrix> table_;
};

inline FluidState forcing_state(const TorusGrid& g, const SpectralField& gm) {
    return {SpectralField::scalar(g), gm};
}

} // namespace detail

/// One exponential step of the Duhamel form u(t+dt) = G(dt) u(t) +
/// int_0^dt G(dt - s)(0, g(s)) ds.  The exponential-Euler quadrature is
/// dt G(dt)(0, g_n); etdrk2 adds the trapezoidal endpoint correction
/// dt/2 [G(dt)(0, g_n) + (0, g(u*))] with the Euler predictor u*.
inline FluidState step(const FluidState& u, double dt, const FluidParams& p,
                       const ClosureTable& cl, const IntegratorConfig& cfg) {
    detail::ModePropagator G(u.grid(), p, dt);
    FluidState lin = G.apply(u);
    if (!cfg.nonlinear) return lin;

    SpectralField gm = evaluate_g(u, cl, p, cfg.density_margin).total;
    FluidState fg = G.apply(detail::forcing_state(u.grid(), gm));
    if (cfg.scheme == IntegratorConfig::Scheme::ExponentialEuler) {
        fg *= dt;
        return lin + fg;
    }
    FluidState predictor = lin + dt * fg;
    SpectralField gm2 = evaluate_g(predictor, cl, p, cfg.density_margin).total;
    FluidState sum = 0.5 * dt * (fg + detail::forcing_state(u.grid(), gm2));
    return lin + sum;
}

/// March to t_end, recording snapshots every snapshot_stride accepted steps.
/// Guard trips (density margin, non-finite values) stop the run early and
/// are reported in the record.
inline TrajectoryRecord simulate(const FluidState& initial, const IntegratorConfig& cfg,
                                 const FluidParams& p, const ClosureTable& cl) {
    cfg.validate();

    FluidState u = initial;
    dealias(u.a);
    dealias(u.m);
    u.a.symmetrize();
    u.m.symmetrize();

    TrajectoryRecord rec;
    auto snapshot = [&](double t, const FluidState& s, double dt_used) {
        rec.times.push_back(t);
        rec.states.push_back(s);
        StepDiagnostics diag;
        diag.time = t;
        diag.dt = dt_used;
        diag.a_linf = lp_norm(s.a, inf);
        diag.alias_fraction = std::max(aliased_energy_fraction(s.a), aliased_energy_fraction(s.m));
        rec.diagnostics.push_back(diag);
    };
    snapshot(0.0, u, 0.0);

    double t = 0.0, dt = std::min(cfg.dt, cfg.t_end);
    long steps_since_snapshot = 0;
    const double state_floor = 1e-300;

    while (t < cfg.t_end - 1e-14) {
        double dt_eff = std::min(dt, cfg.t_end - t);
        FluidState next = u;
        try {
            if (cfg.adapt && cfg.nonlinear) {
                // Halve while the forcing contribution of this step is too
                // large a fraction of the state.
                for (;;) {
                    SpectralField gm = evaluate_g(u, cl, p, cfg.density_margin).total;
                    double contrib = dt_eff * std::sqrt(gm.energy());
                    double scale = std::sqrt(u.a.energy() + u.m.energy()) + state_floor;
                    if (contrib <= cfg.adapt_tol * scale || dt_eff <= cfg.dt_min) {
                        if (contrib < 0.1 * cfg.adapt_tol * scale)
                            dt = std::min(2.0 * dt, cfg.dt_max);
                        break;
                    }
                    dt = std::max(0.5 * dt_eff, cfg.dt_min);
                    dt_eff = std::min(dt, cfg.t_end - t);
                }
            }
            next = step(u, dt_eff, p, cl, cfg);
        } catch (const density_guard_error& e) {
            rec.guard_events.push_back({t, e.what()});
            rec.completed = false;
            break;
        } catch (const under_resolved_error& e) {
            rec.guard_events.push_back({t, e.what()});
            rec.completed = false;
            break;
        }
        if (!std::isfinite(next.max_abs_coeff())) {
            rec.guard_events.push_back({t, "non-finite state detected"});
            rec.completed = false;
            break;
        }
        u = next;
        t += dt_eff;
        if (++steps_since_snapshot >= cfg.snapshot_stride || t >= cfg.t_end - 1e-14) {
            snapshot(t, u, dt_eff);
            steps_since_snapshot = 0;
        }
    }
    return rec;
}

/// A posteriori residual: centered finite difference of the snapshots
/// against the evolution operator at interior snapshot times, relative to
/// the max magnitude of the right-hand side.
inline double residual_check(const TrajectoryRecord& traj, const FluidParams& p,
                             const ClosureTable& cl, bool nonlinear = true) {
    if (traj.states.size() < 3)
        throw std::invalid_argument("residual_check: need at least 3 snapshots");
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.states.size(); ++i) {
        const double h = traj.times[i + 1] - traj.times[i - 1];
        const FluidState& u = traj.states[i];

        SpectralField da = traj.states[i + 1].a - traj.states[i - 1].a;
        da *= 1.0 / h;
        SpectralField dm = traj.states[i + 1].m - traj.states[i - 1].m;
        dm *= 1.0 / h;

        SpectralField rhs_a = divergence(u.m);
        rhs_a *= -1.0;
        SpectralField rhs_m = lame_operator(u.m, p);
        SpectralField cap = gradient(laplacian(u.a));
        cap *= p.kappa_bar();
        rhs_m += cap;
        if (nonlinear) rhs_m += evaluate_g(u, cl, p).total;

        double scale = std::max(rhs_a.max_abs_coeff(), rhs_m.max_abs_coeff());
        if (scale <= 0.0) continue;
        SpectralField ra = da - rhs_a;
        SpectralField rm = dm - rhs_m;
        worst = std::max(worst, std::max(ra.max_abs_coeff(), rm.max_abs_coeff()) / scale);
    }
    return worst;
}

} // namespace nsk
