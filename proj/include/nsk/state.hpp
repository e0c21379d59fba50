#pragma once

#include "nsk/norms.hpp"
#include "nsk/symbols.hpp"

namespace nsk {

/// Solution state of the momentum-form system: scalar density fluctuation a
/// and d-component momentum m.
struct FluidState {
    SpectralField a;
    SpectralField m;

    static FluidState zero(const TorusGrid& g) {
        return {SpectralField::scalar(g), SpectralField::vector(g)};
    }

    const TorusGrid& grid() const { return a.grid(); }

    FluidState& operator+=(const FluidState& o) {
        a += o.a;
        m += o.m;
        return *this;
    }
    FluidState& operator*=(double s) {
        a *= s;
        m *= s;
        return *this;
    }
    friend FluidState operator+(FluidState x, const FluidState& y) { return x += y; }
    friend FluidState operator*(double s, FluidState x) { return x *= s; }

    double max_abs_coeff() const { return std::max(a.max_abs_coeff(), m.max_abs_coeff()); }
};

/// Solution-space norm of the trajectory: the L-infinity-in-time and
/// L1-in-time hybrid Chemin-Lerner norms of the pair (grad a, m), with
/// high side (d/p -+ 1, p, 1) and low side (d/q - 3 / d/q - 1, q, inf).
/// Pair norms follow the ||(f,g)|| = ||f|| + ||g|| convention.
inline double epq_norm(const std::vector<double>& times, const std::vector<FluidState>& states,
                       double p, double q, int j0, double T, const DyadicFilterBank& bank) {
    if (times.size() != states.size())
        throw std::invalid_argument("epq_norm: times/states length mismatch");
    const double d = states.empty() ? 1.0 : static_cast<double>(states.front().grid().dim());

    std::vector<SpectralField> grads, moms;
    grads.reserve(states.size());
    moms.reserve(states.size());
    for (const auto& st : states) {
        grads.push_back(gradient(st.a));
        moms.push_back(st.m);
    }

    CheminLernerSpec sup_part(
        HybridNormSpec(NormSpec(d / p - 1.0, p, 1.0), NormSpec(d / q - 3.0, q, inf), j0), inf, T);
    CheminLernerSpec int_part(
        HybridNormSpec(NormSpec(d / p + 1.0, p, 1.0), NormSpec(d / q - 1.0, q, inf), j0), 1.0, T);

    double total = 0.0;
    total += chemin_lerner_norm(times, grads, sup_part, bank);
    total += chemin_lerner_norm(times, moms, sup_part, bank);
    total += chemin_lerner_norm(times, grads, int_part, bank);
    total += chemin_lerner_norm(times, moms, int_part, bank);
    return total;
}

/// Instantaneous hybrid norm of the pair (grad a, m) with the sup-part
/// indices of the trajectory norm; used for snapshot-wise tracking.
inline double state_hybrid_norm(const FluidState& st, double p, double q, int j0,
                                const DyadicFilterBank& bank) {
    const double d = static_cast<double>(st.grid().dim());
    HybridNormSpec spec(NormSpec(d / p - 1.0, p, 1.0), NormSpec(d / q - 3.0, q, inf), j0);
    return hybrid_norm(gradient(st.a), spec, bank) + hybrid_norm(st.m, spec, bank);
}

} // namespace nsk
