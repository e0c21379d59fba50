#pragma once

#include "nsk/filter_bank.hpp"
#include "nsk/norms.hpp"
#include "nsk/products.hpp"

namespace nsk {

/// Paraproduct T_f g = sum_j S_{j-1} f . block_j g over the certified range.
/// With the exact lattice partition of unity, T_f g + T_g f + R(f, g)
/// reconstructs the dealiased product of zero-mean fields to roundoff.
inline SpectralField paraproduct(const SpectralField& f, const SpectralField& g,
                                 const DyadicFilterBank& bank) {
    bank.require_resolved(f);
    bank.require_resolved(g);
    SpectralField acc = SpectralField::scalar(f.grid());
    for (int j = bank.j_min(); j <= bank.j_max(); ++j)
        acc += multiply(bank.low_cutoff(f, j - 1), bank.block(g, j));
    return acc;
}

/// Remainder R(f, g) = sum_j (sum_{|k-j|<=1} block_k f) . block_j g.
inline SpectralField remainder(const SpectralField& f, const SpectralField& g,
                               const DyadicFilterBank& bank) {
    bank.require_resolved(f);
    bank.require_resolved(g);
    SpectralField acc = SpectralField::scalar(f.grid());
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        SpectralField near = SpectralField::scalar(f.grid());
        for (int k = std::max(j - 1, bank.j_min()); k <= std::min(j + 1, bank.j_max()); ++k)
            near += bank.block(f, k);
        acc += multiply(near, bank.block(g, j));
    }
    return acc;
}

} // namespace nsk
