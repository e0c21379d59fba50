#pragma once

#include <optional>
#include <vector>

#include "nsk/field.hpp"

namespace nsk {

struct under_resolved_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

/// C^infinity step built from exp(-1/x) glue: 0 for x<=0, 1 for x>=1.
inline double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double a = std::exp(-1.0 / x);
    double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

} // namespace detail

/// Radial low-pass profile: chi = 1 on {r <= 3/4}, supported in {r <= 4/3}.
inline double chi_profile(double r) {
    return 1.0 - detail::smooth_step((r - 0.75) / (4.0 / 3.0 - 0.75));
}

/// Annulus profile phi(r) = chi(r/2) - chi(r), supported in {3/4 <= r <= 8/3},
/// identically 1 on [4/3, 3/2].
inline double phi_profile(double r) { return chi_profile(0.5 * r) - chi_profile(r); }

/// Sampled dyadic cutoffs phi(2^-j xi) over the resolvable range, certified
/// at construction: the dyadic sums telescope to 1 exactly on every nonzero
/// lattice point when the window is wide enough, and the certification test
/// rejects banks whose partition defect exceeds 1e-10 on the declared shell.
class DyadicFilterBank {
public:
    /// Build with the widest resolvable window (default) or an explicit one.
    explicit DyadicFilterBank(const TorusGrid& grid, int j0 = 0,
                              std::optional<std::pair<int, int>> window = std::nullopt)
        : grid_(grid), j0_(j0) {
        const double ximin = grid.xi_min();
        const double ximax = grid.xi_max();
        if (window) {
            j_min_ = window->first;
            j_max_ = window->second;
            if (j_min_ > j_max_) throw std::invalid_argument("DyadicFilterBank: empty j window");
        } else {
            // phi(2^-j xi) != 0 requires 3/4 <= 2^-j|xi| <= 8/3.
            j_min_ = static_cast<int>(std::ceil(std::log2(ximin * 3.0 / 8.0)));
            j_max_ = static_cast<int>(std::floor(std::log2(ximax * 4.0 / 3.0)));
        }

        const std::size_t nmodes = grid.size();
        const int nj = j_max_ - j_min_ + 1;
        phi_.assign(static_cast<std::size_t>(nj) * nmodes, 0.0);
        defect_.assign(nmodes, 0.0);
        for (std::size_t i = 0; i < nmodes; ++i) {
            const double r = grid.xi_norm(i);
            double sum = 0.0;
            for (int j = j_min_; j <= j_max_; ++j) {
                double v = phi_profile(std::ldexp(r, -j)); // phi(2^-j r)
                phi_[static_cast<std::size_t>(j - j_min_) * nmodes + i] = v;
                sum += v;
            }
            defect_[i] = (r == 0.0) ? 0.0 : 1.0 - sum;
        }

        certified_lo_ = std::ldexp(4.0 / 3.0, j_min_);
        certified_hi_ = std::ldexp(3.0 / 4.0, j_max_);
        certify();
    }

    const TorusGrid& grid() const { return grid_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    int j0() const { return j0_; }
    double certified_lo() const { return certified_lo_; }
    double certified_hi() const { return certified_hi_; }

    double phi_value(int j, std::size_t flat) const {
        require_j(j);
        return phi_[static_cast<std::size_t>(j - j_min_) * grid_.size() + flat];
    }

    /// Partition defect 1 - sum_j phi_j at one lattice point (0 at xi=0).
    double defect(std::size_t flat) const { return defect_[flat]; }

    /// Max |1 - sum_j phi_j| over lattice points inside the certified shell.
    double certified_defect() const {
        double d = 0.0;
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            double r = grid_.xi_norm(i);
            if (r >= certified_lo_ && r <= certified_hi_)
                d = std::max(d, std::abs(defect_[i]));
        }
        return d;
    }

    /// Homogeneous dyadic block: coefficients multiplied by phi(2^-j xi).
    SpectralField block(const SpectralField& f, int j) const {
        require_field(f);
        require_j(j);
        SpectralField out = f;
        const std::size_t nmodes = grid_.size();
        const double* w = &phi_[static_cast<std::size_t>(j - j_min_) * nmodes];
        for (int c = 0; c < f.components(); ++c)
            for (std::size_t i = 0; i < nmodes; ++i) out.at(c, i) = w[i] * f.at(c, i);
        return out;
    }

    /// Low-frequency cutoff S_j: coefficients multiplied by chi(2^-j xi).
    SpectralField low_cutoff(const SpectralField& f, int j) const {
        require_field(f);
        SpectralField out = f;
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            double w = chi_profile(std::ldexp(grid_.xi_norm(i), -j));
            for (int c = 0; c < f.components(); ++c) out.at(c, i) = w * f.at(c, i);
        }
        return out;
    }

    /// Fraction of spectral energy (mean mode excluded) that the truncated
    /// dyadic sum over [j_min, j_max] does not capture.
    double unresolved_energy_fraction(const SpectralField& f) const {
        require_field(f);
        double missed = 0.0, total = 0.0;
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            if (grid_.xi_norm2(i) == 0.0) continue;
            double e = 0.0;
            for (int c = 0; c < f.components(); ++c) e += std::norm(f.at(c, i));
            total += e;
            missed += e * std::abs(defect_[i]);
        }
        return total > 0.0 ? missed / total : 0.0;
    }

    /// Norm evaluators call this; fields with out-of-window energy are
    /// rejected rather than silently truncated.
    void require_resolved(const SpectralField& f, double tol = 1e-12) const {
        double frac = unresolved_energy_fraction(f);
        if (frac > tol)
            throw under_resolved_error(
                "field is under-resolved for this filter bank: unresolved energy fraction " +
                std::to_string(frac));
    }

private:
    void certify() const {
        double d = certified_defect();
        if (d > 1e-10)
            throw std::runtime_error("DyadicFilterBank: partition-of-unity defect " +
                                     std::to_string(d) + " exceeds 1e-10 on certified shell");
    }
    void require_j(int j) const {
        if (j < j_min_ || j > j_max_)
            throw std::out_of_range("DyadicFilterBank: block index " + std::to_string(j) +
                                    " outside [" + std::to_string(j_min_) + "," +
                                    std::to_string(j_max_) + "]");
    }
    void require_field(const SpectralField& f) const {
        if (f.grid() != grid_) throw std::invalid_argument("DyadicFilterBank: grid mismatch");
    }

    TorusGrid grid_;
    int j0_;
    int j_min_ = 0, j_max_ = 0;
    double certified_lo_ = 0.0, certified_hi_ = 0.0;
    std::vector<double> phi_;
    std::vector<double> defect_;
};

} // namespace nsk
