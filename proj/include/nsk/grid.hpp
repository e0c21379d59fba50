#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nsk {

/// Periodic grid on [0,L)^d with the standard DFT frequency lattice
/// {(2pi/L) k : k integer, |k_i| <= n/2}.  Indices follow the usual FFT
/// wrap order per axis: k = i for i <= n/2, k = i - n otherwise.
class TorusGrid {
public:
    /// Validating constructor: dim in {1,2,3}, n a power of two >= 8.
    static TorusGrid make(int dim, int n_per_axis, double period) {
        require_valid(dim, n_per_axis, period, /*require_pow2=*/true);
        return TorusGrid(dim, n_per_axis, period);
    }

    /// Relaxed constructor for refinement studies: any even n >= 8.
    /// Non-power-of-two sizes (e.g. 48) keep the same lattice semantics;
    /// FFTW handles mixed-radix lengths.
    static TorusGrid make_any_even(int dim, int n_per_axis, double period) {
        require_valid(dim, n_per_axis, period, /*require_pow2=*/false);
        return TorusGrid(dim, n_per_axis, period);
    }

    int dim() const { return dim_; }
    int n() const { return n_; }
    double period() const { return period_; }

    /// Frequency lattice spacing 2pi/L.
    double dxi() const { return 2.0 * M_PI / period_; }
    /// Physical grid spacing L/n.
    double dx() const { return period_ / n_; }

    std::size_t size() const {
        std::size_t s = 1;
        for (int a = 0; a < dim_; ++a) s *= static_cast<std::size_t>(n_);
        return s;
    }

    /// Integer wavenumber of axis-index i (FFT wrap order, Nyquist at -n/2).
    int wavenumber(int i) const { return i < n_ / 2 ? i : i - n_; }

    /// Integer wavenumber vector of the flat (row-major) index.
    std::array<int, 3> wavenumbers(std::size_t flat) const {
        std::array<int, 3> k{0, 0, 0};
        for (int a = dim_ - 1; a >= 0; --a) {
            k[a] = wavenumber(static_cast<int>(flat % n_));
            flat /= n_;
        }
        return k;
    }

    /// Physical frequency vector xi = (2pi/L) k.
    std::array<double, 3> xi(std::size_t flat) const {
        auto k = wavenumbers(flat);
        const double h = dxi();
        return {h * k[0], h * k[1], h * k[2]};
    }

    double xi_norm2(std::size_t flat) const {
        auto x = xi(flat);
        return x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    }
    double xi_norm(std::size_t flat) const { return std::sqrt(xi_norm2(flat)); }
    /// l1 frequency norm |xi|_1 = sum_i |xi_i|.
    double xi_norm1(std::size_t flat) const {
        auto x = xi(flat);
        return std::abs(x[0]) + std::abs(x[1]) + std::abs(x[2]);
    }

    /// True if any axis index sits on the Nyquist row (k = n/2).
    bool on_nyquist(std::size_t flat) const {
        for (int a = dim_ - 1; a >= 0; --a) {
            int i = static_cast<int>(flat % n_);
            if (i == n_ / 2) return true;
            flat /= n_;
        }
        return false;
    }

    /// Flat index of the frequency -k (conjugate partner).
    std::size_t conjugate_index(std::size_t flat) const {
        std::size_t out = 0;
        std::array<int, 3> idx{0, 0, 0};
        for (int a = dim_ - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(flat % n_);
            flat /= n_;
        }
        for (int a = 0; a < dim_; ++a) {
            int i = idx[a] == 0 ? 0 : n_ - idx[a];
            out = out * n_ + static_cast<std::size_t>(i);
        }
        return out;
    }

    /// Smallest and largest nonzero lattice magnitudes |xi| (Nyquist rows
    /// excluded, matching field storage conventions).
    double xi_min() const { return dxi(); }
    double xi_max() const {
        const int kmax = n_ / 2 - 1;
        return dxi() * kmax * std::sqrt(static_cast<double>(dim_));
    }

    bool operator==(const TorusGrid& o) const {
        return dim_ == o.dim_ && n_ == o.n_ && period_ == o.period_;
    }
    bool operator!=(const TorusGrid& o) const { return !(*this == o); }

private:
    TorusGrid(int dim, int n, double period) : dim_(dim), n_(n), period_(period) {}

    static void require_valid(int dim, int n, double period, bool require_pow2) {
        if (dim < 1 || dim > 3)
            throw std::invalid_argument("TorusGrid: dim must be 1, 2 or 3, got " + std::to_string(dim));
        if (n < 8)
            throw std::invalid_argument("TorusGrid: n_per_axis must be >= 8, got " + std::to_string(n));
        if (require_pow2 && (n & (n - 1)) != 0)
            throw std::invalid_argument("TorusGrid: n_per_axis must be a power of two, got " + std::to_string(n));
        if (!require_pow2 && n % 2 != 0)
            throw std::invalid_argument("TorusGrid: n_per_axis must be even, got " + std::to_string(n));
        if (!(period > 0.0))
            throw std::invalid_argument("TorusGrid: period must be positive");
    }

    int dim_;
    int n_;
    double period_;
};

} // namespace nsk
