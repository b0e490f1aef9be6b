#ifndef NSREG_GRID_HPP
#define NSREG_GRID_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "error.hpp"

namespace nsreg {

using Wavevector = std::array<int, 3>;

/// Uniform n^3 lattice on the periodic box [0, L)^3.
///
/// Storage for both physical samples and Fourier coefficients is row-major over
/// (i1, i2, i3). Lattice index i maps to integer wavenumber i for i <= n/2 and
/// i - n otherwise, so k components lie in (-n/2, n/2].
class GridSpec {
public:
    static constexpr double default_dealias = 2.0 / 3.0;

    explicit GridSpec(int n, double box_length = 2.0 * std::numbers::pi,
                      double dealias_fraction = default_dealias)
        : n_(n), box_length_(box_length), dealias_fraction_(dealias_fraction) {
        if (n < 4 || n % 2 != 0)
            throw InvalidGrid("grid resolution must be an even integer >= 4, got " + std::to_string(n));
        if (!(box_length > 0.0) || !std::isfinite(box_length))
            throw InvalidGrid("box length must be positive and finite");
        if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
            throw InvalidGrid("dealias fraction must lie in (0, 1]");
    }

    int n() const noexcept { return n_; }
    double box_length() const noexcept { return box_length_; }
    double dealias_fraction() const noexcept { return dealias_fraction_; }

    std::size_t size() const noexcept {
        const auto m = static_cast<std::size_t>(n_);
        return m * m * m;
    }

    /// |Omega| = L^3.
    double volume() const noexcept { return box_length_ * box_length_ * box_length_; }
    double spacing() const noexcept { return box_length_ / n_; }
    /// 2 pi / L; integer wavevectors are multiplied by this at use sites.
    double wavenumber_scale() const noexcept { return 2.0 * std::numbers::pi / box_length_; }
    /// Smallest nonzero eigenvalue of A = -Laplacian on mean-free fields.
    double lambda1() const noexcept {
        const double s = wavenumber_scale();
        return s * s;
    }

    /// Largest |k_i| kept by dealias().
    double dealias_cutoff() const noexcept { return dealias_fraction_ * n_ / 2.0; }

    bool retained(const Wavevector& k) const noexcept {
        // Slack absorbs rounding in fraction * n / 2 (e.g. 2/3 * 6).
        const double cut = dealias_cutoff() + 1e-9;
        return std::abs(k[0]) <= cut && std::abs(k[1]) <= cut && std::abs(k[2]) <= cut;
    }

    int wavenumber(int i) const noexcept { return i <= n_ / 2 ? i : i - n_; }
    int lattice_index(int k) const noexcept { return k >= 0 ? k : k + n_; }

    std::size_t linear(int i1, int i2, int i3) const noexcept {
        const auto m = static_cast<std::size_t>(n_);
        return (static_cast<std::size_t>(i1) * m + static_cast<std::size_t>(i2)) * m +
               static_cast<std::size_t>(i3);
    }

    Wavevector wavevector(std::size_t idx) const noexcept {
        const auto m = static_cast<std::size_t>(n_);
        const int i3 = static_cast<int>(idx % m);
        const int i2 = static_cast<int>((idx / m) % m);
        const int i1 = static_cast<int>(idx / (m * m));
        return {wavenumber(i1), wavenumber(i2), wavenumber(i3)};
    }

    std::size_t index_of(const Wavevector& k) const noexcept {
        return linear(lattice_index(wrap(k[0])), lattice_index(wrap(k[1])), lattice_index(wrap(k[2])));
    }

    /// Linear index of -k (the conjugate partner).
    std::size_t conjugate_index(std::size_t idx) const noexcept {
        const auto m = static_cast<std::size_t>(n_);
        const std::size_t i3 = idx % m;
        const std::size_t i2 = (idx / m) % m;
        const std::size_t i1 = idx / (m * m);
        return ((m - i1) % m * m + (m - i2) % m) * m + (m - i3) % m;
    }

    /// Physical coordinate of lattice point i along one axis.
    double coordinate(int i) const noexcept { return i * spacing(); }

    friend bool operator==(const GridSpec& a, const GridSpec& b) noexcept {
        return a.n_ == b.n_ && a.box_length_ == b.box_length_ && a.dealias_fraction_ == b.dealias_fraction_;
    }

private:
    int wrap(int k) const noexcept {
        // map any integer onto (-n/2, n/2]
        int r = ((k % n_) + n_) % n_;
        return r <= n_ / 2 ? r : r - n_;
    }

    int n_;
    double box_length_;
    double dealias_fraction_;
};

inline double norm_squared(const Wavevector& k) noexcept {
    return static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1] +
           static_cast<double>(k[2]) * k[2];
}

inline void require_same_grid(const GridSpec& a, const GridSpec& b) {
    if (!(a == b)) throw MalformedField("fields live on different grids");
}

} // namespace nsreg

#endif
