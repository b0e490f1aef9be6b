#ifndef NSREG_FIELD_HPP
#define NSREG_FIELD_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "fft.hpp"
#include "grid.hpp"

namespace nsreg {

using Complex = std::complex<double>;

/// |z|^2 without the hypot call std::norm makes in libstdc++.
inline double abs2(Complex z) noexcept { return z.real() * z.real() + z.imag() * z.imag(); }

struct FieldMeta {
    std::optional<double> time;
    std::string label;
};

/// Fourier coefficients of a real scalar field, full (not half) spectrum.
class SpectralScalarField {
public:
    explicit SpectralScalarField(const GridSpec& grid) : grid_(grid), coeffs_(grid.size()) {}
    SpectralScalarField(const GridSpec& grid, std::vector<Complex> coeffs)
        : grid_(grid), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != grid_.size()) throw MalformedField("scalar coefficient count does not match grid");
    }

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    std::span<Complex> coeffs() noexcept { return coeffs_; }
    Complex operator[](std::size_t idx) const { return coeffs_[idx]; }
    Complex& operator[](std::size_t idx) { return coeffs_[idx]; }
    Complex at(const Wavevector& k) const { return coeffs_[grid_.index_of(k)]; }

private:
    GridSpec grid_;
    std::vector<Complex> coeffs_;
};

class PhysicalScalarField {
public:
    explicit PhysicalScalarField(const GridSpec& grid) : grid_(grid), samples_(grid.size()) {}
    PhysicalScalarField(const GridSpec& grid, std::vector<double> samples)
        : grid_(grid), samples_(std::move(samples)) {
        if (samples_.size() != grid_.size()) throw MalformedField("scalar sample count does not match grid");
    }

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const double> samples() const noexcept { return samples_; }
    std::span<double> samples() noexcept { return samples_; }
    double operator[](std::size_t idx) const { return samples_[idx]; }
    double& operator[](std::size_t idx) { return samples_[idx]; }

private:
    GridSpec grid_;
    std::vector<double> samples_;
};

/// Three-component Fourier representation of a real vector field on the periodic box.
class SpectralVectorField {
public:
    using Components = std::array<std::vector<Complex>, 3>;

    explicit SpectralVectorField(const GridSpec& grid, FieldMeta meta = {})
        : grid_(grid), meta_(std::move(meta)) {
        for (auto& c : coeffs_) c.assign(grid_.size(), Complex{});
    }

    SpectralVectorField(const GridSpec& grid, Components coeffs, FieldMeta meta = {})
        : grid_(grid), coeffs_(std::move(coeffs)), meta_(std::move(meta)) {
        for (const auto& c : coeffs_)
            if (c.size() != grid_.size()) throw MalformedField("vector coefficient count does not match grid");
    }

    const GridSpec& grid() const noexcept { return grid_; }
    const FieldMeta& meta() const noexcept { return meta_; }
    FieldMeta& meta() noexcept { return meta_; }

    std::span<const Complex> component(int c) const noexcept { return coeffs_[static_cast<std::size_t>(c)]; }
    std::span<Complex> component(int c) noexcept { return coeffs_[static_cast<std::size_t>(c)]; }

    Complex operator()(int c, std::size_t idx) const { return coeffs_[static_cast<std::size_t>(c)][idx]; }
    Complex& operator()(int c, std::size_t idx) { return coeffs_[static_cast<std::size_t>(c)][idx]; }

    Complex at(int c, const Wavevector& k) const { return (*this)(c, grid_.index_of(k)); }
    std::array<Complex, 3> mode(std::size_t idx) const {
        return {coeffs_[0][idx], coeffs_[1][idx], coeffs_[2][idx]};
    }
    void set_mode(std::size_t idx, const std::array<Complex, 3>& v) {
        for (std::size_t c = 0; c < 3; ++c) coeffs_[c][idx] = v[c];
    }

    SpectralVectorField& operator+=(const SpectralVectorField& o) {
        require_same_grid(grid_, o.grid_);
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < coeffs_[c].size(); ++i) coeffs_[c][i] += o.coeffs_[c][i];
        return *this;
    }
    SpectralVectorField& operator-=(const SpectralVectorField& o) {
        require_same_grid(grid_, o.grid_);
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < coeffs_[c].size(); ++i) coeffs_[c][i] -= o.coeffs_[c][i];
        return *this;
    }
    SpectralVectorField& operator*=(double a) {
        for (auto& comp : coeffs_)
            for (auto& v : comp) v *= a;
        return *this;
    }

    friend SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b) { return a += b; }
    friend SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b) { return a -= b; }
    friend SpectralVectorField operator*(double s, SpectralVectorField a) { return a *= s; }

    /// this += a * x
    SpectralVectorField& axpy(double a, const SpectralVectorField& x) {
        require_same_grid(grid_, x.grid_);
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < coeffs_[c].size(); ++i) coeffs_[c][i] += a * x.coeffs_[c][i];
        return *this;
    }

    /// Coefficientwise equality, bit for bit.
    friend bool operator==(const SpectralVectorField& a, const SpectralVectorField& b) {
        return a.grid_ == b.grid_ && a.coeffs_ == b.coeffs_;
    }

private:
    GridSpec grid_;
    Components coeffs_;
    FieldMeta meta_;
};

/// Samples of a real vector field on the n^3 collocation lattice.
class PhysicalVectorField {
public:
    using Components = std::array<std::vector<double>, 3>;

    explicit PhysicalVectorField(const GridSpec& grid) : grid_(grid) {
        for (auto& c : samples_) c.assign(grid_.size(), 0.0);
    }
    PhysicalVectorField(const GridSpec& grid, Components samples)
        : grid_(grid), samples_(std::move(samples)) {
        for (const auto& c : samples_)
            if (c.size() != grid_.size()) throw MalformedField("vector sample count does not match grid");
    }

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const double> component(int c) const noexcept { return samples_[static_cast<std::size_t>(c)]; }
    std::span<double> component(int c) noexcept { return samples_[static_cast<std::size_t>(c)]; }
    double operator()(int c, std::size_t idx) const { return samples_[static_cast<std::size_t>(c)][idx]; }
    double& operator()(int c, std::size_t idx) { return samples_[static_cast<std::size_t>(c)][idx]; }

    /// Pointwise Euclidean magnitude at lattice point idx.
    double magnitude(std::size_t idx) const {
        return std::hypot(samples_[0][idx], samples_[1][idx], samples_[2][idx]);
    }

    /// Fill every component from a function of (x, y, z).
    template <class F>
    static PhysicalVectorField sample(const GridSpec& grid, F&& f) {
        PhysicalVectorField out(grid);
        const int n = grid.n();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) {
                    const std::array<double, 3> v = f(grid.coordinate(i), grid.coordinate(j), grid.coordinate(l));
                    const auto idx = grid.linear(i, j, l);
                    for (int c = 0; c < 3; ++c) out(c, idx) = v[static_cast<std::size_t>(c)];
                }
        return out;
    }

private:
    GridSpec grid_;
    Components samples_;
};

// ---------------------------------------------------------------------------
// wavevector symbols

/// Integer wavevector used for first-derivative symbols: any component sitting on the
/// Nyquist index n/2 is replaced by 0, since the odd symbol i k has no real-valued
/// representation there. Even symbols (|k|^2) use the true wavevector.
inline std::array<double, 3> derivative_wavevector(const GridSpec& grid, std::size_t idx) {
    const auto k = grid.wavevector(idx);
    const int nyq = grid.n() / 2;
    std::array<double, 3> out{};
    for (std::size_t c = 0; c < 3; ++c) out[c] = (k[c] == nyq) ? 0.0 : static_cast<double>(k[c]);
    return out;
}

// ---------------------------------------------------------------------------
// invariant probes

namespace detail {

// Largest |z| over a span, comparing squared moduli; falls back to std::abs when those
// underflow or overflow.
inline double max_modulus(std::span<const Complex> v) {
    double best = 0.0;
    std::size_t arg = 0;
    bool any = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        any = any || v[i] != Complex{};
        if (const double m = abs2(v[i]); m > best) {
            best = m;
            arg = i;
        }
    }
    if (!any) return 0.0;
    if (best == 0.0 || std::isinf(best)) {
        double worst = 0.0;
        for (const auto& z : v) worst = std::max(worst, std::abs(z));
        return worst;
    }
    return std::abs(v[arg]);
}

inline double max_abs(const SpectralVectorField& f) {
    double m = 0.0;
    for (int c = 0; c < 3; ++c) m = std::max(m, max_modulus(f.component(c)));
    return m;
}

// max_k |v(k) - conj(v(-k))| / scale
inline double symmetry_defect(std::span<const Complex> coeffs, const GridSpec& grid, double scale) {
    const double inv = 1.0 / scale;
    double worst = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        worst = std::max(worst, abs2((coeffs[i] - std::conj(coeffs[grid.conjugate_index(i)])) * inv));
    return std::sqrt(worst);
}

} // namespace detail

/// Largest coefficient magnitude over all components.
inline double max_coefficient(const SpectralVectorField& f) { return detail::max_abs(f); }

/// max_k |v(k) - conj(v(-k))| relative to the largest coefficient (0 for the zero field).
inline double conjugate_symmetry_defect(const SpectralVectorField& f) {
    const double scale = detail::max_abs(f);
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (int c = 0; c < 3; ++c) worst = std::max(worst, detail::symmetry_defect(f.component(c), f.grid(), scale));
    return worst;
}

inline bool is_mean_free(const SpectralVectorField& f) {
    return f(0, 0) == Complex{} && f(1, 0) == Complex{} && f(2, 0) == Complex{};
}

/// max_k |khat . v(k)| relative to the largest coefficient; khat is the unit derivative wavevector.
inline double solenoidal_defect(const SpectralVectorField& f) {
    const double scale = detail::max_abs(f);
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    const auto& g = f.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto k = derivative_wavevector(g, i);
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) continue;
        const Complex dot = k[0] * f(0, i) + k[1] * f(1, i) + k[2] * f(2, i);
        worst = std::max(worst, std::abs(dot) / std::sqrt(k2));
    }
    return worst / scale;
}

inline constexpr double solenoidal_tolerance = 1e-12;
inline constexpr double symmetry_tolerance = 1e-12;

inline bool is_solenoidal(const SpectralVectorField& f, double tol = solenoidal_tolerance) {
    return solenoidal_defect(f) <= tol;
}

/// Nonzero amplitude at any wavevector outside the dealiased band.
inline bool is_band_limited(const SpectralVectorField& f) {
    const auto& g = f.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.retained(g.wavevector(i))) continue;
        for (int c = 0; c < 3; ++c)
            if (f(c, i) != Complex{}) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// transforms

inline PhysicalVectorField to_physical(const SpectralVectorField& f) {
    const double defect = conjugate_symmetry_defect(f);
    if (defect > symmetry_tolerance)
        throw MalformedField("field is not conjugate-symmetric (relative defect " + std::to_string(defect) + ")");
    const auto& g = f.grid();
    PhysicalVectorField out(g);
    std::vector<Complex> work(g.size());
    for (int c = 0; c < 3; ++c) {
        std::ranges::copy(f.component(c), work.begin());
        fft::transform(g.n(), work, fft::Direction::Backward);
        auto dst = out.component(c);
        for (std::size_t i = 0; i < work.size(); ++i) dst[i] = work[i].real();
    }
    return out;
}

namespace detail {

// Forward DFT normalized by 1/n^3, then symmetrized so the result is exactly conjugate-symmetric.
inline void forward_real(const GridSpec& g, std::span<const double> samples, std::span<Complex> out) {
    std::vector<Complex> work(samples.begin(), samples.end());
    fft::transform(g.n(), work, fft::Direction::Forward);
    const double norm = 1.0 / static_cast<double>(g.size());
    for (std::size_t i = 0; i < work.size(); ++i) {
        const std::size_t j = g.conjugate_index(i);
        out[i] = 0.5 * norm * (work[i] + std::conj(work[j]));
    }
}

} // namespace detail

inline SpectralVectorField to_spectral(const PhysicalVectorField& f) {
    const auto& g = f.grid();
    SpectralVectorField out(g);
    for (int c = 0; c < 3; ++c) detail::forward_real(g, f.component(c), out.component(c));
    return out;
}

inline SpectralScalarField to_spectral(const PhysicalScalarField& f) {
    SpectralScalarField out(f.grid());
    detail::forward_real(f.grid(), f.samples(), out.coeffs());
    return out;
}

inline PhysicalScalarField to_physical(const SpectralScalarField& f) {
    const auto& g = f.grid();
    const double mag = detail::max_modulus(f.coeffs());
    if (mag > 0.0 && detail::symmetry_defect(f.coeffs(), g, mag) > symmetry_tolerance)
        throw MalformedField("scalar field is not conjugate-symmetric");
    std::vector<Complex> work(f.coeffs().begin(), f.coeffs().end());
    fft::transform(g.n(), work, fft::Direction::Backward);
    PhysicalScalarField out(g);
    for (std::size_t i = 0; i < work.size(); ++i) out[i] = work[i].real();
    return out;
}

// ---------------------------------------------------------------------------
// projections and truncation

/// Orthogonal projection onto discretely divergence-free fields. The k = 0 amplitude is untouched.
inline SpectralVectorField leray_project(const SpectralVectorField& f) {
    SpectralVectorField out = f;
    const auto& g = f.grid();
    for (std::size_t i = 1; i < g.size(); ++i) {
        const auto k = derivative_wavevector(g, i);
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) continue;
        const Complex dot = (k[0] * f(0, i) + k[1] * f(1, i) + k[2] * f(2, i)) / k2;
        for (int c = 0; c < 3; ++c) out(c, i) -= k[static_cast<std::size_t>(c)] * dot;
    }
    return out;
}

inline SpectralVectorField make_mean_free(const SpectralVectorField& f) {
    SpectralVectorField out = f;
    for (int c = 0; c < 3; ++c) out(c, 0) = Complex{};
    return out;
}

/// Zero every amplitude with some |k_i| > dealias_fraction * n / 2.
inline SpectralVectorField dealias(const SpectralVectorField& f) {
    SpectralVectorField out = f;
    const auto& g = f.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.retained(g.wavevector(i))) continue;
        for (int c = 0; c < 3; ++c) out(c, i) = Complex{};
    }
    return out;
}

/// i (2 pi / L) k . v(k)
inline SpectralScalarField divergence(const SpectralVectorField& f) {
    const auto& g = f.grid();
    const double scale = g.wavenumber_scale();
    SpectralScalarField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto k = derivative_wavevector(g, i);
        out[i] = Complex(0.0, scale) * (k[0] * f(0, i) + k[1] * f(1, i) + k[2] * f(2, i));
    }
    return out;
}

/// i (2 pi / L) k phi(k)
inline SpectralVectorField gradient(const SpectralScalarField& phi) {
    const auto& g = phi.grid();
    const double scale = g.wavenumber_scale();
    SpectralVectorField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto k = derivative_wavevector(g, i);
        for (int c = 0; c < 3; ++c) out(c, i) = Complex(0.0, scale * k[static_cast<std::size_t>(c)]) * phi[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Plancherel quantities: with coefficients normalized by 1/n^3, the box integral
// of f g equals L^3 sum_k conj(f(k)) g(k).

inline double inner_product(const SpectralVectorField& a, const SpectralVectorField& b) {
    require_same_grid(a.grid(), b.grid());
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto x = a.component(c);
        const auto y = b.component(c);
        for (std::size_t i = 0; i < x.size(); ++i) sum += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    }
    return a.grid().volume() * sum;
}

inline double l2_norm(const SpectralVectorField& f) {
    double sum = 0.0;
    for (int c = 0; c < 3; ++c)
        for (const auto& v : f.component(c)) sum += abs2(v);
    return std::sqrt(f.grid().volume() * sum);
}

/// L^2 distance between two fields on the same grid.
inline double l2_distance(const SpectralVectorField& a, const SpectralVectorField& b) { return l2_norm(a - b); }

/// Largest coefficientwise difference over all components.
inline double max_coefficient_difference(const SpectralVectorField& a, const SpectralVectorField& b) {
    require_same_grid(a.grid(), b.grid());
    double worst = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto x = a.component(c);
        const auto y = b.component(c);
        for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    }
    return worst;
}

/// True when every coefficient of every component is finite.
inline bool all_finite(const SpectralVectorField& f) {
    for (int c = 0; c < 3; ++c)
        for (const auto& v : f.component(c))
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

} // namespace nsreg

#endif
