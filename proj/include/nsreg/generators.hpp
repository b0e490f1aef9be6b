#ifndef NSREG_GENERATORS_HPP
#define NSREG_GENERATORS_HPP

#include <cmath>
#include <cstdint>
#include <string>

#include "field.hpp"
#include "random.hpp"

namespace nsreg {

/// amplitude * (0, sin(k x'), cos(k x')) with x' = 2 pi x / L. An eigenfield of the curl
/// with eigenvalue k (2 pi / L), and of A with eigenvalue (k 2 pi / L)^2.
inline SpectralVectorField gen_beltrami(const GridSpec& grid, int k, double amplitude) {
    if (k < 1 || static_cast<double>(k) > grid.dealias_cutoff() + 1e-9)
        throw OutOfBand("Beltrami wavenumber " + std::to_string(k) + " outside the retained band (1.." +
                        std::to_string(grid.dealias_cutoff()) + ")");
    SpectralVectorField f(grid, FieldMeta{std::nullopt, "beltrami"});
    const auto plus = grid.index_of({k, 0, 0});
    const auto minus = grid.index_of({-k, 0, 0});
    // sin = (e^{i} - e^{-i}) / 2i, cos = (e^{i} + e^{-i}) / 2
    f(1, plus) = Complex(0.0, -0.5 * amplitude);
    f(1, minus) = Complex(0.0, 0.5 * amplitude);
    f(2, plus) = Complex(0.5 * amplitude, 0.0);
    f(2, minus) = Complex(0.5 * amplitude, 0.0);
    return f;
}

/// (sin x cos y cos z, -cos x sin y cos z, 0) in box-scaled coordinates; eight modes per
/// active component at k in {+-1}^3.
inline SpectralVectorField gen_taylor_green(const GridSpec& grid) {
    SpectralVectorField f(grid, FieldMeta{std::nullopt, "taylor_green"});
    for (int a : {-1, 1})
        for (int b : {-1, 1})
            for (int c : {-1, 1}) {
                const auto idx = grid.index_of({a, b, c});
                f(0, idx) = Complex(0.0, -0.125 * a);
                f(1, idx) = Complex(0.0, 0.125 * b);
            }
    return f;
}

/// Seeded random real field (not projected) with amplitude envelope |k|^(-decay_exponent).
///
/// Each coefficient pair (k, -k) draws its real and imaginary parts from a counter-based
/// SplitMix64 stream keyed by (seed, component, linear index of the representative k),
/// where the representative is the member of the pair with the smaller linear index.
/// Self-conjugate modes get a real amplitude. The result is mean-free and dealiased.
inline SpectralVectorField gen_random_field(const GridSpec& grid, std::uint64_t seed, double decay_exponent) {
    if (!(decay_exponent >= 0.0) || !std::isfinite(decay_exponent))
        throw InvalidConfig("decay exponent must be finite and >= 0");
    const random::CounterRng rng(seed);
    SpectralVectorField f(grid, FieldMeta{std::nullopt, "random_" + std::to_string(seed)});
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const std::size_t j = grid.conjugate_index(i);
        if (j < i) continue;
        const double envelope = std::pow(std::sqrt(norm_squared(grid.wavevector(i))), -decay_exponent);
        for (int c = 0; c < 3; ++c) {
            const auto stream = static_cast<std::uint64_t>(c);
            const double re = rng.symmetric(stream, 2 * i);
            const double im = (j == i) ? 0.0 : rng.symmetric(stream, 2 * i + 1);
            const Complex v = envelope * Complex(re, im);
            f(c, i) = v;
            f(c, j) = std::conj(v);
        }
    }
    return dealias(f);
}

/// gen_random_field, then Leray-projected: a deterministic member of the discrete H_0.
inline SpectralVectorField gen_random_solenoidal(const GridSpec& grid, std::uint64_t seed, double decay_exponent) {
    auto raw = gen_random_field(grid, seed, decay_exponent);
    auto out = dealias(leray_project(make_mean_free(raw)));
    out.meta() = raw.meta();
    return out;
}

} // namespace nsreg

#endif
