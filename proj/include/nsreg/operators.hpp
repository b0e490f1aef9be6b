#ifndef NSREG_OPERATORS_HPP
#define NSREG_OPERATORS_HPP

#include <cmath>
#include <string>

#include "field.hpp"
#include "log.hpp"

namespace nsreg {

/// Exponent of A^s. Bounded so that |k|^{2s} stays representable at desk resolutions.
class FractionalOrder {
public:
    static constexpr double max_magnitude = 8.0;

    constexpr FractionalOrder(double s) : s_(s) { // NOLINT(google-explicit-constructor)
        if (!std::isfinite(s) || std::abs(s) > max_magnitude)
            throw InvalidOrder("fractional order must be finite with magnitude <= 8");
    }
    constexpr double value() const noexcept { return s_; }

private:
    double s_;
};

enum class OperatorTag { APower, Curl, B0, B1, B2, B3 };

/// i (2 pi / L) k x v(k). The output is solenoidal and mean-free.
inline SpectralVectorField curl(const SpectralVectorField& f) {
    const auto& g = f.grid();
    const double scale = g.wavenumber_scale();
    SpectralVectorField out(g, f.meta());
    const Complex ik(0.0, scale);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto k = derivative_wavevector(g, i);
        const auto v = f.mode(i);
        out(0, i) = ik * (k[1] * v[2] - k[2] * v[1]);
        out(1, i) = ik * (k[2] * v[0] - k[0] * v[2]);
        out(2, i) = ik * (k[0] * v[1] - k[1] * v[0]);
    }
    return out;
}

/// A^s as the diagonal multiplier ((2 pi / L)^2 |k|^2)^s, k = 0 excluded.
///
/// Negative powers need a mean-free input (A is invertible only after the constants are
/// factored out) and throw SingularMode otherwise. For s >= 0 a nonzero mean is dropped
/// with a warning.
inline SpectralVectorField a_power(FractionalOrder order, const SpectralVectorField& f) {
    const double s = order.value();
    if (!is_mean_free(f)) {
        if (s < 0.0) throw SingularMode("A^s with s < 0 applied to a field with a nonzero k = 0 amplitude");
        warn("A^s applied to a field with nonzero mean; the k = 0 amplitude was dropped");
    }
    const auto& g = f.grid();
    const double lambda1 = g.lambda1();
    SpectralVectorField out(g, f.meta());
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double mult = (s == 0.0) ? 1.0 : std::pow(lambda1 * norm_squared(g.wavevector(i)), s);
        for (int c = 0; c < 3; ++c) out(c, i) = mult * f(c, i);
    }
    return out;
}

namespace detail {
inline void require_mean_free(const SpectralVectorField& f, const char* op) {
    if (!is_mean_free(f)) throw SingularMode(std::string(op) + " requires a mean-free field");
}
} // namespace detail

/// B0 = A^{-1} curl curl. Coincides with the Leray projection on mean-free fields.
inline SpectralVectorField b0_apply(const SpectralVectorField& f) {
    detail::require_mean_free(f, "B0");
    return a_power(-1.0, curl(curl(f)));
}

/// B1 = A^{-1/2} curl.
inline SpectralVectorField b1_apply(const SpectralVectorField& f) {
    detail::require_mean_free(f, "B1");
    return a_power(-0.5, curl(f));
}

/// B2 = curl A^{-1/2}.
inline SpectralVectorField b2_apply(const SpectralVectorField& f) {
    detail::require_mean_free(f, "B2");
    return curl(a_power(-0.5, f));
}

/// B3(s) = A^{(s-1)/2} B2 A^{(1-s)/2}, computed by composition.
///
/// On the torus every factor is a Fourier multiplier, so B3(s) = B2 = B1 for all s. That is
/// a property of the periodic box; on bounded domains with boundary conditions A and the
/// curl do not commute and the three operators differ.
inline SpectralVectorField b3_apply(FractionalOrder s, const SpectralVectorField& f) {
    detail::require_mean_free(f, "B3");
    const double e = s.value();
    return a_power(0.5 * (e - 1.0), b2_apply(a_power(0.5 * (1.0 - e), f)));
}

/// Dispatch by tag. `s` is the exponent of A for APower and the B3 parameter otherwise.
inline SpectralVectorField apply_operator(OperatorTag tag, const SpectralVectorField& f, FractionalOrder s = 0.0) {
    switch (tag) {
        case OperatorTag::APower: return a_power(s, f);
        case OperatorTag::Curl: return curl(f);
        case OperatorTag::B0: return b0_apply(f);
        case OperatorTag::B1: return b1_apply(f);
        case OperatorTag::B2: return b2_apply(f);
        case OperatorTag::B3: return b3_apply(s, f);
    }
    throw Error("unknown operator tag");
}

inline constexpr double vorticity_tolerance = 1e-10;

/// Velocity from vorticity through u = A^{-1} curl omega (no Biot-Savart kernel).
inline SpectralVectorField reconstruct_velocity(const SpectralVectorField& omega) {
    if (!is_mean_free(omega)) throw NotAVorticity("vorticity must be mean-free");
    const double defect = solenoidal_defect(omega);
    if (defect > vorticity_tolerance)
        throw NotAVorticity("vorticity is not solenoidal (relative defect " + std::to_string(defect) + ")");
    return a_power(-1.0, curl(omega));
}

/// ||A^s u - A^{s-1} curl(curl u)||_2 / ||A^s u||_2.
inline double theorem1_residual(const SpectralVectorField& u, FractionalOrder s) {
    const double e = s.value();
    if (e - 1.0 < -FractionalOrder::max_magnitude) throw InvalidOrder("s - 1 leaves the supported range");
    const auto lhs = a_power(s, u);
    const double scale = l2_norm(lhs);
    if (scale == 0.0) throw UndefinedRatio("theorem1_residual of a field with ||A^s u|| = 0");
    const auto rhs = a_power(e - 1.0, curl(curl(u)));
    return l2_distance(lhs, rhs) / scale;
}

} // namespace nsreg

#endif
