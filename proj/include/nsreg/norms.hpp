#ifndef NSREG_NORMS_HPP
#define NSREG_NORMS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "field.hpp"
#include "operators.hpp"

namespace nsreg {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Lebesgue space of a spatial norm: L^p, or H^{s,p} with s < 0 measured as ||A^{s/2} v||_p.
struct NormSpec {
    enum class Kind { Lebesgue, NegSobolev };

    Kind kind = Kind::Lebesgue;
    double p = 2.0;
    double sobolev_order = 0.0;

    static NormSpec lebesgue(double p) { return NormSpec(Kind::Lebesgue, p, 0.0); }
    static NormSpec neg_sobolev(double order, double p) { return NormSpec(Kind::NegSobolev, p, order); }

    NormSpec() = default;
    NormSpec(Kind k, double p_, double order) : kind(k), p(p_), sobolev_order(order) {
        if (!(p_ > 1.0)) throw InvalidExponent("norm exponent p must exceed 1");
        if (k == Kind::NegSobolev && !(order < 0.0)) throw InvalidOrder("negative Sobolev norm needs order < 0");
        if (k == Kind::Lebesgue && order != 0.0) throw InvalidOrder("Lebesgue norm has Sobolev order 0");
    }

    friend bool operator==(const NormSpec&, const NormSpec&) = default;
};

namespace detail {

// ((L^3 / n^3) sum |v|^r)^{1/r} for r >= 1, max |v| for r = inf. Samples are scaled by
// the largest component so squares cannot overflow and large r stays finite.
inline double lattice_norm(const PhysicalVectorField& f, double r) {
    const auto& g = f.grid();
    const auto x = f.component(0), y = f.component(1), z = f.component(2);
    double scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        scale = std::max({scale, std::abs(x[i]), std::abs(y[i]), std::abs(z[i])});
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    const double inv = 1.0 / scale;
    std::vector<double> mag2(g.size());
    double peak2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double a = x[i] * inv, b = y[i] * inv, c = z[i] * inv;
        mag2[i] = a * a + b * b + c * c;
        peak2 = std::max(peak2, mag2[i]);
    }
    const double peak = scale * std::sqrt(peak2);
    if (std::isinf(r)) return peak;
    double sum = 0.0;
    if (r == 2.0) {
        for (double m : mag2) sum += m / peak2;
    } else {
        const double half = 0.5 * r;
        for (double m : mag2) sum += std::pow(m / peak2, half);
    }
    const double cell = g.volume() / static_cast<double>(g.size());
    return peak * std::pow(cell * sum, 1.0 / r);
}

} // namespace detail

/// ||v||_p with |v| the pointwise Euclidean magnitude and a lattice quadrature; p = inf is
/// the collocation maximum (no off-lattice search).
inline double lp_norm(const PhysicalVectorField& f, double p) {
    if (!(p > 1.0)) throw InvalidExponent("L^p norm requires p > 1, got " + std::to_string(p));
    return detail::lattice_norm(f, p);
}

/// ||A^{s/2} v||_p.
inline double sobolev_norm(const SpectralVectorField& f, double s, double p) {
    if (!(p > 1.0)) throw InvalidExponent("Sobolev norm requires p > 1, got " + std::to_string(p));
    return lp_norm(to_physical(a_power(0.5 * s, f)), p);
}

/// (L^3 sum_k ((2 pi / L)^2 |k|^2)^s |v(k)|^2)^{1/2}: the p = 2 Sobolev norm without a transform.
inline double spectral_sobolev_l2(const SpectralVectorField& f, double s) {
    const auto& g = f.grid();
    double sum = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double w = std::pow(g.lambda1() * norm_squared(g.wavevector(i)), s);
        for (int c = 0; c < 3; ++c) sum += w * abs2(f(c, i));
    }
    return std::sqrt(g.volume() * sum);
}

inline double evaluate_norm(const NormSpec& spec, const SpectralVectorField& f) {
    switch (spec.kind) {
        case NormSpec::Kind::Lebesgue: return lp_norm(to_physical(f), spec.p);
        case NormSpec::Kind::NegSobolev: return sobolev_norm(f, spec.sobolev_order, spec.p);
    }
    throw Error("unknown norm kind");
}

struct ChainCheck {
    double lhs = 0.0;        ///< ||f||_r
    double bound = 0.0;      ///< |Omega|^{1/r} ||f||_inf
    double box_bound = 0.0;  ///< |Omega| ||f||_inf when |Omega| >= 1, else ||f||_inf
    bool holds = true;
    bool box_holds = true;
};

inline constexpr double chain_slack = 1e-12;

/// Bounded-domain Lebesgue chain ||f||_r <= |Omega|^{1/r} ||f||_inf, plus the cruder
/// |Omega|-branch bound (||f||_inf alone when |Omega| <= 1).
inline ChainCheck lebesgue_chain_check(const PhysicalVectorField& f, double r) {
    if (!(r >= 1.0)) throw InvalidExponent("chain exponent r must be >= 1");
    const double vol = f.grid().volume();
    const double sup = detail::lattice_norm(f, infinity);
    ChainCheck out;
    out.lhs = detail::lattice_norm(f, r);
    out.bound = std::pow(vol, 1.0 / r) * sup;
    out.box_bound = (vol >= 1.0 ? vol : 1.0) * sup;
    out.holds = out.lhs <= out.bound * (1.0 + chain_slack);
    out.box_holds = out.lhs <= out.box_bound * (1.0 + chain_slack);
    return out;
}

struct LimitProbe {
    std::vector<double> r;
    std::vector<double> norms;       ///< ||f||_r
    std::vector<double> normalized;  ///< |Omega|^{-1/r} ||f||_r, nondecreasing in r
    double sup = 0.0;                ///< ||f||_inf
};

/// ||f||_r along an increasing list of exponents, for watching the approach to ||f||_inf.
inline LimitProbe linf_limit_probe(const PhysicalVectorField& f, const std::vector<double>& r_list) {
    for (std::size_t i = 0; i < r_list.size(); ++i) {
        if (!(r_list[i] >= 2.0)) throw InvalidExponent("probe exponents must be >= 2");
        if (i > 0 && !(r_list[i] > r_list[i - 1])) throw InvalidExponent("probe exponents must increase");
    }
    LimitProbe out;
    const double vol = f.grid().volume();
    out.sup = detail::lattice_norm(f, infinity);
    for (double r : r_list) {
        const double v = detail::lattice_norm(f, r);
        out.r.push_back(r);
        out.norms.push_back(v);
        out.normalized.push_back(std::pow(vol, -1.0 / r) * v);
    }
    return out;
}

} // namespace nsreg

#endif
