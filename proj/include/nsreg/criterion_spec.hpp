#ifndef NSREG_CRITERION_SPEC_HPP
#define NSREG_CRITERION_SPEC_HPP

#include <cmath>
#include <cstdio>
#include <string>

#include "norms.hpp"
#include "operators.hpp"

namespace nsreg {

enum class Target { Velocity, Vorticity };

inline const char* to_string(Target t) { return t == Target::Velocity ? "velocity" : "vorticity"; }

/// "inf" for infinity, otherwise the shortest round-trippable decimal.
inline std::string format_exponent(double p) {
    if (std::isinf(p)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    // prefer the short form when it round-trips
    char shortbuf[32];
    std::snprintf(shortbuf, sizeof shortbuf, "%g", p);
    return std::stod(shortbuf) == p ? std::string(shortbuf) : std::string(buf);
}

/// 3/p with 3/inf = 0.
inline double spatial_scaling(double p) { return std::isinf(p) ? 0.0 : 3.0 / p; }

/// Time exponent closing 2/theta + 3/p = scaling_sum.
inline double theta_from_p(double p, double scaling_sum) {
    if (!(p > 1.0)) throw InvalidExponent("spatial exponent p must exceed 1");
    const double denom = scaling_sum - spatial_scaling(p);
    if (!(denom > 0.0))
        throw InvalidScaling("scaling sum " + format_exponent(scaling_sum) + " leaves no room for a time exponent at p = " +
                             format_exponent(p));
    return 2.0 / denom;
}

/// A regularity criterion: target field in L^theta((0,T); X) with X the spatial norm.
struct CriterionSpec {
    std::string id;
    Target target = Target::Vorticity;
    NormSpec norm;
    double theta = 1.0;
    double scaling_sum = 2.0;  ///< 2/theta + 3/p, informational

    CriterionSpec() = default;
    CriterionSpec(std::string id_, Target target_, NormSpec norm_, double theta_, double scaling_sum_)
        : id(std::move(id_)), target(target_), norm(norm_), theta(theta_), scaling_sum(scaling_sum_) {
        if (id.empty()) throw InvalidConfig("criterion id must not be empty");
        if (!(theta >= 1.0) || !std::isfinite(theta)) throw InvalidExponent("criterion theta must be finite and >= 1");
        if (std::abs(2.0 / theta + spatial_scaling(norm.p) - scaling_sum) > 1e-12)
            throw InvalidScaling("criterion '" + id + "': 2/theta + 3/p does not equal the stated scaling sum");
    }
};

/// omega in L^theta H^{-1,p} with 2/theta + 3/p = 1, p in (3, inf].
inline CriterionSpec builtin_paper_criterion(double p) {
    if (!(p > 3.0)) throw InvalidExponent("p must exceed 3 for the negative-Sobolev vorticity criterion, got " + format_exponent(p));
    return {"paper_p" + format_exponent(p), Target::Vorticity, NormSpec::neg_sobolev(-1.0, p), theta_from_p(p, 1.0), 1.0};
}

/// u in L^theta L^p with 2/theta + 3/p = 2, p in (3, inf].
inline CriterionSpec builtin_serrin(double p) {
    if (!(p > 3.0)) throw InvalidExponent("p must exceed 3 for the velocity criterion, got " + format_exponent(p));
    return {"serrin_p" + format_exponent(p), Target::Velocity, NormSpec::lebesgue(p), theta_from_p(p, 2.0), 2.0};
}

/// omega in L^1 L^inf.
inline CriterionSpec builtin_bkm_classic() {
    return {"bkm_classic", Target::Vorticity, NormSpec::lebesgue(infinity), 1.0, 2.0};
}

/// Spatial norm of u (or of curl u) at one instant.
inline double instantaneous_norm(const CriterionSpec& spec, const SpectralVectorField& u) {
    if (spec.target == Target::Velocity) return evaluate_norm(spec.norm, u);
    return evaluate_norm(spec.norm, curl(u));
}

} // namespace nsreg

#endif
