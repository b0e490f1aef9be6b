#ifndef NSREG_VERIFY_HPP
#define NSREG_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "generators.hpp"
#include "norms.hpp"
#include "operators.hpp"
#include "solver.hpp"

namespace nsreg {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed() const { return residual <= tolerance; }
};

/// Identity battery over a seeded corpus: transform round trip, Plancherel, projection,
/// A^{-1} curl curl = I on H_0, the A^s / curl commutation residuals, B0 = P, B1 contraction,
/// B1 = B2 = B3(s), the Lebesgue chain, curl grad = 0, div curl = 0 and the energy
/// orthogonality of the nonlinearity. Every check is run; none short-circuits.
inline std::vector<CheckResult> verify_battery(int n, std::uint64_t seed, double tol, int corpus_size = 8) {
    const GridSpec grid(n);
    std::vector<SpectralVectorField> solenoidal, arbitrary;
    for (int i = 0; i < corpus_size; ++i) {
        solenoidal.push_back(gen_random_solenoidal(grid, seed + static_cast<std::uint64_t>(i), 1.0));
        arbitrary.push_back(make_mean_free(gen_random_field(grid, seed + 7919u + static_cast<std::uint64_t>(i), 1.0)));
    }
    std::vector<CheckResult> out;
    const auto add = [&](std::string name, double r) { out.push_back({std::move(name), r, tol}); };
    const auto rel = [](double num, double den) { return den > 0.0 ? num / den : num; };

    double r = 0.0;
    for (const auto& f : solenoidal)
        r = std::max(r, rel(max_coefficient_difference(to_spectral(to_physical(f)), f), max_coefficient(f)));
    add("transform_roundtrip", r);

    r = 0.0;
    for (const auto& f : solenoidal) r = std::max(r, rel(std::abs(lp_norm(to_physical(f), 2.0) - l2_norm(f)), l2_norm(f)));
    add("plancherel_l2", r);

    r = 0.0;
    for (const auto& f : arbitrary) {
        const auto once = leray_project(f);
        r = std::max({r, rel(max_coefficient_difference(leray_project(once), once), max_coefficient(f)),
                      solenoidal_defect(once)});
    }
    add("leray_idempotent_solenoidal", r);

    r = 0.0;
    for (const auto& f : solenoidal) r = std::max(r, rel(l2_distance(a_power(-1.0, curl(curl(f))), f), l2_norm(f)));
    add("inverse_laplacian_curl_curl", r);

    for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
        r = 0.0;
        for (const auto& f : solenoidal) r = std::max(r, theorem1_residual(f, s));
        add("power_curl_identity_s=" + format_exponent(s), r);
    }

    r = 0.0;
    for (const auto& f : arbitrary)
        r = std::max(r, rel(max_coefficient_difference(b0_apply(f), leray_project(f)), max_coefficient(f)));
    add("b0_equals_projection", r);

    r = 0.0;
    for (const auto& f : arbitrary) r = std::max(r, l2_norm(b1_apply(f)) / l2_norm(f) - 1.0);
    add("b1_l2_contraction", std::max(r, 0.0));

    r = 0.0;
    for (const auto& f : arbitrary) {
        const auto b1 = b1_apply(f);
        const double scale = max_coefficient(b1);
        r = std::max(r, rel(max_coefficient_difference(b1, b2_apply(f)), scale));
        for (double s : {-1.0, 0.0, 0.5, 2.0}) r = std::max(r, rel(max_coefficient_difference(b1, b3_apply(s, f)), scale));
    }
    add("b1_b2_b3_coincide", r);

    r = 0.0;
    for (const auto& f : solenoidal) {
        const auto phys = to_physical(f);
        for (double e : {2.0, 4.0, 8.0, 16.0}) {
            const auto c = lebesgue_chain_check(phys, e);
            r = std::max(r, c.lhs / c.bound - 1.0);
        }
    }
    add("lebesgue_chain", std::max(r, 0.0));

    r = 0.0;
    for (const auto& f : arbitrary) {
        SpectralScalarField phi(grid);
        for (std::size_t i = 0; i < grid.size(); ++i) phi[i] = f(0, i);
        const auto grad = gradient(phi);
        r = std::max(r, rel(max_coefficient(curl(grad)), max_coefficient(grad)));
        const auto w = curl(f);
        double div = 0.0;
        for (const auto& z : divergence(w).coeffs()) div = std::max(div, std::abs(z));
        r = std::max(r, rel(div, grid.wavenumber_scale() * grid.n() * max_coefficient(w)));
    }
    add("curl_grad_and_div_curl", r);

    r = 0.0;
    for (const auto& f : solenoidal) r = std::max(r, nonlinear_orthogonality_check(f));
    add("nonlinear_orthogonality", r);

    return out;
}

} // namespace nsreg

#endif
