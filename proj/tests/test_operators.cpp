#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "nsreg/generators.hpp"
#include "nsreg/norms.hpp"
#include "nsreg/operators.hpp"
#include "oracles.hpp"

using namespace nsreg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Max pointwise gap between the spectral curl and the finite-difference curl of the same samples.
double fd_gap(int n) {
    const GridSpec g(n);
    const auto f = gen_taylor_green(g);
    const auto spec = to_physical(curl(f));
    const auto fd = oracle::fd_curl(to_physical(f));
    double worst = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(spec(c, i) - fd(c, i)));
    return worst;
}

struct CaptureLog {
    std::vector<std::string> warnings;
    LogSink previous;
    CaptureLog() {
        previous = set_log_sink([this](LogLevel level, std::string_view msg) {
            if (level == LogLevel::Warning) warnings.emplace_back(msg);
        });
    }
    ~CaptureLog() { set_log_sink(previous); }
};

} // namespace

TEST_CASE("curl", "[operators]") {
    SECTION("spectral curl agrees with second-order differences at the expected rate") {
        const double e16 = fd_gap(16), e32 = fd_gap(32);
        CHECK(e32 < e16);
        CHECK_THAT(e16 / e32, WithinAbs(4.0, 0.1));
    }

    SECTION("output is solenoidal and mean-free") {
        const GridSpec g(16, 2 * std::numbers::pi, 1.0);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto f = gen_random_field(g, seed, 0.0);
            f(1, 0) = 3.0;
            const auto w = curl(f);
            CHECK(is_mean_free(w));
            CHECK(solenoidal_defect(w) <= 1e-12);
        }
    }

    SECTION("Beltrami eigenvalue in a non-2pi box") {
        const GridSpec g(16, 3.0);
        const auto b = gen_beltrami(g, 2, 1.0);
        CHECK(max_coefficient_difference(curl(b), (2.0 * 2 * std::numbers::pi / 3.0) * b) <= 1e-14);
    }
}

TEST_CASE("a_power", "[operators]") {
    const GridSpec g(16);
    const auto v = gen_random_solenoidal(g, 9, 1.0);

    CHECK(a_power(0.0, v) == v);

    const auto b3 = gen_beltrami(g, 3, 1.0);
    CHECK(max_coefficient_difference(a_power(-0.5, b3), (1.0 / 3.0) * b3) <= 1e-16);

    for (double s : {0.5, 1.0, 1.5, 3.0}) {
        INFO("s = " << s);
        CHECK(max_coefficient_difference(a_power(-s, a_power(s, v)), v) <= 1e-13 * max_coefficient(v));
        CHECK(max_coefficient_difference(a_power(0.25, a_power(s - 0.25, v)), a_power(s, v)) <=
              1e-13 * max_coefficient(a_power(s, v)));
    }

    SECTION("scaling with box length: A on a Beltrami field of wavenumber k is (2 pi k / L)^2") {
        const GridSpec box(16, 0.5);
        const auto b = gen_beltrami(box, 2, 1.0);
        const double lambda = std::pow(2 * std::numbers::pi * 2 / 0.5, 2);
        CHECK(max_coefficient_difference(a_power(1.0, b), lambda * b) <= 1e-12 * lambda);
    }

    SECTION("order validation") {
        CHECK_THROWS_AS(a_power(9.0, v), InvalidOrder);
        CHECK_THROWS_AS(a_power(std::nan(""), v), InvalidOrder);
        CHECK_NOTHROW(a_power(-8.0, v));
    }

    SECTION("nonzero mean") {
        auto withmean = v;
        withmean(0, 0) = 1.0;
        CHECK_THROWS_AS(a_power(-1.0, withmean), SingularMode);
        CaptureLog log;
        const auto out = a_power(1.0, withmean);
        CHECK(log.warnings.size() == 1);
        CHECK(out(0, 0) == Complex{});
        CHECK(out == a_power(1.0, v));
    }
}

TEST_CASE("B0 is the Leray projection on mean-free fields", "[operators]") {
    const GridSpec g(16);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto f = make_mean_free(gen_random_field(g, seed, 0.5));
        const auto b0 = b0_apply(f);
        const auto expect = oracle::projection_by_algebra(f);
        CHECK(max_coefficient_difference(b0, expect) <= 1e-14 * max_coefficient(f));
        CHECK(max_coefficient_difference(b0, leray_project(f)) <= 1e-14 * max_coefficient(f));
    }
    auto withmean = gen_random_solenoidal(g, 1, 1.0);
    withmean(2, 0) = 0.5;
    CHECK_THROWS_AS(b0_apply(withmean), SingularMode);
    CHECK_THROWS_AS(b1_apply(withmean), SingularMode);
    CHECK_THROWS_AS(b2_apply(withmean), SingularMode);
    CHECK_THROWS_AS(b3_apply(0.3, withmean), SingularMode);
}

TEST_CASE("B1, B2 and B3", "[operators]") {
    const GridSpec g(16);

    SECTION("Beltrami fields are fixed points of B1") {
        for (int k : {1, 2, 4}) {
            const auto b = gen_beltrami(g, k, 1.0);
            CHECK(max_coefficient_difference(b1_apply(b), b) <= 1e-15);
        }
    }

    SECTION("contraction in L2") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto f = make_mean_free(gen_random_field(g, seed, 0.0));
            CHECK(l2_norm(b1_apply(f)) <= l2_norm(f) * (1 + 1e-14));
            const auto v = gen_random_solenoidal(g, seed, 0.0);
            CHECK_THAT(l2_norm(b1_apply(v)), WithinRel(l2_norm(v), 1e-13));
        }
    }

    SECTION("the three coincide on the torus") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto f = make_mean_free(gen_random_field(g, seed, 1.0));
            const auto one = b1_apply(f);
            const double scale = max_coefficient(one);
            CHECK(max_coefficient_difference(one, b2_apply(f)) <= 1e-14 * scale);
            for (double s : {-1.0, 0.0, 0.5, 2.0})
                CHECK(max_coefficient_difference(one, b3_apply(s, f)) <= 1e-13 * scale);
        }
    }

    SECTION("B1 squared is the projection") {
        const auto f = make_mean_free(gen_random_field(g, 4, 0.5));
        CHECK(max_coefficient_difference(b1_apply(b1_apply(f)), leray_project(f)) <= 1e-14 * max_coefficient(f));
    }

    SECTION("dispatch") {
        const auto f = gen_random_solenoidal(g, 2, 1.0);
        CHECK(apply_operator(OperatorTag::B1, f) == b1_apply(f));
        CHECK(apply_operator(OperatorTag::APower, f, 0.5) == a_power(0.5, f));
        CHECK(apply_operator(OperatorTag::Curl, f) == curl(f));
        CHECK(apply_operator(OperatorTag::B3, f, 1.5) == b3_apply(1.5, f));
    }
}

TEST_CASE("reconstruct_velocity", "[operators]") {
    const GridSpec g(16);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto u = gen_random_solenoidal(g, seed, 1.0);
        CHECK(max_coefficient_difference(reconstruct_velocity(curl(u)), u) <= 1e-13 * max_coefficient(u));
    }
    const auto tg = gen_taylor_green(g);
    CHECK(max_coefficient_difference(reconstruct_velocity(curl(tg)), tg) <= 1e-15);

    const auto grad_like = make_mean_free(gen_random_field(g, 1, 1.0));
    CHECK_THROWS_AS(reconstruct_velocity(grad_like), NotAVorticity);
    auto shifted = curl(tg);
    shifted(0, 0) = 1.0;
    CHECK_THROWS_AS(reconstruct_velocity(shifted), NotAVorticity);
}

TEST_CASE("theorem1_residual", "[operators]") {
    const GridSpec g(16);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto u = gen_random_solenoidal(g, seed, 1.0);
        for (double s : {-1.0, 0.0, 0.5, 1.0, 2.0}) CHECK(theorem1_residual(u, s) <= 1e-13);
    }
    // a gradient field violates the solenoidal hypothesis and the identity fails outright
    const auto f = make_mean_free(gen_random_field(g, 3, 1.0));
    CHECK(theorem1_residual(f, 0.5) > 0.1);
    CHECK_THROWS_AS(theorem1_residual(SpectralVectorField(g), 1.0), UndefinedRatio);
}

TEST_CASE("curl grad = 0 and div curl = 0", "[operators]") {
    const GridSpec g(16, 2 * std::numbers::pi, 1.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto raw = gen_random_field(g, seed, 0.5);
        SpectralScalarField phi(g);
        for (std::size_t i = 0; i < g.size(); ++i) phi[i] = raw(0, i);
        const auto grad = gradient(phi);
        CHECK(max_coefficient(curl(grad)) <= 1e-13 * max_coefficient(grad));
        const auto div = divergence(curl(raw));
        double worst = 0.0;
        for (const auto& z : div.coeffs()) worst = std::max(worst, std::abs(z));
        CHECK(worst <= 1e-13 * max_coefficient(raw));
    }
}
