#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "postcolor/bandwidth.hpp"
#include "postcolor/generators.hpp"
#include "postcolor/model.hpp"

using namespace postcolor;

TEST_CASE("pilot bandwidth arithmetic") {
    CHECK(pilot_bandwidth(400, 0) == 15);  // ceil(2 * 400^{1/3})
    CHECK(pilot_bandwidth(400, 1) == 7);   // ceil(2 * 400^{1/5})
}

TEST_CASE("parametric xi1: population values and recovery") {
    // AR(1) truth: both ratios estimate the same quantity, xi1 ~ 0.
    Series ar = generate(Generator::arma11(0.5, 0.0, 21), 10000);
    CHECK(std::abs(xi1_parametric(ar).xi) < 0.15);

    // White noise.
    Series wn = generate(Generator::arma11(0.0, 0.0, 22), 10000);
    CHECK(std::abs(xi1_parametric(wn).xi) < 0.1);

    // ARMA(1,1) a=0.8, b=-0.6: population xi1 from the closed forms.
    const double a = 0.8, b = -0.6;
    const double phis = arma11_phi_star(a, b);
    CHECK(phis == doctest::Approx(0.26).epsilon(1e-12));
    const double want = 2.0 * (a + b) * (1.0 + a * b) / ((1.0 + b) * (1.0 + b) * (1.0 - a * a)) -
                        2.0 * phis / (1.0 - phis * phis);
    CHECK(arma11_xi1(a, b) == doctest::Approx(want).epsilon(1e-12));
    Series arma = generate(Generator::arma11(a, b, 23), 100000);
    XiEstimate est = xi1_parametric(arma);
    CHECK(est.method == XiEstimate::Method::parametric);
    CHECK(std::abs(est.xi - want) / std::abs(want) < 0.10);
}

TEST_CASE("nonparametric xi1: near-zero for well-specified coloring") {
    Series wn = generate(Generator::arma11(0.0, 0.0, 24), 10000);
    CHECK(std::abs(xi1_nonparametric(wn).xi) < 0.2);

    // AR(1) phi = 0.5: population xi1 is 0, but the pilot smoothing leaves a
    // deterministic O(1/l1#) bias; compare against the exact pilot-weighted
    // population value rather than zero.
    const int n = 100000;
    Series ar = generate(Generator::arma11(0.5, 0.0, 25), n);
    XiEstimate est = xi1_nonparametric(ar);
    CHECK(est.method == XiEstimate::Method::nonparametric);
    CHECK(!est.degenerate);
    ColoringModel truth = ColoringModel::ar1(0.5, 1.0);
    const int l0 = pilot_bandwidth(n, 0);
    const int l1 = pilot_bandwidth(n, 1);
    double v0 = truth.autocov(0), v1 = 0.0;
    for (int k = 1; k <= l0; ++k) {
        v0 += 2.0 * (1.0 - static_cast<double>(k) / l0) * truth.autocov(k);
    }
    for (int k = 1; k <= l1; ++k) {
        v1 += 2.0 * (1.0 - static_cast<double>(k) / l1) * k * truth.autocov(k);
    }
    const double pilot_population_xi = v1 / v0 - truth.kappa(1);
    CHECK(est.xi == doctest::Approx(pilot_population_xi).epsilon(0.35));
    CHECK(std::abs(est.xi) < 0.25);  // consistent, slowly (n^{-1/5} pilot bias)
}

TEST_CASE("optimal-bandwidth formulas") {
    const KernelSpec bart = bartlett_kernel();
    CHECK(ell_tail(0.0, bart, 400) == 1);
    CHECK(ell_tail(1.0, bart, 400) == 9);  // ceil(600^{1/3})
    // Generic formula with Bartlett constants reduces to (3 xi^2 n / 2)^{1/3}.
    for (double xi : {0.3, 1.0, 2.5}) {
        for (int n : {100, 400, 1600}) {
            const double raw = std::cbrt(1.5 * xi * xi * n);
            const int want = std::max(1, std::min(static_cast<int>(std::ceil(raw)), n - 1));
            CHECK(ell_tail(xi, bart, n) == want);
        }
    }
    CHECK_THROWS_AS(ell_tail(1.0, truncated_kernel(), 400), std::invalid_argument);

    CHECK(ell_andrews_ar1(0.0, 400) == 1);
    CHECK(ell_andrews_ar1(0.5, 400) == 11);
    CHECK(ell_andrews_ar1(-0.5, 400) == 11);  // even in phi
}

TEST_CASE("bandwidths are monotone in |xi| and n") {
    const KernelSpec bart = bartlett_kernel();
    int prev = 0;
    for (double xi : {0.0, 0.2, 0.5, 1.0, 2.0, 4.0}) {
        const int l = ell_tail(xi, bart, 400);
        CHECK(l >= prev);
        prev = l;
    }
    prev = 0;
    for (int n : {50, 100, 400, 1600, 6400}) {
        const int l = ell_tail(1.0, bart, n);
        CHECK(l >= prev);
        prev = l;
    }
}

TEST_CASE("asymptotic profile constants") {
    const KernelSpec bart = bartlett_kernel();
    AsymptoticProfile zero = asymptotic_profile(1.0, 1.0, bart);
    CHECK(zero.mse_n23 == 0.0);

    AsymptoticProfile unit = asymptotic_profile(1.0, 0.0, bart);
    const double want = 3.0 * std::pow(2.0 / 3.0, 2.0 / 3.0);
    CHECK(unit.mse_n23 == doctest::Approx(want).epsilon(1e-12));
    CHECK(unit.bias_n13 * unit.bias_n13 + unit.var_n23 ==
          doctest::Approx(unit.mse_n23).epsilon(1e-10));
    // B = -1, xi = 1 -> negative bias.
    CHECK(unit.bias_n13 < 0.0);
}

TEST_CASE("improvement region endpoints") {
    // AR(1) truth a=0.9: kappa1 = 2a/(1-a^2), upper endpoint ~ 0.9486.
    const double kappa = 2.0 * 0.9 / (1.0 - 0.81);
    auto [lo, hi] = improvement_region_ar1(kappa);
    CHECK(lo == 0.0);
    CHECK(hi == doctest::Approx(0.9486).epsilon(6e-4));

    auto [nlo, nhi] = improvement_region_ar1(-kappa);
    CHECK(nhi == 0.0);
    CHECK(nlo < 0.0);
    CHECK(nlo == doctest::Approx(-hi).epsilon(1e-12));

    auto [zlo, zhi] = improvement_region_ar1(0.0);
    CHECK(zlo == 0.0);
    CHECK(zhi == 0.0);

    // varphi degenerates as kappa -> 0+.
    auto [tlo, thi] = improvement_region_ar1(1e-6);
    CHECK(tlo == 0.0);
    CHECK(thi < 1e-5);
}

TEST_CASE("improvement boundary is the MSE break-even point") {
    // At phi = varphi the model mismatch satisfies |xi1(phi)| = |kappa1|.
    for (double kappa : {0.5, 2.0, 9.473684210526315}) {
        auto [lo, hi] = improvement_region_ar1(kappa);
        const double phi = (kappa > 0.0) ? hi : lo;
        const double xi_at_boundary = kappa - 2.0 * phi / (1.0 - phi * phi);
        CHECK(std::abs(std::abs(xi_at_boundary) - std::abs(kappa)) < 1e-9);
    }
}

TEST_CASE("tail beats prewhitening when a + b > 0 (asymptotics)") {
    const KernelSpec bart = bartlett_kernel();
    const struct {
        double a, b;
    } cases[] = {{0.2, 0.1}, {0.5, 0.3}, {0.7, 0.1}, {0.3, 0.55}, {0.6, 0.35}};
    for (const auto& cse : cases) {
        const double a = cse.a, b = cse.b;
        const double xi = arma11_xi1(a, b);
        AsymptoticProfile tail = asymptotic_profile(xi, 0.0, bart);
        // Prewhitened comparator: kappa of the AR(1)-whitened series, from
        // v1^Z = (1-phi)^2 v1^X - 2 phi gamma0^X and v0^Z = (1-phi)^2 v0^X.
        const double phis = arma11_phi_star(a, b);
        const double v0x = arma11_lrv(a, b);
        const double v1x = arma11_kappa1(a, b) * v0x;
        const double g0x = arma11_gamma(a, b, 0);
        const double v0z = (1.0 - phis) * (1.0 - phis) * v0x;
        const double v1z = (1.0 - phis) * (1.0 - phis) * v1x - 2.0 * phis * g0x;
        AsymptoticProfile pw = asymptotic_profile(v1z / v0z, 0.0, bart);
        CHECK(tail.mse_n23 < pw.mse_n23);
    }
}
