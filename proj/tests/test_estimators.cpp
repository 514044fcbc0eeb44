#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "postcolor/autocov.hpp"
#include "postcolor/estimators.hpp"
#include "postcolor/generators.hpp"
#include "postcolor/rng.hpp"

using namespace postcolor;

namespace {

// Brute-force v~ = sum_{|k|<n} K(k/l) gamma~_k straight off the definition.
double unadjusted_oracle(const Series& s, const KernelSpec& K, int ell) {
    const int n = s.size();
    AutocovTable acf = sample_autocov(s);
    double acc = 0.0;
    for (int k = -(n - 1); k <= n - 1; ++k) {
        acc += K(static_cast<double>(k) / ell) * acf[k];
    }
    return acc;
}

Series simulate_ar1(double phi, int n, std::uint64_t seed) {
    return generate(Generator::arma11(phi, 0.0, seed), n);
}

}  // namespace

TEST_CASE("unadjusted estimator: degenerate, support, oracle") {
    Series constant(std::vector<double>(50, 3.25));
    CHECK(lrv_unadjusted(constant, bartlett_kernel(), 5).value == 0.0);

    Series s = simulate_ar1(0.5, 300, 11);
    AutocovTable acf = sample_autocov(s, 1);
    CHECK(lrv_unadjusted(s, bartlett_kernel(), 1).value ==
          doctest::Approx(acf[0]).epsilon(1e-15));

    for (const auto& k : {bartlett_kernel(), truncated_kernel(), lugsail_kernel()}) {
        CHECK(lrv_unadjusted(s, k, 8).value ==
              doctest::Approx(unadjusted_oracle(s, k, 8)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(lrv_unadjusted(s, bartlett_kernel(), 0), std::invalid_argument);
    CHECK_THROWS_AS(lrv_unadjusted(s, bartlett_kernel(), 300), std::invalid_argument);
}

TEST_CASE("parametric AR(1) estimator") {
    Series s = simulate_ar1(0.5, 100000, 12);
    const double v = lrv_parametric_ar1(s).value;
    CHECK(std::abs(v - 4.0) / 4.0 < 0.05);

    // Near-unit-root sample autocorrelation: ramp series. The clamp keeps
    // the recoloring factor finite.
    std::vector<double> ramp(200);
    for (int i = 0; i < 200; ++i) ramp[static_cast<std::size_t>(i)] = i;
    const double vr = lrv_parametric_ar1(Series(ramp)).value;
    CHECK(std::isfinite(vr));
}

TEST_CASE("prewhitened estimator: white noise and clamping") {
    Series s = simulate_ar1(0.0, 5000, 13);
    const double pw = lrv_prewhitened_ar1(s, bartlett_kernel(), 4, 0.97).value;
    const double un = lrv_unadjusted(s, bartlett_kernel(), 4).value;
    CHECK(std::abs(pw - un) / un < 0.1);  // recoloring factor ~ 1

    // Ramp data has sample lag-1 autocorrelation above 0.97; verify the
    // clamp is applied before whitening and recoloring.
    std::vector<double> ramp(200);
    for (int i = 0; i < 200; ++i) ramp[static_cast<std::size_t>(i)] = i;
    Series r(ramp);
    AutocovTable acf = sample_autocov(r, 1);
    CHECK(acf[1] / acf[0] > 0.97);
    LrvEstimate est = lrv_prewhitened_ar1(r, bartlett_kernel(), 3, 0.97);
    std::vector<double> z(199);
    for (int i = 1; i < 200; ++i) {
        z[static_cast<std::size_t>(i - 1)] = r[i] - 0.97 * r[i - 1];
    }
    const double want =
        lrv_unadjusted(Series(z), bartlett_kernel(), 3).value / (0.03 * 0.03);
    CHECK(est.value == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("tail postcolored estimator: coefficient behavior") {
    Series s = simulate_ar1(0.4, 400, 14);
    const KernelSpec bart = bartlett_kernel();

    ColoringModel white = ColoringModel::ar1(0.0, 1.0);
    LrvEstimate t0 = lrv_tail_postcolored(s, bart, 6, white);
    CHECK(t0.eta == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t0.value == doctest::Approx(lrv_unadjusted(s, bart, 6).value).epsilon(1e-15));

    // eta closed form: l=4, phi=0.5 -> 3/2.0625.
    CHECK(eta_ar1_bartlett(0.5, 4) == doctest::Approx(3.0 / 2.0625).epsilon(1e-12));
    ColoringModel half = ColoringModel::ar1(0.5, 1.0);
    LrvEstimate t4 = lrv_tail_postcolored(s, bart, 4, half);
    CHECK(t4.eta == doctest::Approx(3.0 / 2.0625).epsilon(1e-12));
}

TEST_CASE("ell=1 Bartlett AR(1) reduction is exact over random series") {
    Rng rng(4711);
    const KernelSpec bart = bartlett_kernel();
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 30 + static_cast<int>(rng.uniform() * 200);
        std::vector<double> x(static_cast<std::size_t>(n));
        double prev = 0.0;
        for (auto& v : x) {
            prev = 0.6 * prev + rng.normal();
            v = prev;
        }
        Series s(std::move(x));
        AutocovTable acf = sample_autocov(s, 1);
        ColoringModel m = fit_ar1(acf);
        const double phib = m.params()[0];
        const double expected = acf[0] * ((1.0 + phib) / (1.0 - phib));
        CHECK(lrv_tail_postcolored(s, bart, 1, m).value == expected);
    }
}

TEST_CASE("eta closed form equals brute-force v/M over the grid") {
    for (double phi = -0.95; phi <= 0.9501; phi += 0.05) {
        ColoringModel m = ColoringModel::ar1(phi, 1.0);
        const double v = m.lrv();
        for (long ell = 1; ell <= 64; ++ell) {
            double msum = m.autocov(0);
            for (long k = 1; k <= ell; ++k) {
                msum += 2.0 * (1.0 - static_cast<double>(k) / ell) * m.autocov(k);
            }
            CHECK(eta_ar1_bartlett(phi, ell) == doctest::Approx(v / msum).epsilon(1e-10));
        }
    }
}

TEST_CASE("generalized estimator: H = K identity and truncated-H closed form") {
    Series s = simulate_ar1(0.5, 400, 15);
    const KernelSpec bart = bartlett_kernel();
    const KernelSpec trunc = truncated_kernel();
    ColoringModel m = fit_ar1(s);

    LrvEstimate simple = lrv_tail_postcolored(s, bart, 7, m);
    LrvEstimate general = lrv_tail_postcolored_general(s, bart, bart, 7, m);
    CHECK(general.value == simple.value);
    CHECK(general.eta == simple.eta);

    const double phib = m.params()[0];
    for (int ell : {2, 5, 11}) {
        LrvEstimate g = lrv_tail_postcolored_general(s, bart, trunc, ell, m);
        const double eta_closed =
            (1.0 + phib) / (1.0 + phib - 2.0 * std::pow(phib, ell + 1));
        CHECK(g.eta == doctest::Approx(eta_closed).epsilon(1e-12));
        double msum = m.autocov(0);
        for (int k = 1; k <= ell; ++k) msum += 2.0 * m.autocov(k);
        CHECK(g.eta == doctest::Approx(m.lrv() / msum).epsilon(1e-12));
        CHECK(g.value ==
              doctest::Approx(g.eta * lrv_unadjusted(s, bart, ell).value).epsilon(1e-14));
    }

    ColoringModel white = ColoringModel::ar1(0.0, 1.0);
    CHECK(lrv_tail_postcolored_general(s, bart, trunc, 5, white).eta == 1.0);
}

TEST_CASE("finite-sample-target estimator") {
    // Hand value: AR(1) phi=0.5, sigma^2=1, n=4 -> 2.75.
    ColoringModel m = ColoringModel::ar1(0.5, 1.0);
    CHECK(m.finite_sample_lrv(4) == doctest::Approx(2.75).epsilon(1e-12));

    Series s = simulate_ar1(0.5, 400, 16);
    const KernelSpec bart = bartlett_kernel();
    ColoringModel white = ColoringModel::ar1(0.0, 1.0);
    CHECK(lrv_tail_finite_sample(s, bart, 6, white).value ==
          doctest::Approx(lrv_unadjusted(s, bart, 6).value).epsilon(1e-15));

    // Coefficient converges to eta as n grows.
    Series big = simulate_ar1(0.5, 100000, 17);
    ColoringModel fit = fit_ar1(big);
    LrvEstimate fs = lrv_tail_finite_sample(big, bart, 10, fit);
    LrvEstimate tl = lrv_tail_postcolored(big, bart, 10, fit);
    CHECK(std::abs(fs.eta - tl.eta) / tl.eta < 1e-3);
}

TEST_CASE("limit identity: eta approaches one for large bandwidths") {
    for (double phi : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
        Series s = simulate_ar1(phi, 300, 18);
        ColoringModel m = fit_ar1(s);
        if (std::abs(m.params()[0]) > 0.9) continue;
        LrvEstimate est = lrv_tail_postcolored(s, bartlett_kernel(), s.size() - 1, m);
        CHECK(std::abs(est.eta - 1.0) < 0.05);
    }
}

TEST_CASE("positivity with PSD kernel") {
    Rng rng(88);
    for (int rep = 0; rep < 25; ++rep) {
        std::vector<double> x(150);
        double prev = 0.0;
        for (auto& v : x) {
            prev = 0.7 * prev + rng.normal();
            v = prev;
        }
        Series s(std::move(x));
        ColoringModel m = fit_ar1(s);
        for (int ell : {1, 3, 9, 27}) {
            LrvEstimate est = lrv_tail_postcolored(s, bartlett_kernel(), ell, m);
            CHECK(est.eta > 0.0);
            CHECK(est.value >= 0.0);
        }
    }
}

TEST_CASE("scale equivariance of all scalar estimators") {
    Series s = simulate_ar1(0.5, 250, 19);
    const double c = -3.5;
    std::vector<double> scaled(s.values());
    for (auto& v : scaled) v *= c;
    Series sc(std::move(scaled));
    const KernelSpec bart = bartlett_kernel();

    auto rel = [](double x, double y) { return std::abs(x - y) / std::abs(y); };
    CHECK(rel(lrv_unadjusted(sc, bart, 8).value, c * c * lrv_unadjusted(s, bart, 8).value) <
          1e-10);
    CHECK(rel(lrv_parametric_ar1(sc).value, c * c * lrv_parametric_ar1(s).value) < 1e-10);
    CHECK(rel(lrv_prewhitened_ar1(sc, bart, 8).value,
              c * c * lrv_prewhitened_ar1(s, bart, 8).value) < 1e-10);
    CHECK(rel(lrv_tail_postcolored(sc, bart, 8, fit_ar1(sc)).value,
              c * c * lrv_tail_postcolored(s, bart, 8, fit_ar1(s)).value) < 1e-10);
    CHECK(rel(lrv_tail_finite_sample(sc, bart, 8, fit_ar1(sc)).value,
              c * c * lrv_tail_finite_sample(s, bart, 8, fit_ar1(s)).value) < 1e-10);
    WeightScheme w1{WeightScheme::Kind::adaptive, {}};
    WeightScheme w2{WeightScheme::Kind::adaptive, {}};
    CHECK(rel(lrv_multi_model(sc, bart, {fit_ar1(sc), fit_maq(sc, 3)}, {4, 6}, w1).value,
              c * c *
                  lrv_multi_model(s, bart, {fit_ar1(s), fit_maq(s, 3)}, {4, 6}, w2).value) <
          1e-10);
}

TEST_CASE("multi-model estimator weights and reductions") {
    Series s = simulate_ar1(0.5, 300, 20);
    const KernelSpec bart = bartlett_kernel();
    ColoringModel m = fit_ar1(s);

    WeightScheme single{WeightScheme::Kind::adaptive, {}};
    LrvEstimate one = lrv_multi_model(s, bart, {m}, {6}, single);
    CHECK(one.value ==
          doctest::Approx(lrv_tail_postcolored(s, bart, 6, m).value).epsilon(1e-14));
    CHECK(single.weights.size() == 1);
    CHECK(single.weights[0] == doctest::Approx(1.0));

    WeightScheme twin{WeightScheme::Kind::simple_average, {}};
    LrvEstimate two = lrv_multi_model(s, bart, {m, m}, {6, 6}, twin);
    CHECK(two.value ==
          doctest::Approx(lrv_tail_postcolored(s, bart, 6, m).value).epsilon(1e-12));

    WeightScheme adaptive{WeightScheme::Kind::adaptive, {}};
    LrvEstimate mix = lrv_multi_model(s, bart, {m, fit_maq(s, 5)}, {6, 4}, adaptive);
    CHECK(std::isfinite(mix.value));
    double total = 0.0;
    for (double w : adaptive.weights) {
        CHECK(w >= 0.0);
        total += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(lrv_multi_model(s, bart, {m}, {6, 7}, adaptive), std::invalid_argument);
}
