#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "postcolor/autocov.hpp"
#include "postcolor/estimators.hpp"
#include "postcolor/generators.hpp"
#include "postcolor/spectral.hpp"

using namespace postcolor;

namespace {

// Complex-exponential oracle (1/2pi) sum_{|k|<n} K(k/l) gamma~_k e^{ik w}.
std::complex<double> complex_oracle(const Series& s, const KernelSpec& K, int ell,
                                    double omega) {
    const int n = s.size();
    AutocovTable acf = sample_autocov(s);
    std::complex<double> acc = 0.0;
    const std::complex<double> iota(0.0, 1.0);
    for (int k = -(n - 1); k <= n - 1; ++k) {
        acc += K(static_cast<double>(k) / ell) * acf[k] *
               std::exp(iota * (static_cast<double>(k) * omega));
    }
    return acc / (2.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("spectral estimator at omega = 0 matches the LRV") {
    Series s = generate(Generator::arma11(0.5, -0.2, 51), 400);
    const KernelSpec bart = bartlett_kernel();
    SpectralEstimate f0 = spectral_unadjusted(s, bart, 8, 0.0);
    CHECK(f0.value ==
          doctest::Approx(lrv_unadjusted(s, bart, 8).value / (2.0 * std::numbers::pi))
              .epsilon(1e-12));

    ColoringModel m = fit_ar1(s);
    SpectralEstimate t0 = spectral_tail_postcolored(s, bart, 8, 0.0, m);
    CHECK(t0.value ==
          doctest::Approx(lrv_tail_postcolored(s, bart, 8, m).value / (2.0 * std::numbers::pi))
              .epsilon(1e-12));
}

TEST_CASE("white-noise weighting is flat in omega") {
    Series s = generate(Generator::arma11(0.6, 0.0, 52), 300);
    // With l = 1 and the Bartlett kernel only gamma~_0 receives weight.
    const double base = spectral_unadjusted(s, bartlett_kernel(), 1, 0.3).value;
    for (double w : {0.0, 0.7, 1.9, std::numbers::pi}) {
        CHECK(spectral_unadjusted(s, bartlett_kernel(), 1, w).value ==
              doctest::Approx(base).epsilon(1e-14));
    }
}

TEST_CASE("spectral estimator matches the complex-exponential oracle") {
    Series s = generate(Generator::arma11(0.4, 0.3, 53), 250);
    for (const auto& k : {bartlett_kernel(), lugsail_kernel()}) {
        for (double w : {0.0, 0.31, 1.3, 2.6, std::numbers::pi}) {
            std::complex<double> want = complex_oracle(s, k, 9, w);
            CHECK(std::abs(want.imag()) < 1e-12);
            CHECK(spectral_unadjusted(s, k, 9, w).value ==
                  doctest::Approx(want.real()).epsilon(1e-10));
        }
    }
}

TEST_CASE("evenness and 2pi periodicity via the complex oracle") {
    Series s = generate(Generator::arma11(0.5, 0.0, 54), 200);
    const KernelSpec bart = bartlett_kernel();
    for (double w : {0.4, 1.1, 2.9}) {
        const double at_w = spectral_unadjusted(s, bart, 7, w).value;
        CHECK(complex_oracle(s, bart, 7, 2.0 * std::numbers::pi - w).real() ==
              doctest::Approx(at_w).epsilon(1e-12));
        CHECK(complex_oracle(s, bart, 7, -w).real() == doctest::Approx(at_w).epsilon(1e-12));
    }
    CHECK_THROWS_AS(spectral_unadjusted(s, bart, 7, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(spectral_unadjusted(s, bart, 7, 3.2), std::invalid_argument);
}

TEST_CASE("tail postcoloring coefficient: white model and AR(1) spectrum") {
    Series s = generate(Generator::arma11(0.5, 0.0, 55), 400);
    const KernelSpec bart = bartlett_kernel();
    ColoringModel white = ColoringModel::ar1(0.0, 1.0);
    for (double w : {0.0, 0.5, 1.5, std::numbers::pi}) {
        CHECK(spectral_tail_postcolored(s, bart, 8, w, white).coefficient == 1.0);
    }

    // The coefficient numerator is the model spectrum (times 2pi):
    // f(w; phi) = sigma^2 / {2pi (1 + phi^2 - 2 phi cos w)}.
    ColoringModel ar = ColoringModel::ar1(0.5, 1.0);
    for (double w : {0.0, std::numbers::pi / 4.0, std::numbers::pi / 2.0, std::numbers::pi}) {
        const double spectrum = 1.0 / (1.0 + 0.25 - 2.0 * 0.5 * std::cos(w));
        double denom = ar.autocov(0);
        for (int k = 1; k <= 8; ++k) {
            denom += 2.0 * bart(static_cast<double>(k) / 8.0) * ar.autocov(k) *
                     std::cos(k * w);
        }
        const double got = spectral_tail_postcolored(s, bart, 8, w, ar).coefficient;
        CHECK(got == doctest::Approx(spectrum / denom).epsilon(1e-8));
    }
}

TEST_CASE("variance at the spectrum boundary doubles the interior variance") {
    // zeta(w) = {1 + 1(w/pi integer)}/2: the estimator variance at w = 0 is
    // asymptotically twice the variance at an interior frequency.
    const KernelSpec bart = bartlett_kernel();
    const int reps = 400, n = 512, ell = 16;
    double s0 = 0.0, q0 = 0.0, s1 = 0.0, q1 = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        Series s = generate(Generator::arma11(0.0, 0.0, 9000 + rep), n);
        const double f0 = spectral_unadjusted(s, bart, ell, 0.0).value;
        const double f1 = spectral_unadjusted(s, bart, ell, std::numbers::pi / 2.0).value;
        s0 += f0;
        q0 += f0 * f0;
        s1 += f1;
        q1 += f1 * f1;
    }
    const double var0 = q0 / reps - (s0 / reps) * (s0 / reps);
    const double var1 = q1 / reps - (s1 / reps) * (s1 / reps);
    const double ratio = var0 / var1;
    CHECK(ratio > 1.4);
    CHECK(ratio < 2.8);
}

TEST_CASE("coefficient tends to one for large bandwidths") {
    Series s = generate(Generator::arma11(0.8, 0.0, 56), 1000);
    ColoringModel m = fit_ar1(s);
    REQUIRE(std::abs(m.params()[0]) <= 0.9);
    for (double w : {0.0, 0.8, 1.7, 2.9, std::numbers::pi}) {
        const double coef =
            spectral_tail_postcolored(s, bartlett_kernel(), 500, w, m).coefficient;
        CHECK(std::abs(coef - 1.0) < 0.05);
    }
}
