#include "postcolor/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "postcolor/autocov.hpp"
#include "postcolor/model.hpp"

namespace postcolor {

namespace {

double ar1_kappa1(double phi) { return 2.0 * phi / (1.0 - phi * phi); }

int clamp_ell(double raw, int n) {
    if (!std::isfinite(raw)) return n - 1;
    const int l = static_cast<int>(std::ceil(raw));
    return std::max(1, std::min(l, n - 1));
}

}  // namespace

int pilot_bandwidth(int n, int r) {
    if (n < 2) throw std::invalid_argument("pilot_bandwidth requires n >= 2");
    const double e = 1.0 / static_cast<double>(2 * r + 3);
    const int l = static_cast<int>(std::ceil(2.0 * std::pow(static_cast<double>(n), e)));
    return std::max(1, std::min(l, n - 1));
}

double weighted_moment_sum(const Series& s, const KernelSpec& K, int ell, int r) {
    const int n = s.size();
    if (ell < 1 || ell >= n) {
        throw std::invalid_argument("weighted_moment_sum requires 1 <= ell < n");
    }
    int kmax = n - 1;
    if (std::isfinite(K.support)) {
        kmax = std::min(kmax, static_cast<int>(std::floor(ell * K.support + 1e-9)));
    }
    AutocovTable acf = sample_autocov(s, kmax);
    double acc = (r == 0) ? K(0.0) * acf[0] : 0.0;
    for (int k = 1; k <= kmax; ++k) {
        const double w = K(static_cast<double>(k) / static_cast<double>(ell));
        acc += 2.0 * w * std::pow(static_cast<double>(k), r) * acf[k];
    }
    return acc;
}

double nonparametric_kappa1(const Series& s, const KernelSpec& pilot, bool* degenerate) {
    const int n = s.size();
    const double v0 = weighted_moment_sum(s, pilot, pilot_bandwidth(n, 0), 0);
    const double v1 = weighted_moment_sum(s, pilot, pilot_bandwidth(n, 1), 1);
    if (degenerate) *degenerate = false;
    if (!(v0 > 0.0)) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    return v1 / v0;
}

XiEstimate xi1_parametric(const Series& s) {
    const int n = s.size();
    if (n < 10) throw std::invalid_argument("xi1_parametric requires n >= 10");
    // Raw CSS fit: the plug-in only consumes the ratio kappa_1, and the
    // b = 0 pretest would understate its sampling noise at identified
    // truths.  The one place the raw fit misbehaves is the cancellation
    // ridge (white noise), where the information matrix is singular; a
    // likelihood-ratio check against the white-noise submodel pins
    // kappa_1(ARMA) to 0 there.
    ColoringModel arma = fit_arma11(s, /*ar1_pretest=*/false);
    ColoringModel ar = fit_ar1(s);
    AutocovTable acf = sample_autocov(s, 1);
    const double sse_white = static_cast<double>(n) * acf[0];
    const double sse_arma = arma.innovation_var() * static_cast<double>(n - 1);
    const double lr = static_cast<double>(n) *
                      std::log(std::max(sse_white, 1e-300) / std::max(sse_arma, 1e-300));
    double kappa_arma = 0.0;
    if (lr > 5.991) {  // chi-square(2), 5%
        const double a = arma.params()[0];
        const double b = arma.params()[1];
        kappa_arma =
            2.0 * (a + b) * (1.0 + a * b) / ((1.0 + b) * (1.0 + b) * (1.0 - a * a));
    }
    XiEstimate out;
    out.xi = kappa_arma - ar1_kappa1(ar.params()[0]);
    out.p = 1;
    out.method = XiEstimate::Method::parametric;
    return out;
}

XiEstimate xi1_nonparametric(const Series& s, const KernelSpec& pilot) {
    if (s.size() < 10) throw std::invalid_argument("xi1_nonparametric requires n >= 10");
    bool degenerate = false;
    const double kappa_hat = nonparametric_kappa1(s, pilot, &degenerate);
    XiEstimate out;
    out.p = 1;
    out.method = XiEstimate::Method::nonparametric;
    if (degenerate) {
        out.xi = 0.0;
        out.degenerate = true;
        return out;
    }
    ColoringModel ar = fit_ar1(s);
    out.xi = kappa_hat - ar1_kappa1(ar.params()[0]);
    return out;
}

XiEstimate xi1_nonparametric(const Series& s) { return xi1_nonparametric(s, bartlett_kernel()); }

int ell_tail(double xi, const KernelSpec& K, int n) {
    if (n < 2) throw std::invalid_argument("ell_tail requires n >= 2");
    if (!K.finite_order()) {
        throw std::invalid_argument("ell_tail requires a kernel with finite order p");
    }
    const double p = static_cast<double>(K.order_p);
    const double raw = std::pow(
        p * K.const_B * K.const_B * xi * xi * static_cast<double>(n) / (2.0 * K.const_A),
        1.0 / (2.0 * p + 1.0));
    return clamp_ell(raw, n);
}

int ell_tail(const XiEstimate& xi, const KernelSpec& K, int n) { return ell_tail(xi.xi, K, n); }

int ell_andrews_ar1(double phi, int n) {
    if (n < 2) throw std::invalid_argument("ell_andrews_ar1 requires n >= 2");
    const double num = 6.0 * phi * phi * static_cast<double>(n);
    const double den = (1.0 - phi * phi) * (1.0 - phi * phi);
    return clamp_ell(std::cbrt(num / den), n);
}

int ell_andrews_ar1(const Series& s) {
    ColoringModel ar = fit_ar1(s);
    return ell_andrews_ar1(ar.params()[0], s.size());
}

AsymptoticProfile asymptotic_profile(double kappa1, double kappa1_model, const KernelSpec& K) {
    if (!K.finite_order()) {
        throw std::invalid_argument("asymptotic_profile requires a kernel with finite order p");
    }
    const double p = static_cast<double>(K.order_p);
    const double xi = kappa1 - kappa1_model;
    AsymptoticProfile out;
    const double core = std::pow(2.0 * K.const_A / p, p) * std::abs(K.const_B * xi);
    out.mse_n23 = (2.0 * p + 1.0) * std::pow(core, 2.0 / (2.0 * p + 1.0));
    const double bias2 = out.mse_n23 / (1.0 + 2.0 * p);
    out.var_n23 = 2.0 * p * out.mse_n23 / (1.0 + 2.0 * p);
    const double sign = (K.const_B * xi > 0.0) ? 1.0 : (K.const_B * xi < 0.0 ? -1.0 : 0.0);
    out.bias_n13 = sign * std::sqrt(bias2);
    return out;
}

std::pair<double, double> improvement_region_ar1(double kappa1) {
    if (kappa1 == 0.0) return {0.0, 0.0};
    const double varphi = (-1.0 + std::sqrt(4.0 * kappa1 * kappa1 + 1.0)) / (2.0 * kappa1);
    if (kappa1 > 0.0) return {0.0, varphi};
    return {varphi, 0.0};
}

}  // namespace postcolor
